#pragma once

#include "monometric/errors.hpp"
#include "monometric/monotone_functions.hpp"
#include "monometric/quantum_states.hpp"
#include "monometric/covariance_engine.hpp"
#include "monometric/inequality_suite.hpp"
#include "monometric/io.hpp"
#include "monometric/sweep.hpp"
