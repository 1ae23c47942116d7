#pragma once

#include <gtest/gtest.h>

#include <string>

#include "monometric/monometric.hpp"
#include "oracles.hpp"

namespace support {

using namespace monometric;

inline DensityMatrix qubit(double p) { return make_density(oracle::diag2(p, 1.0 - p)); }

inline Observable obs(const ComplexMatrix& m) { return Observable::make(m); }

inline ObservableTuple pair(const ComplexMatrix& a, const ComplexMatrix& b) {
  return ObservableTuple({Observable::make(a), Observable::make(b)});
}

inline ObservableTuple sample_tuple(int n, int count, std::uint64_t seed) {
  std::vector<Observable> out;
  for (int i = 0; i < count; ++i) out.push_back(sample_observable(n, seed * 977 + i));
  return ObservableTuple(std::move(out));
}

// Runs fn and returns the message of the exception of type E it throws.
template <class E, class Fn>
std::string message_of(Fn fn) {
  try {
    fn();
  } catch (const E& e) {
    return e.what();
  }
  ADD_FAILURE() << "expected an exception";
  return {};
}

}  // namespace support
