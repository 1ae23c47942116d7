#pragma once

// Instance files and report serialization.
//
// Instance schema:
//   { "n": int,
//     "density": [[ [re, im], ... ], ...],
//     "observables": [ [[ [re, im], ... ], ...], ... ] }

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "monometric/inequality_suite.hpp"
#include "monometric/quantum_states.hpp"

namespace monometric {

using Json = nlohmann::json;

namespace detail {

inline ComplexMatrix parse_complex_matrix(const Json& j, Index n, const std::string& path) {
  if (!j.is_array()) throw ValidationError(path + ": expected an array of rows");
  if (static_cast<Index>(j.size()) != n)
    throw ValidationError(path + ": expected " + std::to_string(n) + " rows, got " +
                          std::to_string(j.size()));
  ComplexMatrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    const Json& row = j[i];
    const std::string rpath = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Index>(row.size()) != n)
      throw ValidationError(rpath + ": expected a row of " + std::to_string(n) + " entries");
    for (Index k = 0; k < n; ++k) {
      const Json& c = row[k];
      const std::string cpath = rpath + "[" + std::to_string(k) + "]";
      if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
        throw ValidationError(cpath + ": expected a complex number [re, im]");
      m(i, k) = Complex(c[0].get<double>(), c[1].get<double>());
    }
  }
  return m;
}

inline Json complex_matrix_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace detail

inline Instance instance_from_json(const Json& j, const DensityOptions& opts = {}) {
  if (!j.is_object()) throw ValidationError("instance: expected a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw ValidationError("n: missing or not an integer");
  const long long n = j["n"].get<long long>();
  if (n < 1) throw ValidationError("n: must be positive");
  if (!j.contains("density")) throw ValidationError("density: missing");
  if (!j.contains("observables") || !j["observables"].is_array())
    throw ValidationError("observables: missing or not an array");

  const ComplexMatrix dm = detail::parse_complex_matrix(j["density"], n, "density");
  std::vector<Observable> obs;
  for (std::size_t i = 0; i < j["observables"].size(); ++i) {
    const std::string path = "observables[" + std::to_string(i) + "]";
    obs.push_back(Observable::make(detail::parse_complex_matrix(j["observables"][i], n, path),
                                   1e-12, path));
  }
  return Instance{DensityMatrix::make(dm, opts), ObservableTuple(std::move(obs))};
}

// Throws ValidationError naming the parse location on malformed JSON.
inline Instance parse_instance(std::istream& in, const DensityOptions& opts = {}) {
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  return instance_from_json(j, opts);
}

inline Json instance_to_json(const Instance& inst) {
  Json obs = Json::array();
  for (const auto& a : inst.observables) obs.push_back(detail::complex_matrix_json(a.matrix()));
  return Json{{"n", inst.state.dim()},
              {"density", detail::complex_matrix_json(inst.state.matrix())},
              {"observables", std::move(obs)}};
}

inline Json to_json(const HypothesisReport& h) {
  return Json{{"ok", h.ok},
              {"sampled", h.sampled},
              {"min_margin", detail::finite_or_null(h.min_margin)},
              {"witness", {detail::finite_or_null(h.witness_x), detail::finite_or_null(h.witness_y)}},
              {"samples", h.samples},
              {"note", h.note}};
}

inline Json to_json(const InequalityReport& r) {
  Json j{{"name", r.name},
         {"f1", r.f1},
         {"f2", r.f2},
         {"hypothesis_ok", r.hypothesis.ok},
         {"hypothesis", to_json(r.hypothesis)},
         {"lhs", r.lhs},
         {"rhs", r.rhs},
         {"margin", r.margin},
         {"tol_det", r.tol_det},
         {"components", r.components},
         {"verdict", to_string(r.verdict)},
         {"warnings", r.warnings}};
  Json inst{{"n", r.instance.n}, {"N", r.instance.N}};
  inst["seed"] = r.instance.seed ? Json(*r.instance.seed) : Json(nullptr);
  j["instance"] = std::move(inst);
  if (r.remainder) j["remainder"] = *r.remainder;
  if (r.remainder_printed) {
    j["remainder_printed"] = *r.remainder_printed;
    j["rhs_printed"] = *r.rhs_printed;
    j["printed_remainder_violated"] = r.printed_remainder_violated();
  }
  if (r.minkowski)
    j["minkowski"] = Json{{"lhs", r.minkowski->lhs},
                          {"rhs", r.minkowski->rhs},
                          {"margin", r.minkowski->margin},
                          {"ok", r.minkowski->ok}};
  return j;
}

// 17 significant digits: doubles round-trip exactly.
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline const char* kCsvHeader = "check,n,N,f1,f2,seed,lhs,rhs,margin,verdict";

inline std::string csv_row(const InequalityReport& r) {
  std::ostringstream os;
  os << r.name << ',' << r.instance.n << ',' << r.instance.N << ',' << r.f1 << ',' << r.f2 << ','
     << (r.instance.seed ? std::to_string(*r.instance.seed) : std::string()) << ','
     << format_g17(r.lhs) << ',' << format_g17(r.rhs) << ',' << format_g17(r.margin) << ','
     << to_string(r.verdict);
  return os.str();
}

}  // namespace monometric
