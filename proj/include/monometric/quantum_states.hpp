#pragma once

// Strictly positive density matrices, observables, centering, the change to
// the eigenbasis of a state, and seeded samplers for property sweeps.

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <limits>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "monometric/errors.hpp"
#include "monometric/monotone_functions.hpp"

namespace monometric {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

struct DensityOptions {
  double positivity_floor = 1e-10;
  double hermiticity_tol = 1e-12;
  double trace_tol = 1e-12;
};

namespace detail {

inline std::string entry_name(Index i, Index j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

inline void require_square(const ComplexMatrix& m, const std::string& what) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw ValidationError(what + ": expected a nonempty square matrix, got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

inline void require_hermitian(const ComplexMatrix& m, double tol, const std::string& what) {
  Index bi = 0, bj = 0;
  double worst = 0.0;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      const double d = std::abs(m(i, j) - std::conj(m(j, i)));
      if (d > worst) {
        worst = d;
        bi = i;
        bj = j;
      }
    }
  if (worst > tol)
    throw ValidationError(what + ": not Hermitian, |M" + entry_name(bi, bj) + " - conj(M" +
                          entry_name(bj, bi) + ")| = " + format_double(worst) +
                          " exceeds " + format_double(tol));
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) { return (m + m.adjoint()) / 2.0; }

}  // namespace detail

// A Hermitian positive definite trace-one matrix together with its
// eigendecomposition D = U diag(lambda) U*, eigenvalues sorted descending.
class DensityMatrix {
 public:
  static DensityMatrix make(const ComplexMatrix& entries, const DensityOptions& opts = {}) {
    detail::require_square(entries, "density");
    detail::require_hermitian(entries, opts.hermiticity_tol, "density");
    const Complex tr = entries.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > opts.trace_tol)
      throw ValidationError("density: trace must be 1, got " + detail::format_double(tr.real()) +
                            (tr.imag() != 0.0 ? " + " + detail::format_double(tr.imag()) + "i" : ""));

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(detail::hermitian_part(entries));
    if (es.info() != Eigen::Success)
      throw InternalConsistencyError("density: eigendecomposition did not converge");

    const Index n = entries.rows();
    DensityMatrix d;
    d.entries_ = entries;
    d.eigenvalues_.resize(n);
    d.eigenvectors_.resize(n, n);
    // Eigen returns ascending order.
    for (Index k = 0; k < n; ++k) {
      d.eigenvalues_(k) = es.eigenvalues()(n - 1 - k);
      d.eigenvectors_.col(k) = es.eigenvectors().col(n - 1 - k);
    }
    if (d.eigenvalues_(n - 1) < opts.positivity_floor)
      throw ValidationError("density: not strictly positive, eigenvalue " +
                            std::to_string(n - 1) + " = " +
                            detail::format_double(d.eigenvalues_(n - 1)) +
                            " is below the floor " + detail::format_double(opts.positivity_floor));
    return d;
  }

  Index dim() const { return entries_.rows(); }
  const ComplexMatrix& matrix() const { return entries_; }
  const RealVector& eigenvalues() const { return eigenvalues_; }
  const ComplexMatrix& eigenvectors() const { return eigenvectors_; }

 private:
  DensityMatrix() = default;

  ComplexMatrix entries_;
  RealVector eigenvalues_;
  ComplexMatrix eigenvectors_;
};

inline DensityMatrix make_density(const ComplexMatrix& entries, const DensityOptions& opts = {}) {
  return DensityMatrix::make(entries, opts);
}

class Observable {
 public:
  static Observable make(const ComplexMatrix& entries, double hermiticity_tol = 1e-12,
                         const std::string& what = "observable") {
    detail::require_square(entries, what);
    detail::require_hermitian(entries, hermiticity_tol, what);
    return Observable(entries);
  }

  Index dim() const { return entries_.rows(); }
  const ComplexMatrix& matrix() const { return entries_; }
  bool is_zero() const { return entries_.isZero(0.0); }

 private:
  explicit Observable(ComplexMatrix m) : entries_(std::move(m)) {}

  ComplexMatrix entries_;
};

// N >= 1 nonzero observables of a common dimension.
class ObservableTuple {
 public:
  explicit ObservableTuple(std::vector<Observable> obs) : obs_(std::move(obs)) {
    if (obs_.empty()) throw ValidationError("observables: tuple must be nonempty");
    for (std::size_t i = 0; i < obs_.size(); ++i) {
      if (obs_[i].dim() != obs_[0].dim())
        throw DimensionMismatch("observables[" + std::to_string(i) + "]: dimension " +
                                std::to_string(obs_[i].dim()) + " differs from " +
                                std::to_string(obs_[0].dim()));
      if (obs_[i].is_zero())
        throw ValidationError("observables[" + std::to_string(i) + "]: must be nonzero");
    }
  }

  std::size_t size() const { return obs_.size(); }
  Index dim() const { return obs_.front().dim(); }
  const Observable& operator[](std::size_t i) const { return obs_[i]; }
  auto begin() const { return obs_.begin(); }
  auto end() const { return obs_.end(); }

 private:
  std::vector<Observable> obs_;
};

inline void require_same_dim(const DensityMatrix& d, Index n, const char* op) {
  if (d.dim() != n)
    throw DimensionMismatch(std::string(op) + ": state has dimension " +
                            std::to_string(d.dim()) + ", operand has " + std::to_string(n));
}

// Tr(D A); real for Hermitian A.
inline double expectation(const DensityMatrix& d, const ComplexMatrix& a) {
  require_same_dim(d, a.rows(), "expectation");
  return (d.matrix() * a).trace().real();
}

// A0 = A - Tr(D A) I, so that Tr(D A0) = 0.
inline Observable center(const Observable& a, const DensityMatrix& d) {
  require_same_dim(d, a.dim(), "center");
  ComplexMatrix m = a.matrix();
  m.diagonal().array() -= expectation(d, a.matrix());
  return Observable::make(m, std::numeric_limits<double>::infinity());
}

// A' = U* A U with U the eigenvector matrix of D.
inline ComplexMatrix to_eigenbasis(const ComplexMatrix& a, const DensityMatrix& d) {
  require_same_dim(d, a.rows(), "to_eigenbasis");
  return d.eigenvectors().adjoint() * a * d.eigenvectors();
}

inline ComplexMatrix to_eigenbasis(const Observable& a, const DensityMatrix& d) {
  return to_eigenbasis(a.matrix(), d);
}

// ---------------------------------------------------------------------------
// Samplers. Each call owns its engine, seeded from (seed, stream), so results
// depend on nothing but the arguments.

namespace detail {

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

inline ComplexMatrix ginibre(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

inline constexpr std::uint32_t kDensityStream = 0x0d;
inline constexpr std::uint32_t kObservableStream = 0x0b;
inline constexpr std::uint32_t kUnitaryStream = 0x0u;

}  // namespace detail

// Ginibre-based state: W = G G* / Tr(G G*) + min_gap I, D = W / Tr(W).
// Every eigenvalue is at least min_gap / (1 + n min_gap).
inline DensityMatrix sample_density(int n, std::uint64_t seed, double min_gap = 0.0,
                                    const DensityOptions& opts = {}) {
  if (n < 2) throw DomainError("sample_density: n must be >= 2");
  if (!(min_gap >= 0.0)) throw DomainError("sample_density: min_gap must be >= 0");
  auto rng = detail::make_engine(seed, detail::kDensityStream);
  for (;;) {
    const ComplexMatrix g = detail::ginibre(n, rng);
    ComplexMatrix w = g * g.adjoint();
    w /= w.trace().real();
    w.diagonal().array() += min_gap;
    w /= w.trace().real();
    w = detail::hermitian_part(w);
    try {
      return DensityMatrix::make(w, opts);
    } catch (const ValidationError&) {
      // only reachable for min_gap below the positivity floor; redraw
    }
  }
}

// GUE-style observable H = (G + G*) / 2.
inline Observable sample_observable(int n, std::uint64_t seed) {
  if (n < 2) throw DomainError("sample_observable: n must be >= 2");
  auto rng = detail::make_engine(seed, detail::kObservableStream);
  for (;;) {
    const ComplexMatrix g = detail::ginibre(n, rng);
    ComplexMatrix h = (g + g.adjoint()) / 2.0;
    if (!h.isZero(0.0)) return Observable::make(h);
  }
}

// Haar unitary via QR of a Ginibre matrix with the phases of R's diagonal
// divided out.
inline ComplexMatrix sample_unitary(int n, std::uint64_t seed) {
  auto rng = detail::make_engine(seed, detail::kUnitaryStream);
  const ComplexMatrix g = detail::ginibre(n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < n; ++k) {
    const Complex rkk = r(k, k);
    q.col(k) *= rkk / std::abs(rkk);
  }
  return q;
}

inline DensityMatrix conjugate(const DensityMatrix& d, const ComplexMatrix& u,
                               const DensityOptions& opts = {}) {
  return DensityMatrix::make(detail::hermitian_part(u * d.matrix() * u.adjoint()), opts);
}

inline Observable conjugate(const Observable& a, const ComplexMatrix& u) {
  return Observable::make(detail::hermitian_part(u * a.matrix() * u.adjoint()));
}

inline ObservableTuple conjugate(const ObservableTuple& obs, const ComplexMatrix& u) {
  std::vector<Observable> out;
  for (const auto& a : obs) out.push_back(conjugate(a, u));
  return ObservableTuple(std::move(out));
}

// A state together with an observable tuple: the unit of every check.
struct Instance {
  DensityMatrix state;
  ObservableTuple observables;
};

// Deterministic instance for sweeps: the state uses `seed`, observable i uses
// an independent stream derived from (seed, i).
inline Instance sample_instance(int n, int count, std::uint64_t seed, double min_gap) {
  std::vector<Observable> obs;
  for (int i = 0; i < count; ++i)
    obs.push_back(sample_observable(n, seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(i) + 1));
  return Instance{sample_density(n, seed, min_gap), ObservableTuple(std::move(obs))};
}

}  // namespace monometric
