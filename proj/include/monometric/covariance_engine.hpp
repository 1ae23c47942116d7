#pragma once

// Metric inner products (A, B)_{D,g} evaluated through the spectral sum
// sum_{k,l} A'_lk B'_kl g(lambda_k, lambda_l) in the eigenbasis of D, the
// three covariances built from them, and N x N covariance matrices.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "monometric/errors.hpp"
#include "monometric/monotone_functions.hpp"
#include "monometric/quantum_states.hpp"

namespace monometric {

// Imaginary residues of provably real sums above this fraction of the sum of
// absolute terms raise InternalConsistencyError.
inline constexpr double kImaginaryResidue = 1e-8;
// cov_matrix accepts min eigenvalue >= -kPsdSlack * max(1, max|M|).
inline constexpr double kPsdSlack = 1e-9;

namespace detail {

// G_kl = g(lambda_k, lambda_l).
inline RealMatrix kernel_table(const RealVector& lambda, const CMKernel& g) {
  const Index n = lambda.size();
  RealMatrix t(n, n);
  for (Index k = 0; k < n; ++k)
    for (Index l = k; l < n; ++l) {
      const double v = g(lambda(k), lambda(l));
      if (!std::isfinite(v))
        throw DomainError("kernel " + g.to_string() + " is not finite at eigenvalue pair (" +
                          std::to_string(k) + ", " + std::to_string(l) + ")");
      t(k, l) = v;
      t(l, k) = v;
    }
  return t;
}

// sum_{k,l} A'_lk B'_kl G_kl for matrices already in the eigenbasis.
inline double spectral_sum(const RealMatrix& table, const ComplexMatrix& a, const ComplexMatrix& b) {
  const auto terms = table.array().cast<Complex>() * a.transpose().array() * b.array();
  const Complex sum = terms.sum();
  const double magnitude = terms.abs().sum();
  if (std::abs(sum.imag()) > kImaginaryResidue * magnitude)
    throw InternalConsistencyError("spectral sum has imaginary part " +
                                   format_double(sum.imag()) + " against magnitude " +
                                   format_double(magnitude));
  return sum.real();
}

inline double inner_g_matrix(const DensityMatrix& d, const ComplexMatrix& a, const ComplexMatrix& b,
                             const CMKernel& g) {
  require_same_dim(d, a.rows(), "inner_g");
  require_same_dim(d, b.rows(), "inner_g");
  return spectral_sum(kernel_table(d.eigenvalues(), g), to_eigenbasis(a, d), to_eigenbasis(b, d));
}

}  // namespace detail

// (A, B)_{D,g}.
inline double inner_g(const DensityMatrix& d, const Observable& a, const Observable& b,
                      const CMKernel& g) {
  return detail::inner_g_matrix(d, a.matrix(), b.matrix(), g);
}

// The monotone metric <A, B>_{D,f}, i.e. (A, B)_{D,g} with g = 1/m_f.
inline double inner_f(const DensityMatrix& d, const Observable& a, const Observable& b,
                      const FopSpec& f) {
  return inner_g(d, a, b, CMKernel::inverse_mean(f));
}

// Symmetrized covariance 1/2 Tr(D{A,B}) - Tr(DA) Tr(DB) from the trace formula.
inline double cov(const DensityMatrix& d, const Observable& a, const Observable& b) {
  require_same_dim(d, a.dim(), "cov");
  require_same_dim(d, b.dim(), "cov");
  const ComplexMatrix& dm = d.matrix();
  const double sym = 0.5 * ((dm * a.matrix() * b.matrix()).trace() +
                            (dm * b.matrix() * a.matrix()).trace()).real();
  return sym - expectation(d, a.matrix()) * expectation(d, b.matrix());
}

// The same covariance as (A0, B0)_{D,g_cl}.
inline double cov_spectral(const DensityMatrix& d, const Observable& a, const Observable& b) {
  return inner_g(d, center(a, d), center(b, d), CMKernel::classical());
}

// qCov^as_{D,f}(A, B) = (A, B)_{D,g^as_f}. Invariant under centering.
inline double qcov_as(const DensityMatrix& d, const FopSpec& f, const Observable& a,
                      const Observable& b) {
  return inner_g(d, a, b, CMKernel::asymmetric(f));
}

// f(0)/2 <i[D,A], i[D,B]>_{D,f}, the defining commutator form.
inline double qcov_as_commutator(const DensityMatrix& d, const FopSpec& f, const Observable& a,
                                 const Observable& b) {
  require_same_dim(d, a.dim(), "qcov_as");
  require_same_dim(d, b.dim(), "qcov_as");
  const ComplexMatrix& dm = d.matrix();
  const Complex i(0.0, 1.0);
  const ComplexMatrix ca = detail::hermitian_part(i * (dm * a.matrix() - a.matrix() * dm));
  const ComplexMatrix cb = detail::hermitian_part(i * (dm * b.matrix() - b.matrix() * dm));
  return f_zero(f) / 2.0 * detail::inner_g_matrix(d, ca, cb, CMKernel::inverse_mean(f));
}

// qCov^s_{D,f}(A, B) = (A, B)_{D,g^s_f}. Not centering invariant:
// qcov_s(A, B) = qcov_s(A0, B0) + 2 f(0) Tr(DA) Tr(DB).
inline double qcov_s(const DensityMatrix& d, const FopSpec& f, const Observable& a,
                     const Observable& b) {
  return inner_g(d, a, b, CMKernel::symmetric(f));
}

// f(0)/2 <{D,A}, {D,B}>_{D,f}.
inline double qcov_s_anticommutator(const DensityMatrix& d, const FopSpec& f, const Observable& a,
                                    const Observable& b) {
  require_same_dim(d, a.dim(), "qcov_s");
  require_same_dim(d, b.dim(), "qcov_s");
  const ComplexMatrix& dm = d.matrix();
  const ComplexMatrix aa = detail::hermitian_part(dm * a.matrix() + a.matrix() * dm);
  const ComplexMatrix ab = detail::hermitian_part(dm * b.matrix() + b.matrix() * dm);
  return f_zero(f) / 2.0 * detail::inner_g_matrix(d, aa, ab, CMKernel::inverse_mean(f));
}

enum class CovarianceKind { Classical, SymmetricF, AsymmetricF, GenericG, CommutatorBound };

inline const char* to_string(CovarianceKind k) {
  switch (k) {
    case CovarianceKind::Classical: return "classical";
    case CovarianceKind::SymmetricF: return "symmetric";
    case CovarianceKind::AsymmetricF: return "asymmetric";
    case CovarianceKind::GenericG: return "generic-g";
    case CovarianceKind::CommutatorBound: return "commutator-bound";
  }
  return "?";
}

struct CovarianceMatrix {
  CovarianceKind kind;
  std::optional<CMKernel> kernel;  // empty for CommutatorBound
  RealMatrix entries;
  Index n = 0;  // Hilbert space dimension
  Index N = 0;  // number of observables
  double min_eigenvalue = 0.0;

  // max(1, max|M_ij|)
  double scale() const {
    return entries.size() == 0 ? 1.0 : std::max(1.0, entries.cwiseAbs().maxCoeff());
  }
};

inline double min_symmetric_eigenvalue(const RealMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace detail {

inline CovarianceKind kind_of(const CMKernel& g) {
  switch (g.kind()) {
    case KernelKind::Classical: return CovarianceKind::Classical;
    case KernelKind::SymmetricF: return CovarianceKind::SymmetricF;
    case KernelKind::AsymmetricF: return CovarianceKind::AsymmetricF;
    default: return CovarianceKind::GenericG;
  }
}

}  // namespace detail

// M_ij = (A0^(i), A0^(j))_{D,g}; observables are centered here, once.
inline CovarianceMatrix cov_matrix(const DensityMatrix& d, const ObservableTuple& obs,
                                   const CMKernel& g) {
  require_same_dim(d, obs.dim(), "cov_matrix");
  const Index N = static_cast<Index>(obs.size());
  std::vector<ComplexMatrix> rotated;
  rotated.reserve(obs.size());
  for (const auto& a : obs) rotated.push_back(to_eigenbasis(center(a, d), d));
  const RealMatrix table = detail::kernel_table(d.eigenvalues(), g);

  RealMatrix m(N, N);
  for (Index i = 0; i < N; ++i)
    for (Index j = 0; j < N; ++j) m(i, j) = detail::spectral_sum(table, rotated[i], rotated[j]);

  CovarianceMatrix out{detail::kind_of(g), g, RealMatrix(), d.dim(), N, 0.0};
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale)
    throw InternalConsistencyError("cov_matrix(" + g.to_string() + "): asymmetry " +
                                   detail::format_double(asym));
  out.entries = (m + m.transpose()) / 2.0;
  out.min_eigenvalue = min_symmetric_eigenvalue(out.entries);
  if (out.min_eigenvalue < -kPsdSlack * scale)
    throw InternalConsistencyError("cov_matrix(" + g.to_string() + "): min eigenvalue " +
                                   detail::format_double(out.min_eigenvalue) +
                                   " violates positive semidefiniteness");
  return out;
}

inline CovarianceMatrix cov_matrix(const DensityMatrix& d, const ObservableTuple& obs,
                                   CovarianceKind kind, const std::optional<FopSpec>& f = {}) {
  switch (kind) {
    case CovarianceKind::Classical: return cov_matrix(d, obs, CMKernel::classical());
    case CovarianceKind::SymmetricF:
    case CovarianceKind::AsymmetricF:
      if (!f) throw ValidationError("cov_matrix: this kind needs a function spec");
      return cov_matrix(d, obs,
                        kind == CovarianceKind::SymmetricF ? CMKernel::symmetric(*f)
                                                           : CMKernel::asymmetric(*f));
    default:
      throw ValidationError(std::string("cov_matrix: kind ") + to_string(kind) +
                            " needs an explicit kernel or its own builder");
  }
}

// M_hj = -(i/2) Tr(D [A_h, A_j]); a real antisymmetric matrix.
inline CovarianceMatrix commutator_bound_matrix(const DensityMatrix& d, const ObservableTuple& obs) {
  require_same_dim(d, obs.dim(), "commutator_bound_matrix");
  const Index N = static_cast<Index>(obs.size());
  const ComplexMatrix& dm = d.matrix();
  RealMatrix m = RealMatrix::Zero(N, N);
  for (Index h = 0; h < N; ++h)
    for (Index j = h + 1; j < N; ++j) {
      const ComplexMatrix& a = obs[h].matrix();
      const ComplexMatrix& b = obs[j].matrix();
      const Complex v = Complex(0.0, -0.5) * (dm * (a * b - b * a)).trace();
      const double mag = (dm * a * b).cwiseAbs().sum() + 1e-300;
      if (std::abs(v.imag()) > kImaginaryResidue * mag)
        throw InternalConsistencyError("commutator bound: imaginary residue " +
                                       detail::format_double(v.imag()));
      m(h, j) = v.real();
      m(j, h) = -v.real();
    }
  return CovarianceMatrix{CovarianceKind::CommutatorBound, std::nullopt, m, d.dim(), N, 0.0};
}

}  // namespace monometric
