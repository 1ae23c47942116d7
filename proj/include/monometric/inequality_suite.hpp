#pragma once

// Determinant inequalities between covariance matrices: the main inequality
// with its binomial remainder, the covariance hierarchy, the cross relation
// between symmetric and asymmetric covariances, the Robertson baseline and
// the Minkowski determinant step they all rest on.
//
// Pointwise hypotheses ("for all x, y > 0") are sampled, never proven. The
// reports say so.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "monometric/covariance_engine.hpp"
#include "monometric/errors.hpp"
#include "monometric/monotone_functions.hpp"
#include "monometric/quantum_states.hpp"

namespace monometric {

enum class Verdict { Pass, Fail, HypothesisNotMet };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::HypothesisNotMet: return "HYPOTHESIS_NOT_MET";
  }
  return "?";
}

struct Tolerances {
  // PASS iff margin >= -det_rel * max(1, |lhs|, |rhs|).
  double det_rel = 1e-9;
  // Pointwise hypothesis slack, relative to max(1, |a|, |b|).
  double hypothesis_rel = 1e-12;
  // G1 - G2 must have min eigenvalue >= -psd_slack * scale when the
  // hypothesis holds on the spectrum.
  double psd_slack = 1e-8;
  // Covariance matrices with larger condition numbers get a warning.
  double condition_warn = 1e12;
};

// Log-spaced ratio grid t in [lo, hi].
struct HypothesisGrid {
  int points = 200;
  double lo = 1e-6;
  double hi = 1e6;

  std::vector<double> values() const {
    std::vector<double> out;
    if (points <= 0) return out;
    if (points == 1) return {std::sqrt(lo * hi)};
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < points; ++i) out.push_back(std::exp(a + (b - a) * i / (points - 1)));
    return out;
  }
};

struct HypothesisReport {
  bool ok = true;
  bool sampled = true;
  double min_margin = std::numeric_limits<double>::infinity();
  // The sample with the smallest margin.
  double witness_x = std::numeric_limits<double>::quiet_NaN();
  double witness_y = std::numeric_limits<double>::quiet_NaN();
  std::size_t samples = 0;
  std::string note;

  void record(double margin, double scale, double tol, double x, double y) {
    ++samples;
    if (margin < -tol * std::max(1.0, scale)) ok = false;
    if (margin < min_margin) {
      min_margin = margin;
      witness_x = x;
      witness_y = y;
    }
  }

  void merge(const HypothesisReport& other) {
    if (other.samples == 0) return;
    if (other.min_margin < min_margin) {
      witness_x = other.witness_x;
      witness_y = other.witness_y;
    }
    ok = ok && other.ok;
    min_margin = std::min(min_margin, other.min_margin);
    samples += other.samples;
    if (!other.note.empty()) note += (note.empty() ? "" : "; ") + other.note;
  }
};

struct MinkowskiReport {
  double lhs = 0.0;  // det(P+Q)^{1/N}
  double rhs = 0.0;  // det(P)^{1/N} + det(Q)^{1/N}
  double margin = 0.0;
  double tol = 0.0;
  bool ok = true;
};

struct InstanceDigest {
  std::optional<std::uint64_t> seed;
  Index n = 0;
  Index N = 0;
};

struct InequalityReport {
  std::string name;
  std::string f1;
  std::string f2;
  HypothesisReport hypothesis;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tol_det = 0.0;
  // Main inequality only: the remainder with base det(G2) used in rhs, and the
  // variant with base det(G1) kept for comparison.
  std::optional<double> remainder;
  std::optional<double> remainder_printed;
  std::optional<double> rhs_printed;
  std::map<std::string, double> components;
  std::optional<MinkowskiReport> minkowski;
  InstanceDigest instance;
  Verdict verdict = Verdict::Pass;
  std::vector<std::string> warnings;

  // The det(G1)-based remainder pushes rhs above lhs.
  bool printed_remainder_violated() const {
    return rhs_printed && lhs - *rhs_printed < -tol_det;
  }
};

namespace detail {

inline double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// Eigenvalues of a real symmetric matrix, ascending.
inline RealVector symmetric_spectrum(const RealMatrix& m) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// Eigenvalues at or below this are numerically zero. One threshold is shared by
// all matrices of a comparison: for 0 <= B <= A the ordered spectra are nested,
// so a common cutoff never zeroes det A while keeping a smaller det B.
inline double rank_threshold(std::initializer_list<const RealVector*> spectra, Index N) {
  double top = 0.0;
  for (const RealVector* s : spectra)
    if (s->size() > 0) top = std::max(top, s->cwiseAbs().maxCoeff());
  return 16.0 * static_cast<double>(N) * std::numeric_limits<double>::epsilon() * top;
}

// Determinant of a PSD matrix from its spectrum; rank-deficient gives 0.
inline double psd_det(const RealVector& spectrum, double threshold) {
  if (spectrum.size() == 0) return 1.0;
  if (spectrum.minCoeff() <= threshold) return 0.0;
  return spectrum.prod();
}

inline double nth_root(double v, int n) { return n == 1 ? v : std::pow(v, 1.0 / n); }

inline void condition_warning(const RealVector& spectrum, double limit, const std::string& label,
                              std::vector<std::string>& warnings) {
  const double hi = spectrum.cwiseAbs().maxCoeff();
  const double lo = spectrum.minCoeff();
  if (hi > 0.0 && (lo <= 0.0 || hi / lo > limit))
    warnings.push_back("WARN " + label + " is near-singular (condition number > " +
                       format_double(limit) + "); determinant has little relative accuracy");
}

inline void finalize(InequalityReport& r, const Tolerances& tol) {
  r.margin = r.lhs - r.rhs;
  r.tol_det = tol.det_rel * std::max({1.0, std::abs(r.lhs), std::abs(r.rhs)});
  if (!r.hypothesis.ok) {
    r.verdict = Verdict::HypothesisNotMet;
  } else {
    const bool main_ok = r.margin >= -r.tol_det;
    const bool mink_ok = !r.minkowski || r.minkowski->ok;
    r.verdict = main_ok && mink_ok ? Verdict::Pass : Verdict::Fail;
  }
}

}  // namespace detail

// sum_{k=1}^{N-1} C(N, k) det_base^{k/N} det_diff^{(N-k)/N}
inline double remainder_R(double det_base, double det_diff, int N) {
  if (N < 1) throw DomainError("remainder_R: N must be >= 1");
  if (!(det_base >= 0.0) || !(det_diff >= 0.0))
    throw DomainError("remainder_R: determinants must be nonnegative, got (" +
                      detail::format_double(det_base) + ", " + detail::format_double(det_diff) + ")");
  if (det_base == 0.0 || det_diff == 0.0) return 0.0;
  const double a = detail::nth_root(det_base, N);
  const double b = detail::nth_root(det_diff, N);
  double sum = 0.0;
  for (int k = 1; k < N; ++k) sum += detail::binomial(N, k) * std::pow(a, k) * std::pow(b, N - k);
  return sum;
}

// det(P + Q)^{1/N} >= det(P)^{1/N} + det(Q)^{1/N} for symmetric PSD P, Q.
inline MinkowskiReport minkowski_check(const RealMatrix& p, const RealMatrix& q, double tol = 1e-9) {
  if (p.rows() != p.cols() || q.rows() != q.cols() || p.rows() != q.rows() || p.rows() == 0)
    throw DimensionMismatch("minkowski_check: P and Q must be square of equal size");
  const double scale = std::max({1.0, p.cwiseAbs().maxCoeff(), q.cwiseAbs().maxCoeff()});
  for (const RealMatrix* m : {&p, &q}) {
    if ((*m - m->transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw ValidationError("minkowski_check: input is not symmetric");
    if (min_symmetric_eigenvalue(*m) < -1e-9 * scale)
      throw DomainError("minkowski_check: input is not positive semidefinite");
  }
  const int N = static_cast<int>(p.rows());
  MinkowskiReport r;
  const RealVector sp = detail::symmetric_spectrum(p);
  const RealVector sq = detail::symmetric_spectrum(q);
  const RealVector ss = detail::symmetric_spectrum(p + q);
  const double thr = detail::rank_threshold({&sp, &sq, &ss}, N);
  r.lhs = detail::nth_root(detail::psd_det(ss, thr), N);
  r.rhs = detail::nth_root(detail::psd_det(sp, thr), N) + detail::nth_root(detail::psd_det(sq, thr), N);
  r.margin = r.lhs - r.rhs;
  r.tol = tol * std::max({1.0, r.lhs, r.rhs});
  r.ok = r.margin >= -r.tol;
  return r;
}

// Samples g1(x, y) >= g2(x, y) on every pair of `spectrum` values and on the
// points (t, 1) of the ratio grid. All catalog kernels are homogeneous of
// degree one, so the ratio grid covers every scale.
inline HypothesisReport sample_kernel_dominance(const CMKernel& g1, const CMKernel& g2,
                                                const RealVector& spectrum,
                                                const HypothesisGrid& grid,
                                                const Tolerances& tol = {}) {
  HypothesisReport h;
  auto sample = [&](double x, double y) {
    const double a = g1(x, y), b = g2(x, y);
    h.record(a - b, std::max(std::abs(a), std::abs(b)), tol.hypothesis_rel, x, y);
  };
  for (Index k = 0; k < spectrum.size(); ++k)
    for (Index l = 0; l < spectrum.size(); ++l) sample(spectrum(k), spectrum(l));
  const auto ts = grid.values();
  for (double t : ts) sample(t, 1.0);
  h.note = "g1 >= g2 sampled on " + std::to_string(spectrum.size() * spectrum.size()) +
           " spectrum pairs and " + std::to_string(ts.size()) + " ratio points";
  return h;
}

// Main inequality from precomputed G1 = cov_matrix(g1), G2 = cov_matrix(g2):
// det G1 >= det G2 + det(G1 - G2) + R(det G2, det(G1 - G2), N).
inline InequalityReport check_main_inequality(const CovarianceMatrix& g1m,
                                              const CovarianceMatrix& g2m,
                                              const HypothesisReport& hypothesis,
                                              const Tolerances& tol = {}) {
  if (g1m.entries.rows() != g2m.entries.rows() || g1m.entries.rows() == 0)
    throw DimensionMismatch("check_main_inequality: covariance matrices differ in size");
  const int N = static_cast<int>(g1m.entries.rows());
  InequalityReport r;
  r.name = "main";
  r.f1 = g1m.kernel ? g1m.kernel->to_string() : to_string(g1m.kind);
  r.f2 = g2m.kernel ? g2m.kernel->to_string() : to_string(g2m.kind);
  r.hypothesis = hypothesis;
  r.instance.n = g1m.n;
  r.instance.N = N;

  const RealMatrix diff = g1m.entries - g2m.entries;
  const RealVector s1 = detail::symmetric_spectrum(g1m.entries);
  const RealVector s2 = detail::symmetric_spectrum(g2m.entries);
  const RealVector sd = detail::symmetric_spectrum(diff);
  const double scale = std::max(g1m.scale(), g2m.scale());
  r.components["min_eig_G1_minus_G2"] = sd.minCoeff();
  if (hypothesis.ok && sd.minCoeff() < -tol.psd_slack * scale)
    throw InternalConsistencyError(
        "G1 - G2 is not positive semidefinite (min eigenvalue " +
        detail::format_double(sd.minCoeff()) + ") although g1 >= g2 holds on the spectrum");

  const double thr = detail::rank_threshold({&s1, &s2, &sd}, N);
  r.components["rank_threshold"] = thr;
  const double det1 = detail::psd_det(s1, thr);
  const double det2 = detail::psd_det(s2, thr);
  const double detd = detail::psd_det(sd, thr);
  r.components["det_G1"] = det1;
  r.components["det_G2"] = det2;
  r.components["det_G1_minus_G2"] = detd;

  r.remainder = remainder_R(det2, detd, N);
  r.remainder_printed = remainder_R(det1, detd, N);
  r.lhs = det1;
  r.rhs = det2 + detd + *r.remainder;
  r.rhs_printed = det2 + detd + *r.remainder_printed;

  MinkowskiReport m;
  m.lhs = detail::nth_root(det1, N);
  m.rhs = detail::nth_root(det2, N) + detail::nth_root(detd, N);
  m.margin = m.lhs - m.rhs;
  m.tol = tol.det_rel * std::max({1.0, m.lhs, m.rhs});
  m.ok = m.margin >= -m.tol;
  r.minkowski = m;

  detail::condition_warning(s1, tol.condition_warn, "G1", r.warnings);
  detail::condition_warning(s2, tol.condition_warn, "G2", r.warnings);
  detail::condition_warning(sd, tol.condition_warn, "G1-G2", r.warnings);
  detail::finalize(r, tol);
  return r;
}

inline InequalityReport check_main_inequality(const DensityMatrix& d, const CMKernel& g1,
                                              const CMKernel& g2, const ObservableTuple& obs,
                                              const HypothesisGrid& grid = {},
                                              const Tolerances& tol = {}) {
  const auto hyp = sample_kernel_dominance(g1, g2, d.eigenvalues(), grid, tol);
  return check_main_inequality(cov_matrix(d, obs, g1), cov_matrix(d, obs, g2), hyp, tol);
}

// Samples f1(0)/f1(t) >= f2(0)/f2(t) on the ratio grid.
inline HypothesisReport check_fop_ordering(const FopSpec& f1, const FopSpec& f2,
                                           const HypothesisGrid& grid = {}) {
  HypothesisReport h;
  const double z1 = f_zero(f1), z2 = f_zero(f2);
  for (double t : grid.values()) {
    h.record(z1 / eval_f(f1, t) - z2 / eval_f(f2, t), 1.0, 1e-12, t, 1.0);
  }
  h.note = "f1(0)/f1(t) >= f2(0)/f2(t) sampled on " + std::to_string(h.samples) + " points";
  return h;
}

// det(Cov) >= det(qCov^s_f) >= det(qCov^as_f), as three main-inequality checks.
inline std::vector<InequalityReport> check_hierarchy(const DensityMatrix& d, const FopSpec& f,
                                                     const ObservableTuple& obs,
                                                     const HypothesisGrid& grid = {},
                                                     const Tolerances& tol = {}) {
  const CMKernel gcl = CMKernel::classical();
  const CMKernel gs = CMKernel::symmetric(f);
  const CMKernel gas = CMKernel::asymmetric(f);
  const CovarianceMatrix mcl = cov_matrix(d, obs, gcl);
  const CovarianceMatrix ms = cov_matrix(d, obs, gs);
  const CovarianceMatrix mas = cov_matrix(d, obs, gas);

  struct Step {
    const char* name;
    const CMKernel* g1;
    const CMKernel* g2;
    const CovarianceMatrix* m1;
    const CovarianceMatrix* m2;
  };
  const Step steps[] = {{"hierarchy:cov>=s", &gcl, &gs, &mcl, &ms},
                        {"hierarchy:s>=as", &gs, &gas, &ms, &mas},
                        {"hierarchy:cov>=as", &gcl, &gas, &mcl, &mas}};
  std::vector<InequalityReport> out;
  for (const auto& s : steps) {
    auto r = check_main_inequality(
        *s.m1, *s.m2, sample_kernel_dominance(*s.g1, *s.g2, d.eigenvalues(), grid, tol), tol);
    r.name = s.name;
    if (!is_regular(f)) r.warnings.push_back("non-regular metric: f(0) = 0, quantum covariances vanish");
    out.push_back(std::move(r));
  }
  return out;
}

enum class CrossDirection { AsGeqS, SGeqAs };

inline const char* to_string(CrossDirection d) {
  return d == CrossDirection::AsGeqS ? "as>=s" : "s>=as";
}

// Window around t = 1 where the factor (t+1)^2/(t-1)^2 diverges.
inline constexpr double kCrossWindow = 1e-6;

// AsGeqS: f1(0)/f1(t) >= f2(0)/f2(t) (t+1)^2/(t-1)^2; SGeqAs: the reverse.
// Inside the divergence window the kernel form is checked at x = y instead,
// where g^as vanishes and g^s equals 2 f(0) x.
inline HypothesisReport check_cross_hypothesis(const FopSpec& f1, const FopSpec& f2,
                                               CrossDirection dir,
                                               const HypothesisGrid& grid = {},
                                               const Tolerances& tol = {}) {
  HypothesisReport h;
  const double z1 = f_zero(f1), z2 = f_zero(f2);
  std::size_t skipped = 0;
  for (double t : grid.values()) {
    if (std::abs(t - 1.0) < kCrossWindow) {
      ++skipped;
      continue;
    }
    const double left = z1 / eval_f(f1, t);
    const double factor = (t + 1.0) * (t + 1.0) / ((t - 1.0) * (t - 1.0));
    const double right = z2 / eval_f(f2, t) * factor;
    const double margin = dir == CrossDirection::AsGeqS ? left - right : right - left;
    h.record(margin, std::max(std::abs(left), std::abs(right)), tol.hypothesis_rel, t, 1.0);
  }
  // x = y: g^as_{f1} = 0 vs g^s_{f2} = 2 f2(0), or g^s_{f1} = 2 f1(0) vs 0.
  const double diag = dir == CrossDirection::AsGeqS ? -2.0 * z2 : 2.0 * z1;
  h.record(diag, 2.0 * std::max(z1, z2), tol.hypothesis_rel, 1.0, 1.0);
  h.note = "cross hypothesis sampled on " + std::to_string(h.samples - 1) +
           " ratio points (" + std::to_string(skipped) +
           " inside |t-1| < 1e-6 excluded) plus the kernel form at x = y";
  return h;
}

inline InequalityReport check_cross_theorem(const FopSpec& f1, const FopSpec& f2,
                                            const DensityMatrix& d, const ObservableTuple& obs,
                                            CrossDirection dir, const HypothesisGrid& grid = {},
                                            const Tolerances& tol = {}) {
  const CMKernel g1 = dir == CrossDirection::AsGeqS ? CMKernel::asymmetric(f1) : CMKernel::symmetric(f1);
  const CMKernel g2 = dir == CrossDirection::AsGeqS ? CMKernel::symmetric(f2) : CMKernel::asymmetric(f2);
  HypothesisReport hyp = check_cross_hypothesis(f1, f2, dir, grid, tol);
  hyp.merge(sample_kernel_dominance(g1, g2, d.eigenvalues(), HypothesisGrid{0}, tol));
  auto r = check_main_inequality(cov_matrix(d, obs, g1), cov_matrix(d, obs, g2), hyp, tol);
  r.name = std::string("cross:") + to_string(dir);
  r.f1 = f1.to_string();
  r.f2 = f2.to_string();
  return r;
}

// det[Cov(A_h, A_j)] >= det[-(i/2) Tr(D [A_h, A_j])].
inline InequalityReport check_robertson_schrodinger(const DensityMatrix& d, const ObservableTuple& obs,
                                                    const Tolerances& tol = {}) {
  const CovarianceMatrix c = cov_matrix(d, obs, CMKernel::classical());
  const CovarianceMatrix b = commutator_bound_matrix(d, obs);
  InequalityReport r;
  r.name = obs.size() == 2 ? "schrodinger" : "robertson";
  r.f1 = "cl";
  r.f2 = "commutator";
  r.hypothesis.note = "no pointwise hypothesis";
  r.hypothesis.sampled = false;
  r.instance.n = d.dim();
  r.instance.N = static_cast<Index>(obs.size());
  const RealVector sc = detail::symmetric_spectrum(c.entries);
  r.lhs = detail::psd_det(sc, detail::rank_threshold({&sc}, sc.size()));
  r.rhs = b.entries.determinant();
  r.components["det_cov"] = r.lhs;
  r.components["det_commutator"] = r.rhs;
  detail::condition_warning(sc, tol.condition_warn, "Cov", r.warnings);
  detail::finalize(r, tol);
  return r;
}

}  // namespace monometric
