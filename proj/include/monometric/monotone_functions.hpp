#pragma once

// Catalog of normalized symmetric operator monotone functions f (f(1) = 1,
// f(x) = x f(1/x)), their operator means m_f(x, y) = y f(x/y), and the
// Chentsov-Morozova kernels g(x, y) built from them.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "monometric/errors.hpp"

namespace monometric {

enum class FopFamily { SLD, WY, WYD, KuboMori };

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ValidationError("cannot parse " + std::string(what) + " from '" +
                          std::string(s) + "'");
  return v;
}

}  // namespace detail

// Identifies one function of the catalog. WYD carries its beta parameter,
// admissible on [-1, 2]; beta in {0, 1} denotes the Kubo-Mori limit.
class FopSpec {
 public:
  static FopSpec sld() { return FopSpec(FopFamily::SLD, 0.0); }
  static FopSpec wy() { return FopSpec(FopFamily::WY, 0.0); }
  static FopSpec km() { return FopSpec(FopFamily::KuboMori, 0.0); }
  static FopSpec wyd(double beta) {
    if (!(beta >= -1.0 && beta <= 2.0))
      throw DomainError("wyd: beta must lie in [-1, 2], got " +
                        detail::format_double(beta));
    return FopSpec(FopFamily::WYD, beta);
  }

  // Accepts "sld", "wy", "km" and "wyd:<beta>".
  static FopSpec parse(std::string_view s) {
    if (s == "sld") return sld();
    if (s == "wy") return wy();
    if (s == "km") return km();
    if (s.substr(0, 4) == "wyd:") return wyd(detail::parse_double(s.substr(4), "wyd beta"));
    throw ValidationError("unknown function spec '" + std::string(s) +
                          "' (expected sld, wy, wyd:<beta> or km)");
  }

  FopFamily family() const { return family_; }
  double beta() const { return beta_; }

  std::string to_string() const {
    switch (family_) {
      case FopFamily::SLD: return "sld";
      case FopFamily::WY: return "wy";
      case FopFamily::KuboMori: return "km";
      case FopFamily::WYD: return "wyd:" + detail::format_double(beta_);
    }
    return "?";
  }

  friend bool operator==(const FopSpec&, const FopSpec&) = default;

 private:
  FopSpec(FopFamily family, double beta) : family_(family), beta_(beta) {}

  FopFamily family_;
  double beta_;
};

namespace detail {

inline double kubo_mori(double x) {
  const double d = x - 1.0;
  if (std::abs(d) < 1e-8) return 1.0 + d / 2.0 - d * d / 12.0;
  return d / std::log(x);
}

// Direct evaluation; callers keep x in a range where pow/log do not overflow.
inline double eval_f_direct(const FopSpec& f, double x) {
  switch (f.family()) {
    case FopFamily::SLD: return (1.0 + x) / 2.0;
    case FopFamily::WY: {
      const double s = std::sqrt(x) + 1.0;
      return s * s / 4.0;
    }
    case FopFamily::KuboMori: return kubo_mori(x);
    case FopFamily::WYD: {
      const double beta = f.beta();
      if (beta == 0.0 || beta == 1.0) return kubo_mori(x);
      const double d = x - 1.0;
      if (std::abs(d) < 1e-8) return 1.0 + d / 2.0;
      const double l = std::log(x);
      return beta * (1.0 - beta) * d * d /
             (std::expm1(beta * l) * std::expm1((1.0 - beta) * l));
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace detail

inline double eval_f(const FopSpec& f, double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError("eval_f: argument must be positive and finite, got " +
                      detail::format_double(x));
  // f(x) = x f(1/x) keeps pow() arguments moderate for very skewed inputs.
  if (x > 1e12) return x * detail::eval_f_direct(f, 1.0 / x);
  return detail::eval_f_direct(f, x);
}

// lim_{x -> 0+} f(x).
inline double f_zero(const FopSpec& f) {
  switch (f.family()) {
    case FopFamily::SLD: return 0.5;
    case FopFamily::WY: return 0.25;
    case FopFamily::KuboMori: return 0.0;
    case FopFamily::WYD: {
      const double beta = f.beta();
      return (beta > 0.0 && beta < 1.0) ? beta * (1.0 - beta) : 0.0;
    }
  }
  return 0.0;
}

// A metric is regular when f(0) > 0; otherwise the derived quantum
// covariances vanish identically.
inline bool is_regular(const FopSpec& f) { return f_zero(f) > 0.0; }

// m_f(x, y) = y f(x/y). The argument of f is always the ratio <= 1, which
// makes the result exactly symmetric in (x, y).
inline double mean_mf(const FopSpec& f, double x, double y) {
  if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
    throw DomainError("mean_mf: arguments must be positive and finite, got (" +
                      detail::format_double(x) + ", " + detail::format_double(y) + ")");
  if (x <= y) return y * detail::eval_f_direct(f, x / y);
  return x * detail::eval_f_direct(f, y / x);
}

// The built-in catalog used by sweeps and acceptance checks.
inline std::vector<FopSpec> function_catalog() {
  return {FopSpec::sld(),      FopSpec::wy(),       FopSpec::wyd(-1.0), FopSpec::wyd(0.3),
          FopSpec::wyd(0.5),   FopSpec::wyd(1.5),   FopSpec::km()};
}

enum class KernelKind { Classical, SymmetricF, AsymmetricF, InverseMean, Difference, Custom };

// Symmetric positive kernel g: R+ x R+ -> R+ inducing the metric
// (A, B)_{D,g} = sum_{k,l} A_lk B_kl g(lambda_k, lambda_l).
class CMKernel {
 public:
  using Function = std::function<double(double, double)>;

  // g_cl(x, y) = (x + y) / 2
  static CMKernel classical() { return CMKernel(KernelKind::Classical); }
  // g^s_f(x, y) = f(0) (x + y)^2 / (2 m_f(x, y))
  static CMKernel symmetric(FopSpec f) { return CMKernel(KernelKind::SymmetricF, f); }
  // g^as_f(x, y) = f(0) (x - y)^2 / (2 m_f(x, y))
  static CMKernel asymmetric(FopSpec f) { return CMKernel(KernelKind::AsymmetricF, f); }
  // 1 / m_f(x, y): the monotone metric itself.
  static CMKernel inverse_mean(FopSpec f) { return CMKernel(KernelKind::InverseMean, f); }

  static CMKernel difference(CMKernel g1, CMKernel g2) {
    CMKernel k(KernelKind::Difference);
    k.parts_ = std::make_shared<const std::pair<CMKernel, CMKernel>>(std::move(g1), std::move(g2));
    return k;
  }

  // The caller vouches for symmetry and positivity of `fn`.
  static CMKernel custom(std::string name, Function fn) {
    CMKernel k(KernelKind::Custom);
    k.name_ = std::move(name);
    k.custom_ = std::move(fn);
    return k;
  }

  // Accepts "cl", "s:<f>", "as:<f>", "inv:<f>".
  static CMKernel parse(std::string_view s) {
    if (s == "cl") return classical();
    if (s.substr(0, 2) == "s:") return symmetric(FopSpec::parse(s.substr(2)));
    if (s.substr(0, 3) == "as:") return asymmetric(FopSpec::parse(s.substr(3)));
    if (s.substr(0, 4) == "inv:") return inverse_mean(FopSpec::parse(s.substr(4)));
    throw ValidationError("unknown kernel spec '" + std::string(s) +
                          "' (expected cl, s:<f>, as:<f> or inv:<f>)");
  }

  KernelKind kind() const { return kind_; }
  const std::optional<FopSpec>& fop() const { return f_; }
  const CMKernel& minuend() const { return parts_->first; }
  const CMKernel& subtrahend() const { return parts_->second; }

  std::string to_string() const {
    switch (kind_) {
      case KernelKind::Classical: return "cl";
      case KernelKind::SymmetricF: return "s:" + f_->to_string();
      case KernelKind::AsymmetricF: return "as:" + f_->to_string();
      case KernelKind::InverseMean: return "inv:" + f_->to_string();
      case KernelKind::Difference:
        return "(" + parts_->first.to_string() + ")-(" + parts_->second.to_string() + ")";
      case KernelKind::Custom: return "custom:" + name_;
    }
    return "?";
  }

  double operator()(double x, double y) const;

 private:
  explicit CMKernel(KernelKind kind) : kind_(kind) {}
  CMKernel(KernelKind kind, FopSpec f) : kind_(kind), f_(f) {}

  KernelKind kind_;
  std::optional<FopSpec> f_;
  std::shared_ptr<const std::pair<CMKernel, CMKernel>> parts_;
  Function custom_;
  std::string name_;
};

// Relative slack below which a difference kernel is still considered >= 0.
inline constexpr double kDominanceSlack = 1e-12;

inline double eval_kernel(const CMKernel& g, double x, double y) { return g(x, y); }

inline double CMKernel::operator()(double x, double y) const {
  if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
    throw DomainError("eval_kernel: arguments must be positive and finite, got (" +
                      detail::format_double(x) + ", " + detail::format_double(y) + ")");
  switch (kind_) {
    case KernelKind::Classical: return (x + y) / 2.0;
    case KernelKind::SymmetricF:
    case KernelKind::AsymmetricF: {
      const double f0 = f_zero(*f_);
      if (f0 == 0.0) return 0.0;
      const double s = kind_ == KernelKind::SymmetricF ? x + y : x - y;
      return f0 * s * s / (2.0 * mean_mf(*f_, x, y));
    }
    case KernelKind::InverseMean: return 1.0 / mean_mf(*f_, x, y);
    case KernelKind::Difference: {
      const double a = parts_->first(x, y);
      const double b = parts_->second(x, y);
      const double v = a - b;
      if (v < -kDominanceSlack * std::max({1.0, std::abs(a), std::abs(b)}))
        throw DominanceViolation("difference kernel " + to_string() + " is negative (" +
                                 detail::format_double(v) + ") at (" +
                                 detail::format_double(x) + ", " + detail::format_double(y) + ")");
      return std::max(v, 0.0);
    }
    case KernelKind::Custom: {
      const double v = custom_(x, y);
      if (!std::isfinite(v))
        throw DomainError("custom kernel " + name_ + " returned a non-finite value");
      return v;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

// g_cl together with g^s_f and g^as_f for every catalog function.
inline std::vector<CMKernel> catalog_kernels() {
  std::vector<CMKernel> out{CMKernel::classical()};
  for (const auto& f : function_catalog()) {
    out.push_back(CMKernel::symmetric(f));
    out.push_back(CMKernel::asymmetric(f));
  }
  return out;
}

}  // namespace monometric
