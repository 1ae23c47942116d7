#pragma once

// Seeded randomized sweeps over the inequality checks. Trial t uses instance
// seed `seed + t`; dimensions cycle deterministically through the configured
// lists, so any record can be regenerated from (seed, n, N, min_gap).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "monometric/covariance_engine.hpp"
#include "monometric/inequality_suite.hpp"
#include "monometric/monotone_functions.hpp"
#include "monometric/quantum_states.hpp"

namespace monometric {

enum class CheckName { Hierarchy, Main, Cross, Robertson, Schrodinger };

inline CheckName parse_check(std::string_view s) {
  if (s == "hierarchy") return CheckName::Hierarchy;
  if (s == "main") return CheckName::Main;
  if (s == "cross") return CheckName::Cross;
  if (s == "robertson") return CheckName::Robertson;
  if (s == "schrodinger") return CheckName::Schrodinger;
  throw ValidationError("unknown check '" + std::string(s) +
                        "' (expected hierarchy, main, cross, robertson or schrodinger)");
}

inline const char* to_string(CheckName c) {
  switch (c) {
    case CheckName::Hierarchy: return "hierarchy";
    case CheckName::Main: return "main";
    case CheckName::Cross: return "cross";
    case CheckName::Robertson: return "robertson";
    case CheckName::Schrodinger: return "schrodinger";
  }
  return "?";
}

inline CrossDirection parse_direction(std::string_view s) {
  if (s == "as>=s" || s == "as-geq-s") return CrossDirection::AsGeqS;
  if (s == "s>=as" || s == "s-geq-as") return CrossDirection::SGeqAs;
  throw ValidationError("unknown direction '" + std::string(s) + "' (expected as-geq-s or s-geq-as)");
}

// Parameters shared by single-instance checks and sweeps.
struct CheckParams {
  CheckName check = CheckName::Hierarchy;
  std::vector<FopSpec> functions;  // empty: whole catalog (hierarchy)
  std::optional<FopSpec> f2;
  std::optional<CMKernel> g1, g2;  // main: both or neither (neither = catalog pairs)
  CrossDirection direction = CrossDirection::SGeqAs;
  Tolerances tol;
  HypothesisGrid grid;

  void validate() const {
    if (g1.has_value() != g2.has_value())
      throw ValidationError("main check needs both --g1 and --g2, or neither");
    if (check == CheckName::Cross && (functions.size() != 1 || !f2))
      throw ValidationError("cross check needs exactly one --f and one --f2");
    if (grid.points < 0) throw ValidationError("--grid-points must be >= 0");
    if (!(tol.det_rel >= 0.0)) throw ValidationError("--tol-det must be >= 0");
  }
};

struct SweepConfig {
  CheckParams params;
  std::vector<int> dims{3};
  std::vector<int> counts{2};
  int trials = 100;
  std::uint64_t seed = 1;
  double min_gap = 0.01;

  void validate() const {
    params.validate();
    if (trials < 1) throw ValidationError("trials must be >= 1");
    if (dims.empty() || counts.empty()) throw ValidationError("n and N lists must be nonempty");
    for (int n : dims)
      if (n < 2) throw ValidationError("n must be >= 2");
    for (int N : counts)
      if (N < 1) throw ValidationError("N must be >= 1");
    if (!(min_gap >= 0.0)) throw ValidationError("min-gap must be >= 0");
  }
};

struct TrialPlan {
  int trial = 0;
  std::uint64_t seed = 0;
  int n = 0;
  int N = 0;
};

inline TrialPlan plan_trial(const SweepConfig& cfg, int trial) {
  const auto t = static_cast<std::size_t>(trial);
  TrialPlan p;
  p.trial = trial;
  p.seed = cfg.seed + static_cast<std::uint64_t>(trial);
  p.n = cfg.dims[t % cfg.dims.size()];
  p.N = cfg.counts[(t / cfg.dims.size()) % cfg.counts.size()];
  if (cfg.params.check == CheckName::Schrodinger) p.N = 2;
  return p;
}

struct KernelPair {
  CMKernel g1;
  CMKernel g2;
  HypothesisReport grid_hypothesis;
};

// Ordered catalog kernel pairs (g1, g2) whose dominance g1 >= g2 survives the
// ratio grid.
inline std::vector<KernelPair> catalog_kernel_pairs(const HypothesisGrid& grid,
                                                    const Tolerances& tol = {}) {
  const auto kernels = catalog_kernels();
  std::vector<KernelPair> out;
  for (const auto& a : kernels)
    for (const auto& b : kernels) {
      auto h = sample_kernel_dominance(a, b, RealVector(), grid, tol);
      if (h.ok) out.push_back(KernelPair{a, b, std::move(h)});
    }
  return out;
}

// Runs the configured check on one instance.
inline std::vector<InequalityReport> run_checks(const CheckParams& p, const Instance& inst,
                                                const std::vector<KernelPair>* pairs = nullptr) {
  const DensityMatrix& d = inst.state;
  const ObservableTuple& obs = inst.observables;
  std::vector<InequalityReport> out;
  switch (p.check) {
    case CheckName::Hierarchy: {
      const auto fs = p.functions.empty() ? function_catalog() : p.functions;
      for (const auto& f : fs) {
        auto rs = check_hierarchy(d, f, obs, p.grid, p.tol);
        for (auto& r : rs) {
          r.f1 = f.to_string();
          out.push_back(std::move(r));
        }
      }
      break;
    }
    case CheckName::Main: {
      if (p.g1) {
        out.push_back(check_main_inequality(d, *p.g1, *p.g2, obs, p.grid, p.tol));
        break;
      }
      std::vector<KernelPair> local;
      if (!pairs) {
        local = catalog_kernel_pairs(p.grid, p.tol);
        pairs = &local;
      }
      std::map<std::string, CovarianceMatrix> cache;
      auto matrix_for = [&](const CMKernel& g) -> const CovarianceMatrix& {
        const std::string key = g.to_string();
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, cov_matrix(d, obs, g)).first;
        return it->second;
      };
      for (const auto& kp : *pairs) {
        HypothesisReport h = sample_kernel_dominance(kp.g1, kp.g2, d.eigenvalues(), HypothesisGrid{0}, p.tol);
        h.merge(kp.grid_hypothesis);
        out.push_back(check_main_inequality(matrix_for(kp.g1), matrix_for(kp.g2), h, p.tol));
      }
      break;
    }
    case CheckName::Cross:
      out.push_back(check_cross_theorem(p.functions.front(), *p.f2, d, obs, p.direction, p.grid, p.tol));
      break;
    case CheckName::Schrodinger:
      if (obs.size() != 2) throw ValidationError("schrodinger check needs exactly 2 observables");
      [[fallthrough]];
    case CheckName::Robertson:
      out.push_back(check_robertson_schrodinger(d, obs, p.tol));
      break;
  }
  return out;
}

struct SweepSummary {
  std::size_t records = 0;
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t hypothesis_not_met = 0;
  std::size_t printed_remainder_violations = 0;
  std::size_t warnings = 0;
  // Over PASS/FAIL records: smallest margin / max(1, |lhs|, |rhs|).
  double min_relative_margin = std::numeric_limits<double>::infinity();
  double min_margin = std::numeric_limits<double>::infinity();
  std::optional<std::uint64_t> min_margin_seed;
  std::string min_margin_check;

  void add(const InequalityReport& r) {
    ++records;
    switch (r.verdict) {
      case Verdict::Pass: ++pass; break;
      case Verdict::Fail: ++fail; break;
      case Verdict::HypothesisNotMet: ++hypothesis_not_met; break;
    }
    if (r.printed_remainder_violated()) ++printed_remainder_violations;
    if (!r.warnings.empty()) ++warnings;
    if (r.verdict == Verdict::HypothesisNotMet) return;
    const double rel = r.margin / std::max({1.0, std::abs(r.lhs), std::abs(r.rhs)});
    if (rel < min_relative_margin) {
      min_relative_margin = rel;
      min_margin = r.margin;
      min_margin_seed = r.instance.seed;
      min_margin_check = r.name + " " + r.f1 + " " + r.f2;
    }
  }
};

// Records reach `sink` in trial order.
inline SweepSummary run_sweep(const SweepConfig& cfg,
                              const std::function<void(const InequalityReport&)>& sink = {}) {
  cfg.validate();
  std::vector<KernelPair> pairs;
  if (cfg.params.check == CheckName::Main && !cfg.params.g1)
    pairs = catalog_kernel_pairs(cfg.params.grid, cfg.params.tol);
  SweepSummary summary;
  for (int t = 0; t < cfg.trials; ++t) {
    const TrialPlan plan = plan_trial(cfg, t);
    const Instance inst = sample_instance(plan.n, plan.N, plan.seed, cfg.min_gap);
    for (auto& r : run_checks(cfg.params, inst, &pairs)) {
      r.instance.seed = plan.seed;
      summary.add(r);
      if (sink) sink(r);
    }
  }
  return summary;
}

}  // namespace monometric
