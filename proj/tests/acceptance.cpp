// Acceptance run: one [PASS]/[FAIL] line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>

#include "cli_runner.hpp"
#include "monometric/monometric.hpp"

using namespace monometric;

namespace {

int failed = 0;

void report(int id, bool ok, const std::string& title, const std::string& detail) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << id << ". " << title << ": " << detail << std::endl;
  if (!ok) ++failed;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

ComplexMatrix qubit_state(double p) {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = p;
  d(1, 1) = 1.0 - p;
  return d;
}

ObservableTuple pauli_xy() {
  const Complex i(0.0, 1.0);
  ComplexMatrix sx(2, 2), sy(2, 2);
  sx << 0.0, 1.0, 1.0, 0.0;
  sy << 0.0, -i, i, 0.0;
  return ObservableTuple({Observable::make(sx), Observable::make(sy)});
}

// |a - b| / scale
double rel(double a, double b, double scale) { return scale > 0.0 ? std::abs(a - b) / scale : std::abs(a - b); }

void kernel_identities() {
  Stopwatch sw;
  const auto grid = HypothesisGrid{200}.values();
  const auto cl = CMKernel::classical();
  const auto s_sld = CMKernel::symmetric(FopSpec::sld());
  std::size_t violations = 0, samples = 0;
  double worst_sld = 0.0;
  for (const auto& f : function_catalog()) {
    const auto s = CMKernel::symmetric(f), as = CMKernel::asymmetric(f);
    for (double x : grid)
      for (double y : grid) {
        const double vc = cl(x, y), vs = s(x, y), va = as(x, y);
        const double slack = 1e-12 * std::max(1.0, vc);
        violations += (vc - vs < -slack) + (vs - va < -slack) + (va < -1e-12);
        ++samples;
      }
  }
  for (double x : grid)
    for (double y : grid) worst_sld = std::max(worst_sld, rel(s_sld(x, y), cl(x, y), cl(x, y)));
  const double t = sw.seconds();
  report(1, violations == 0 && worst_sld <= 1e-14 && t < 5.0, "kernel hierarchy cl >= s >= as >= 0",
         std::to_string(samples) + " grid points x 3 inequalities, " + std::to_string(violations) +
             " violations, max |s_sld - cl|/cl = " + fmt(worst_sld) + ", " + fmt(t) + " s");
}

void dual_paths_and_centering() {
  Stopwatch sw;
  const int dims[] = {2, 3, 4, 6, 8};
  double worst_cov = 0.0, worst_as = 0.0, worst_s = 0.0, worst_center = 0.0, worst_shift = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = dims[trial % 5];
    const auto inst = sample_instance(n, 2, 50000 + trial, 0.01);
    const auto& d = inst.state;
    const auto& a = inst.observables[0];
    const auto& b = inst.observables[1];
    const auto a0 = center(a, d), b0 = center(b, d);
    const double ea = expectation(d, a.matrix()), eb = expectation(d, b.matrix());

    worst_cov = std::max(worst_cov, rel(cov(d, a, b), cov_spectral(d, a, b),
                                        std::sqrt(cov(d, a, a) * cov(d, b, b))));
    for (const auto& f : function_catalog()) {
      const double sa = std::sqrt(qcov_as(d, f, a, a) * qcov_as(d, f, b, b));
      const double ss = std::sqrt(qcov_s(d, f, a, a) * qcov_s(d, f, b, b));
      const double as = qcov_as(d, f, a, b), s = qcov_s(d, f, a, b);
      worst_as = std::max(worst_as, rel(as, qcov_as_commutator(d, f, a, b), sa));
      worst_s = std::max(worst_s, rel(s, qcov_s_anticommutator(d, f, a, b), ss));
      worst_center = std::max(worst_center, rel(as, qcov_as(d, f, a0, b0), sa));
      worst_shift = std::max(worst_shift, rel(s - qcov_s(d, f, a0, b0), 2.0 * f_zero(f) * ea * eb, ss));
    }
  }
  const double t = sw.seconds();
  report(2, worst_cov <= 1e-10 && worst_as <= 1e-10 && worst_s <= 1e-10 && t < 30.0,
         "dual-path agreement",
         "1000 instances n in {2,3,4,6,8}, max relative gap cov " + fmt(worst_cov) + ", as " +
             fmt(worst_as) + ", s " + fmt(worst_s) + ", " + fmt(t) + " s");
  report(3, worst_center <= 1e-10 && worst_shift <= 1e-10, "centering identities",
         "max relative gap as(A,B) vs as(A0,B0) " + fmt(worst_center) +
             ", s(A,B) - s(A0,B0) vs 2 f(0) Tr(DA) Tr(DB) " + fmt(worst_shift));
}

SweepConfig big_sweep(CheckName check) {
  SweepConfig cfg;
  cfg.params.check = check;
  cfg.dims = {2, 3, 4};
  cfg.counts = {1, 2, 3};
  cfg.trials = 10000;
  cfg.seed = 1;
  return cfg;
}

std::size_t printed_count = 0, printed_pool = 0;

void main_and_hierarchy() {
  Stopwatch sw;
  std::size_t printed = 0, qubit_pairs = 0;
  SweepSummary main;
  std::string error;
  try {
    main = run_sweep(big_sweep(CheckName::Main), [&](const InequalityReport& r) {
      if (r.instance.n != 2 || r.instance.N != 2) return;
      ++qubit_pairs;
      if (r.verdict == Verdict::Pass && r.printed_remainder_violated()) ++printed;
    });
  } catch (const Error& e) {
    error = e.what();
  }
  const double t = sw.seconds();
  report(4, error.empty() && main.fail == 0 && main.min_relative_margin >= -1e-9 && t < 300.0,
         "main inequality with det(G2) remainder",
         error.empty() ? std::to_string(main.records) + " records over 10000 instances, " +
                             std::to_string(main.pass) + " PASS, " + std::to_string(main.fail) +
                             " FAIL, " + std::to_string(main.hypothesis_not_met) +
                             " HYPOTHESIS_NOT_MET, min margin/scale " + fmt(main.min_relative_margin) +
                             ", " + fmt(t) + " s"
                       : "error: " + error);

  SweepSummary hier;
  error.clear();
  try {
    hier = run_sweep(big_sweep(CheckName::Hierarchy));
  } catch (const Error& e) {
    error = e.what();
  }
  report(5, error.empty() && hier.fail == 0 && hier.hypothesis_not_met == 0,
         "hierarchy det Cov >= det qCov^s >= det qCov^as",
         error.empty() ? std::to_string(hier.records) + " records (7 functions x 3 steps x 10000), " +
                             std::to_string(hier.fail) + " FAIL, min margin/scale " +
                             fmt(hier.min_relative_margin)
                       : "error: " + error);

  printed_count = printed;
  printed_pool = qubit_pairs;
}

void printed_remainder() {
  report(9, printed_count > 0, "printed remainder counterexamples",
         std::to_string(printed_count) + " of " + std::to_string(printed_pool) +
             " n=2, N=2 records pass with the det(G2) remainder but fail with det(G1)");
}

void robertson() {
  double worst = 0.0;
  for (double p : {0.5, 0.6, 0.7, 0.9, 0.99}) {
    const auto r = check_robertson_schrodinger(make_density(qubit_state(p)), pauli_xy());
    worst = std::max({worst, std::abs(r.lhs - 1.0), std::abs(r.rhs - (2 * p - 1) * (2 * p - 1))});
  }
  double odd = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const int N = 1 + 2 * (trial % 3);
    const auto inst = sample_instance(2 + trial % 4, N, 70000 + trial, 0.01);
    odd = std::max(odd, std::abs(commutator_bound_matrix(inst.state, inst.observables).entries.determinant()));
  }
  report(6, worst <= 1e-12 && odd <= 1e-12, "Robertson/Schrodinger baseline",
         "qubit closed form max error " + fmt(worst) + ", max |det| of odd-N commutator matrix " + fmt(odd));
}

void positivity_and_quadratic_form() {
  double worst = 0.0;
  std::size_t matrices = 0;
  std::string error;
  const auto kernels = catalog_kernels();
  const auto cfg = big_sweep(CheckName::Main);
  try {
    for (int t = 0; t < cfg.trials; ++t) {
      const auto plan = plan_trial(cfg, t);
      const auto inst = sample_instance(plan.n, plan.N, plan.seed, cfg.min_gap);
      for (const auto& g : kernels) {
        const auto m = cov_matrix(inst.state, inst.observables, g);
        worst = std::min(worst, m.min_eigenvalue / m.scale());
        ++matrices;
      }
    }
  } catch (const Error& e) {
    error = e.what();
  }

  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  double worst_quad = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto plan = plan_trial(cfg, trial);
    const auto inst = sample_instance(plan.n, 3, 90000 + trial, 0.01);
    const auto& d = inst.state;
    const auto& g = kernels[trial % kernels.size()];
    const auto m = cov_matrix(d, inst.observables, g);
    Eigen::VectorXcd x(3);
    for (Index k = 0; k < 3; ++k) x(k) = Complex(normal(rng), normal(rng));
    const double quad = (x.adjoint() * m.entries.cast<Complex>() * x)(0).real();
    ComplexMatrix c = ComplexMatrix::Zero(d.dim(), d.dim());
    for (Index k = 0; k < 3; ++k) c += x(k) * to_eigenbasis(center(inst.observables[k], d), d);
    double direct = 0.0;
    for (Index h = 0; h < d.dim(); ++h)
      for (Index j = 0; j < d.dim(); ++j) direct += g(d.eigenvalues()(h), d.eigenvalues()(j)) * std::norm(c(h, j));
    if (direct > 0.0) worst_quad = std::max(worst_quad, rel(quad, direct, direct));
    else worst_quad = std::max(worst_quad, std::abs(quad));
  }
  report(7, error.empty() && worst >= -1e-9 && worst_quad <= 1e-9, "covariance matrices are PSD",
         error.empty() ? std::to_string(matrices) + " matrices, min eigenvalue/scale " + fmt(worst) +
                             ", quadratic form max relative gap " + fmt(worst_quad) + " on 100 draws"
                       : "error: " + error);
}

void unitary_invariance() {
  const auto pairs = catalog_kernel_pairs(HypothesisGrid{});
  std::vector<CheckParams> checks(5);
  checks[0].check = CheckName::Hierarchy;
  checks[1].check = CheckName::Main;
  checks[2].check = CheckName::Robertson;
  checks[3].check = CheckName::Cross;
  checks[3].functions = {FopSpec::sld()};
  checks[3].f2 = FopSpec::sld();
  checks[4].check = CheckName::Cross;
  checks[4].functions = {FopSpec::wy()};
  checks[4].f2 = FopSpec::km();
  checks[4].direction = CrossDirection::AsGeqS;

  double worst = 0.0;
  std::size_t compared = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 3, N = 1 + (trial / 3) % 3;
    const auto inst = sample_instance(n, N, 80000 + trial, 0.01);
    const ComplexMatrix u = sample_unitary(n, 80000 + trial);
    const Instance moved{conjugate(inst.state, u), conjugate(inst.observables, u)};
    for (const auto& p : checks) {
      const auto a = run_checks(p, inst, &pairs), b = run_checks(p, moved, &pairs);
      for (std::size_t k = 0; k < a.size(); ++k) {
        const double scale = std::max({1.0, std::abs(a[k].lhs), std::abs(a[k].rhs)});
        worst = std::max(worst, rel(a[k].margin, b[k].margin, scale));
        ++compared;
      }
    }
  }
  report(8, worst <= 1e-8, "unitary invariance of margins",
         std::to_string(compared) + " margins under 100 conjugations, max relative change " + fmt(worst));
}

void cli_contract() {
  const std::string sweep = "sweep --check main --n 2-4 --N 1-3 --trials 20 --seed 5";
  const auto a = cli::run(sweep), b = cli::run(sweep);
  const auto c = cli::run("sweep --check hierarchy --trials 10 --format csv");
  const auto d = cli::run("sweep --check hierarchy --trials 10 --format csv");
  const bool same = a.code == 0 && !a.out.empty() && a.out == b.out && c.code == 0 && c.out == d.out;

  struct Case {
    std::string args;
    int want;
  };
  const Case cases[] = {
      {"compute " + cli::fixture("qubit.json") + " --check robertson", 0},
      {"compute " + cli::fixture("qubit.json") + " --check hierarchy --f sld", 0},
      {"compute " + cli::fixture("qubit.json") + " --check cross --f wy --f2 sld --direction as-geq-s", 2},
      {"compute " + cli::fixture("malformed.json") + " --check robertson", 3},
      {"compute " + cli::fixture("nonhermitian.json") + " --check robertson", 3},
  };
  std::string bad;
  for (const auto& cs : cases) {
    const int got = cli::run(cs.args).code;
    if (got != cs.want) bad += " [" + cs.args + "] gave " + std::to_string(got);
  }
  report(10, same && bad.empty(), "CLI determinism and exit codes",
         std::string(same ? "repeated sweeps byte-identical" : "repeated sweeps differ") + ", " +
             (bad.empty() ? "5 fixture exit codes match" : "mismatch:" + bad));
}

}  // namespace

int main() {
  kernel_identities();
  dual_paths_and_centering();
  main_and_hierarchy();
  robertson();
  positivity_and_quadratic_form();
  unitary_invariance();
  printed_remainder();
  cli_contract();
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
