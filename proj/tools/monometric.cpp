// Command-line front end: catalog listing, single-instance checks, seeded
// sweeps and instance sampling.
//
// Exit codes: 0 all PASS, 1 some FAIL, 2 some HYPOTHESIS_NOT_MET (compute
// only), 3 input or usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "monometric/monometric.hpp"

namespace {

using namespace monometric;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitHypothesis = 2;
constexpr int kExitInput = 3;

struct CommonFlags {
  std::string check = "hierarchy";
  std::vector<std::string> f;
  std::string f2;
  double beta = std::numeric_limits<double>::quiet_NaN();
  std::string g1, g2;
  std::string direction = "s-geq-as";
  double tol_det = 1e-9;
  int grid_points = 200;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App& app, CommonFlags& c) {
  app.add_option("--check", c.check, "hierarchy | main | cross | robertson | schrodinger")
      ->capture_default_str();
  app.add_option("--f", c.f, "function spec(s): sld, wy, km, wyd:<beta> (default: whole catalog)")
      ->delimiter(',');
  app.add_option("--f2", c.f2, "second function spec (cross check)");
  app.add_option("--beta", c.beta, "beta for a bare 'wyd' in --f/--f2");
  app.add_option("--g1", c.g1, "main check: dominating kernel (cl, s:<f>, as:<f>, inv:<f>)");
  app.add_option("--g2", c.g2, "main check: dominated kernel (default with --g1 unset: all catalog pairs)");
  app.add_option("--direction", c.direction, "cross check: as-geq-s | s-geq-as")->capture_default_str();
  app.add_option("--tol-det", c.tol_det, "relative determinant slack")->capture_default_str();
  app.add_option("--grid-points", c.grid_points, "hypothesis ratio grid size on [1e-6, 1e6]")
      ->capture_default_str();
  app.add_option("--out", c.out,
                 "output path prefix (.jsonl/.csv appended); relative paths resolve against "
                 "$MONOMETRIC_OUT_DIR when set");
  app.add_option("--format", c.format, "json | csv | both")
      ->check(CLI::IsMember({"json", "csv", "both"}))
      ->capture_default_str();
}

FopSpec parse_f(const std::string& s, double beta) {
  if (s == "wyd") {
    if (std::isnan(beta)) throw ValidationError("bare 'wyd' needs --beta");
    return FopSpec::wyd(beta);
  }
  return FopSpec::parse(s);
}

CheckParams make_params(const CommonFlags& c) {
  CheckParams p;
  p.check = parse_check(c.check);
  for (const auto& s : c.f) p.functions.push_back(parse_f(s, c.beta));
  if (!c.f2.empty()) p.f2 = parse_f(c.f2, c.beta);
  if (!c.g1.empty()) p.g1 = CMKernel::parse(c.g1);
  if (!c.g2.empty()) p.g2 = CMKernel::parse(c.g2);
  p.direction = parse_direction(c.direction);
  p.tol.det_rel = c.tol_det;
  p.grid.points = c.grid_points;
  p.validate();
  return p;
}

std::filesystem::path resolve_out(const std::string& out) {
  std::filesystem::path p(out);
  if (p.is_relative())
    if (const char* dir = std::getenv("MONOMETRIC_OUT_DIR"); dir && *dir)
      p = std::filesystem::path(dir) / p;
  return p;
}

// Routes records to stdout or to <prefix>.jsonl / <prefix>.csv.
class RecordWriter {
 public:
  RecordWriter(const std::string& out, const std::string& format)
      : json_(format != "csv"), csv_(format != "json") {
    if (out.empty()) {
      if (json_ && csv_) throw ValidationError("--format both needs --out");
      stream_json_ = stream_csv_ = &std::cout;
    } else {
      const auto prefix = resolve_out(out);
      if (json_) stream_json_ = open(prefix.string() + ".jsonl", json_file_);
      if (csv_) stream_csv_ = open(prefix.string() + ".csv", csv_file_);
    }
    if (csv_) *stream_csv_ << kCsvHeader << '\n';
  }

  bool to_stdout() const { return !json_file_.is_open() && !csv_file_.is_open(); }

  void write(const InequalityReport& r) {
    if (json_) *stream_json_ << to_json(r).dump() << '\n';
    if (csv_) *stream_csv_ << csv_row(r) << '\n';
  }

 private:
  static std::ostream* open(const std::string& path, std::ofstream& f) {
    f.open(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot open output file " + path);
    return &f;
  }

  bool json_, csv_;
  std::ofstream json_file_, csv_file_;
  std::ostream* stream_json_ = nullptr;
  std::ostream* stream_csv_ = nullptr;
};

std::vector<int> parse_int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-', 1);
    try {
      if (dash == std::string::npos) {
        out.push_back(std::stoi(item));
      } else {
        const int lo = std::stoi(item.substr(0, dash)), hi = std::stoi(item.substr(dash + 1));
        if (hi < lo) throw ValidationError(std::string(what) + ": empty range " + item);
        for (int v = lo; v <= hi; ++v) out.push_back(v);
      }
    } catch (const std::logic_error&) {
      throw ValidationError(std::string(what) + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw ValidationError(std::string(what) + ": empty list");
  return out;
}

int cmd_catalog() {
  std::cout << "functions (normalized symmetric operator monotone, f(1) = 1):\n";
  std::cout << "  sld          f(x) = (1+x)/2                      f(0) = 0.5   regular\n";
  std::cout << "  wy           f(x) = (sqrt(x)+1)^2/4              f(0) = 0.25  regular\n";
  std::cout << "  wyd:<beta>   f(x) = beta(1-beta)(x-1)^2/((x^beta-1)(x^(1-beta)-1))\n"
               "               beta in [-1,2]; beta in {0,1} is the km limit;\n"
               "               f(0) = beta(1-beta) for beta in (0,1) (regular), else 0 (non-regular)\n";
  std::cout << "  km           f(x) = (x-1)/ln x                   f(0) = 0     non-regular\n";
  std::cout << "catalog members:\n";
  for (const auto& f : function_catalog())
    std::cout << "  " << f.to_string() << "  f(0) = " << format_g17(f_zero(f)) << "  "
              << (is_regular(f) ? "regular" : "non-regular") << '\n';
  std::cout << "kernels:\n"
               "  cl        (x+y)/2\n"
               "  s:<f>     f(0)(x+y)^2/(2 m_f(x,y))\n"
               "  as:<f>    f(0)(x-y)^2/(2 m_f(x,y))\n"
               "  inv:<f>   1/m_f(x,y)\n";
  std::cout << "checks:\n"
               "  hierarchy    det Cov >= det qCov^s_f >= det qCov^as_f\n"
               "  main         det G1 >= det G2 + det(G1-G2) + R  for kernels g1 >= g2\n"
               "  cross        det qCov^as_f1 >= det qCov^s_f2 (as-geq-s) or the reverse (s-geq-as)\n"
               "  robertson    det Cov >= det[-(i/2) Tr(D[A_h,A_j])]\n"
               "  schrodinger  robertson with N = 2\n";
  return kExitPass;
}

int cmd_compute(const std::string& instance_path, const CommonFlags& flags) {
  const CheckParams params = make_params(flags);
  std::ifstream in(instance_path, std::ios::binary);
  if (!in) throw ValidationError("cannot open instance file " + instance_path);
  const Instance inst = parse_instance(in);
  const auto reports = run_checks(params, inst);

  RecordWriter writer(flags.out, flags.format);
  bool fail = false, hyp = false;
  for (const auto& r : reports) {
    writer.write(r);
    fail = fail || r.verdict == Verdict::Fail;
    hyp = hyp || r.verdict == Verdict::HypothesisNotMet;
  }
  return fail ? kExitFail : hyp ? kExitHypothesis : kExitPass;
}

int cmd_sweep(SweepConfig cfg, const CommonFlags& flags) {
  cfg.params = make_params(flags);
  cfg.validate();
  RecordWriter writer(flags.out, flags.format);
  const SweepSummary s = run_sweep(cfg, [&](const InequalityReport& r) { writer.write(r); });

  std::ostream& os = writer.to_stdout() ? std::cerr : std::cout;
  os << "records " << s.records << "  pass " << s.pass << "  fail " << s.fail
     << "  hypothesis_not_met " << s.hypothesis_not_met << "  warned " << s.warnings << '\n';
  if (cfg.params.check == CheckName::Main || cfg.params.check == CheckName::Hierarchy ||
      cfg.params.check == CheckName::Cross)
    os << "printed-remainder variant violated in " << s.printed_remainder_violations << " records\n";
  if (s.min_margin_seed)
    os << "min margin " << format_g17(s.min_margin) << " (relative "
       << format_g17(s.min_relative_margin) << ") at seed " << *s.min_margin_seed << " ["
       << s.min_margin_check << "]\n";
  return s.fail == 0 ? kExitPass : kExitFail;
}

int cmd_sample(int n, int N, std::uint64_t seed, double min_gap, const std::string& out) {
  if (n < 2 || N < 1) throw ValidationError("sample needs n >= 2 and N >= 1");
  const Instance inst = sample_instance(n, N, seed, min_gap);
  const std::string text = instance_to_json(inst).dump(1) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(resolve_out(out), std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot open output file " + out);
    f << text;
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monotone-metric covariance matrices and determinant uncertainty checks"};
  app.require_subcommand(1);

  auto* catalog = app.add_subcommand("catalog", "list functions, kernels and checks");

  CommonFlags compute_flags;
  std::string instance_path;
  auto* compute = app.add_subcommand("compute", "run a check on an instance file");
  compute->add_option("instance", instance_path, "instance JSON file")->required();
  add_common(*compute, compute_flags);

  CommonFlags sweep_flags;
  SweepConfig cfg;
  std::string dims = "3", counts = "2";
  auto* sweep = app.add_subcommand("sweep", "run a check over seeded random instances");
  add_common(*sweep, sweep_flags);
  sweep->add_option("--n", dims, "dimension(s), e.g. 3, 2-4 or 2,3,6")->capture_default_str();
  sweep->add_option("--N", counts, "observable count(s), same syntax")->capture_default_str();
  sweep->add_option("--trials", cfg.trials, "number of instances")->capture_default_str();
  sweep->add_option("--seed", cfg.seed, "base seed; trial t uses seed + t")->capture_default_str();
  sweep->add_option("--min-gap", cfg.min_gap, "state sampler floor")->capture_default_str();

  int sample_n = 2, sample_N = 2;
  std::uint64_t sample_seed = 1;
  double sample_gap = 0.01;
  std::string sample_out;
  auto* sample = app.add_subcommand("sample", "write the instance a sweep uses for a seed");
  sample->add_option("--n", sample_n, "dimension")->capture_default_str();
  sample->add_option("--N", sample_N, "observable count")->capture_default_str();
  sample->add_option("--seed", sample_seed, "instance seed")->capture_default_str();
  sample->add_option("--min-gap", sample_gap, "state sampler floor")->capture_default_str();
  sample->add_option("--out", sample_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*catalog) return cmd_catalog();
    if (*compute) return cmd_compute(instance_path, compute_flags);
    if (*sweep) {
      cfg.dims = parse_int_list(dims, "--n");
      cfg.counts = parse_int_list(counts, "--N");
      return cmd_sweep(cfg, sweep_flags);
    }
    if (*sample) return cmd_sample(sample_n, sample_N, sample_seed, sample_gap, sample_out);
  } catch (const InternalConsistencyError& e) {
    std::cerr << "internal consistency error: " << e.what() << '\n';
    return kExitFail;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
