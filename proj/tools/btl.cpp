// btl: verify oracles, run experiments, compare schemes and dump grids.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "btl/error.hpp"
#include "btl/experiments/config.hpp"
#include "btl/experiments/experiment.hpp"
#include "btl/experiments/oracles.hpp"
#include "btl/experiments/run.hpp"

namespace fs = std::filesystem;
using namespace btl;
using namespace btl::xp;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kNumerical = 3 };

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> noise;
  std::optional<int> adam_steps;
  std::optional<int> lbfgs_steps;
  std::optional<std::size_t> points;
  std::optional<int> threads;

  void attach(CLI::App& app) {
    app.add_option("--seed", seed, "Run seed");
    app.add_option("--noise", noise, "Relative noise level on data fields");
    app.add_option("--adam-steps", adam_steps, "Adam steps");
    app.add_option("--lbfgs-steps", lbfgs_steps, "Maximum L-BFGS iterations");
    app.add_option("--points", points, "Number of collocation points");
    app.add_option("--threads", threads, "Worker threads for loss evaluation");
  }

  void apply(ExperimentConfig& c) const {
    if (seed) c.seed = *seed;
    if (noise) c.noise = *noise;
    if (adam_steps) c.optimizer.adam_steps = *adam_steps;
    if (lbfgs_steps) c.optimizer.lbfgs_steps = *lbfgs_steps;
    if (points) c.points = *points;
    if (threads) c.threads = *threads;
    c.validate();
  }
};

fs::path default_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("BTL_OUT_DIR"); env && *env) return env;
  return "runs";
}

std::string num(double v, const char* f = "%.6g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void print_checks(const std::vector<CheckResult>& checks, std::vector<std::string>& failed) {
  for (const CheckResult& c : checks) {
    std::printf("%-48s %12.3e  < %-8.1e %s\n", c.name.c_str(), c.value, c.tolerance,
                c.pass ? "ok" : "FAIL");
    if (!c.pass) failed.push_back(c.name);
  }
}

int cmd_verify(const std::string& kink_phase, int resolution, int networks,
               const std::string& configs) {
  std::vector<std::string> failed;
  std::printf("%-48s %12s    %-8s\n", "check", "max error", "tolerance");
  print_checks(solution_residual_checks(kink_phase == "printed" ? 1.0 : 2.0, resolution), failed);
  print_checks(miura_identity_checks(), failed);
  print_checks(autodiff_checks(networks, 20, 1), failed);
  if (!configs.empty()) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(configs)) {
      if (entry.path().extension() == ".cfg") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<CheckResult> wiring;
    for (const fs::path& f : files) wiring.push_back(wiring_check(load_config(f)));
    print_checks(wiring, failed);
  }
  if (failed.empty()) {
    std::printf("all checks passed\n");
    return kOk;
  }
  std::fprintf(stderr, "failed checks:\n");
  for (const auto& name : failed) std::fprintf(stderr, "  %s\n", name.c_str());
  return kVerifyFailed;
}

void print_report(const TrainReport& r) {
  std::printf("%s (study %s, scheme %s, case %c, seed %llu, noise %s)\n", r.name.c_str(),
              r.study.c_str(), r.scheme.c_str(), r.case_label,
              static_cast<unsigned long long>(r.seed), num(r.noise).c_str());
  std::printf("%-12s %-16s %-10s %-12s\n", "coefficient", "learned", "exact", "error");
  for (const CoefficientReport& c : r.coefficients) {
    if (!c.free) continue;
    std::printf("%-12s %-16s %-10s %-12s\n", c.name.c_str(), num(c.learned, "%.8f").c_str(),
                num(c.exact).c_str(), num(c.error, "%.3e").c_str());
  }
  if (r.bd) {
    std::printf("%-12s %-16s %-10s %-12s\n", "b*d", num(*r.bd, "%.8f").c_str(), "4",
                num(*r.bd_error, "%.3e").c_str());
  }
  std::printf("loss TL = %.4e", r.loss_total);
  for (const NamedValue& p : r.loss_parts) std::printf("  TL_%s = %.4e", p.name.c_str(), p.value);
  std::printf("\n");
  for (const NamedValue& f : r.field_errors) {
    std::printf("relative L2 error of %s: %.4e\n", f.name.c_str(), f.value);
  }
  std::printf("adam steps %d, lbfgs iterations %d (%s), %.2f s\n", r.adam_steps,
              r.lbfgs_iterations, r.lbfgs_stop.empty() ? "skipped" : r.lbfgs_stop.c_str(),
              r.wall_seconds);
}

int cmd_run(const std::string& config_path, const Overrides& ov, const std::string& out_flag,
            const std::string& resume, bool quiet) {
  ExperimentConfig cfg = load_config(config_path);
  ov.apply(cfg);
  RunOptions opts;
  opts.out_dir = default_out_dir(out_flag) / (cfg.name + "-seed" + std::to_string(cfg.seed));
  opts.keep_trace = false;
  if (!quiet) opts.log = [](const std::string& line) { std::fprintf(stderr, "%s\n", line.c_str()); };
  if (!resume.empty()) {
    std::ifstream in(resume);
    if (!in) throw ConfigError("cannot open parameter checkpoint " + resume);
    opts.initial_params = read_params(in);
  }
  try {
    const RunResult r = run_experiment(cfg, opts);
    print_report(r.report);
    std::printf("artifacts: %s\n", opts.out_dir->string().c_str());
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "%s\npartial artifacts: %s\n", e.what(), opts.out_dir->string().c_str());
    return kNumerical;
  }
  return kOk;
}

int cmd_compare(const std::string& a_path, const std::string& b_path, int n_seeds,
                const Overrides& ov, const std::string& out_flag) {
  if (n_seeds < 1) {
    std::fprintf(stderr, "--seeds must be at least 1\n");
    return kUsage;
  }
  ExperimentConfig a = load_config(a_path), b = load_config(b_path);
  ov.apply(a);
  ov.apply(b);
  const std::uint64_t base = ov.seed.value_or(1);
  std::vector<std::uint64_t> seeds;
  for (int k = 0; k < n_seeds; ++k) seeds.push_back(base + static_cast<std::uint64_t>(k));
  const SchemeComparison r = compare_schemes(
      a, b, seeds, [](const std::string& line) { std::fprintf(stderr, "%s\n", line.c_str()); });
  std::printf("%-8s %-24s %-24s\n", "seed", a.name.c_str(), b.name.c_str());
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    std::printf("%-8llu %-24s %-24s\n", static_cast<unsigned long long>(seeds[k]),
                num(r.error_a[k], "%.4e").c_str(), num(r.error_b[k], "%.4e").c_str());
  }
  std::printf("win fraction of %s: %.3f\n", a.name.c_str(), r.win_fraction_a);

  const fs::path dir = default_out_dir(out_flag);
  fs::create_directories(dir);
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["a"] = a.name;
  j["b"] = b.name;
  j["seeds"] = r.seeds;
  j["max_coefficient_error_a"] = r.error_a;
  j["max_coefficient_error_b"] = r.error_b;
  j["win_fraction_a"] = r.win_fraction_a;
  const fs::path out = dir / ("compare-" + a.name + "-vs-" + b.name + ".json");
  std::ofstream(out) << j.dump(2) << "\n";
  std::printf("written: %s\n", out.string().c_str());
  return kOk;
}

int cmd_dump_grid(const std::string& config_path, const Overrides& ov, const std::string& params,
                  const std::string& out_flag) {
  ExperimentConfig cfg = load_config(config_path);
  ov.apply(cfg);
  const Experiment e(cfg);
  std::optional<std::vector<double>> p;
  if (!params.empty()) {
    std::ifstream in(params);
    if (!in) throw ConfigError("cannot open parameter checkpoint " + params);
    p = read_params(in);
    if (p->size() != e.param_count()) {
      throw ConfigError("checkpoint does not match the configured network");
    }
  }
  const fs::path dir = default_out_dir(out_flag);
  fs::create_directories(dir);
  const fs::path out = dir / (cfg.name + "-grid.csv");
  std::ofstream file(out);
  write_grid(e, p ? &*p : nullptr, file);
  std::printf("written: %s\n", out.string().c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Backlund-transform-enhanced PDE and transform discovery"};
  app.require_subcommand(1);

  std::string kink_phase = "corrected", configs_dir;
  int resolution = 101, networks = 20;
  auto* verify = app.add_subcommand("verify", "Run solution, Miura and autodiff oracles");
  verify->add_option("--kink-phase", kink_phase, "Kink phase: corrected (kx+2k^3t) or printed (kx+k^3t)")
      ->check(CLI::IsMember({"corrected", "printed"}));
  verify->add_option("--resolution", resolution, "Grid points per axis")->check(CLI::Range(2, 2001));
  verify->add_option("--networks", networks, "Random networks in the autodiff check")
      ->check(CLI::Range(1, 1000));
  verify->add_option("--configs", configs_dir, "Also run exact substitution for every *.cfg here")
      ->check(CLI::ExistingDirectory);

  Overrides run_ov, cmp_ov, grid_ov;
  std::string run_config, out_dir, resume;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Train one experiment");
  run->add_option("--config", run_config, "Experiment config")->required();
  run->add_option("--out-dir", out_dir, "Artifact root (default $BTL_OUT_DIR or ./runs)");
  run->add_option("--resume", resume, "Start from a params.txt checkpoint");
  run->add_flag("--quiet", quiet, "No progress lines");
  run_ov.attach(*run);

  std::string cfg_a, cfg_b;
  int n_seeds = 3;
  auto* compare = app.add_subcommand("compare", "Compare two schemes over seeds");
  compare->add_option("config_a", cfg_a, "First config")->required();
  compare->add_option("config_b", cfg_b, "Second config")->required();
  compare->add_option("--seeds", n_seeds, "Number of seeds");
  compare->add_option("--out-dir", out_dir, "Output root (default $BTL_OUT_DIR or ./runs)");
  cmp_ov.attach(*compare);

  std::string grid_config, params;
  auto* grid = app.add_subcommand("dump-grid", "Write the report grid as CSV");
  grid->add_option("--config", grid_config, "Experiment config")->required();
  grid->add_option("--params", params, "Trained params.txt; exact columns only when omitted");
  grid->add_option("--out-dir", out_dir, "Output root (default $BTL_OUT_DIR or ./runs)");
  grid_ov.attach(*grid);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*verify) return cmd_verify(kink_phase, resolution, networks, configs_dir);
    if (*run) return cmd_run(run_config, run_ov, out_dir, resume, quiet);
    if (*compare) return cmd_compare(cfg_a, cfg_b, n_seeds, cmp_ov, out_dir);
    if (*grid) return cmd_dump_grid(grid_config, grid_ov, params, out_dir);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kUsage;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kUsage;
  } catch (const NonFiniteError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumerical;
  }
  return kUsage;
}
