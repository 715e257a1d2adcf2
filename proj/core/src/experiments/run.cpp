#include "btl/experiments/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "btl/optim/adam.hpp"
#include "btl/optim/lbfgs.hpp"
#include "btl/solutions/closed_form.hpp"

namespace btl::xp {

namespace {

constexpr std::uint64_t kSeedBatches = 2;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<std::string> coefficient_names(const Experiment& e) {
  std::vector<std::string> out;
  for (const FreeSlot& s : e.free_slots()) out.push_back(s.name);
  return out;
}

void write_trace_header(const std::vector<std::string>& parts, const std::vector<std::string>& coefs,
                        std::ostream& out) {
  out << "phase,iteration,total";
  for (const auto& p : parts) out << ",TL_" << p;
  for (const auto& c : coefs) out << "," << c;
  out << "\n";
}

void write_trace_row(const TraceRow& row, std::ostream& out) {
  out << row.phase << "," << row.iteration << "," << fmt(row.total);
  for (double p : row.parts) out << "," << fmt(p);
  for (double c : row.coefficients) out << "," << fmt(c);
  out << "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

/// Mutable state shared by the training phases and the artifact writers.
class Recorder {
 public:
  Recorder(const Experiment& e, const RunOptions& o) : exp_(e), opts_(o) {
    if (opts_.out_dir) {
      trace_.open(*opts_.out_dir / "trace.csv");
      if (!trace_) throw Error("cannot write trace.csv");
      write_trace_header(e.problem().parts, coefficient_names(e), trace_);
    }
  }

  void row(TrainReport& report, const char* phase, int iteration, const LossValue& value,
           std::span<const double> params) {
    TraceRow r{phase, iteration, value.total, value.parts, {}};
    for (const FreeSlot& s : exp_.free_slots()) r.coefficients.push_back(params[s.slot]);
    if (trace_.is_open()) write_trace_row(r, trace_);
    if (opts_.keep_trace) report.trace.push_back(std::move(r));
  }

  void log(const std::string& line) const {
    if (opts_.log) opts_.log(line);
  }

  void flush() {
    if (trace_.is_open()) trace_.flush();
  }

 private:
  const Experiment& exp_;
  const RunOptions& opts_;
  std::ofstream trace_;
};

void fill_summary(const Experiment& e, std::span<const double> params, const LossValue& value,
                  TrainReport& r) {
  r.coefficients.clear();
  const res::EquationParams learned = e.coefficients(params);
  for (const res::Coefficient& c : learned.all()) {
    const double exact = c.exact.value_or(c.value);
    r.coefficients.push_back({c.name, c.free, c.value, exact, std::abs(c.value - exact)});
  }
  if (e.problem().report_bd) {
    r.bd = learned.value("b") * learned.value("d");
    r.bd_error = std::abs(*r.bd - 4.0);
  }
  r.loss_total = value.total;
  r.loss_parts.clear();
  r.loss_terms.clear();
  for (std::size_t k = 0; k < value.parts.size(); ++k) {
    r.loss_parts.push_back({e.problem().parts[k], value.parts[k]});
  }
  for (std::size_t k = 0; k < value.terms.size(); ++k) {
    r.loss_terms.push_back({e.problem().terms[k].name, value.terms[k]});
  }
  r.final_data_loss = e.data_loss(value);
}

void write_manifest(const std::filesystem::path& dir, const TrainReport& r, bool complete) {
  nlohmann::ordered_json m;
  m["schema_version"] = kReportSchemaVersion;
  m["name"] = r.name;
  m["config_hash"] = hex64(r.config_hash);
  m["seed"] = r.seed;
  m["status"] = complete ? r.status : std::string("diverged");
  nlohmann::ordered_json a;
  a["config"] = "config.cfg";
  a["samples_csv"] = "samples.csv";
  a["samples_json"] = "samples.json";
  a["trace"] = "trace.csv";
  a["report"] = "report.json";
  if (complete) {
    a["params"] = "params.txt";
    a["grid"] = "grid.csv";
  }
  m["artifacts"] = a;
  write_text(dir / "manifest.json", m.dump(2) + "\n");
}

}  // namespace

double TrainReport::max_coefficient_error() const {
  double worst = 0.0;
  for (const CoefficientReport& c : coefficients) {
    if (c.free) worst = std::max(worst, c.error);
  }
  return worst;
}

double relative_l2_error(std::span<const double> pred, std::span<const double> exact) {
  if (pred.size() != exact.size()) throw Error("relative_l2_error: grids differ in shape");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - exact[i];
    num += d * d;
    den += exact[i] * exact[i];
  }
  if (den == 0.0) throw Error("relative_l2_error: exact grid has zero norm");
  return std::sqrt(num) / std::sqrt(den);
}

std::vector<ad::Point> report_grid(const sol::Region& region, int resolution) {
  if (resolution < 2) throw Error("report grid needs at least 2 points per axis");
  std::vector<ad::Point> out;
  out.reserve(static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution));
  const double dx = (region.x_max - region.x_min) / (resolution - 1);
  const double dt = (region.t_max - region.t_min) / (resolution - 1);
  for (int j = 0; j < resolution; ++j) {
    const double t = j + 1 == resolution ? region.t_max : region.t_min + j * dt;
    for (int i = 0; i < resolution; ++i) {
      const double x = i + 1 == resolution ? region.x_max : region.x_min + i * dx;
      out.push_back({x, t});
    }
  }
  return out;
}

namespace {

struct ExactGrid {
  std::vector<double> re, im;
};

ExactGrid exact_on(const sol::SolutionSpec& spec, std::span<const ad::Point> points) {
  const sol::SolutionField field(spec);
  ad::Workspace ws(field.graph());
  ExactGrid g;
  for (const ad::Point& p : points) {
    const auto [re, im] = field.jets(p, ws);
    g.re.push_back(re[0]);
    if (field.complex()) g.im.push_back(im[0]);
  }
  return g;
}

}  // namespace

std::vector<NamedValue> field_errors(const Experiment& e, std::span<const double> params) {
  const auto grid = report_grid(e.config().region, e.config().grid);
  const auto pred = e.predict(params, grid);
  std::vector<NamedValue> out;
  for (std::size_t f = 0; f < e.problem().fields.size(); ++f) {
    const FieldDef& def = e.problem().fields[f];
    if (!def.closed_form) continue;
    const ExactGrid exact = exact_on(*def.closed_form, grid);
    if (def.complex) {
      out.push_back({def.name + "_re", relative_l2_error(pred[f].re, exact.re)});
      out.push_back({def.name + "_im", relative_l2_error(pred[f].im, exact.im)});
    } else {
      out.push_back({def.name, relative_l2_error(pred[f].re, exact.re)});
    }
  }
  return out;
}

void write_grid(const Experiment& e, const std::vector<double>* params, std::ostream& out) {
  const auto grid = report_grid(e.config().region, e.config().grid);
  std::vector<FieldValues> pred;
  if (params) pred = e.predict(*params, grid);
  const auto& fields = e.problem().fields;
  std::vector<ExactGrid> exact(fields.size());
  out << "x,t";
  for (std::size_t f = 0; f < fields.size(); ++f) {
    const FieldDef& def = fields[f];
    if (def.closed_form) exact[f] = exact_on(*def.closed_form, grid);
    if (!def.closed_form && !params) continue;
    for (int c = 0; c < (def.complex ? 2 : 1); ++c) {
      const std::string name = def.complex ? def.name + (c ? "_im" : "_re") : def.name;
      if (def.closed_form) out << "," << name << "_exact";
      if (params) out << "," << name << "_pred";
      if (def.closed_form && params) out << "," << name << "_abs_error";
    }
  }
  out << "\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << fmt(grid[i].x) << "," << fmt(grid[i].t);
    for (std::size_t f = 0; f < fields.size(); ++f) {
      const FieldDef& def = fields[f];
      if (!def.closed_form && !params) continue;
      for (int c = 0; c < (def.complex ? 2 : 1); ++c) {
        const double ex = def.closed_form ? (c ? exact[f].im[i] : exact[f].re[i]) : 0.0;
        const double pr = params ? (c ? pred[f].im[i] : pred[f].re[i]) : 0.0;
        if (def.closed_form) out << "," << fmt(ex);
        if (params) out << "," << fmt(pr);
        if (def.closed_form && params) out << "," << fmt(std::abs(pr - ex));
      }
    }
    out << "\n";
  }
}

std::string report_json(const TrainReport& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["name"] = r.name;
  j["study"] = r.study;
  j["scheme"] = r.scheme;
  j["fold"] = r.fold;
  j["case"] = std::string(1, r.case_label);
  j["seed"] = r.seed;
  j["config_hash"] = hex64(r.config_hash);
  j["noise"] = r.noise;
  j["points"] = r.points;
  j["status"] = r.status;
  auto coefs = nlohmann::ordered_json::array();
  for (const CoefficientReport& c : r.coefficients) {
    coefs.push_back({{"name", c.name},
                     {"free", c.free},
                     {"learned", c.learned},
                     {"exact", c.exact},
                     {"error", c.error}});
  }
  j["coefficients"] = coefs;
  j["max_coefficient_error"] = r.max_coefficient_error();
  if (r.bd) j["derived"] = {{"b*d", *r.bd}, {"b*d_error", *r.bd_error}};
  nlohmann::ordered_json fe = nlohmann::ordered_json::object();
  for (const NamedValue& v : r.field_errors) fe[v.name] = v.value;
  j["field_errors"] = fe;
  nlohmann::ordered_json parts = nlohmann::ordered_json::object();
  for (const NamedValue& v : r.loss_parts) parts[v.name] = v.value;
  nlohmann::ordered_json terms = nlohmann::ordered_json::object();
  for (const NamedValue& v : r.loss_terms) terms[v.name] = v.value;
  j["loss"] = {{"total", r.loss_total},
               {"parts", parts},
               {"terms", terms},
               {"initial_data", r.initial_data_loss},
               {"final_data", r.final_data_loss}};
  j["optimizer"] = {{"adam_steps", r.adam_steps},
                    {"lbfgs_iterations", r.lbfgs_iterations},
                    {"lbfgs_evaluations", r.lbfgs_evaluations},
                    {"lbfgs_stop", r.lbfgs_stop}};
  j["timing"] = {{"wall_seconds", r.wall_seconds}};
  return j.dump(2) + "\n";
}

void write_trace(const TrainReport& report, const std::vector<std::string>& part_names,
                 const std::vector<std::string>& coefficient_names, std::ostream& out) {
  write_trace_header(part_names, coefficient_names, out);
  for (const TraceRow& row : report.trace) write_trace_row(row, out);
}

void write_params(std::span<const double> params, std::ostream& out) {
  out << "btl-params " << params.size() << "\n";
  for (double v : params) out << fmt(v) << "\n";
}

std::vector<double> read_params(std::istream& in) {
  std::string magic;
  std::size_t n = 0;
  if (!(in >> magic >> n) || magic != "btl-params") throw Error("not a parameter checkpoint");
  std::vector<double> out(n);
  for (double& v : out) {
    if (!(in >> v)) throw Error("truncated parameter checkpoint");
  }
  return out;
}

RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const Experiment exp(config);
  RunResult result;
  TrainReport& report = result.report;
  report.name = config.name;
  report.study = std::string(to_string(config.study));
  report.scheme = std::string(to_string(config.scheme.tag));
  report.fold = config.scheme.fold;
  report.case_label = config.case_label;
  report.seed = config.seed;
  report.config_hash = config_hash(config);
  report.noise = config.noise;
  report.points = config.points;

  std::vector<double>& params = result.params;
  params = options.initial_params ? *options.initial_params : exp.initial_params();
  if (params.size() != exp.param_count()) {
    throw ConfigError("initial parameters have " + std::to_string(params.size()) +
                      " entries, the experiment needs " + std::to_string(exp.param_count()));
  }

  if (options.out_dir) {
    std::filesystem::create_directories(*options.out_dir);
    write_text(*options.out_dir / "config.cfg", serialize_config(config));
    std::ofstream csv(*options.out_dir / "samples.csv");
    exp.samples().write_csv(csv);
    std::ofstream js(*options.out_dir / "samples.json");
    exp.samples().write_json(js);
  }
  Recorder rec(exp, options);

  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  const auto finish = [&](bool complete) {
    report.wall_seconds = elapsed();
    rec.flush();
    if (!options.out_dir) return;
    write_text(*options.out_dir / "report.json", report_json(report));
    if (complete) {
      std::ofstream p(*options.out_dir / "params.txt");
      write_params(params, p);
      std::ofstream g(*options.out_dir / "grid.csv");
      write_grid(exp, &params, g);
    }
    write_manifest(*options.out_dir, report, complete);
  };

  std::vector<double> grad(params.size());
  LossValue value;
  try {
    value = exp.loss(params);
    report.initial_data_loss = exp.data_loss(value);

    const OptimizerSchedule& sched = config.optimizer;
    opt::AdamState adam(params.size(), {sched.adam_lr, 0.9, 0.999, 1e-8});
    const std::size_t n = config.points;
    const bool minibatch = sched.batch_size > 0 && sched.batch_size < n;
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::mt19937_64 rng(sub_seed(config.seed, kSeedBatches));
    std::size_t cursor = n;
    for (int step = 0; step < sched.adam_steps; ++step) {
      if (minibatch) {
        if (cursor + sched.batch_size > n) {
          std::shuffle(order.begin(), order.end(), rng);
          cursor = 0;
        }
        value = exp.loss_on(params, std::span(order).subspan(cursor, sched.batch_size), grad);
        cursor += sched.batch_size;
      } else {
        value = exp.loss(params, grad);
      }
      if (!std::isfinite(value.total)) throw NonFiniteError("non-finite loss in Adam", -1);
      rec.row(report, "adam", step, value, params);
      if (step < sched.coefficient_warmup) {
        for (const FreeSlot& s : exp.free_slots()) grad[s.slot] = 0.0;
      }
      opt::adam_step(params, grad, adam);
      report.adam_steps = step + 1;
      if ((step + 1) % 500 == 0) {
        rec.log("adam " + std::to_string(step + 1) + " loss " + fmt(value.total));
      }
    }

    if (sched.lbfgs_steps > 0) {
      opt::LbfgsOptions lo;
      lo.memory = sched.lbfgs_memory;
      lo.max_iterations = sched.lbfgs_steps;
      lo.rel_tolerance = sched.lbfgs_rel_tolerance;
      lo.abs_tolerance = sched.lbfgs_abs_tolerance;
      lo.grad_tolerance = sched.lbfgs_grad_tolerance;
      LossValue last;
      const opt::LossFn fn = [&](std::span<const double> x, std::span<double> g) {
        try {
          last = exp.loss(x, g);
        } catch (const NonFiniteError&) {
          std::fill(g.begin(), g.end(), 0.0);
          return std::numeric_limits<double>::infinity();
        }
        return last.total;
      };
      const auto callback = [&](const opt::LbfgsIteration& it, std::span<const double> x) {
        rec.row(report, "lbfgs", it.iteration, last, x);
        if (it.iteration % 500 == 0) {
          rec.log("lbfgs " + std::to_string(it.iteration) + " loss " + fmt(it.loss));
        }
        return true;
      };
      const opt::LbfgsResult r = opt::lbfgs_minimize(fn, params, lo, callback);
      params = r.x;
      report.lbfgs_iterations = r.iterations;
      report.lbfgs_evaluations = r.evaluations;
      report.lbfgs_stop = std::string(opt::to_string(r.stop));
    }

    value = exp.loss(params);
    if (!std::isfinite(value.total)) throw NonFiniteError("non-finite final loss", -1);
  } catch (const NonFiniteError& e) {
    report.status = "diverged";
    fill_summary(exp, params, value, report);
    finish(false);
    throw DivergenceError(std::string("training diverged: ") + e.what(), report);
  }

  fill_summary(exp, params, value, report);
  report.field_errors = field_errors(exp, params);
  finish(true);
  return result;
}

double win_fraction(std::span<const double> error_a, std::span<const double> error_b) {
  if (error_a.size() != error_b.size() || error_a.empty()) {
    throw Error("win_fraction needs equal, non-empty error lists");
  }
  double wins = 0.0;
  for (std::size_t i = 0; i < error_a.size(); ++i) {
    if (error_a[i] < error_b[i]) wins += 1.0;
    else if (error_a[i] == error_b[i]) wins += 0.5;
  }
  return wins / static_cast<double>(error_a.size());
}

SchemeComparison compare_schemes(const ExperimentConfig& a, const ExperimentConfig& b,
                                 std::span<const std::uint64_t> seeds,
                                 const std::function<void(const std::string&)>& log) {
  if (seeds.empty()) throw ConfigError("compare_schemes needs at least one seed");
  const Problem pa = make_problem(a), pb = make_problem(b);
  const auto targets = [](const Problem& p) {
    std::vector<std::pair<std::string, double>> out;
    for (const res::Coefficient& c : p.coefficients.all()) {
      if (c.free) out.emplace_back(c.name, c.exact.value_or(c.value));
    }
    return out;
  };
  if (targets(pa) != targets(pb)) {
    throw ConfigError("configs " + a.name + " and " + b.name +
                      " do not target the same free coefficients");
  }
  SchemeComparison out;
  RunOptions quiet;
  quiet.keep_trace = false;
  for (std::uint64_t seed : seeds) {
    ExperimentConfig ca = a, cb = b;
    ca.seed = cb.seed = seed;
    const double ea = run_experiment(ca, quiet).report.max_coefficient_error();
    const double eb = run_experiment(cb, quiet).report.max_coefficient_error();
    if (log) log("seed " + std::to_string(seed) + ": " + a.name + " " + fmt(ea) + ", " + b.name + " " + fmt(eb));
    out.seeds.push_back(seed);
    out.error_a.push_back(ea);
    out.error_b.push_back(eb);
  }
  out.win_fraction_a = win_fraction(out.error_a, out.error_b);
  return out;
}

}  // namespace btl::xp
