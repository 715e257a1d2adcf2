#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "btl/error.hpp"
#include "btl/experiments/config.hpp"
#include "btl/experiments/experiment.hpp"
#include "btl/experiments/problem.hpp"
#include "btl/experiments/run.hpp"
#include "btl/residuals/residuals.hpp"

using namespace btl;
using namespace btl::xp;

namespace {

struct Variant {
  Study study;
  SchemeId scheme;
  char case_label;
};

std::vector<Variant> all_variants() {
  using enum Study;
  using enum SchemeTag;
  return {
      {SgAbt, {BtDiscovery, 0}, 'A'},
      {SgAbt, {BtDiscovery, 0}, 'B'},
      {ComplexMiura, {BtDiscovery, 0}, 'A'},
      {ComplexMiura, {BtDiscovery, 0}, 'B'},
      {RealMiura, {BtDiscovery, 0}, 'A'},
      {RealMiura, {BtDiscovery, 0}, 'B'},
      {FocusingMkdvViaMiura, {EquationViaBt, 0}, 'A'},
      {FocusingMkdvViaMiura, {EquationViaBt, 0}, 'B'},
      {DefocusingMkdvViaMiura, {EquationViaBt, 0}, 'A'},
      {DefocusingMkdvViaMiura, {EquationViaBt, 0}, 'B'},
      {BteMkdv, {BteExplicit, 1}, 'A'},
      {BteMkdv, {BteExplicit, 1}, 'B'},
      {BteMkdv, {PinnBaseline, 0}, 'A'},
      {BteMkdv, {PinnBaseline, 0}, 'B'},
      {BteSg, {BteImplicit, 1}, 'A'},
      {BteSg, {BteImplicit, 2}, 'A'},
      {BteSg, {PinnBaseline, 0}, 'A'},
  };
}

ExperimentConfig small(Variant v, std::size_t points = 200) {
  ExperimentConfig c = default_config(v.study, v.scheme, v.case_label);
  c.points = points;
  c.hidden_layers = 2;
  c.width = 8;
  c.optimizer.adam_steps = 20;
  c.optimizer.lbfgs_steps = 20;
  c.grid = 11;
  return c;
}

std::map<TermKind, int> count_kinds(const Problem& p) {
  std::map<TermKind, int> out;
  for (const LossTerm& t : p.terms) ++out[t.kind];
  return out;
}

/// Squared residual of one term from numeric jets, independent of the graph.
double numeric_term(const Experiment& e, const LossTerm& term, std::span<const double> params,
                    std::size_t i) {
  const auto jets = e.field_jets(params, i);
  const auto& fields = e.problem().fields;
  const res::EquationParams globals = e.coefficients(params);
  res::EquationParams bound;
  for (const res::Coefficient& c : globals.all()) {
    const auto it = term.constants.find(c.name);
    bound.add({c.name, it != term.constants.end() ? it->second : c.value, false, std::nullopt});
  }
  for (const auto& [name, value] : term.constants) {
    if (!bound.contains(name)) bound.add({name, value, false, std::nullopt});
  }
  const auto cj = [&](std::size_t f) {
    return ad::ComplexJet{ad::Jet::full(jets[f].first), ad::Jet::full(jets[f].second)};
  };
  switch (term.kind) {
    case TermKind::Data: {
      const sol::SampleField& s = e.samples().field(fields[term.field].name);
      const double re = jets[term.field].first[0] - s.re[i];
      const double im = s.complex ? jets[term.field].second[0] - s.im[i] : 0.0;
      return re * re + im * im;
    }
    case TermKind::Equation: {
      const auto [re, im] = res::pde_residual(term.pde, cj(term.field), bound);
      return re * re + im * im;
    }
    case TermKind::Transform: {
      if (term.transform == TransformKind::Abt) {
        const auto [rx, rt] = res::abt_residual(cj(term.field).re, cj(term.other).re, bound);
        const double r = term.component == 0 ? rx : rt;
        return r * r;
      }
      const auto kind = term.transform == TransformKind::MiuraComplex ? res::MiuraKind::Complex
                                                                      : res::MiuraKind::Real;
      const auto [re, im] = res::miura_residual(cj(term.field).re, cj(term.other), bound, kind);
      return re * re + im * im;
    }
  }
  return 0.0;
}

std::string strip_timing(const std::string& json) {
  const auto pos = json.find("\"timing\"");
  return pos == std::string::npos ? json : json.substr(0, pos);
}

}  // namespace

TEST(Problem, SgAbtCaseATermCounts) {
  const Problem p = make_problem(default_config(Study::SgAbt, {SchemeTag::BtDiscovery, 0}, 'A'));
  auto kinds = count_kinds(p);
  EXPECT_EQ(kinds[TermKind::Data], 1);
  EXPECT_EQ(kinds[TermKind::Equation], 2);
  EXPECT_EQ(kinds[TermKind::Transform], 2);
  EXPECT_EQ(p.coefficients.free_names(), (std::vector<std::string>{"a", "b", "c", "d"}));
  EXPECT_EQ(p.coefficients.value("h"), 0.0);
  EXPECT_EQ(p.coefficients.value("f"), 0.0);
  EXPECT_FALSE(p.coefficients.get("h").free);
  EXPECT_TRUE(p.report_bd);
}

TEST(Problem, PinnBaselineTermCounts) {
  const Problem p =
      make_problem(default_config(Study::BteMkdv, {SchemeTag::PinnBaseline, 0}, 'A'));
  auto kinds = count_kinds(p);
  EXPECT_EQ(kinds[TermKind::Data], 1);
  EXPECT_EQ(kinds[TermKind::Equation], 1);
  EXPECT_EQ(kinds[TermKind::Transform], 0);
  EXPECT_EQ(p.parts, (std::vector<std::string>{"u0", "F"}));
}

TEST(Problem, SchemeLossStructure) {
  {
    // The unknown field of a transform-driven discovery carries no data.
    const Problem p = make_problem(
        default_config(Study::DefocusingMkdvViaMiura, {SchemeTag::EquationViaBt, 0}, 'A'));
    EXPECT_FALSE(p.fields[p.field_index("u")].data);
    EXPECT_TRUE(p.fields[p.field_index("v")].data);
    auto kinds = count_kinds(p);
    EXPECT_EQ(kinds[TermKind::Data], 1);
    EXPECT_EQ(kinds[TermKind::Equation], 1);
    EXPECT_EQ(kinds[TermKind::Transform], 1);
  }
  {
    const Problem p =
        make_problem(default_config(Study::BteMkdv, {SchemeTag::BteExplicit, 1}, 'A'));
    auto kinds = count_kinds(p);
    EXPECT_EQ(kinds[TermKind::Data], 2);
    EXPECT_EQ(kinds[TermKind::Equation], 2);
    EXPECT_EQ(kinds[TermKind::Transform], 0);
    EXPECT_EQ(p.terms[1].part, "BT");
  }
  {
    const Problem p =
        make_problem(default_config(Study::BteSg, {SchemeTag::BteImplicit, 2}, 'A'));
    auto kinds = count_kinds(p);
    EXPECT_EQ(kinds[TermKind::Data], 1);
    EXPECT_EQ(kinds[TermKind::Equation], 3);
    EXPECT_EQ(kinds[TermKind::Transform], 4);
    EXPECT_EQ(p.fields.size(), 3u);
  }
  {
    const Problem p =
        make_problem(default_config(Study::ComplexMiura, {SchemeTag::BtDiscovery, 0}, 'B'));
    EXPECT_EQ(p.coefficients.free_names().size(), 4u);
    EXPECT_EQ(count_kinds(p)[TermKind::Data], 2);
  }
}

TEST(Problem, InconsistentConfigsAreRejected) {
  EXPECT_THROW(default_config(Study::BteMkdv, {SchemeTag::BteExplicit, 2}, 'A').validate(),
               ConfigError);
  EXPECT_THROW(default_config(Study::SgAbt, {SchemeTag::PinnBaseline, 0}, 'A').validate(),
               ConfigError);
  EXPECT_THROW(default_config(Study::BteSg, {SchemeTag::BteImplicit, 1}, 'B').validate(),
               ConfigError);
  auto c = default_config(Study::RealMiura, {SchemeTag::BtDiscovery, 0}, 'A');
  c.free = {"a", "h"};
  EXPECT_THROW(make_problem(c), ConfigError);
  c = default_config(Study::BteMkdv, {SchemeTag::BteExplicit, 1}, 'A');
  c.solution["lambda2"] = 0.1;
  EXPECT_THROW(make_problem(c), ConfigError);
}

TEST(Experiment, ExactSubstitutionDrivesEveryPartToZero) {
  for (const Variant& v : all_variants()) {
    const Experiment e(small(v, 150), FieldMode::ExactOracle);
    const LossValue value = e.loss(e.initial_params());
    SCOPED_TRACE(e.config().name);
    for (std::size_t k = 0; k < value.parts.size(); ++k) {
      EXPECT_LT(value.parts[k], 1e-10) << e.problem().parts[k];
    }
  }
}

TEST(Experiment, ExactSubstitutionDetectsWrongCoefficients) {
  const Experiment e(small({Study::RealMiura, {SchemeTag::BtDiscovery, 0}, 'A'}),
                     FieldMode::ExactOracle);
  auto params = e.initial_params();
  params[e.free_slots()[0].slot] += 0.1;
  EXPECT_GT(e.loss(params).parts[0], 1e-4);
}

TEST(Experiment, GraphResidualsMatchNumericResiduals) {
  for (const Variant& v : all_variants()) {
    const Experiment e(small(v, 40));
    auto params = e.initial_params();
    std::mt19937_64 rng(3);
    std::normal_distribution<double> jitter(0.0, 0.2);
    for (const FreeSlot& s : e.free_slots()) params[s.slot] += jitter(rng);
    SCOPED_TRACE(e.config().name);
    for (std::size_t i = 0; i < 40; i += 7) {
      const auto graph_terms = e.point_terms(params, i);
      for (std::size_t k = 0; k < graph_terms.size(); ++k) {
        const double ref = numeric_term(e, e.problem().terms[k], params, i);
        EXPECT_NEAR(graph_terms[k], ref, 1e-12 * std::max(1.0, std::abs(ref)))
            << e.problem().terms[k].name;
      }
    }
  }
}

TEST(Experiment, PartsSumToTotal) {
  for (const Variant& v : all_variants()) {
    const Experiment e(small(v, 100));
    const LossValue value = e.loss(e.initial_params());
    double parts = 0.0, terms = 0.0;
    for (double p : value.parts) parts += p;
    for (double t : value.terms) terms += t;
    EXPECT_NEAR(parts, value.total, 1e-12 * std::max(1.0, value.total));
    EXPECT_NEAR(terms, value.total, 1e-12 * std::max(1.0, value.total));
  }
}

TEST(Experiment, GradientMatchesFiniteDifferences) {
  for (const Variant& v : {Variant{Study::SgAbt, {SchemeTag::BtDiscovery, 0}, 'B'},
                           Variant{Study::ComplexMiura, {SchemeTag::BtDiscovery, 0}, 'B'},
                           Variant{Study::BteSg, {SchemeTag::BteImplicit, 2}, 'A'}}) {
    ExperimentConfig c = small(v, 30);
    c.hidden_layers = 2;
    c.width = 5;
    const Experiment e(c);
    auto params = e.initial_params();
    std::vector<double> grad(params.size());
    e.loss(params, grad);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> pick(0, params.size() - 1);
    std::vector<std::size_t> slots;
    for (const FreeSlot& s : e.free_slots()) slots.push_back(s.slot);
    for (int k = 0; k < 25; ++k) slots.push_back(pick(rng));
    for (std::size_t s : slots) {
      const double h = 1e-5 * std::max(1.0, std::abs(params[s]));
      auto p = params;
      p[s] = params[s] + h;
      const double fp = e.loss(p).total;
      p[s] = params[s] - h;
      const double fm = e.loss(p).total;
      p[s] = params[s] + 2 * h;
      const double fpp = e.loss(p).total;
      p[s] = params[s] - 2 * h;
      const double fmm = e.loss(p).total;
      const double fd = (8 * (fp - fm) - (fpp - fmm)) / (12 * h);
      EXPECT_LT(std::abs(fd - grad[s]) / std::max(1.0, std::abs(fd)), 1e-5) << "slot " << s;
    }
  }
}

TEST(Experiment, ThreadCountDoesNotChangeResults) {
  ExperimentConfig c = small({Study::ComplexMiura, {SchemeTag::BtDiscovery, 0}, 'A'}, 97);
  const Experiment one(c);
  c.threads = 3;
  const Experiment three(c);
  const auto params = one.initial_params();
  std::vector<double> g1(params.size()), g3(params.size());
  const double l1 = one.loss(params, g1).total;
  const double l3 = three.loss(params, g3).total;
  EXPECT_EQ(std::bit_cast<std::uint64_t>(l1), std::bit_cast<std::uint64_t>(l3));
  EXPECT_EQ(g1, g3);
}

TEST(Experiment, NoiseOnlyTouchesDataFields) {
  ExperimentConfig c = small({Study::BteMkdv, {SchemeTag::BteExplicit, 1}, 'A'});
  const Experiment clean(c);
  c.noise = 0.05;
  const Experiment noisy(c);
  for (std::size_t i = 0; i < clean.points().size(); ++i) {
    EXPECT_EQ(clean.points()[i].x, noisy.points()[i].x);
    EXPECT_EQ(clean.points()[i].t, noisy.points()[i].t);
  }
  EXPECT_NE(clean.samples().field("u1").re, noisy.samples().field("u1").re);
  const Experiment oracle(c, FieldMode::ExactOracle);
  EXPECT_EQ(oracle.samples().field("u1").re, clean.samples().field("u1").re);
}

TEST(RelativeL2, Examples) {
  const std::vector<double> exact{1.0, -2.0, 0.5, 3.0};
  EXPECT_EQ(relative_l2_error(exact, exact), 0.0);
  std::vector<double> scaled;
  for (double v : exact) scaled.push_back(1.01 * v);
  EXPECT_NEAR(relative_l2_error(scaled, exact), 0.01, 1e-15);
  // One-hot perturbation of size ||exact|| in entry 2.
  double norm = 0.0;
  for (double v : exact) norm += v * v;
  norm = std::sqrt(norm);
  std::vector<double> hot = exact;
  hot[2] += norm;
  EXPECT_NEAR(relative_l2_error(hot, exact), 1.0, 1e-15);
  EXPECT_THROW(relative_l2_error(exact, std::vector<double>(4, 0.0)), Error);
  EXPECT_THROW(relative_l2_error(exact, std::vector<double>(3, 1.0)), Error);
}

TEST(Config, RoundTripIsIdempotent) {
  for (const Variant& v : all_variants()) {
    ExperimentConfig c = default_config(v.study, v.scheme, v.case_label);
    c.noise = 0.02;
    c.solution.begin()->second = 0.1 + 1.0 / 3.0;
    const std::string once = serialize_config(c);
    const ExperimentConfig back = parse_config(once);
    const std::string twice = serialize_config(back);
    EXPECT_EQ(once, twice);
    EXPECT_EQ(serialize_config(parse_config(twice)), twice);
    EXPECT_EQ(config_hash(back), config_hash(c));
  }
}

TEST(Config, HashIsStableUnderReordering) {
  const std::string a =
      "[experiment]\nstudy = real-miura\nscheme = bt-discovery\nname = r\nseed = 4\n"
      "[network]\nwidth = 7\nhidden_layers = 2\n[sampling]\npoints = 10\nnoise = 0.01\n";
  const std::string b =
      "[sampling]\nnoise = 0.01\npoints = 10\n[network]\nhidden_layers = 2\nwidth = 7\n"
      "[experiment]\nseed = 4  # comment\nname = r\nscheme = bt-discovery\nstudy = real-miura\n";
  EXPECT_EQ(config_hash(parse_config(a)), config_hash(parse_config(b)));
  const auto c = parse_config(a);
  EXPECT_EQ(c.width, 7);
  EXPECT_EQ(c.points, 10u);
  EXPECT_EQ(c.seed, 4u);
  EXPECT_EQ(c.free, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(c.region, (sol::Region{-3, 3, -3, 3}));
}

TEST(Config, Errors) {
  const std::string base = "[experiment]\nstudy = sg-abt\nscheme = bt-discovery\n";
  EXPECT_NO_THROW(parse_config(base));
  EXPECT_THROW(parse_config(base + "[network]\nwidht = 3\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "[nets]\nwidth = 3\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "[network]\nwidth = 3\nwidth = 4\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "[network]\nwidth = three\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "[sampling]\nnoise = -0.1\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "[solution]\nlambda1 = 0.3\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "[coefficients]\nfree = a, q\n"), ConfigError);
  EXPECT_THROW(parse_config(base + "width = 3\n"), ConfigError);
  EXPECT_THROW(parse_config("[experiment]\nstudy = sg-abt\n"), ConfigError);
  EXPECT_THROW(parse_config("[experiment]\nstudy = kdv\nscheme = bt-discovery\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/btl.cfg"), ConfigError);
}

TEST(Config, SubSeedsDiffer) {
  EXPECT_NE(sub_seed(1, 1), sub_seed(1, 2));
  EXPECT_NE(sub_seed(1, 1), sub_seed(2, 1));
  EXPECT_EQ(sub_seed(7, 3), sub_seed(7, 3));
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Run, DeterministicPerSeed) {
  ExperimentConfig c = small({Study::RealMiura, {SchemeTag::BtDiscovery, 0}, 'A'}, 120);
  const auto a = run_experiment(c);
  const auto b = run_experiment(c);
  EXPECT_EQ(strip_timing(report_json(a.report)), strip_timing(report_json(b.report)));
  EXPECT_EQ(a.params, b.params);
  c.seed = 2;
  const auto d = run_experiment(c);
  EXPECT_NE(a.params, d.params);
}

TEST(Run, ReportColumnsAndDataFit) {
  ExperimentConfig c = small({Study::SgAbt, {SchemeTag::BtDiscovery, 0}, 'A'}, 150);
  const auto r = run_experiment(c).report;
  EXPECT_EQ(r.status, "ok");
  EXPECT_LE(r.final_data_loss, r.initial_data_loss);
  ASSERT_TRUE(r.bd.has_value());
  double b = 0, d = 0;
  for (const CoefficientReport& col : r.coefficients) {
    EXPECT_EQ(col.error, std::abs(col.learned - col.exact)) << col.name;
    if (col.name == "b") b = col.learned;
    if (col.name == "d") d = col.learned;
  }
  EXPECT_EQ(*r.bd, b * d);
  EXPECT_EQ(*r.bd_error, std::abs(b * d - 4.0));
  ASSERT_EQ(r.field_errors.size(), 1u);
  EXPECT_EQ(r.field_errors[0].name, "u");
  double parts = 0.0;
  for (const NamedValue& p : r.loss_parts) parts += p.value;
  EXPECT_NEAR(parts, r.loss_total, 1e-12 * std::max(1.0, r.loss_total));
  EXPECT_EQ(r.adam_steps, 20);
  EXPECT_EQ(r.trace.size(), static_cast<std::size_t>(20 + r.lbfgs_iterations));
}

TEST(Run, MiniBatchAdamIsDeterministic) {
  ExperimentConfig c = small({Study::BteSg, {SchemeTag::PinnBaseline, 0}, 'A'}, 100);
  c.optimizer.batch_size = 32;
  c.optimizer.lbfgs_steps = 0;
  const auto a = run_experiment(c), b = run_experiment(c);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.report.lbfgs_iterations, 0);
}

TEST(Run, ArtifactsAndResume) {
  const auto dir = std::filesystem::temp_directory_path() / "btl_run_artifacts";
  std::filesystem::remove_all(dir);
  ExperimentConfig c = small({Study::ComplexMiura, {SchemeTag::BtDiscovery, 0}, 'A'}, 80);
  RunOptions o;
  o.out_dir = dir;
  const auto first = run_experiment(c, o);
  for (const char* f : {"config.cfg", "samples.csv", "samples.json", "trace.csv", "report.json",
                        "params.txt", "grid.csv", "manifest.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  std::ifstream grid(dir / "grid.csv");
  std::string header;
  std::getline(grid, header);
  EXPECT_EQ(header,
            "x,t,u_exact,u_pred,u_abs_error,v_re_exact,v_re_pred,v_re_abs_error,v_im_exact,"
            "v_im_pred,v_im_abs_error");
  std::ifstream params(dir / "params.txt");
  const auto loaded = read_params(params);
  EXPECT_EQ(loaded, first.params);
  EXPECT_EQ(parse_config([&] {
              std::ifstream in(dir / "config.cfg");
              std::stringstream ss;
              ss << in.rdbuf();
              return ss.str();
            }())
                .name,
            c.name);

  o.out_dir = dir / "again";
  const auto again = run_experiment(c, o);
  for (const char* f : {"samples.csv", "trace.csv", "params.txt", "grid.csv", "manifest.json"}) {
    std::ifstream x(dir / f), y(dir / "again" / f);
    std::stringstream sx, sy;
    sx << x.rdbuf();
    sy << y.rdbuf();
    EXPECT_EQ(sx.str(), sy.str()) << f;
  }

  RunOptions resume;
  resume.initial_params = loaded;
  c.optimizer.adam_steps = 0;
  c.optimizer.lbfgs_steps = 5;
  const auto resumed = run_experiment(c, resume);
  EXPECT_LE(resumed.report.loss_total, first.report.loss_total);
  resume.initial_params = std::vector<double>(3, 0.0);
  EXPECT_THROW(run_experiment(c, resume), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(Run, DivergenceKeepsPartialTrace) {
  const auto dir = std::filesystem::temp_directory_path() / "btl_run_diverged";
  std::filesystem::remove_all(dir);
  ExperimentConfig c = small({Study::BteMkdv, {SchemeTag::PinnBaseline, 0}, 'A'}, 50);
  c.optimizer.adam_lr = 1e300;
  RunOptions o;
  o.out_dir = dir;
  try {
    run_experiment(c, o);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.report().status, "diverged");
    EXPECT_GE(e.report().adam_steps, 1);
  }
  EXPECT_TRUE(std::filesystem::exists(dir / "trace.csv"));
  std::ifstream m(dir / "manifest.json");
  std::stringstream ss;
  ss << m.rdbuf();
  EXPECT_NE(ss.str().find("\"diverged\""), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Compare, WinFractionCountsTiesAsHalf) {
  EXPECT_EQ(win_fraction(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}), 0.5);
  EXPECT_EQ(win_fraction(std::vector<double>{0.1, 5, 1}, std::vector<double>{0.2, 4, 1}), 0.5);
  EXPECT_EQ(win_fraction(std::vector<double>{0.1, 0.1}, std::vector<double>{0.2, 0.3}), 1.0);
  EXPECT_THROW(win_fraction(std::vector<double>{}, std::vector<double>{}), Error);
}

TEST(Compare, IdenticalConfigsTie) {
  ExperimentConfig c = small({Study::BteMkdv, {SchemeTag::PinnBaseline, 0}, 'A'}, 60);
  c.optimizer.adam_steps = 5;
  c.optimizer.lbfgs_steps = 5;
  const std::vector<std::uint64_t> seeds{1, 2};
  const auto r = compare_schemes(c, c, seeds);
  EXPECT_EQ(r.win_fraction_a, 0.5);
  EXPECT_EQ(r.error_a, r.error_b);
}

TEST(Compare, IncompatibleTargetsAreRejected) {
  const auto a = small({Study::BteMkdv, {SchemeTag::PinnBaseline, 0}, 'A'});
  const auto b = small({Study::BteMkdv, {SchemeTag::PinnBaseline, 0}, 'B'});
  const auto c = small({Study::BteSg, {SchemeTag::PinnBaseline, 0}, 'A'});
  const std::vector<std::uint64_t> seeds{1};
  EXPECT_THROW(compare_schemes(a, b, seeds), ConfigError);
  EXPECT_THROW(compare_schemes(a, c, seeds), ConfigError);
  EXPECT_THROW(compare_schemes(a, a, std::span<const std::uint64_t>{}), ConfigError);
}
