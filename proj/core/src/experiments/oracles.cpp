#include "btl/experiments/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "btl/autodiff/check.hpp"
#include "btl/experiments/experiment.hpp"
#include "btl/network/mlp.hpp"
#include "btl/solutions/closed_form.hpp"
#include "btl/solutions/miura.hpp"
#include "btl/solutions/sampling.hpp"
#include "btl/solutions/verify.hpp"

namespace btl::xp {

namespace {

CheckResult make(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, std::isfinite(value) && value < tolerance};
}

}  // namespace

std::vector<CheckResult> solution_residual_checks(double kink_phase_rate, int resolution) {
  using sol::Region;
  struct Case {
    std::string name;
    sol::SolutionSpec spec;
    Region region;
  };
  const Region sg{-10, 10, -5, 5}, wide{-10, 10, -10, 10}, box{-3, 3, -3, 3},
      dt{-15, 15, -10, 40};
  const std::vector<Case> cases{
      {"sg-breather", sol::SgBreather{}, sg},
      {"mkdv-bright", sol::MkdvBright{0.8, 0.0}, wide},
      {"kdv-complex-soliton", sol::KdvComplexSoliton{0.8, 0.0}, wide},
      {"mkdv-kink(k=1)", sol::MkdvKink{1.0, 0.0, kink_phase_rate}, box},
      {"mkdv-kink(k=0.8)", sol::MkdvKink{0.8, 0.0, kink_phase_rate}, box},
      {"kdv-pedestal-soliton", sol::KdvPedestalSoliton{1.0, 0.0}, box},
      {"mkdv-one-soliton-dt", sol::MkdvOneSolitonDT{}, dt},
      {"mkdv-two-soliton-dt", sol::MkdvTwoSolitonDT{}, dt},
  };
  std::vector<CheckResult> out;
  for (const Case& c : cases) {
    const auto pde = sol::paired_pde(sol::family_of(c.spec));
    out.push_back(make("residual " + c.name, sol::max_residual(c.spec, pde, c.region, resolution),
                       1e-8));
  }
  return out;
}

std::vector<CheckResult> miura_identity_checks(std::size_t points, std::uint64_t seed) {
  std::vector<CheckResult> out;
  const auto bright_pts = sol::latin_hypercube(points, {-10, 10, -10, 10}, seed);
  double worst = 0.0;
  for (const ad::Point& p : bright_pts) {
    const auto u = sol::eval_solution(sol::MkdvBright{0.8, 0.0}, p);
    const auto v = sol::eval_solution(sol::KdvComplexSoliton{0.8, 0.0}, p);
    const auto img = sol::miura_image(u.re, sol::MiuraImage::Complex);
    worst = std::max({worst, std::abs(img.re.value() - v.re.value()),
                      std::abs(img.im.value() - v.im.value())});
  }
  out.push_back(make("miura complex: bright -> complex soliton", worst, 1e-12));
  const auto kink_pts = sol::latin_hypercube(points, {-3, 3, -3, 3}, seed + 1);
  worst = 0.0;
  for (const ad::Point& p : kink_pts) {
    const auto u = sol::eval_solution(sol::MkdvKink{1.0, 0.0, 2.0}, p);
    const auto v = sol::eval_solution(sol::KdvPedestalSoliton{1.0, 0.0}, p);
    const auto img = sol::miura_image(u.re, sol::MiuraImage::Real);
    worst = std::max(worst, std::abs(img.re.value() - v.re.value()));
  }
  out.push_back(make("miura real: kink -> pedestal soliton", worst, 1e-12));
  return out;
}

std::vector<CheckResult> autodiff_checks(int networks, int points, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> layers(1, 3), width(1, 20);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::array<double, ad::kJetSize> worst{};
  for (int n = 0; n < networks; ++n) {
    const net::Network network = net::mlp_new({layers(rng), width(rng), 1, rng()});
    for (int k = 0; k < points; ++k) {
      const ad::Point p{coord(rng), coord(rng)};
      for (std::size_t s = 0; s < ad::kJetSize; ++s) {
        const auto c = ad::check_derivative(network.graph, network.outputs[0],
                                            network.params.values(), p,
                                            ad::kSupportedIndices[s], 1e-4);
        worst[s] = std::max(worst[s], std::isfinite(c.rel_err) ? c.rel_err : INFINITY);
      }
    }
  }
  std::vector<CheckResult> out;
  for (std::size_t s = 0; s < ad::kJetSize; ++s) {
    out.push_back(make("network jet d" + ad::to_string(ad::kSupportedIndices[s]) + " vs FD",
                       worst[s], 1e-6));
  }

  // Residual-bearing loss: generalized aBT discovery with all six
  // coefficients free, on a small network.
  ExperimentConfig cfg = default_config(Study::SgAbt, {SchemeTag::BtDiscovery, 0}, 'B');
  cfg.points = 30;
  cfg.hidden_layers = 2;
  cfg.width = 5;
  cfg.seed = seed;
  const Experiment e(cfg);
  auto params = e.initial_params();
  for (const FreeSlot& s : e.free_slots()) params[s.slot] += 0.3 * coord(rng);
  std::vector<double> grad(params.size());
  e.loss(params, grad);
  std::vector<std::size_t> slots;
  for (const FreeSlot& s : e.free_slots()) slots.push_back(s.slot);
  std::uniform_int_distribution<std::size_t> pick(0, params.size() - 1);
  for (int k = 0; k < 40; ++k) slots.push_back(pick(rng));
  double gworst = 0.0;
  for (std::size_t s : slots) {
    const double h = 1e-5 * std::max(1.0, std::abs(params[s]));
    const auto at = [&](double offset) {
      auto p = params;
      p[s] += offset;
      return e.loss(p).total;
    };
    const double fd = (8 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12 * h);
    gworst = std::max(gworst, std::abs(fd - grad[s]) / std::max(1.0, std::abs(fd)));
  }
  out.push_back(make("residual-loss parameter gradient vs FD", gworst, 1e-5));
  return out;
}

CheckResult wiring_check(const ExperimentConfig& config, std::size_t max_points) {
  ExperimentConfig c = config;
  if (max_points > 0) c.points = std::min(c.points, max_points);
  const Experiment e(c, FieldMode::ExactOracle);
  const LossValue value = e.loss(e.initial_params());
  double worst = 0.0;
  for (double p : value.parts) worst = std::max(worst, std::isfinite(p) ? p : INFINITY);
  return make("exact substitution " + config.name, worst, 1e-10);
}

}  // namespace btl::xp
