#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "btl/error.hpp"
#include "btl/optim/adam.hpp"
#include "btl/optim/lbfgs.hpp"

using namespace btl;
using namespace btl::opt;

namespace {

double rosenbrock(std::span<const double> x, std::span<double> g) {
  const double a = 1 - x[0], b = x[1] - x[0] * x[0];
  g[0] = -2 * a - 400 * x[0] * b;
  g[1] = 200 * b;
  return a * a + 100 * b * b;
}

double half_norm(std::span<const double> x, std::span<double> g) {
  double f = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    g[i] = x[i];
    f += 0.5 * x[i] * x[i];
  }
  return f;
}

void expect_strong_wolfe(const LbfgsResult& r, const LbfgsOptions& o) {
  for (const auto& it : r.trace) {
    EXPECT_LT(it.slope0, 0.0);
    EXPECT_LE(it.loss, it.previous_loss + o.c1 * it.step * it.slope0) << "iteration " << it.iteration;
    EXPECT_LE(std::abs(it.slope), o.c2 * std::abs(it.slope0)) << "iteration " << it.iteration;
  }
}

}  // namespace

TEST(Adam, ZeroGradientLeavesParamsUnchanged) {
  std::vector<double> p{1.0, -2.0, 3.0};
  const std::vector<double> g(3, 0.0);
  AdamState s(3);
  for (int k = 0; k < 5; ++k) adam_step(p, g, s);
  EXPECT_EQ(p, (std::vector<double>{1.0, -2.0, 3.0}));
  EXPECT_EQ(s.m, std::vector<double>(3, 0.0));
  EXPECT_EQ(s.v, std::vector<double>(3, 0.0));
  EXPECT_EQ(s.step, 5u);
}

TEST(Adam, FirstStepWithUnitGradient) {
  std::vector<double> p{0.0};
  const std::vector<double> g{1.0};
  AdamState s(1);
  adam_step(p, g, s);
  // m_hat = 1, v_hat = 1, so the step is lr / (1 + eps).
  EXPECT_NEAR(p[0], -1e-3 / (1 + 1e-8), 1e-18);
  EXPECT_NEAR(p[0], -9.99999990e-4, 1e-12);
}

TEST(Adam, DeterministicTrajectories) {
  auto run = [] {
    std::vector<double> p{-1.2, 1.0}, g(2);
    AdamState s(2, {1e-2});
    for (int k = 0; k < 500; ++k) {
      rosenbrock(p, g);
      adam_step(p, g, s);
    }
    return p;
  };
  const auto a = run(), b = run();
  EXPECT_EQ(a, b);
}

TEST(Adam, FirstStepFollowsGradientSigns) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> g(6);
    for (double& v : g) v = u(rng);
    for (double scale : {1e-3, 1.0, 1e4}) {
      std::vector<double> p(6, 0.0), gs(g);
      for (double& v : gs) v *= scale;
      AdamState s(6, {1e-3, 0.9, 0.999, 0.0});
      adam_step(p, gs, s);
      for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(std::signbit(p[i]), !std::signbit(g[i]));
        EXPECT_NEAR(std::abs(p[i]), 1e-3, 1e-15);
      }
    }
  }
}

TEST(Adam, RejectsNonFiniteGradient) {
  std::vector<double> p{1.0, 2.0};
  const std::vector<double> g{0.5, std::nan("")};
  AdamState s(2);
  EXPECT_THROW(adam_step(p, g, s), NonFiniteError);
  EXPECT_EQ(p, (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(s.step, 0u);
  const std::vector<double> short_g{0.5};
  EXPECT_THROW(adam_step(p, short_g, s), Error);
}

TEST(Lbfgs, QuadraticConvergesInThreeIterations) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x0(8);
    for (double& v : x0) v = u(rng);
    const LbfgsOptions o;
    const auto r = lbfgs_minimize(half_norm, x0, o);
    double norm = 0;
    for (double v : r.x) norm += v * v;
    EXPECT_LT(std::sqrt(norm), 1e-12);
    EXPECT_LE(r.iterations, 3);
    expect_strong_wolfe(r, o);
  }
}

TEST(Lbfgs, Rosenbrock) {
  LbfgsOptions o;
  o.rel_tolerance = 0.0;
  o.grad_tolerance = 1e-8;
  o.max_iterations = 200;
  const auto r = lbfgs_minimize(rosenbrock, {-1.2, 1.0}, o);
  EXPECT_EQ(r.stop, LbfgsStop::Stationary) << to_string(r.stop);
  EXPECT_LE(r.iterations, 200);
  EXPECT_NEAR(r.x[0], 1.0, 1e-8);
  EXPECT_NEAR(r.x[1], 1.0, 1e-8);
  EXPECT_LT(std::hypot(r.grad[0], r.grad[1]), 1e-8);
  expect_strong_wolfe(r, o);
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    EXPECT_LE(r.trace[i].loss, r.trace[i - 1].loss);
  }
}

TEST(Lbfgs, DefaultStagnationRuleStops) {
  const auto r = lbfgs_minimize(rosenbrock, {-1.2, 1.0}, LbfgsOptions{});
  EXPECT_TRUE(r.stop == LbfgsStop::Stagnation || r.stop == LbfgsStop::Stationary ||
              r.stop == LbfgsStop::LineSearchFailure)
      << to_string(r.stop);
  EXPECT_NEAR(r.x[0], 1.0, 1e-6);
}

TEST(Lbfgs, StationaryStartReturnsImmediately) {
  int calls = 0;
  const auto fn = [&](std::span<const double> x, std::span<double> g) {
    ++calls;
    return half_norm(x, g);
  };
  const auto r = lbfgs_minimize(fn, {0.0, 0.0, 0.0}, LbfgsOptions{});
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(calls, 1);
  EXPECT_EQ(r.stop, LbfgsStop::Stationary);
}

TEST(Lbfgs, MaxIterationsAndCallback) {
  LbfgsOptions o;
  o.max_iterations = 5;
  EXPECT_EQ(lbfgs_minimize(rosenbrock, {-1.2, 1.0}, o).iterations, 5);
  o.max_iterations = 100;
  int seen = 0;
  const auto r = lbfgs_minimize(rosenbrock, {-1.2, 1.0}, o, [&](const LbfgsIteration&, auto) {
    return ++seen < 3;
  });
  EXPECT_EQ(r.stop, LbfgsStop::Callback);
  EXPECT_EQ(r.iterations, 3);
}

TEST(Lbfgs, NonFiniteStartIsAnError) {
  const auto bad = [](std::span<const double>, std::span<double> g) {
    g[0] = 0;
    return std::nan("");
  };
  EXPECT_THROW(lbfgs_minimize(bad, {1.0}, LbfgsOptions{}), NonFiniteError);
}

TEST(Lbfgs, LineSearchFailureReturnsBestSoFar) {
  // Gradient points the wrong way, so no step satisfies sufficient decrease.
  const auto liar = [](std::span<const double> x, std::span<double> g) {
    g[0] = -1.0;
    return x[0] * x[0];
  };
  const auto r = lbfgs_minimize(liar, {0.5}, LbfgsOptions{});
  EXPECT_TRUE(r.line_search_failed);
  EXPECT_EQ(r.stop, LbfgsStop::LineSearchFailure);
  EXPECT_LE(r.loss, 0.25);
}

TEST(Lbfgs, InvalidOptions) {
  LbfgsOptions o;
  o.c1 = 0.95;
  EXPECT_THROW(lbfgs_minimize(half_norm, {1.0}, o), ConfigError);
  o = {};
  o.memory = 0;
  EXPECT_THROW(lbfgs_minimize(half_norm, {1.0}, o), ConfigError);
}
