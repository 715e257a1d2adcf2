#include "btl/solutions/backlund.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/numeric/odeint.hpp>

#include "btl/error.hpp"

namespace btl::sol {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;
using namespace ad::slot;

SgBacklundChain::SgBacklundChain(const SolutionSpec& seed, std::vector<double> betas,
                                 std::vector<double> anchors, ad::Point anchor_point)
    : seed_(seed), betas_(std::move(betas)), anchors_(std::move(anchors)),
      anchor_(anchor_point) {
  if (!std::holds_alternative<SgBreather>(seed)) {
    throw Error("Backlund chain needs a sine-Gordon seed");
  }
  if (betas_.empty() || betas_.size() != anchors_.size()) {
    throw Error("Backlund chain needs one anchor value per beta");
  }
  for (double b : betas_) {
    if (b == 0.0 || !std::isfinite(b)) throw DomainError("Backlund beta must be finite and nonzero");
  }
}

ad::JetArray SgBacklundChain::image_jet(const ad::JetArray& p, double q, double beta) {
  ad::JetArray o{};
  const double s = 0.5 * (p[v] + q);
  const double d = 0.5 * (p[v] - q);
  const double cs = std::cos(s), ss = std::sin(s);
  o[v] = q;
  o[x] = p[x] - 2.0 * beta * ss;
  o[t] = -p[t] + (2.0 / beta) * std::sin(d);
  o[xt] = p[xt] - beta * cs * (p[t] + o[t]);
  o[xx] = p[xx] - beta * cs * (p[x] + o[x]);
  const double sx = p[x] + o[x];
  o[xxx] = p[xxx] + 0.5 * beta * ss * sx * sx - beta * cs * (p[xx] + o[xx]);
  return o;
}

std::vector<ad::JetArray> SgBacklundChain::chain_at(ad::Point pt,
                                                    std::span<const double> values) const {
  std::vector<ad::JetArray> out;
  out.reserve(betas_.size() + 1);
  out.push_back(seed_.jets(pt).first);
  for (std::size_t k = 0; k < betas_.size(); ++k) {
    out.push_back(image_jet(out.back(), values[k], betas_[k]));
  }
  return out;
}

std::vector<ad::JetArray> SgBacklundChain::jets(ad::Point p) const {
  return jets(std::span<const ad::Point>(&p, 1)).front();
}

std::vector<std::vector<ad::JetArray>> SgBacklundChain::jets(
    std::span<const ad::Point> points) const {
  const std::size_t n = betas_.size();
  ad::Workspace ws(seed_.graph());

  // Derivative of the image values along one coordinate at (px, pt).
  auto rhs = [&](bool along_t, double px, double pt, const State& q, State& dq) {
    ad::JetArray prev = seed_.jets({px, pt}, ws).first;
    for (std::size_t k = 0; k < n; ++k) {
      const ad::JetArray next = image_jet(prev, q[k], betas_[k]);
      dq[k] = along_t ? next[t] : next[x];
      prev = next;
    }
  };

  auto stepper = [&] {
    return odeint::make_controlled(tolerance, tolerance,
                                  odeint::runge_kutta_dopri5<State>());
  };

  // Values on the line x = anchor.x at every distinct sample time.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return points[a].t < points[b].t; });
  std::vector<State> on_line(points.size());
  auto sweep = [&](auto first, auto last, double direction) {
    State q = anchors_;
    double tau = anchor_.t;
    for (auto it = first; it != last; ++it) {
      const double target = points[*it].t;
      if (target != tau) {
        auto sys = [&](const State& y, State& dy, double s) { rhs(true, anchor_.x, s, y, dy); };
        odeint::integrate_adaptive(stepper(), sys, q, tau, target, direction * 1e-2);
        tau = target;
      }
      on_line[*it] = q;
    }
  };
  const auto split = std::partition_point(order.begin(), order.end(), [&](std::size_t i) {
    return points[i].t < anchor_.t;
  });
  sweep(split, order.end(), 1.0);
  sweep(std::make_reverse_iterator(split), std::make_reverse_iterator(order.begin()), -1.0);

  std::vector<std::vector<ad::JetArray>> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    State q = on_line[i];
    const ad::Point pt = points[i];
    if (pt.x != anchor_.x) {
      auto sys = [&](const State& y, State& dy, double s) { rhs(false, s, pt.t, y, dy); };
      const double dir = pt.x > anchor_.x ? 1.0 : -1.0;
      odeint::integrate_adaptive(stepper(), sys, q, anchor_.x, pt.x, dir * 1e-2);
    }
    for (double value : q) {
      if (!std::isfinite(value)) throw NonFiniteError("Backlund image integration", -1);
    }
    out[i] = chain_at(pt, q);
  }
  return out;
}

}  // namespace btl::sol
