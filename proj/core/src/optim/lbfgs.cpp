#include "btl/optim/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "btl/error.hpp"

namespace btl::opt {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

bool finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
}

struct Trial {
  double alpha = 0.0;
  double f = 0.0;
  double slope = 0.0;
  std::vector<double> x;
  std::vector<double> g;
};

class LineSearch {
 public:
  LineSearch(const LossFn& fn, std::span<const double> x, std::span<const double> d, double f0,
             double slope0, const LbfgsOptions& o)
      : fn_(fn), x_(x), d_(d), f0_(f0), slope0_(slope0), o_(o) {}

  /// Returns true with the accepted trial in `out`; otherwise `out` holds
  /// the lowest trial seen (or alpha = 0 if none improved).
  bool run(double alpha0, Trial& out) {
    Trial prev{0.0, f0_, slope0_, {}, {}};
    double alpha = alpha0;
    for (int i = 0; i < o_.max_line_search; ++i) {
      Trial cur = eval(alpha);
      if (!std::isfinite(cur.f) || cur.f > f0_ + o_.c1 * alpha * slope0_ ||
          (i > 0 && cur.f >= prev.f)) {
        return zoom(prev, cur, out);
      }
      if (std::abs(cur.slope) <= -o_.c2 * slope0_) {
        out = std::move(cur);
        return true;
      }
      if (cur.slope >= 0) return zoom(cur, prev, out);
      prev = std::move(cur);
      alpha *= 2.0;
    }
    out = best_;
    return false;
  }

  int evaluations = 0;

 private:
  Trial eval(double alpha) {
    Trial t;
    t.alpha = alpha;
    t.x.resize(x_.size());
    t.g.assign(x_.size(), 0.0);
    for (std::size_t i = 0; i < x_.size(); ++i) t.x[i] = x_[i] + alpha * d_[i];
    ++evaluations;
    t.f = fn_(t.x, t.g);
    if (!std::isfinite(t.f) || !finite(t.g)) {
      t.f = std::numeric_limits<double>::infinity();
      t.slope = 0.0;
      return t;
    }
    t.slope = dot(t.g, d_);
    if (t.f < best_.f) best_ = t;
    return t;
  }

  static double interpolate(const Trial& a, const Trial& b) {
    const double lo = std::min(a.alpha, b.alpha), hi = std::max(a.alpha, b.alpha);
    const double margin = 0.1 * (hi - lo);
    double alpha = 0.5 * (lo + hi);
    if (std::isfinite(a.f) && std::isfinite(b.f)) {
      const double d1 = a.slope + b.slope - 3.0 * (a.f - b.f) / (a.alpha - b.alpha);
      const double disc = d1 * d1 - a.slope * b.slope;
      if (disc >= 0) {
        const double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
        const double c =
            b.alpha - (b.alpha - a.alpha) * (b.slope + d2 - d1) / (b.slope - a.slope + 2.0 * d2);
        if (std::isfinite(c) && c >= lo + margin && c <= hi - margin) alpha = c;
      }
    }
    return alpha;
  }

  bool zoom(Trial lo, Trial hi, Trial& out) {
    for (int j = 0; j < o_.max_line_search; ++j) {
      const double alpha = interpolate(lo, hi);
      if (std::abs(hi.alpha - lo.alpha) <= 1e-16 * std::max(1.0, std::abs(lo.alpha))) break;
      Trial cur = eval(alpha);
      if (!std::isfinite(cur.f) || cur.f > f0_ + o_.c1 * alpha * slope0_ || cur.f >= lo.f) {
        hi = std::move(cur);
        continue;
      }
      if (std::abs(cur.slope) <= -o_.c2 * slope0_) {
        out = std::move(cur);
        return true;
      }
      if (cur.slope * (hi.alpha - lo.alpha) >= 0) hi = lo;
      lo = std::move(cur);
    }
    out = best_;
    return false;
  }

  const LossFn& fn_;
  std::span<const double> x_;
  std::span<const double> d_;
  double f0_;
  double slope0_;
  const LbfgsOptions& o_;
  Trial best_{0.0, std::numeric_limits<double>::infinity(), 0.0, {}, {}};
};

}  // namespace

void LbfgsOptions::validate() const {
  if (memory < 1) throw ConfigError("L-BFGS memory must be at least 1");
  if (!(c1 > 0 && c1 < c2 && c2 < 1)) throw ConfigError("L-BFGS needs 0 < c1 < c2 < 1");
  if (max_iterations < 0) throw ConfigError("L-BFGS max_iterations must be non-negative");
  if (!(rel_tolerance >= 0) || !(abs_tolerance >= 0) || !(grad_tolerance >= 0)) {
    throw ConfigError("L-BFGS tolerances must be non-negative");
  }
  if (max_line_search < 1) throw ConfigError("L-BFGS max_line_search must be positive");
}

std::string to_string(LbfgsStop stop) {
  switch (stop) {
    case LbfgsStop::Stationary: return "stationary";
    case LbfgsStop::Stagnation: return "stagnation";
    case LbfgsStop::MaxIterations: return "max-iterations";
    case LbfgsStop::LineSearchFailure: return "line-search-failure";
    case LbfgsStop::Callback: return "callback";
  }
  return "?";
}

LbfgsResult lbfgs_minimize(const LossFn& fn, std::vector<double> x0, const LbfgsOptions& opts,
                           const LbfgsCallback& callback) {
  opts.validate();
  const std::size_t n = x0.size();
  LbfgsResult r;
  r.x = std::move(x0);
  r.grad.assign(n, 0.0);
  r.loss = fn(r.x, r.grad);
  r.evaluations = 1;
  if (!std::isfinite(r.loss) || !finite(r.grad)) {
    throw NonFiniteError("L-BFGS starting loss or gradient is not finite", -1);
  }

  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Pair> history;
  std::vector<double> d(n), alpha_buf;

  auto stationary = [&](double gnorm) {
    return gnorm == 0.0 || (opts.grad_tolerance > 0 && gnorm <= opts.grad_tolerance);
  };

  double gnorm = std::sqrt(dot(r.grad, r.grad));
  if (stationary(gnorm)) {
    r.stop = LbfgsStop::Stationary;
    return r;
  }

  while (r.iterations < opts.max_iterations) {
    // Two-loop recursion: d = -H g.
    for (std::size_t i = 0; i < n; ++i) d[i] = -r.grad[i];
    alpha_buf.assign(history.size(), 0.0);
    for (std::size_t k = history.size(); k-- > 0;) {
      alpha_buf[k] = history[k].rho * dot(history[k].s, d);
      for (std::size_t i = 0; i < n; ++i) d[i] -= alpha_buf[k] * history[k].y[i];
    }
    if (!history.empty()) {
      const auto& last = history.back();
      const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
      for (double& di : d) di *= gamma;
    }
    for (std::size_t k = 0; k < history.size(); ++k) {
      const double beta = history[k].rho * dot(history[k].y, d);
      for (std::size_t i = 0; i < n; ++i) d[i] += (alpha_buf[k] - beta) * history[k].s[i];
    }
    double slope0 = dot(r.grad, d);
    if (!(slope0 < 0)) {
      // Not a descent direction; restart from steepest descent.
      history.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = -r.grad[i];
      slope0 = -gnorm * gnorm;
    }
    const double alpha0 = history.empty() ? 1.0 / std::max(1.0, gnorm) : 1.0;

    LineSearch ls(fn, r.x, d, r.loss, slope0, opts);
    Trial accepted;
    const bool ok = ls.run(alpha0, accepted);
    r.evaluations += ls.evaluations;
    if (!ok) {
      r.line_search_failed = true;
      r.stop = LbfgsStop::LineSearchFailure;
      if (accepted.alpha > 0 && accepted.f < r.loss) {
        r.x = std::move(accepted.x);
        r.grad = std::move(accepted.g);
        r.loss = accepted.f;
      }
      return r;
    }

    Pair p{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      p.s[i] = accepted.x[i] - r.x[i];
      p.y[i] = accepted.g[i] - r.grad[i];
    }
    const double sy = dot(p.s, p.y);
    if (sy > 0) {
      p.rho = 1.0 / sy;
      history.push_back(std::move(p));
      if (history.size() > static_cast<std::size_t>(opts.memory)) history.pop_front();
    }

    const double previous = r.loss;
    r.x = std::move(accepted.x);
    r.grad = std::move(accepted.g);
    r.loss = accepted.f;
    ++r.iterations;
    gnorm = std::sqrt(dot(r.grad, r.grad));

    LbfgsIteration it{r.iterations, r.loss, previous, gnorm, accepted.alpha, slope0,
                      accepted.slope, ls.evaluations};
    r.trace.push_back(it);
    if (callback && !callback(it, r.x)) {
      r.stop = LbfgsStop::Callback;
      return r;
    }
    if (stationary(gnorm)) {
      r.stop = LbfgsStop::Stationary;
      return r;
    }
    const double change = std::abs(previous - r.loss);
    if (change < std::max(opts.rel_tolerance * std::max(1.0, std::abs(r.loss)),
                          opts.abs_tolerance)) {
      r.stop = LbfgsStop::Stagnation;
      return r;
    }
  }
  r.stop = LbfgsStop::MaxIterations;
  return r;
}

}  // namespace btl::opt
