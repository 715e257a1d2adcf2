#include "btl/autodiff/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "btl/error.hpp"

namespace btl::ad {

namespace {

double ipow(double z, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

bool all_finite(const JetArray& j) {
  for (double v : j) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool all_zero(const JetArray& j) {
  for (double v : j) {
    if (v != 0.0) return false;
  }
  return true;
}

[[noreturn]] void throw_non_finite(const Graph& g, NodeId id, const char* pass) {
  const Node& n = g.node(id);
  std::string what = std::string(pass) + " produced a non-finite value at node " +
                     std::to_string(id) + " (" + std::string(to_string(n.kind));
  if (n.kind == NodeKind::Unary) {
    what += " " + std::string(to_string(static_cast<UnaryOp>(n.op)));
  }
  what += ")";
  throw NonFiniteError(what, id);
}

// Chain rule for y = f(z) up to the supported multi-indices.
JetArray compose(const std::array<double, 5>& f, const JetArray& z) {
  const double z1 = z[slot::x];
  return {f[0],
          f[1] * z1,
          f[1] * z[slot::t],
          f[2] * z1 * z1 + f[1] * z[slot::xx],
          f[2] * z1 * z[slot::t] + f[1] * z[slot::xt],
          f[3] * z1 * z1 * z1 + 3.0 * f[2] * z1 * z[slot::xx] +
              f[1] * z[slot::xxx]};
}

// Leibniz rule for y = a * b.
JetArray multiply(const JetArray& a, const JetArray& b) {
  return {a[0] * b[0],
          a[1] * b[0] + a[0] * b[1],
          a[2] * b[0] + a[0] * b[2],
          a[3] * b[0] + 2.0 * a[1] * b[1] + a[0] * b[3],
          a[4] * b[0] + a[1] * b[2] + a[2] * b[1] + a[0] * b[4],
          a[5] * b[0] + 3.0 * a[3] * b[1] + 3.0 * a[1] * b[3] + a[0] * b[5]};
}

// Adjoint of multiply() with respect to `a`, given adjoint `g` of the product.
void multiply_adjoint(const JetArray& g, const JetArray& b, JetArray& da) {
  da[0] += g[0] * b[0] + g[1] * b[1] + g[2] * b[2] + g[3] * b[3] +
           g[4] * b[4] + g[5] * b[5];
  da[1] += g[1] * b[0] + 2.0 * g[3] * b[1] + g[4] * b[2] + 3.0 * g[5] * b[3];
  da[2] += g[2] * b[0] + g[4] * b[1];
  da[3] += g[3] * b[0] + 3.0 * g[5] * b[1];
  da[4] += g[4] * b[0];
  da[5] += g[5] * b[0];
}

void compose_adjoint(const std::array<double, 5>& f, const JetArray& z,
                     const JetArray& g, JetArray& dz) {
  const double z1 = z[slot::x];
  const double z2 = z[slot::t];
  dz[0] += g[0] * f[1] + g[1] * f[2] * z1 + g[2] * f[2] * z2 +
           g[3] * (f[3] * z1 * z1 + f[2] * z[slot::xx]) +
           g[4] * (f[3] * z1 * z2 + f[2] * z[slot::xt]) +
           g[5] * (f[4] * z1 * z1 * z1 + 3.0 * f[3] * z1 * z[slot::xx] +
                   f[2] * z[slot::xxx]);
  dz[1] += g[1] * f[1] + 2.0 * g[3] * f[2] * z1 + g[4] * f[2] * z2 +
           g[5] * (3.0 * f[3] * z1 * z1 + 3.0 * f[2] * z[slot::xx]);
  dz[2] += g[2] * f[1] + g[4] * f[2] * z1;
  dz[3] += g[3] * f[1] + 3.0 * g[5] * f[2] * z1;
  dz[4] += g[4] * f[1];
  dz[5] += g[5] * f[1];
}

}  // namespace

std::array<double, 5> unary_derivatives(UnaryOp op, int exponent, double z) {
  switch (op) {
    case UnaryOp::Neg:
      return {-z, -1.0, 0.0, 0.0, 0.0};
    case UnaryOp::Recip: {
      const double r = 1.0 / z;
      const double r2 = r * r;
      return {r, -r2, 2.0 * r2 * r, -6.0 * r2 * r2, 24.0 * r2 * r2 * r};
    }
    case UnaryOp::Pow: {
      const int n = exponent;
      std::array<double, 5> f{};
      double c = 1.0;
      for (int k = 0; k < 5; ++k) {
        f[k] = (n - k >= 0) ? c * ipow(z, n - k) : 0.0;
        c *= static_cast<double>(n - k);
      }
      return f;
    }
    case UnaryOp::Tanh: {
      const double y = std::tanh(z);
      const double s = 1.0 - y * y;
      return {y, s, -2.0 * y * s, s * (6.0 * y * y - 2.0),
              8.0 * y * s * (2.0 - 3.0 * y * y)};
    }
    case UnaryOp::Sin: {
      const double s = std::sin(z), c = std::cos(z);
      return {s, c, -s, -c, s};
    }
    case UnaryOp::Cos: {
      const double s = std::sin(z), c = std::cos(z);
      return {c, -s, -c, s, c};
    }
    case UnaryOp::Sinh: {
      const double s = std::sinh(z), c = std::cosh(z);
      return {s, c, s, c, s};
    }
    case UnaryOp::Cosh: {
      const double s = std::sinh(z), c = std::cosh(z);
      return {c, s, c, s, c};
    }
    case UnaryOp::Exp: {
      const double e = std::exp(z);
      return {e, e, e, e, e};
    }
    case UnaryOp::Atan: {
      const double q = 1.0 / (1.0 + z * z);
      const double q2 = q * q;
      return {std::atan(z), q, -2.0 * z * q2, (6.0 * z * z - 2.0) * q2 * q,
              24.0 * z * (1.0 - z * z) * q2 * q2};
    }
  }
  throw Error("unknown unary op");
}

Workspace::Workspace(const Graph& graph)
    : jets_(graph.size()), adjoints_(graph.size()) {}

void forward(const Graph& graph, std::span<const double> params, Point point,
             std::span<const JetArray> data, Workspace& ws, NodeId last) {
  if (ws.jets_.size() < graph.size()) {
    ws.jets_.resize(graph.size());
    ws.adjoints_.resize(graph.size());
  }
  if (params.size() < graph.param_count()) {
    throw Error("parameter vector shorter than the graph's slot count");
  }
  if (data.size() < graph.data_channels()) {
    throw Error("missing per-point data channels");
  }
  const std::size_t end =
      std::min<std::size_t>(graph.size(), static_cast<std::size_t>(last) + 1);
  const auto nodes = graph.nodes();
  const auto operands = graph.operands();
  auto& jets = ws.jets_;
  ++ws.stats.forward_passes;

  for (std::size_t i = 0; i < end; ++i) {
    const Node& n = nodes[i];
    JetArray& out = jets[i];
    switch (n.kind) {
      case NodeKind::InputX:
        out = {point.x, 1.0, 0.0, 0.0, 0.0, 0.0};
        break;
      case NodeKind::InputT:
        out = {point.t, 0.0, 1.0, 0.0, 0.0, 0.0};
        break;
      case NodeKind::Data:
        out = data[static_cast<std::size_t>(n.arg)];
        break;
      case NodeKind::Param:
        out = {params[static_cast<std::size_t>(n.arg)], 0, 0, 0, 0, 0};
        break;
      case NodeKind::Const:
        out = {n.value, 0, 0, 0, 0, 0};
        break;
      case NodeKind::Unary: {
        const JetArray& z = jets[n.a];
        out = compose(unary_derivatives(static_cast<UnaryOp>(n.op), n.arg, z[0]), z);
        ++ws.stats.unary_evals;
        break;
      }
      case NodeKind::Binary: {
        const JetArray& a = jets[n.a];
        const JetArray& b = jets[n.b];
        switch (static_cast<BinaryOp>(n.op)) {
          case BinaryOp::Add:
            for (std::size_t k = 0; k < kJetSize; ++k) out[k] = a[k] + b[k];
            break;
          case BinaryOp::Sub:
            for (std::size_t k = 0; k < kJetSize; ++k) out[k] = a[k] - b[k];
            break;
          case BinaryOp::Mul:
            out = multiply(a, b);
            break;
        }
        break;
      }
      case NodeKind::Affine: {
        JetArray acc{};
        acc[0] = params[n.b];
        const NodeId* in = operands.data() + n.first;
        const double* w = params.data() + n.arg;
        for (std::uint32_t k = 0; k < n.count; ++k) {
          const JetArray& z = jets[in[k]];
          const double wk = w[k];
          for (std::size_t c = 0; c < kJetSize; ++c) acc[c] += wk * z[c];
        }
        out = acc;
        ++ws.stats.affine_evals;
        break;
      }
      case NodeKind::Entry:
        out = {jets[n.a][static_cast<std::size_t>(n.arg)], 0, 0, 0, 0, 0};
        break;
    }
    if (!all_finite(out)) throw_non_finite(graph, static_cast<NodeId>(i), "forward pass");
  }
}

void backward(const Graph& graph, std::span<const double> params, NodeId seed,
              double weight, Workspace& ws, std::span<double> grad) {
  if (seed >= graph.size()) throw Error("backward seed out of range");
  if (grad.size() < graph.param_count()) {
    throw Error("gradient buffer shorter than the graph's slot count");
  }
  const auto nodes = graph.nodes();
  const auto operands = graph.operands();
  auto& jets = ws.jets_;
  auto& adj = ws.adjoints_;
  std::fill(adj.begin(), adj.begin() + seed + 1, JetArray{});
  adj[seed][0] = weight;

  for (std::size_t i = seed + 1; i-- > 0;) {
    const Node& n = nodes[i];
    const JetArray& g = adj[i];
    if (all_zero(g)) continue;
    switch (n.kind) {
      case NodeKind::InputX:
      case NodeKind::InputT:
      case NodeKind::Data:
      case NodeKind::Const:
        break;
      case NodeKind::Param:
        grad[static_cast<std::size_t>(n.arg)] += g[0];
        break;
      case NodeKind::Unary: {
        const JetArray& z = jets[n.a];
        compose_adjoint(unary_derivatives(static_cast<UnaryOp>(n.op), n.arg, z[0]),
                        z, g, adj[n.a]);
        break;
      }
      case NodeKind::Binary: {
        switch (static_cast<BinaryOp>(n.op)) {
          case BinaryOp::Add:
            for (std::size_t k = 0; k < kJetSize; ++k) {
              adj[n.a][k] += g[k];
              adj[n.b][k] += g[k];
            }
            break;
          case BinaryOp::Sub:
            for (std::size_t k = 0; k < kJetSize; ++k) {
              adj[n.a][k] += g[k];
              adj[n.b][k] -= g[k];
            }
            break;
          case BinaryOp::Mul: {
            // Copy first: a and b may be the same node.
            const JetArray gi = g;
            multiply_adjoint(gi, jets[n.b], adj[n.a]);
            multiply_adjoint(gi, jets[n.a], adj[n.b]);
            break;
          }
        }
        break;
      }
      case NodeKind::Affine: {
        const JetArray gi = g;
        grad[n.b] += gi[0];
        const NodeId* in = operands.data() + n.first;
        const double* w = params.data() + n.arg;
        double* gw = grad.data() + n.arg;
        for (std::uint32_t k = 0; k < n.count; ++k) {
          const JetArray& z = jets[in[k]];
          JetArray& dz = adj[in[k]];
          const double wk = w[k];
          double acc = 0.0;
          for (std::size_t c = 0; c < kJetSize; ++c) {
            dz[c] += wk * gi[c];
            acc += gi[c] * z[c];
          }
          gw[k] += acc;
        }
        break;
      }
      case NodeKind::Entry:
        adj[n.a][static_cast<std::size_t>(n.arg)] += g[0];
        break;
    }
  }
}

Jet eval_jet(const Graph& graph, NodeId node, std::span<const double> params,
             Point point, std::span<const MultiIndex> orders,
             std::span<const JetArray> data) {
  for (MultiIndex m : orders) require_slot(m);
  Workspace ws(graph);
  forward(graph, params, point, data, ws, node);
  return Jet(ws.jet(node), orders);
}

std::vector<double> grad_params(const Graph& graph, NodeId loss,
                                std::span<const double> params, Point point,
                                std::span<const SlotId> slots,
                                std::span<const JetArray> data) {
  Workspace ws(graph);
  forward(graph, params, point, data, ws, loss);
  std::vector<double> full(graph.param_count(), 0.0);
  backward(graph, params, loss, 1.0, ws, full);
  std::vector<double> out;
  out.reserve(slots.size());
  for (SlotId s : slots) {
    if (s >= full.size()) throw Error("gradient requested for unregistered slot");
    if (!std::isfinite(full[s])) {
      throw NonFiniteError("non-finite gradient for parameter slot " +
                               std::to_string(s),
                           -1);
    }
    out.push_back(full[s]);
  }
  return out;
}

}  // namespace btl::ad
