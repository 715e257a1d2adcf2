#include "btl/solutions/closed_form.hpp"

#include <cmath>

namespace btl::sol {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

using ad::Ex;

}  // namespace

ClosedFormNodes build_closed_form(ad::Graph& graph, const SolutionSpec& spec,
                                  ad::NodeId x_node, ad::NodeId t_node) {
  validate(spec);
  const Ex x = graph.ex(x_node);
  const Ex t = graph.ex(t_node);
  return std::visit(
      overloaded{
          [&](const SgBreather& s) -> ClosedFormNodes {
            const double root = std::sqrt(1.0 - s.k * s.k);
            const Ex X = ((1.0 - s.k) * x - (1.0 + s.k) * t) / root;
            const Ex T = ((1.0 - s.k) * x + (1.0 + s.k) * t - s.x0) / root;
            const Ex u = 4.0 * atan(std::tan(s.mu) * sin(std::cos(s.mu) * X) *
                                    sech(std::sin(s.mu) * T));
            return {u.id(), std::nullopt};
          },
          [&](const MkdvBright& s) -> ClosedFormNodes {
            const Ex theta = s.k * x - s.k * s.k * s.k * t + s.x0;
            return {(s.k * sech(theta)).id(), std::nullopt};
          },
          [&](const KdvComplexSoliton& s) -> ClosedFormNodes {
            const double k2 = s.k * s.k;
            const Ex theta = s.k * x - k2 * s.k * t + s.x0;
            const Ex sh = sech(theta);
            const Ex re = k2 * pow(sh, 2);
            const Ex im = -k2 * (sh * tanh(theta));
            return {re.id(), im.id()};
          },
          [&](const MkdvKink& s) -> ClosedFormNodes {
            const Ex theta = s.k * x + s.phase_rate * s.k * s.k * s.k * t + s.x0;
            return {(s.k * tanh(theta)).id(), std::nullopt};
          },
          [&](const KdvPedestalSoliton& s) -> ClosedFormNodes {
            const double k2 = s.k * s.k;
            const Ex theta = s.k * x + 2.0 * k2 * s.k * t + s.x0;
            return {(2.0 * k2 * pow(sech(theta), 2) - k2).id(), std::nullopt};
          },
          [&](const MkdvOneSolitonDT& s) -> ClosedFormNodes {
            const double l = s.lambda1;
            const Ex v1 = 2.0 * l * x - 8.0 * l * l * l * t + 2.0 * s.alpha1;
            return {(2.0 * l * sech(v1)).id(), std::nullopt};
          },
          [&](const MkdvTwoSolitonDT& s) -> ClosedFormNodes {
            const double l1 = s.lambda1, l2 = s.lambda2;
            const Ex v1 = 2.0 * l1 * x - 8.0 * l1 * l1 * l1 * t + 2.0 * s.alpha1;
            const Ex v2 = 2.0 * l2 * x - 8.0 * l2 * l2 * l2 * t + 2.0 * s.alpha2;
            const Ex c1 = cosh(v1), c2 = cosh(v2);
            const Ex num = 2.0 * (l2 * l2 - l1 * l1) * (l2 * c1 - l1 * c2);
            const Ex den = (l1 * l1 + l2 * l2) * (c1 * c2) -
                           2.0 * l1 * l2 * (1.0 + sinh(v1) * sinh(v2));
            return {(num / den).id(), std::nullopt};
          },
      },
      spec);
}

SolutionField::SolutionField(const SolutionSpec& spec) : spec_(spec) {
  const ad::NodeId x = graph_.input_x();
  const ad::NodeId t = graph_.input_t();
  nodes_ = build_closed_form(graph_, spec_, x, t);
}

std::pair<ad::JetArray, ad::JetArray> SolutionField::jets(ad::Point p,
                                                          ad::Workspace& ws) const {
  ad::forward(graph_, graph_.initial_params(), p, {}, ws);
  ad::JetArray im{};
  if (nodes_.im) im = ws.jet(*nodes_.im);
  return {ws.jet(nodes_.re), im};
}

std::pair<ad::JetArray, ad::JetArray> SolutionField::jets(ad::Point p) const {
  ad::Workspace ws(graph_);
  return jets(p, ws);
}

ad::ComplexJet eval_solution(const SolutionSpec& spec, ad::Point point) {
  const SolutionField field(spec);
  const auto [re, im] = field.jets(point);
  return {ad::Jet::full(re), ad::Jet::full(im)};
}

}  // namespace btl::sol
