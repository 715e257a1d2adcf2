#include "btl/experiments/experiment.hpp"

#include <algorithm>
#include <exception>
#include <thread>

#include "btl/error.hpp"
#include "btl/network/mlp.hpp"
#include "btl/residuals/forms.hpp"
#include "btl/solutions/backlund.hpp"
#include "btl/solutions/closed_form.hpp"

namespace btl::xp {

namespace {

using ad::Ex;
using forms_view = res::forms::JetView<Ex>;

forms_view view_of(Ex f) {
  return {ad::entry(f, {0, 0}), ad::entry(f, {1, 0}), ad::entry(f, {0, 1}),
          ad::entry(f, {2, 0}), ad::entry(f, {1, 1}), ad::entry(f, {3, 0})};
}

constexpr std::uint64_t kSeedPoints = 1;
constexpr std::uint64_t kSeedNoise = 10;
constexpr std::uint64_t kSeedNetwork = 100;

}  // namespace

Experiment::Experiment(const ExperimentConfig& config, FieldMode mode)
    : config_(config), problem_(make_problem(config)), mode_(mode) {
  if (mode_ == FieldMode::ExactOracle) config_.noise = 0.0;
  samples_.points = sol::latin_hypercube(config_.points, config_.region,
                                         sub_seed(config_.seed, kSeedPoints));
  samples_.noise_level = config_.noise;
  samples_.seed = config_.seed;
  for (std::size_t f = 0; f < problem_.fields.size(); ++f) {
    const FieldDef& def = problem_.fields[f];
    if (!def.data) continue;
    samples_.fields.push_back(sol::sample_field(def.name, *def.closed_form, samples_.points,
                                                config_.noise,
                                                sub_seed(config_.seed, kSeedNoise + f)));
  }
  build_graph();
  fill_point_data();
}

void Experiment::build_graph() {
  ad::Graph& g = graph_;
  const ad::NodeId x = g.input_x();
  const ad::NodeId t = g.input_t();
  const auto& fields = problem_.fields;

  std::uint32_t channel = 0;
  if (mode_ == FieldMode::Network) {
    std::size_t outputs = 0;
    for (const FieldDef& f : fields) outputs += f.complex ? 2 : 1;
    std::vector<ad::NodeId> heads;
    if (config_.shared) {
      net::ParamVector pv({config_.hidden_layers, config_.width, static_cast<int>(outputs),
                           sub_seed(config_.seed, kSeedNetwork)});
      pv.glorot_init();
      heads = net::add_mlp(g, pv, x, t).outputs;
    } else {
      for (std::size_t f = 0; f < fields.size(); ++f) {
        net::ParamVector pv({config_.hidden_layers, config_.width, fields[f].complex ? 2 : 1,
                             sub_seed(config_.seed, kSeedNetwork + f)});
        pv.glorot_init();
        const auto out = net::add_mlp(g, pv, x, t).outputs;
        heads.insert(heads.end(), out.begin(), out.end());
      }
    }
    network_params_ = g.param_count();
    std::size_t h = 0;
    for (const FieldDef& f : fields) {
      FieldNodes n{heads[h++], std::nullopt};
      if (f.complex) n.im = heads[h++];
      field_nodes_.push_back(n);
    }
  } else {
    for (const FieldDef& f : fields) {
      FieldNodes n{g.data(channel++), std::nullopt};
      if (f.complex) n.im = g.data(channel++);
      field_nodes_.push_back(n);
    }
  }
  last_field_node_ = 0;
  for (const FieldNodes& n : field_nodes_) {
    last_field_node_ = std::max({last_field_node_, n.re, n.im.value_or(0)});
  }

  std::vector<FieldNodes> observed(fields.size());
  for (std::size_t f = 0; f < fields.size(); ++f) {
    if (!fields[f].data) continue;
    observed[f].re = g.data(channel++);
    if (fields[f].complex) observed[f].im = g.data(channel++);
  }
  channels_ = channel;

  std::vector<std::pair<std::string, Ex>> globals;
  for (const res::Coefficient& c : problem_.coefficients.all()) {
    if (c.free) {
      const double start = mode_ == FieldMode::ExactOracle ? *c.exact : c.value;
      const ad::SlotId slot = g.add_param_slot(start);
      free_slots_.push_back({c.name, slot});
      globals.emplace_back(c.name, g.ex(g.param(slot)));
    } else {
      globals.emplace_back(c.name, g.ex(g.constant(c.value)));
    }
  }

  std::vector<forms_view> re_view, im_view;
  for (const FieldNodes& n : field_nodes_) {
    re_view.push_back(view_of(g.ex(n.re)));
    im_view.push_back(n.im ? view_of(g.ex(*n.im)) : forms_view{});
  }

  for (const LossTerm& term : problem_.terms) {
    const auto coef = [&](const std::string& name) -> Ex {
      if (const auto it = term.constants.find(name); it != term.constants.end()) {
        return g.ex(g.constant(it->second));
      }
      for (const auto& [n, e] : globals) {
        if (n == name) return e;
      }
      throw ConfigError("term " + term.name + " needs coefficient '" + name + "'");
    };
    const FieldDef& field = fields[term.field];
    const forms_view& u = re_view[term.field];
    Ex re;
    std::optional<Ex> im;
    switch (term.kind) {
      case TermKind::Data: {
        re = u.v - ad::entry(g.ex(observed[term.field].re), {0, 0});
        if (field.complex) {
          im = im_view[term.field].v - ad::entry(g.ex(*observed[term.field].im), {0, 0});
        }
        break;
      }
      case TermKind::Equation: {
        using res::PdeTag;
        switch (term.pde.tag) {
          case PdeTag::SineGordon: re = res::forms::sine_gordon(u); break;
          case PdeTag::GenSineGordon:
            re = res::forms::gen_sine_gordon(u, coef("a"), coef("b"));
            break;
          case PdeTag::FocusingMkdv: re = res::forms::focusing_mkdv(u); break;
          case PdeTag::DefocusingMkdv: re = res::forms::defocusing_mkdv(u); break;
          case PdeTag::Kdv:
            if (field.complex) {
              const auto [r, i] = res::forms::kdv_complex(u, im_view[term.field]);
              re = r;
              im = i;
            } else {
              re = res::forms::kdv(u);
            }
            break;
          case PdeTag::GenMkdv: {
            re = u.t;
            for (const res::Term& m : term.pde.terms) {
              re = re + coef(m.coefficient) * res::forms::monomial(m.monomial, u);
            }
            break;
          }
        }
        break;
      }
      case TermKind::Transform: {
        const forms_view& w = re_view[term.other];
        switch (term.transform) {
          case TransformKind::Abt: {
            const auto [rx, rt] = res::forms::abt(u, w, coef("a"), coef("b"), coef("c"),
                                                  coef("d"), coef("h"), coef("f"));
            re = term.component == 0 ? rx : rt;
            break;
          }
          case TransformKind::MiuraComplex: {
            const auto [r, i] = res::forms::miura_complex(u, w.v, im_view[term.other].v,
                                                          coef("a"), coef("b"), coef("c"),
                                                          coef("d"));
            re = r;
            im = i;
            break;
          }
          case TransformKind::MiuraReal:
            re = res::forms::miura_real(u, w.v, coef("a"), coef("b"), coef("c"), coef("d"));
            break;
        }
        break;
      }
    }
    Ex sq = re * re;
    if (im) sq = sq + *im * *im;
    term_nodes_.push_back(sq.id());
    const auto part = std::find(problem_.parts.begin(), problem_.parts.end(), term.part);
    term_part_.push_back(static_cast<std::size_t>(part - problem_.parts.begin()));
  }

  Ex total = g.ex(term_nodes_.front());
  for (std::size_t k = 1; k < term_nodes_.size(); ++k) total = total + g.ex(term_nodes_[k]);
  total_node_ = total.id();
}

void Experiment::fill_point_data() {
  const std::size_t n = samples_.points.size();
  point_data_.assign(n * channels_, ad::JetArray{});
  const auto& fields = problem_.fields;
  std::size_t channel = 0;
  if (mode_ == FieldMode::ExactOracle) {
    int folds = 0;
    for (const FieldDef& f : fields) folds = std::max(folds, f.backlund_fold);
    std::vector<std::vector<ad::JetArray>> chain;
    if (folds > 0) {
      const sol::SgBacklundChain bt(*fields.front().closed_form,
                                    std::vector<double>(static_cast<std::size_t>(folds),
                                                        config_.beta),
                                    std::vector<double>(static_cast<std::size_t>(folds), 0.0));
      chain = bt.jets(samples_.points);
    }
    for (const FieldDef& f : fields) {
      if (f.backlund_fold > 0) {
        for (std::size_t i = 0; i < n; ++i) {
          point_data_[i * channels_ + channel] = chain[i][static_cast<std::size_t>(f.backlund_fold)];
        }
        ++channel;
        continue;
      }
      const sol::SolutionField exact(*f.closed_form);
      ad::Workspace ws(exact.graph());
      for (std::size_t i = 0; i < n; ++i) {
        const auto [re, im] = exact.jets(samples_.points[i], ws);
        point_data_[i * channels_ + channel] = re;
        if (f.complex) point_data_[i * channels_ + channel + 1] = im;
      }
      channel += f.complex ? 2 : 1;
    }
  }
  for (const sol::SampleField& s : samples_.fields) {
    for (std::size_t i = 0; i < n; ++i) {
      point_data_[i * channels_ + channel][0] = s.re[i];
      if (s.complex) point_data_[i * channels_ + channel + 1][0] = s.im[i];
    }
    channel += s.complex ? 2 : 1;
  }
}

std::span<const ad::JetArray> Experiment::data_at(std::size_t i) const {
  return std::span<const ad::JetArray>(point_data_).subspan(i * channels_, channels_);
}

std::vector<double> Experiment::initial_params() const {
  const auto init = graph_.initial_params();
  return {init.begin(), init.end()};
}

LossValue Experiment::loss(std::span<const double> params, std::span<double> grad) const {
  std::vector<std::uint32_t> all(samples_.points.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint32_t>(i);
  return loss_on(params, all, grad);
}

LossValue Experiment::loss_on(std::span<const double> params,
                              std::span<const std::uint32_t> indices,
                              std::span<double> grad) const {
  if (params.size() != param_count()) throw Error("parameter vector has the wrong length");
  if (!grad.empty() && grad.size() != param_count()) throw Error("gradient has the wrong length");
  if (indices.empty()) throw Error("loss over an empty point set");
  const std::size_t n = indices.size();
  const std::size_t chunks = std::min<std::size_t>(static_cast<std::size_t>(config_.chunks), n);
  const std::size_t terms = term_nodes_.size();
  const double weight = 1.0 / static_cast<double>(n);
  const bool want_grad = !grad.empty();

  std::vector<std::vector<double>> term_acc(chunks, std::vector<double>(terms, 0.0));
  std::vector<std::vector<double>> grad_acc(
      want_grad ? chunks : 0, std::vector<double>(param_count(), 0.0));

  const auto run_chunk = [&](std::size_t c, ad::Workspace& ws) {
    const std::size_t begin = c * n / chunks, end = (c + 1) * n / chunks;
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t i = indices[k];
      ad::forward(graph_, params, samples_.points[i], data_at(i), ws, total_node_);
      for (std::size_t j = 0; j < terms; ++j) term_acc[c][j] += ws.jet(term_nodes_[j])[0];
      if (want_grad) ad::backward(graph_, params, total_node_, weight, ws, grad_acc[c]);
    }
  };

  const std::size_t threads =
      std::min<std::size_t>(static_cast<std::size_t>(config_.threads), chunks);
  if (threads <= 1) {
    ad::Workspace ws(graph_);
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c, ws);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (std::size_t tid = 0; tid < threads; ++tid) {
      pool.emplace_back([&, tid] {
        try {
          ad::Workspace ws(graph_);
          for (std::size_t c = tid; c < chunks; c += threads) run_chunk(c, ws);
        } catch (...) {
          errors[tid] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  LossValue out;
  out.terms.assign(terms, 0.0);
  out.parts.assign(problem_.parts.size(), 0.0);
  for (std::size_t c = 0; c < chunks; ++c) {
    for (std::size_t j = 0; j < terms; ++j) out.terms[j] += term_acc[c][j];
  }
  for (std::size_t j = 0; j < terms; ++j) {
    out.terms[j] *= weight;
    out.parts[term_part_[j]] += out.terms[j];
  }
  for (double p : out.parts) out.total += p;
  if (want_grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t c = 0; c < chunks; ++c) {
      for (std::size_t s = 0; s < grad.size(); ++s) grad[s] += grad_acc[c][s];
    }
  }
  return out;
}

std::vector<double> Experiment::point_terms(std::span<const double> params, std::size_t i) const {
  if (i >= samples_.points.size()) throw Error("sample index out of range");
  ad::Workspace ws(graph_);
  ad::forward(graph_, params, samples_.points[i], data_at(i), ws, total_node_);
  std::vector<double> out;
  for (ad::NodeId id : term_nodes_) out.push_back(ws.jet(id)[0]);
  return out;
}

std::vector<std::pair<ad::JetArray, ad::JetArray>> Experiment::field_jets(
    std::span<const double> params, std::size_t i) const {
  if (i >= samples_.points.size()) throw Error("sample index out of range");
  ad::Workspace ws(graph_);
  ad::forward(graph_, params, samples_.points[i], data_at(i), ws, total_node_);
  std::vector<std::pair<ad::JetArray, ad::JetArray>> out;
  for (const FieldNodes& n : field_nodes_) {
    out.emplace_back(ws.jet(n.re), n.im ? ws.jet(*n.im) : ad::JetArray{});
  }
  return out;
}

std::vector<FieldValues> Experiment::predict(std::span<const double> params,
                                             std::span<const ad::Point> points) const {
  if (mode_ != FieldMode::Network) throw Error("predict needs network fields");
  std::vector<FieldValues> out;
  for (const FieldDef& f : problem_.fields) out.push_back({f.name, {}, {}});
  const std::vector<ad::JetArray> zeros(channels_, ad::JetArray{});
  ad::Workspace ws(graph_);
  for (const ad::Point& p : points) {
    ad::forward(graph_, params, p, zeros, ws, last_field_node_);
    for (std::size_t f = 0; f < field_nodes_.size(); ++f) {
      out[f].re.push_back(ws.jet(field_nodes_[f].re)[0]);
      if (field_nodes_[f].im) out[f].im.push_back(ws.jet(*field_nodes_[f].im)[0]);
    }
  }
  return out;
}

res::EquationParams Experiment::coefficients(std::span<const double> params) const {
  res::EquationParams out = problem_.coefficients;
  for (const FreeSlot& s : free_slots_) out.set_value(s.name, params[s.slot]);
  return out;
}

double Experiment::data_loss(const LossValue& value) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < problem_.terms.size(); ++j) {
    if (problem_.terms[j].kind == TermKind::Data) sum += value.terms[j];
  }
  return sum;
}

}  // namespace btl::xp
