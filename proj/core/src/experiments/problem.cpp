#include "btl/experiments/problem.hpp"

#include <algorithm>

#include "btl/error.hpp"
#include "btl/experiments/config.hpp"

namespace btl::xp {

namespace {

res::PdeId gen_sine_gordon() { return res::PdeId::fixed(res::PdeTag::GenSineGordon); }

std::string pde_term_name(const res::PdeId& pde, const std::string& field) {
  return std::string(res::to_string(pde.tag)) + ":" + field;
}

void add_data(Problem& p, std::size_t field, const std::string& part) {
  LossTerm t;
  t.name = "data:" + p.fields[field].name;
  t.part = part;
  t.kind = TermKind::Data;
  t.field = field;
  p.terms.push_back(std::move(t));
}

void add_equation(Problem& p, std::size_t field, const res::PdeId& pde, const std::string& part) {
  LossTerm t;
  t.name = pde_term_name(pde, p.fields[field].name);
  t.part = part;
  t.kind = TermKind::Equation;
  t.field = field;
  t.pde = pde;
  p.terms.push_back(std::move(t));
}

void add_abt(Problem& p, std::size_t u, std::size_t up, const std::map<std::string, double>& constants,
             const std::string& part) {
  for (int component = 0; component < 2; ++component) {
    LossTerm t;
    t.name = std::string(component == 0 ? "abt-x:" : "abt-t:") + p.fields[u].name + "," +
             p.fields[up].name;
    t.part = part;
    t.kind = TermKind::Transform;
    t.transform = TransformKind::Abt;
    t.field = u;
    t.other = up;
    t.component = component;
    t.constants = constants;
    p.terms.push_back(std::move(t));
  }
}

void add_miura(Problem& p, std::size_t u, std::size_t v, bool complex,
               const std::map<std::string, double>& constants, const std::string& part) {
  LossTerm t;
  t.name = "miura:" + p.fields[u].name + "," + p.fields[v].name;
  t.part = part;
  t.kind = TermKind::Transform;
  t.transform = complex ? TransformKind::MiuraComplex : TransformKind::MiuraReal;
  t.field = u;
  t.other = v;
  t.constants = constants;
  p.terms.push_back(std::move(t));
}

std::size_t add_field(Problem& p, FieldDef f) {
  p.fields.push_back(std::move(f));
  return p.fields.size() - 1;
}

std::map<std::string, double> abt_constants(double beta) {
  return {{"a", 1.0}, {"b", 2.0 * beta}, {"c", 1.0}, {"d", 2.0 / beta}, {"h", 0.0}, {"f", 0.0}};
}

}  // namespace

std::size_t Problem::field_index(const std::string& name) const {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].name == name) return i;
  }
  throw Error("no field named '" + name + "'");
}

std::vector<std::string> study_coefficients(Study study) {
  switch (study) {
    case Study::SgAbt: return {"a", "b", "c", "d", "h", "f"};
    case Study::BteSg: return {"a", "b"};
    default: return {"a", "b", "c", "d"};
  }
}

std::vector<std::string> default_free(Study study, char case_label) {
  if (case_label == 'B') return study_coefficients(study);
  if (study == Study::SgAbt) return {"a", "b", "c", "d"};
  return {"a", "b"};
}

std::map<std::string, double> exact_coefficients(Study study, double beta) {
  switch (study) {
    case Study::SgAbt: return abt_constants(beta);
    case Study::ComplexMiura: return {{"a", 1.0}, {"b", 1.0}, {"c", 0.0}, {"d", 0.0}};
    case Study::RealMiura: return {{"a", 1.0}, {"b", -1.0}, {"c", 0.0}, {"d", 0.0}};
    case Study::FocusingMkdvViaMiura:
    case Study::BteMkdv:
      return {{"a", 6.0}, {"b", 1.0}, {"c", 0.0}, {"d", 0.0}};
    case Study::DefocusingMkdvViaMiura: return {{"a", -6.0}, {"b", 1.0}, {"c", 0.0}, {"d", 0.0}};
    case Study::BteSg: return {{"a", 1.0}, {"b", 0.0}};
  }
  return {};
}

Problem make_problem(const ExperimentConfig& config) {
  config.validate();
  Problem p;
  const auto& s = config.solution;
  const auto exact = exact_coefficients(config.study, config.beta);
  for (const std::string& name : study_coefficients(config.study)) {
    const bool free =
        std::find(config.free.begin(), config.free.end(), name) != config.free.end();
    p.coefficients.add({name, free ? config.initial : exact.at(name), free, exact.at(name)});
  }

  const SchemeTag tag = config.scheme.tag;
  switch (config.study) {
    case Study::SgAbt: {
      const sol::SgBreather breather{s.at("k"), s.at("mu"), s.at("x0")};
      const auto u = add_field(p, {"u", false, true, breather, 0});
      const auto up = add_field(p, {"u'", false, false, std::nullopt, 1});
      const auto sg = res::PdeId::fixed(res::PdeTag::SineGordon);
      p.parts = {"T", "F/u", "G/u'"};
      add_data(p, u, "F/u");
      add_equation(p, u, sg, "F/u");
      add_equation(p, up, sg, "G/u'");
      add_abt(p, u, up, {}, "T");
      p.report_bd = true;
      break;
    }
    case Study::ComplexMiura:
    case Study::RealMiura: {
      const bool complex = config.study == Study::ComplexMiura;
      const double k = s.at("k"), x0 = s.at("x0");
      const auto u = complex ? add_field(p, {"u", false, true, sol::MkdvBright{k, x0}, 0})
                             : add_field(p, {"u", false, true, sol::MkdvKink{k, x0, 2.0}, 0});
      const auto v = complex
                         ? add_field(p, {"v", true, true, sol::KdvComplexSoliton{k, x0}, 0})
                         : add_field(p, {"v", false, true, sol::KdvPedestalSoliton{k, x0}, 0});
      p.parts = {"T", "F/u", "G/u'"};
      add_data(p, u, "F/u");
      add_equation(p, u,
                   res::PdeId::fixed(complex ? res::PdeTag::FocusingMkdv
                                             : res::PdeTag::DefocusingMkdv),
                   "F/u");
      add_data(p, v, "G/u'");
      add_equation(p, v, res::PdeId::fixed(res::PdeTag::Kdv), "G/u'");
      add_miura(p, u, v, complex, {}, "T");
      break;
    }
    case Study::FocusingMkdvViaMiura:
    case Study::DefocusingMkdvViaMiura: {
      const bool complex = config.study == Study::FocusingMkdvViaMiura;
      const double k = s.at("k"), x0 = s.at("x0");
      const auto u = complex ? add_field(p, {"u", false, false, sol::MkdvBright{k, x0}, 0})
                             : add_field(p, {"u", false, false, sol::MkdvKink{k, x0, 2.0}, 0});
      const auto v = complex
                         ? add_field(p, {"v", true, true, sol::KdvComplexSoliton{k, x0}, 0})
                         : add_field(p, {"v", false, true, sol::KdvPedestalSoliton{k, x0}, 0});
      p.parts = {"T", "F/u", "G/u'"};
      add_equation(p, u, res::PdeId::gen_mkdv_discovery(), "F/u");
      add_data(p, v, "G/u'");
      const std::map<std::string, double> transform =
          complex ? std::map<std::string, double>{{"a", 1.0}, {"b", 1.0}, {"c", 0.0}, {"d", 0.0}}
                  : std::map<std::string, double>{{"a", 1.0}, {"b", -1.0}, {"c", 0.0}, {"d", 0.0}};
      add_miura(p, u, v, complex, transform, "T");
      break;
    }
    case Study::BteMkdv: {
      const sol::MkdvOneSolitonDT one{s.at("lambda1"), s.at("alpha1")};
      const auto u0 = add_field(p, {"u0", false, true, one, 0});
      const auto pde = res::PdeId::gen_mkdv_bte();
      if (tag == SchemeTag::BteExplicit) {
        sol::SolutionSpec two;
        try {
          two = res::bt_explicit_image(one, s.at("lambda2"), s.at("alpha2"));
        } catch (const DomainError& e) {
          throw ConfigError(std::string("bte-mkdv solution: ") + e.what());
        }
        const auto u1 = add_field(p, {"u1", false, true, two, 0});
        p.parts = {"u0", "BT", "F"};
        add_data(p, u0, "u0");
        add_data(p, u1, "BT");
        add_equation(p, u0, pde, "F");
        add_equation(p, u1, pde, "F");
      } else {
        p.parts = {"u0", "F"};
        add_data(p, u0, "u0");
        add_equation(p, u0, pde, "F");
      }
      break;
    }
    case Study::BteSg: {
      const sol::SgBreather breather{s.at("k"), s.at("mu"), s.at("x0")};
      const auto u0 = add_field(p, {"u0", false, true, breather, 0});
      if (tag == SchemeTag::BteImplicit) {
        p.parts = {"u0", "BT", "F"};
        add_data(p, u0, "u0");
        std::size_t prev = u0;
        for (int k = 1; k <= config.scheme.fold; ++k) {
          const auto uk = add_field(p, {"u" + std::to_string(k), false, false, std::nullopt, k});
          add_abt(p, prev, uk, abt_constants(config.beta), "BT");
          prev = uk;
        }
        for (std::size_t f = 0; f < p.fields.size(); ++f) {
          add_equation(p, f, gen_sine_gordon(), "F");
        }
      } else {
        p.parts = {"u0", "F"};
        add_data(p, u0, "u0");
        add_equation(p, u0, gen_sine_gordon(), "F");
      }
      break;
    }
  }

  for (const LossTerm& t : p.terms) {
    if (t.kind == TermKind::Data && !p.fields[t.field].data) {
      throw ConfigError("data loss on field " + p.fields[t.field].name + " without a data source");
    }
  }
  return p;
}

}  // namespace btl::xp
