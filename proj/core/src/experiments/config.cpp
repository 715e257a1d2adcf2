#include "btl/experiments/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "btl/error.hpp"
#include "btl/experiments/problem.hpp"

namespace btl::xp {

namespace {

constexpr std::pair<Study, std::string_view> kStudyNames[] = {
    {Study::SgAbt, "sg-abt"},
    {Study::ComplexMiura, "complex-miura"},
    {Study::RealMiura, "real-miura"},
    {Study::FocusingMkdvViaMiura, "focusing-mkdv-via-miura"},
    {Study::DefocusingMkdvViaMiura, "defocusing-mkdv-via-miura"},
    {Study::BteMkdv, "bte-mkdv"},
    {Study::BteSg, "bte-sg"},
};

constexpr std::pair<SchemeTag, std::string_view> kSchemeNames[] = {
    {SchemeTag::BtDiscovery, "bt-discovery"},
    {SchemeTag::EquationViaBt, "equation-via-bt"},
    {SchemeTag::BteExplicit, "bte-explicit"},
    {SchemeTag::BteImplicit, "bte-implicit"},
    {SchemeTag::PinnBaseline, "pinn-baseline"},
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

[[noreturn]] void fail(const Entry& e, const std::string& msg) {
  throw ConfigError("line " + std::to_string(e.line) + ": " + e.section + "." + e.key +
                    ": " + msg);
}

double parse_double(const Entry& e) {
  double v = 0.0;
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  const auto r = std::from_chars(begin, end, v);
  if (r.ec != std::errc{} || r.ptr != end || !std::isfinite(v)) {
    fail(e, "expected a finite number, got '" + e.value + "'");
  }
  return v;
}

long long parse_int(const Entry& e) {
  long long v = 0;
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  const auto r = std::from_chars(begin, end, v);
  if (r.ec != std::errc{} || r.ptr != end) fail(e, "expected an integer, got '" + e.value + "'");
  return v;
}

int parse_small_int(const Entry& e) {
  const long long v = parse_int(e);
  if (v < -1000000000LL || v > 1000000000LL) fail(e, "integer out of range");
  return static_cast<int>(v);
}

std::size_t parse_count(const Entry& e) {
  const long long v = parse_int(e);
  if (v < 0) fail(e, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

bool parse_bool(const Entry& e) {
  if (e.value == "true") return true;
  if (e.value == "false") return false;
  fail(e, "expected true or false");
}

std::vector<std::string> parse_list(const Entry& e) {
  std::vector<std::string> out;
  std::stringstream ss(e.value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(e, "empty list item");
    out.push_back(item);
  }
  return out;
}

std::vector<Entry> tokenize(std::string_view text) {
  std::vector<Entry> out;
  std::string section;
  std::set<std::pair<std::string, std::string>> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty() || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("line " + std::to_string(line) + ": bad section header");
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line) + ": expected key = value");
    }
    Entry e{section, trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
    if (e.section.empty()) throw ConfigError("line " + std::to_string(line) + ": key outside a section");
    if (e.key.empty()) throw ConfigError("line " + std::to_string(line) + ": empty key");
    if (!seen.insert({e.section, e.key}).second) fail(e, "duplicate key");
    out.push_back(std::move(e));
  }
  return out;
}

const Entry* find(const std::vector<Entry>& entries, std::string_view section,
                  std::string_view key) {
  for (const Entry& e : entries) {
    if (e.section == section && e.key == key) return &e;
  }
  return nullptr;
}

std::map<std::string, double> default_solution(Study study) {
  switch (study) {
    case Study::SgAbt:
    case Study::BteSg:
      return {{"k", 0.0}, {"mu", std::numbers::pi / 4}, {"x0", 0.0}};
    case Study::ComplexMiura:
    case Study::FocusingMkdvViaMiura:
    case Study::DefocusingMkdvViaMiura:
      return {{"k", 0.8}, {"x0", 0.0}};
    case Study::RealMiura:
      return {{"k", 1.0}, {"x0", 0.0}};
    case Study::BteMkdv:
      return {{"alpha1", 1.0}, {"alpha2", 2.0}, {"lambda1", 0.25}, {"lambda2", 1.0 / 3.0}};
  }
  return {};
}

}  // namespace

void SchemeId::validate() const {
  const bool bte = tag == SchemeTag::BteExplicit || tag == SchemeTag::BteImplicit;
  if (bte && fold != 1 && fold != 2) throw ConfigError("BTE schemes need fold 1 or 2");
  if (!bte && fold != 0) throw ConfigError("fold applies to BTE schemes only");
  if (tag == SchemeTag::BteExplicit && fold == 2) {
    throw ConfigError("bte-explicit supports fold 1 only (no closed-form 3-soliton image)");
  }
}

std::string_view to_string(Study study) {
  for (const auto& [s, name] : kStudyNames) {
    if (s == study) return name;
  }
  return "unknown";
}

Study study_from_string(std::string_view name) {
  for (const auto& [s, n] : kStudyNames) {
    if (n == name) return s;
  }
  throw ConfigError("unknown study '" + std::string(name) + "'");
}

std::string_view to_string(SchemeTag tag) {
  for (const auto& [s, name] : kSchemeNames) {
    if (s == tag) return name;
  }
  return "unknown";
}

SchemeTag scheme_from_string(std::string_view name) {
  for (const auto& [s, n] : kSchemeNames) {
    if (n == name) return s;
  }
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

std::vector<SchemeTag> schemes_for(Study study) {
  switch (study) {
    case Study::SgAbt:
    case Study::ComplexMiura:
    case Study::RealMiura:
      return {SchemeTag::BtDiscovery};
    case Study::FocusingMkdvViaMiura:
    case Study::DefocusingMkdvViaMiura:
      return {SchemeTag::EquationViaBt};
    case Study::BteMkdv:
      return {SchemeTag::BteExplicit, SchemeTag::PinnBaseline};
    case Study::BteSg:
      return {SchemeTag::BteImplicit, SchemeTag::PinnBaseline};
  }
  return {};
}

ExperimentConfig default_config(Study study, SchemeId scheme, char case_label) {
  ExperimentConfig c;
  c.study = study;
  c.scheme = scheme;
  c.case_label = case_label;
  c.solution = default_solution(study);
  c.free = default_free(study, case_label);
  c.points = 10000;
  switch (study) {
    case Study::SgAbt:
      c.region = {-10, 10, -5, 5};
      c.optimizer.adam_steps = 20000;
      c.optimizer.lbfgs_steps = 50000;
      break;
    case Study::ComplexMiura:
      c.region = {-10, 10, -10, 10};
      c.optimizer.adam_steps = 10000;
      c.optimizer.lbfgs_steps = 20000;
      break;
    case Study::RealMiura:
      c.region = {-3, 3, -3, 3};
      c.hidden_layers = 6;
      c.width = 20;
      break;
    case Study::FocusingMkdvViaMiura:
      c.region = {-10, 10, -5, 5};
      c.optimizer.adam_steps = 10000;
      c.optimizer.lbfgs_steps = 20000;
      break;
    case Study::DefocusingMkdvViaMiura:
      c.region = {-3, 3, -3, 3};
      c.hidden_layers = 6;
      c.width = 20;
      break;
    case Study::BteMkdv:
      c.region = {-15, 15, -10, 40};
      break;
    case Study::BteSg:
      c.region = {-10, 10, -5, 5};
      break;
  }
  std::string name(to_string(study));
  if (scheme.tag == SchemeTag::PinnBaseline) name += "-pinn";
  if (scheme.fold > 0) name += "-fold" + std::to_string(scheme.fold);
  name += std::string("-case") + case_label;
  c.name = name;
  return c;
}

void ExperimentConfig::validate() const {
  if (name.empty()) throw ConfigError("experiment.name is empty");
  for (char ch : name) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.')) {
      throw ConfigError("experiment.name may contain only letters, digits, '-', '_' and '.'");
    }
  }
  scheme.validate();
  const auto allowed = schemes_for(study);
  if (std::find(allowed.begin(), allowed.end(), scheme.tag) == allowed.end()) {
    throw ConfigError("scheme " + std::string(to_string(scheme.tag)) + " does not apply to study " +
                      std::string(to_string(study)));
  }
  if (case_label != 'A' && case_label != 'B') throw ConfigError("case must be A or B");
  if (study == Study::BteSg && case_label != 'A') throw ConfigError("bte-sg has case A only");

  const auto expected = default_solution(study);
  for (const auto& [key, value] : solution) {
    if (!expected.contains(key)) throw ConfigError("unknown solution parameter '" + key + "'");
    if (!std::isfinite(value)) throw ConfigError("solution." + key + " is not finite");
  }
  if (solution.size() != expected.size()) throw ConfigError("incomplete solution parameters");

  const auto names = study_coefficients(study);
  std::set<std::string> unique;
  for (const std::string& f : free) {
    if (std::find(names.begin(), names.end(), f) == names.end()) {
      throw ConfigError("coefficient '" + f + "' is not part of study " +
                        std::string(to_string(study)));
    }
    if (!unique.insert(f).second) throw ConfigError("coefficient '" + f + "' listed twice");
  }
  if (!std::isfinite(initial)) throw ConfigError("coefficients.initial is not finite");
  if (!std::isfinite(beta) || beta == 0.0) throw ConfigError("coefficients.beta must be nonzero");

  try {
    region.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("sampling region: ") + e.what());
  }
  if (points == 0) throw ConfigError("sampling.points must be positive");
  if (!std::isfinite(noise) || noise < 0) throw ConfigError("sampling.noise must be >= 0");
  if (hidden_layers < 1 || width < 1) throw ConfigError("network size must be positive");
  if (optimizer.adam_steps < 0 || optimizer.lbfgs_steps < 0 || optimizer.coefficient_warmup < 0) {
    throw ConfigError("optimizer step counts must be >= 0");
  }
  if (!(optimizer.adam_lr > 0) || !std::isfinite(optimizer.adam_lr)) {
    throw ConfigError("optimizer.adam_lr must be positive");
  }
  if (optimizer.lbfgs_memory < 1) throw ConfigError("optimizer.lbfgs_memory must be >= 1");
  if (optimizer.lbfgs_rel_tolerance < 0 || optimizer.lbfgs_abs_tolerance < 0 ||
      optimizer.lbfgs_grad_tolerance < 0) {
    throw ConfigError("optimizer tolerances must be >= 0");
  }
  if (threads < 1 || chunks < 1) throw ConfigError("optimizer.threads and chunks must be >= 1");
  if (grid < 2) throw ConfigError("report.grid must be >= 2");
}

ExperimentConfig parse_config(std::string_view text) {
  const std::vector<Entry> entries = tokenize(text);
  const Entry* study = find(entries, "experiment", "study");
  const Entry* scheme = find(entries, "experiment", "scheme");
  if (!study) throw ConfigError("missing experiment.study");
  if (!scheme) throw ConfigError("missing experiment.scheme");
  SchemeId id{scheme_from_string(scheme->value), 0};
  if (const Entry* fold = find(entries, "experiment", "fold")) id.fold = parse_small_int(*fold);
  char case_label = 'A';
  if (const Entry* c = find(entries, "experiment", "case")) {
    if (c->value.size() != 1) fail(*c, "expected A or B");
    case_label = c->value[0];
  }
  ExperimentConfig cfg = default_config(study_from_string(study->value), id, case_label);

  for (const Entry& e : entries) {
    const std::string& s = e.section;
    const std::string& k = e.key;
    if (s == "experiment") {
      if (k == "name") cfg.name = e.value;
      else if (k == "seed") {
        const long long v = parse_int(e);
        if (v < 0) fail(e, "seed must be >= 0");
        cfg.seed = static_cast<std::uint64_t>(v);
      } else if (k != "study" && k != "scheme" && k != "fold" && k != "case") fail(e, "unknown key");
    } else if (s == "solution") {
      if (!cfg.solution.contains(k)) fail(e, "unknown solution parameter");
      cfg.solution[k] = parse_double(e);
    } else if (s == "coefficients") {
      if (k == "free") cfg.free = e.value.empty() ? std::vector<std::string>{} : parse_list(e);
      else if (k == "initial") cfg.initial = parse_double(e);
      else if (k == "beta") cfg.beta = parse_double(e);
      else fail(e, "unknown key");
    } else if (s == "sampling") {
      if (k == "x_min") cfg.region.x_min = parse_double(e);
      else if (k == "x_max") cfg.region.x_max = parse_double(e);
      else if (k == "t_min") cfg.region.t_min = parse_double(e);
      else if (k == "t_max") cfg.region.t_max = parse_double(e);
      else if (k == "points") cfg.points = parse_count(e);
      else if (k == "noise") cfg.noise = parse_double(e);
      else fail(e, "unknown key");
    } else if (s == "network") {
      if (k == "hidden_layers") cfg.hidden_layers = parse_small_int(e);
      else if (k == "width") cfg.width = parse_small_int(e);
      else if (k == "shared") cfg.shared = parse_bool(e);
      else fail(e, "unknown key");
    } else if (s == "optimizer") {
      OptimizerSchedule& o = cfg.optimizer;
      if (k == "adam_steps") o.adam_steps = parse_small_int(e);
      else if (k == "adam_lr") o.adam_lr = parse_double(e);
      else if (k == "batch_size") o.batch_size = parse_count(e);
      else if (k == "coefficient_warmup") o.coefficient_warmup = parse_small_int(e);
      else if (k == "lbfgs_steps") o.lbfgs_steps = parse_small_int(e);
      else if (k == "lbfgs_memory") o.lbfgs_memory = parse_small_int(e);
      else if (k == "lbfgs_rel_tolerance") o.lbfgs_rel_tolerance = parse_double(e);
      else if (k == "lbfgs_abs_tolerance") o.lbfgs_abs_tolerance = parse_double(e);
      else if (k == "lbfgs_grad_tolerance") o.lbfgs_grad_tolerance = parse_double(e);
      else if (k == "threads") cfg.threads = parse_small_int(e);
      else if (k == "chunks") cfg.chunks = parse_small_int(e);
      else fail(e, "unknown key");
    } else if (s == "report") {
      if (k == "grid") cfg.grid = parse_small_int(e);
      else fail(e, "unknown key");
    } else {
      fail(e, "unknown section");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  const auto num = format_double;
  out << "[experiment]\n"
      << "name = " << c.name << "\n"
      << "study = " << to_string(c.study) << "\n"
      << "scheme = " << to_string(c.scheme.tag) << "\n"
      << "fold = " << c.scheme.fold << "\n"
      << "case = " << c.case_label << "\n"
      << "seed = " << c.seed << "\n\n";
  out << "[solution]\n";
  for (const auto& [k, v] : c.solution) out << k << " = " << num(v) << "\n";
  out << "\n[coefficients]\nfree = ";
  for (std::size_t i = 0; i < c.free.size(); ++i) out << (i ? ", " : "") << c.free[i];
  out << "\ninitial = " << num(c.initial) << "\n"
      << "beta = " << num(c.beta) << "\n\n";
  out << "[sampling]\n"
      << "x_min = " << num(c.region.x_min) << "\n"
      << "x_max = " << num(c.region.x_max) << "\n"
      << "t_min = " << num(c.region.t_min) << "\n"
      << "t_max = " << num(c.region.t_max) << "\n"
      << "points = " << c.points << "\n"
      << "noise = " << num(c.noise) << "\n\n";
  out << "[network]\n"
      << "hidden_layers = " << c.hidden_layers << "\n"
      << "width = " << c.width << "\n"
      << "shared = " << (c.shared ? "true" : "false") << "\n\n";
  const OptimizerSchedule& o = c.optimizer;
  out << "[optimizer]\n"
      << "adam_steps = " << o.adam_steps << "\n"
      << "adam_lr = " << num(o.adam_lr) << "\n"
      << "batch_size = " << o.batch_size << "\n"
      << "coefficient_warmup = " << o.coefficient_warmup << "\n"
      << "lbfgs_steps = " << o.lbfgs_steps << "\n"
      << "lbfgs_memory = " << o.lbfgs_memory << "\n"
      << "lbfgs_rel_tolerance = " << num(o.lbfgs_rel_tolerance) << "\n"
      << "lbfgs_abs_tolerance = " << num(o.lbfgs_abs_tolerance) << "\n"
      << "lbfgs_grad_tolerance = " << num(o.lbfgs_grad_tolerance) << "\n"
      << "threads = " << c.threads << "\n"
      << "chunks = " << c.chunks << "\n\n";
  out << "[report]\n"
      << "grid = " << c.grid << "\n";
  return out.str();
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  return fnv1a(serialize_config(config));
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(seed ^ splitmix64(tag));
}

}  // namespace btl::xp
