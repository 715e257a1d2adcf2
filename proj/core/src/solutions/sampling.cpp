#include "btl/solutions/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>

#include <nlohmann/json.hpp>

#include "btl/error.hpp"
#include "btl/solutions/closed_form.hpp"

namespace btl::sol {

std::vector<ad::Point> latin_hypercube(std::size_t n, const Region& region,
                                       std::uint64_t seed) {
  if (n == 0) throw Error("latin_hypercube needs n >= 1");
  region.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::size_t> sx(n), st(n);
  std::iota(sx.begin(), sx.end(), 0);
  std::iota(st.begin(), st.end(), 0);
  std::shuffle(sx.begin(), sx.end(), rng);
  std::shuffle(st.begin(), st.end(), rng);
  const double dn = static_cast<double>(n);
  std::vector<ad::Point> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ux = (static_cast<double>(sx[i]) + unit(rng)) / dn;
    const double ut = (static_cast<double>(st[i]) + unit(rng)) / dn;
    out[i] = {region.x_min + ux * (region.x_max - region.x_min),
              region.t_min + ut * (region.t_max - region.t_min)};
  }
  return out;
}

std::vector<double> add_noise(std::span<const double> values, double level,
                              std::uint64_t seed) {
  if (!(level >= 0.0)) throw Error("noise level must be non-negative");
  std::vector<double> out(values.begin(), values.end());
  if (level == 0.0 || values.size() < 2) return out;
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sigma = std::sqrt(ss / (n - 1.0));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double& v : out) v += level * sigma * gauss(rng);
  return out;
}

SampleField sample_field(const std::string& name, const SolutionSpec& spec,
                         std::span<const ad::Point> points, double noise_level,
                         std::uint64_t seed) {
  const SolutionField exact(spec);
  ad::Workspace ws(exact.graph());
  SampleField f{name, spec, exact.complex(), {}, {}};
  f.re.reserve(points.size());
  for (const ad::Point& p : points) {
    const auto [re, im] = exact.jets(p, ws);
    f.re.push_back(re[0]);
    if (f.complex) f.im.push_back(im[0]);
  }
  f.re = add_noise(f.re, noise_level, seed);
  if (f.complex) f.im = add_noise(f.im, noise_level, seed ^ 0x9e3779b97f4a7c15ull);
  return f;
}

const SampleField& SampleSet::field(std::string_view name) const {
  for (const auto& f : fields) {
    if (f.name == name) return f;
  }
  throw Error("no sampled field named '" + std::string(name) + "'");
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void SampleSet::write_csv(std::ostream& out) const {
  out << "x,t";
  for (const auto& f : fields) {
    if (f.complex) {
      out << ',' << f.name << "_re," << f.name << "_im";
    } else {
      out << ',' << f.name;
    }
  }
  out << '\n';
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << num(points[i].x) << ',' << num(points[i].t);
    for (const auto& f : fields) {
      out << ',' << num(f.re[i]);
      if (f.complex) out << ',' << num(f.im[i]);
    }
    out << '\n';
  }
}

void SampleSet::write_json(std::ostream& out) const {
  nlohmann::ordered_json j;
  j["points"] = points.size();
  j["noise_level"] = noise_level;
  j["seed"] = seed;
  auto& fs = j["fields"] = nlohmann::ordered_json::array();
  for (const auto& f : fields) {
    nlohmann::ordered_json entry;
    entry["name"] = f.name;
    entry["family"] = std::string(to_string(family_of(f.spec)));
    entry["complex"] = f.complex;
    auto& params = entry["parameters"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : parameters(f.spec)) params[k] = v;
    fs.push_back(std::move(entry));
  }
  out << j.dump(2) << '\n';
}

}  // namespace btl::sol
