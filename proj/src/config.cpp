#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "lpg/error.hpp"
#include "lpg/harness.hpp"

namespace lpg {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : obj.items())
    if (!ok.count(k)) fail("unknown key '" + k + "' in " + where);
}

double number(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  }
  fail(where + " must be a number (or \"inf\")");
}

std::vector<double> numbers(const json& v, const std::string& where) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& x : v) out.push_back(number(x, where));
  } else {
    out.push_back(number(v, where));
  }
  return out;
}

json number_json(double v) {
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  return json(v);
}

Rational rational(const json& v) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    const auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(std::stol(s));
      return Rational(std::stol(s.substr(0, slash)), std::stol(s.substr(slash + 1)));
    } catch (const std::logic_error&) {
    }
  }
  fail("group.weights entries must be integers or \"num/den\" strings");
}

template <class T>
T get(const json& obj, const char* key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(where + "." + key + " has the wrong type");
  }
}

const std::set<std::string>& experiment_names() {
  static const std::set<std::string> names = [] {
    std::set<std::string> s;
    for (const auto& e : list_experiments()) s.insert(e.name);
    return s;
  }();
  return names;
}

}  // namespace

double ExperimentConfig::tolerance(const std::string& name) const {
  auto it = tolerances.find(name);
  if (it == tolerances.end()) throw ConfigError("no tolerance named '" + name + "'");
  return it->second;
}

const std::vector<double>& ExperimentConfig::list(const std::string& name) const {
  auto it = params.find(name);
  if (it == params.end() || it->second.empty())
    throw ConfigError("experiment '" + experiment + "' needs params." + name);
  return it->second;
}

std::vector<double> ExperimentConfig::list_or(const std::string& name, std::vector<double> fallback) const {
  auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.experiment == b.experiment && a.group == b.group && a.weights == b.weights &&
         a.half_extent == b.half_extent && a.counts == b.counts && a.boundary == b.boundary &&
         a.exponents == b.exponents && a.l_max == b.l_max && a.smoothness == b.smoothness &&
         a.smoothness_b == b.smoothness_b && a.params == b.params && a.options == b.options &&
         a.translations == b.translations && a.family == b.family && a.seed == b.seed &&
         a.output_dir == b.output_dir && a.tolerances == b.tolerances && a.calculus.method == b.calculus.method &&
         a.calculus.degree == b.calculus.degree && a.calculus.tolerance == b.calculus.tolerance &&
         a.calculus.max_degree == b.calculus.max_degree;
}

// Defaults for every tolerance an experiment may consult; configs override individual entries.
static const std::map<std::string, double> kDefaultTolerances = {
    {"slope", 0.1},        {"residual", 0.05},  {"stability", 0.2},     {"oracle", 1e-8},
    {"dilation", 1e-4},    {"translation", 0.01}, {"inequality", 1e-6}, {"bracket", 10.0},
    {"partition", 1e-10},  {"bv", 0.01},        {"bv_threshold", 10.0}, {"transfer", 1e-6},
    {"closed_form", 0.01}, {"partition_bracket", 4.0},
};

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root, "config",
             {"experiment", "group", "grid", "operator", "partition", "params", "options", "translations", "family",
              "output_dir", "tolerances", "calculus"});
  ExperimentConfig c;
  if (!root.contains("experiment")) fail("config needs 'experiment'");
  c.experiment = get<std::string>(root, "experiment", "config");
  if (!experiment_names().count(c.experiment)) fail("unknown experiment '" + c.experiment + "' (see `list`)");

  if (!root.contains("group")) fail("config needs 'group'");
  const auto& g = root["group"];
  check_keys(g, "group", {"kind", "weights"});
  const auto kind = get<std::string>(g, "kind", "group");
  if (kind == "abelian") {
    c.group = GroupKind::AbelianGraded;
    if (!g.contains("weights") || !g["weights"].is_array()) fail("abelian group needs group.weights");
    for (const auto& w : g["weights"]) c.weights.push_back(rational(w));
  } else if (kind == "heisenberg") {
    c.group = GroupKind::Heisenberg1;
    if (g.contains("weights")) fail("group.weights is fixed to (1,1,2) for the Heisenberg group");
  } else {
    fail("group.kind must be 'abelian' or 'heisenberg'");
  }
  try {
    GroupSpec::make(c.group, c.weights);
  } catch (const Error& e) {
    fail(std::string("group: ") + e.what());
  }
  const std::size_t dim = c.group == GroupKind::Heisenberg1 ? 3 : c.weights.size();

  if (!root.contains("grid")) fail("config needs 'grid'");
  const auto& gr = root["grid"];
  check_keys(gr, "grid", {"half_extent", "counts", "boundary"});
  c.half_extent = numbers(gr.at("half_extent"), "grid.half_extent");
  c.counts = get<std::vector<int>>(gr, "counts", "grid");
  if (c.half_extent.size() != dim || c.counts.size() != dim)
    fail("grid.half_extent and grid.counts need " + std::to_string(dim) + " entries");
  for (double e : c.half_extent)
    if (!(e > 0.0) || std::isinf(e)) fail("grid.half_extent entries must be positive and finite");
  c.boundary = c.group == GroupKind::Heisenberg1 ? Boundary::Truncated : Boundary::Periodic;
  if (gr.contains("boundary")) {
    const auto b = get<std::string>(gr, "boundary", "grid");
    if (b == "periodic") c.boundary = Boundary::Periodic;
    else if (b == "truncated") c.boundary = Boundary::Truncated;
    else fail("grid.boundary must be 'periodic' or 'truncated'");
  }
  try {
    Grid(c.half_extent, c.counts, c.boundary);
  } catch (const Error& e) {
    fail(std::string("grid: ") + e.what());
  }

  if (root.contains("operator")) {
    check_keys(root["operator"], "operator", {"exponents"});
    if (root["operator"].contains("exponents")) c.exponents = get<std::vector<int>>(root["operator"], "exponents", "operator");
  }

  if (root.contains("partition")) {
    const auto& p = root["partition"];
    check_keys(p, "partition", {"l_max", "smoothness", "smoothness_b"});
    if (p.contains("l_max")) {
      c.l_max = get<int>(p, "l_max", "partition");
      if (c.l_max != 0 && c.l_max < 2) fail("partition.l_max must be 0 (auto) or >= 2");
    }
    try {
      if (p.contains("smoothness")) c.smoothness = smoothness_from_string(get<std::string>(p, "smoothness", "partition"));
      if (p.contains("smoothness_b"))
        c.smoothness_b = smoothness_from_string(get<std::string>(p, "smoothness_b", "partition"));
    } catch (const InvalidArgument& e) {
      fail(std::string("partition: ") + e.what());
    }
  }

  if (root.contains("params")) {
    if (!root["params"].is_object()) fail("params must be an object");
    for (const auto& [k, v] : root["params"].items()) c.params[k] = numbers(v, "params." + k);
  }
  for (const char* key : {"p", "p1", "p2"})
    if (auto it = c.params.find(key); it != c.params.end())
      for (double p : it->second)
        if (!(p >= 1.0)) fail(std::string("params.") + key + " violates p >= 1 (got " + std::to_string(p) + ")");
  if (auto it = c.params.find("q"); it != c.params.end())
    for (double q : it->second)
      if (!(q > 0.0)) fail("params.q violates q > 0");

  if (root.contains("options")) {
    if (!root["options"].is_object()) fail("options must be an object");
    for (const auto& [k, v] : root["options"].items()) {
      if (!v.is_string()) fail("options." + k + " must be a string");
      c.options[k] = v.get<std::string>();
    }
  }

  if (root.contains("translations")) {
    if (!root["translations"].is_array()) fail("translations must be a list of points");
    for (const auto& h : root["translations"]) {
      auto pt = numbers(h, "translations");
      if (pt.size() != dim) fail("each translation needs " + std::to_string(dim) + " coordinates");
      c.translations.push_back(std::move(pt));
    }
  }

  if (root.contains("family")) {
    const auto& f = root["family"];
    check_keys(f, "family", {"kind", "seed"});
    if (f.contains("kind")) c.family = get<std::string>(f, "kind", "family");
    if (f.contains("seed")) c.seed = get<std::uint64_t>(f, "seed", "family");
  }
  if (c.family != "standard" && c.family != "gaussian") fail("family.kind must be 'standard' or 'gaussian'");
  if (c.family == "standard" && !c.seed) fail("family.seed is mandatory for the randomized standard family");

  if (root.contains("output_dir")) c.output_dir = get<std::string>(root, "output_dir", "config");

  c.tolerances = kDefaultTolerances;
  if (root.contains("tolerances")) {
    if (!root["tolerances"].is_object()) fail("tolerances must be an object");
    for (const auto& [k, v] : root["tolerances"].items()) {
      if (!kDefaultTolerances.count(k)) fail("unknown tolerance '" + k + "'");
      const double t = number(v, "tolerances." + k);
      if (!(t > 0.0) || std::isinf(t)) fail("tolerances." + k + " must be positive and finite");
      c.tolerances[k] = t;
    }
  }

  if (root.contains("calculus")) {
    const auto& k = root["calculus"];
    check_keys(k, "calculus", {"method", "degree", "tolerance", "max_degree"});
    if (k.contains("method")) {
      const auto m = get<std::string>(k, "method", "calculus");
      if (m == "auto") c.calculus.method = Method::Auto;
      else if (m == "symbol") c.calculus.method = Method::ExactSymbol;
      else if (m == "chebyshev") c.calculus.method = Method::Chebyshev;
      else if (m == "dense") c.calculus.method = Method::DenseEig;
      else fail("calculus.method must be auto, symbol, chebyshev or dense");
    }
    if (k.contains("degree")) c.calculus.degree = get<int>(k, "degree", "calculus");
    if (k.contains("tolerance")) c.calculus.tolerance = number(k["tolerance"], "calculus.tolerance");
    if (k.contains("max_degree")) c.calculus.max_degree = get<int>(k, "max_degree", "calculus");
    if (c.calculus.degree < 0 || c.calculus.max_degree < 1 || !(c.calculus.tolerance > 0.0))
      fail("calculus: degree >= 0, max_degree >= 1 and tolerance > 0 required");
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_json(const ExperimentConfig& c) {
  json root;
  root["experiment"] = c.experiment;
  json g;
  g["kind"] = c.group == GroupKind::Heisenberg1 ? "heisenberg" : "abelian";
  if (c.group == GroupKind::AbelianGraded) {
    json w = json::array();
    for (const auto& r : c.weights) w.push_back(r.den == 1 ? json(r.num) : json(r.str()));
    g["weights"] = w;
  }
  root["group"] = g;
  root["grid"] = {{"half_extent", c.half_extent},
                  {"counts", c.counts},
                  {"boundary", c.boundary == Boundary::Periodic ? "periodic" : "truncated"}};
  if (!c.exponents.empty()) root["operator"] = {{"exponents", c.exponents}};
  root["partition"] = {{"l_max", c.l_max}, {"smoothness", to_string(c.smoothness)}, {"smoothness_b", to_string(c.smoothness_b)}};
  json params = json::object();
  for (const auto& [k, v] : c.params) {
    json a = json::array();
    for (double x : v) a.push_back(number_json(x));
    params[k] = a;
  }
  root["params"] = params;
  root["options"] = c.options;
  json tr = json::array();
  for (const auto& h : c.translations) {
    json a = json::array();
    for (double x : h) a.push_back(number_json(x));
    tr.push_back(a);
  }
  root["translations"] = tr;
  json fam = {{"kind", c.family}};
  if (c.seed) fam["seed"] = *c.seed;
  root["family"] = fam;
  root["output_dir"] = c.output_dir;
  root["tolerances"] = c.tolerances;
  root["calculus"] = {{"method", to_string(c.calculus.method)},
                      {"degree", c.calculus.degree},
                      {"tolerance", c.calculus.tolerance},
                      {"max_degree", c.calculus.max_degree}};
  return root.dump(2);
}

}  // namespace lpg
