#include <cmath>
#include <fstream>
#include <set>

#include "cli.hpp"

namespace bumpdirac::cli {

using nlohmann::json;

namespace {

const std::vector<std::pair<std::string, Command>> kCommands = {
    {"density", Command::density},         {"construct", Command::construct},
    {"concentration", Command::concentration}, {"asymptotics", Command::asymptotics},
    {"channels", Command::channels},       {"validate", Command::validate},
};

[[noreturn]] void reject(const std::string& field, const std::string& what) {
  throw ConfigError(field, "invalid field \"" + field + "\": " + what);
}

void allow_keys(const json& object, const std::string& field, std::initializer_list<const char*> keys) {
  if (!object.is_object()) reject(field, "expected an object");
  std::set<std::string> known(keys.begin(), keys.end());
  for (const auto& [key, value] : object.items())
    if (!known.contains(key)) reject(field.empty() ? key : field + "." + key, "unknown key");
}

double number(const json& object, const char* key, const std::string& field, double fallback) {
  if (!object.contains(key)) return fallback;
  const auto& v = object.at(key);
  const std::string name = field.empty() ? key : field + "." + key;
  if (!v.is_number()) reject(name, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) reject(name, "not finite");
  return x;
}

double positive(const json& object, const char* key, const std::string& field, double fallback) {
  const double x = number(object, key, field, fallback);
  if (!(x > 0.0)) reject(field.empty() ? key : field + "." + key, "must be positive");
  return x;
}

std::size_t count(const json& object, const char* key, const std::string& field, std::size_t fallback) {
  if (!object.contains(key)) return fallback;
  const auto& v = object.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) reject(field.empty() ? key : field + "." + key,
                                                               "expected a nonnegative integer");
  return v.get<std::size_t>();
}

std::vector<double> numbers(const json& v, const std::string& field) {
  if (!v.is_array()) reject(field, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) reject(field, "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<Interval> intervals(const json& v, const std::string& field) {
  if (!v.is_array()) reject(field, "expected [[lower, upper], ...]");
  std::vector<Interval> out;
  for (const auto& pair : v) {
    const auto ends = numbers(pair, field);
    if (ends.size() != 2 || !(ends[0] < ends[1]) || (ends[0] < 0.0 && ends[1] > 0.0) || ends[0] == 0.0 ||
        ends[1] == 0.0)
      reject(field, "each interval needs lower < upper of one sign, excluding 0");
    out.emplace_back(ends[0], ends[1]);
  }
  return out;
}

BumpProfile parse_profile(const json& spec, double width, const std::string& field) {
  if (spec.is_string()) {
    const auto name = spec.get<std::string>();
    if (name == "rect") return BumpProfile::rectangular(width);
    if (name == "cos") return BumpProfile::raised_cosine(width);
    if (name == "tri") return BumpProfile::triangular(width);
    reject(field, "profile must be \"rect\", \"cos\", \"tri\" or {\"samples\": [...]}");
  }
  if (spec.is_object() && spec.contains("samples")) {
    allow_keys(spec, field, {"samples"});
    const auto samples = numbers(spec.at("samples"), field + ".samples");
    try {
      return normalize_profile(samples, width);
    } catch (const Error& e) {
      reject(field, e.what());
    }
  }
  reject(field, "profile must be \"rect\", \"cos\", \"tri\" or {\"samples\": [...]}");
}

json read_json_file(const std::filesystem::path& path, const std::string& field) {
  std::ifstream in(path);
  if (!in) reject(field, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(field, path.string() + ": " + e.what());
  }
}

GridSpec parse_grid(const json& g) {
  allow_keys(g, "grid", {"min", "max", "count", "sign"});
  GridSpec grid;
  grid.min = number(g, "min", "grid", grid.min);
  grid.max = number(g, "max", "grid", grid.max);
  grid.count = count(g, "count", "grid", grid.count);
  if (g.contains("sign")) {
    const auto& s = g.at("sign");
    const std::string sign = s.is_string() ? s.get<std::string>() : "";
    if (sign == "positive")
      grid.sign = GridSign::positive;
    else if (sign == "negative")
      grid.sign = GridSign::negative;
    else if (sign == "both")
      grid.sign = GridSign::both;
    else
      reject("grid", "sign must be \"positive\", \"negative\" or \"both\"");
  }
  if (grid.count < 1) reject("grid", "count must be at least 1");
  if (!(grid.min <= grid.max)) reject("grid", "min must not exceed max");
  if (grid.min <= 0.0 && grid.max >= 0.0) reject("grid", "the kappa grid must not contain or span 0");
  if (grid.sign == GridSign::both && grid.min < 0.0) reject("grid", "sign \"both\" needs a positive range");
  if (grid.count == 1 && grid.min != grid.max) reject("grid", "a single node needs min == max");
  return grid;
}

void parse_construction(const json& c, ConstructionConfig& out) {
  const std::string f = "construction";
  allow_keys(c, f,
             {"stages", "bumps_per_stage", "heights", "profile", "width", "epsilon", "growth",
              "tests_per_component", "fixed_thresholds", "channel"});
  out.stages = count(c, "stages", f, out.stages);
  out.bumps_per_stage = count(c, "bumps_per_stage", f, out.bumps_per_stage);
  out.tests_per_component = count(c, "tests_per_component", f, out.tests_per_component);
  if (out.stages == 0 || out.bumps_per_stage == 0 || out.tests_per_component == 0)
    reject(f, "stages, bumps_per_stage and tests_per_component must be positive");
  const double width = positive(c, "width", f, 1.0);
  out.bumps.profile = parse_profile(c.value("profile", json("rect")), width, f + ".profile");
  if (c.contains("heights")) {
    const auto& h = c.at("heights");
    const std::string hf = f + ".heights";
    allow_keys(h, hf, {"mode", "height", "custom"});
    const std::string mode = h.value("mode", std::string("inverse_sqrt"));
    if (mode == "identical")
      out.bumps.mode = HeightMode::identical;
    else if (mode == "inverse_sqrt")
      out.bumps.mode = HeightMode::inverse_sqrt;
    else if (mode == "custom")
      out.bumps.mode = HeightMode::custom;
    else
      reject(hf + ".mode", "must be \"identical\", \"inverse_sqrt\" or \"custom\"");
    out.bumps.height = number(h, "height", hf, out.bumps.height);
    if (out.bumps.height < 0.0) reject(hf + ".height", "must be nonnegative");
    if (h.contains("custom")) out.bumps.custom = numbers(h.at("custom"), hf + ".custom");
    if (out.bumps.mode == HeightMode::custom &&
        out.bumps.custom.size() < out.stages * out.bumps_per_stage)
      reject(hf + ".custom", "needs one height per bump");
  }
  if (c.contains("epsilon")) {
    const auto& e = c.at("epsilon");
    const std::string ef = f + ".epsilon";
    allow_keys(e, ef, {"mode", "scale", "ratio", "exponent"});
    const std::string mode = e.value("mode", std::string("geometric"));
    if (mode == "geometric")
      out.epsilon.mode = EpsilonMode::geometric;
    else if (mode == "power")
      out.epsilon.mode = EpsilonMode::power;
    else
      reject(ef + ".mode", "must be \"geometric\" or \"power\"");
    out.epsilon.scale = number(e, "scale", ef, out.epsilon.scale);
    out.epsilon.ratio = number(e, "ratio", ef, out.epsilon.ratio);
    out.epsilon.exponent = number(e, "exponent", ef, out.epsilon.exponent);
  }
  try {
    out.epsilon.validate();
  } catch (const Error& e) {
    reject(f + ".epsilon", e.what());
  }
  if (c.contains("growth")) {
    const auto& g = c.at("growth");
    const std::string gf = f + ".growth";
    allow_keys(g, gf, {"mode", "scale", "base", "custom"});
    const std::string mode = g.value("mode", std::string("geometric"));
    if (mode == "geometric")
      out.growth.mode = GrowthMode::geometric;
    else if (mode == "exp_square")
      out.growth.mode = GrowthMode::exp_square;
    else if (mode == "custom")
      out.growth.mode = GrowthMode::custom;
    else
      reject(gf + ".mode", "must be \"geometric\", \"exp_square\" or \"custom\"");
    out.growth.scale = positive(g, "scale", gf, out.growth.scale);
    out.growth.base = positive(g, "base", gf, out.growth.base);
    if (g.contains("custom")) out.growth.custom = numbers(g.at("custom"), gf + ".custom");
    for (double d : out.growth.custom)
      if (!(d > 0.0)) reject(gf + ".custom", "floors must be positive");
  }
  const std::size_t bumps = out.stages * out.bumps_per_stage;
  if (out.growth.mode == GrowthMode::exp_square && bumps > 6)
    reject(f + ".growth", "exponential floors are only materialized for at most 6 bumps");
  if (out.growth.mode == GrowthMode::custom && out.growth.custom.size() < bumps)
    reject(f + ".growth.custom", "needs one floor per bump");
  if (c.contains("fixed_thresholds")) {
    out.fixed_thresholds = numbers(c.at("fixed_thresholds"), f + ".fixed_thresholds");
    for (double t : out.fixed_thresholds)
      if (!(t > 0.0)) reject(f + ".fixed_thresholds", "thresholds must be positive");
  }
  if (c.contains("channel")) {
    if (!c.at("channel").is_number_integer()) reject(f + ".channel", "expected an integer");
    out.channel = c.at("channel").get<int>();
  }
}

}  // namespace

std::string to_string(Command command) {
  for (const auto& [name, c] : kCommands)
    if (c == command) return name;
  return "unknown";
}

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error(message), field_(std::move(field)) {}

std::vector<double> GridSpec::nodes() const {
  std::vector<double> base(count);
  for (std::size_t i = 0; i < count; ++i)
    base[i] = count == 1 ? min : min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
  if (sign == GridSign::positive) return base;
  std::vector<double> out;
  for (auto it = base.rbegin(); it != base.rend(); ++it) out.push_back(-*it);
  if (sign == GridSign::both) out.insert(out.end(), base.begin(), base.end());
  return out;
}

BumpPotential parse_potential(const json& d) {
  allow_keys(d, "potential", {"eta", "bumps", "distances"});
  const double eta = number(d, "eta", "potential", 0.0);
  if (eta < 0.0 || eta >= std::acos(-1.0)) reject("potential.eta", "boundary angle must lie in [0, pi)");
  std::vector<Bump> bumps;
  if (d.contains("bumps")) {
    if (!d.at("bumps").is_array()) reject("potential.bumps", "expected an array");
    std::size_t j = 0;
    for (const auto& b : d.at("bumps")) {
      const std::string f = "potential.bumps[" + std::to_string(j++) + "]";
      allow_keys(b, f, {"height", "width", "profile"});
      const double height = number(b, "height", f, 1.0);
      if (height < 0.0) reject(f + ".height", "must be nonnegative");
      const double width = positive(b, "width", f, 1.0);
      bumps.push_back({height, parse_profile(b.value("profile", json("rect")), width, f + ".profile")});
    }
  }
  std::vector<double> distances;
  if (d.contains("distances")) distances = numbers(d.at("distances"), "potential.distances");
  if (distances.size() != bumps.size()) reject("potential.distances", "needs one distance per bump");
  for (double x : distances)
    if (!(x > 0.0)) reject("potential.distances", "distances must be positive");
  try {
    return BumpPotential(std::move(bumps), std::move(distances), eta);
  } catch (const Error& e) {
    reject("potential", e.what());
  }
}

ExperimentConfig parse_config_json(const json& doc, const std::filesystem::path& base) {
  allow_keys(doc, "",
             {"command", "potential", "grid", "k", "k_max", "tolerances", "eigenvalues", "construction",
              "concentration", "asymptotics", "channels", "validate", "output", "seed", "threads"});
  ExperimentConfig cfg;
  if (!doc.contains("command") || !doc.at("command").is_string()) {
    std::string names;
    for (const auto& [name, c] : kCommands) names += (names.empty() ? "" : ", ") + name;
    reject("command", "missing; valid commands: " + names);
  }
  const auto name = doc.at("command").get<std::string>();
  bool found = false;
  for (const auto& [n, c] : kCommands)
    if (n == name) {
      cfg.command = c;
      found = true;
    }
  if (!found) {
    std::string names;
    for (const auto& [n, c] : kCommands) names += (names.empty() ? "" : ", ") + n;
    reject("command", "unknown command \"" + name + "\"; valid commands: " + names);
  }

  json descriptor = json{{"eta", 0.0}, {"bumps", json::array()}, {"distances", json::array()}};
  if (doc.contains("potential")) {
    const auto& p = doc.at("potential");
    if (p.is_string()) {
      std::filesystem::path path = p.get<std::string>();
      if (path.is_relative() && !base.empty()) path = base / path;
      if (!std::filesystem::exists(path)) reject("potential", "file " + path.string() + " does not exist");
      descriptor = read_json_file(path, "potential");
    } else {
      descriptor = p;
    }
  }
  cfg.potential = parse_potential(descriptor);
  cfg.potential_descriptor = descriptor;

  if (doc.contains("grid")) cfg.grid = parse_grid(doc.at("grid"));

  if (doc.contains("k") && doc.contains("k_max")) reject("k", "give either k or k_max");
  if (doc.contains("k")) {
    for (double k : numbers(doc.at("k"), "k")) {
      if (k != std::round(k) || k == 0.0) reject("k", "channels are nonzero integers");
      cfg.ks.push_back(static_cast<int>(k));
    }
  } else {
    const std::size_t k_max = count(doc, "k_max", "", 1);
    if (k_max < 1) reject("k_max", "must be at least 1");
    for (int k = -static_cast<int>(k_max); k <= static_cast<int>(k_max); ++k)
      if (k != 0) cfg.ks.push_back(k);
  }

  if (doc.contains("tolerances")) {
    const auto& t = doc.at("tolerances");
    allow_keys(t, "tolerances", {"ode", "measure"});
    cfg.tolerances.ode = positive(t, "ode", "tolerances", cfg.tolerances.ode);
    cfg.tolerances.measure = positive(t, "measure", "tolerances", cfg.tolerances.measure);
  }

  if (doc.contains("eigenvalues")) {
    const auto& e = doc.at("eigenvalues");
    allow_keys(e, "eigenvalues", {"b", "lambda_min", "lambda_max"});
    EigenvalueSpec spec;
    spec.b = positive(e, "b", "eigenvalues", spec.b);
    spec.lambda_min = number(e, "lambda_min", "eigenvalues", spec.lambda_min);
    spec.lambda_max = number(e, "lambda_max", "eigenvalues", spec.lambda_max);
    if (!(spec.lambda_min < spec.lambda_max) || (spec.lambda_min < 1.0 && spec.lambda_max > -1.0) ||
        std::abs(spec.lambda_min) <= 1.0 || std::abs(spec.lambda_max) <= 1.0)
      reject("eigenvalues", "lambda range must be increasing and lie on one side outside [-1, 1]");
    if (spec.b <= cfg.potential.support_end()) reject("eigenvalues.b", "must exceed the end of the last bump");
    cfg.eigenvalues = spec;
  }

  if (doc.contains("construction")) parse_construction(doc.at("construction"), cfg.construction);
  cfg.construction.boundary_angle = cfg.potential.boundary_angle();
  cfg.construction.measure.relative_tolerance = cfg.tolerances.measure;
  cfg.construction.measure.density.step.tolerance = cfg.tolerances.ode;
  cfg.construction.concentration.density.step.tolerance = cfg.tolerances.ode;

  cfg.concentration.xi = xi_intervals(1);
  if (doc.contains("concentration")) {
    const auto& c = doc.at("concentration");
    allow_keys(c, "concentration", {"threshold", "xi", "stage", "cells_per_unit"});
    cfg.concentration.threshold = positive(c, "threshold", "concentration", cfg.concentration.threshold);
    cfg.concentration.cells_per_unit = positive(c, "cells_per_unit", "concentration", 64.0);
    if (c.contains("xi") && c.contains("stage")) reject("concentration", "give either xi or stage");
    if (c.contains("xi")) cfg.concentration.xi = intervals(c.at("xi"), "concentration.xi");
    if (c.contains("stage")) {
      const std::size_t n = count(c, "stage", "concentration", 1);
      if (n < 1) reject("concentration.stage", "must be at least 1");
      cfg.concentration.xi = xi_intervals(n);
    }
  }

  if (doc.contains("asymptotics")) {
    const auto& a = doc.at("asymptotics");
    allow_keys(a, "asymptotics", {"heights", "divergence_terms"});
    if (a.contains("heights")) cfg.asymptotics.heights = numbers(a.at("heights"), "asymptotics.heights");
    for (double h : cfg.asymptotics.heights)
      if (!(h > 0.0)) reject("asymptotics.heights", "heights must be positive");
    cfg.asymptotics.divergence_terms = count(a, "divergence_terms", "asymptotics", 0);
  }

  if (doc.contains("channels")) {
    const auto& c = doc.at("channels");
    allow_keys(c, "channels", {"tail_end", "green", "green_lambda", "green_nodes"});
    cfg.channels.tail_end = number(c, "tail_end", "channels", 0.0);
    if (cfg.channels.tail_end < 0.0) reject("channels.tail_end", "must be nonnegative");
    if (c.contains("green")) {
      if (!c.at("green").is_boolean()) reject("channels.green", "expected a boolean");
      cfg.channels.green = c.at("green").get<bool>();
    }
    if (c.contains("green_lambda")) {
      const auto z = numbers(c.at("green_lambda"), "channels.green_lambda");
      if (z.size() != 2) reject("channels.green_lambda", "expected [re, im]");
      if (z[1] == 0.0) reject("channels.green_lambda", "imaginary part must be nonzero");
      cfg.channels.green_re = z[0];
      cfg.channels.green_im = z[1];
    }
    cfg.channels.green_nodes = count(c, "green_nodes", "channels", cfg.channels.green_nodes);
    if (cfg.channels.green_nodes < 2) reject("channels.green_nodes", "must be at least 2");
  }

  if (doc.contains("validate")) {
    const auto& v = doc.at("validate");
    allow_keys(v, "validate", {"samples"});
    cfg.validate.samples = count(v, "samples", "validate", cfg.validate.samples);
    if (cfg.validate.samples < 1) reject("validate.samples", "must be at least 1");
  }

  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    allow_keys(o, "output", {"dir"});
    if (o.contains("dir")) {
      if (!o.at("dir").is_string()) reject("output.dir", "expected a path");
      cfg.out = o.at("dir").get<std::string>();
    }
  }
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) reject("seed", "expected a nonnegative integer");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("threads")) {
    const std::size_t t = count(doc, "threads", "", 1);
    if (t < 1) reject("threads", "must be at least 1");
    cfg.threads = static_cast<unsigned>(t);
  }

  cfg.resolved = doc;
  cfg.resolved["potential"] = descriptor;
  cfg.resolved["grid"] = {{"min", cfg.grid.min},
                          {"max", cfg.grid.max},
                          {"count", cfg.grid.count},
                          {"sign", cfg.grid.sign == GridSign::positive   ? "positive"
                                   : cfg.grid.sign == GridSign::negative ? "negative"
                                                                         : "both"}};
  cfg.resolved["tolerances"] = {{"ode", cfg.tolerances.ode}, {"measure", cfg.tolerances.measure}};
  cfg.resolved["k"] = cfg.ks;
  cfg.resolved.erase("k_max");
  cfg.resolved["seed"] = cfg.seed;
  cfg.resolved["threads"] = cfg.threads;
  return cfg;
}

ExperimentConfig parse_config(const std::string& source) {
  const auto first = source.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && source[first] == '{') {
    try {
      return parse_config_json(json::parse(source));
    } catch (const json::parse_error& e) {
      throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
  }
  const std::filesystem::path path = source;
  if (!std::filesystem::exists(path)) throw ConfigError("config", "config file " + source + " does not exist");
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + source);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", source + ": malformed JSON: " + e.what());
  }
  return parse_config_json(doc, path.parent_path());
}

}  // namespace bumpdirac::cli
