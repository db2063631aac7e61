#include "dislo/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dislo/error.hpp"

namespace dislo {

namespace {

using nlohmann::json;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"kernel", {"amplitude", "zeta"}},
      {"domain", {"P", "N"}},
      {"smoothing", {"M", "mode", "quadrature_oversample"}},
      {"time", {"dt", "T", "time_mode"}},
      {"solver",
       {"fixed_point_tol", "max_iter", "cfl_mode", "velocity_mode", "positivity_slack",
        "identity_slack"}},
      {"output", {"every_k_steps", "dir"}},
      {"profile", {"kind", "path"}},
  };
  return s;
}

class Reader {
 public:
  explicit Reader(const json& doc) : doc_(doc) {}

  std::vector<std::string> errors;

  const json* find(const std::string& section, const std::string& key) const {
    if (!doc_.is_object()) return nullptr;
    auto s = doc_.find(section);
    if (s == doc_.end() || !s->is_object()) return nullptr;
    auto k = s->find(key);
    return k == s->end() ? nullptr : &*k;
  }

  void number(const std::string& section, const std::string& key, double& out) {
    const json* v = find(section, key);
    if (!v) return;
    if (!v->is_number()) {
      errors.push_back(section + "." + key + ": type mismatch, expected number");
      return;
    }
    out = v->get<double>();
  }

  template <class Int>
  void integer(const std::string& section, const std::string& key, Int& out) {
    const json* v = find(section, key);
    if (!v) return;
    if (!v->is_number_integer()) {
      errors.push_back(section + "." + key + ": type mismatch, expected integer");
      return;
    }
    const long long x = v->get<long long>();
    if (x < 0 && std::is_unsigned_v<Int>) {
      errors.push_back(section + "." + key + ": must be nonnegative");
      return;
    }
    out = static_cast<Int>(x);
  }

  void string(const std::string& section, const std::string& key, std::string& out) {
    const json* v = find(section, key);
    if (!v) return;
    if (!v->is_string()) {
      errors.push_back(section + "." + key + ": type mismatch, expected string");
      return;
    }
    out = v->get<std::string>();
  }

  template <class E, class F>
  void enumeration(const std::string& section, const std::string& key, E& out, F from_string) {
    std::string s;
    const json* v = find(section, key);
    if (!v) return;
    string(section, key, s);
    if (!v->is_string()) return;
    try {
      out = from_string(s);
    } catch (const ConfigError&) {
      errors.push_back(section + "." + key + ": unknown value '" + s + "'");
    }
  }

  void unknown_keys() {
    if (!doc_.is_object()) {
      errors.push_back("(root): expected a JSON object");
      return;
    }
    for (auto it = doc_.begin(); it != doc_.end(); ++it) {
      auto s = schema().find(it.key());
      if (s == schema().end()) {
        errors.push_back(it.key() + ": unknown key");
        continue;
      }
      if (!it->is_object()) {
        errors.push_back(it.key() + ": type mismatch, expected object");
        continue;
      }
      for (auto k = it->begin(); k != it->end(); ++k) {
        if (!s->second.count(k.key())) errors.push_back(it.key() + "." + k.key() + ": unknown key");
      }
    }
  }

 private:
  const json& doc_;
};

std::vector<std::string> constraint_violations(const RunConfig& c) {
  std::vector<std::string> bad;
  if (!(c.kernel.zeta > 0.0) || !std::isfinite(c.kernel.zeta)) {
    bad.push_back("kernel.zeta: must be positive");
  }
  if (!(c.kernel.amplitude >= 0.0) || !std::isfinite(c.kernel.amplitude)) {
    bad.push_back("kernel.amplitude: must be nonnegative");
  }
  if (!(c.P >= 1.0) || !std::isfinite(c.P)) bad.push_back("domain.P: P >= 1 required");
  if (c.P < c.kernel.zeta) bad.push_back("domain.P: P >= zeta required");
  if (c.N < 1) bad.push_back("domain.N: must be a positive integer");
  if (c.M < 1) bad.push_back("smoothing.M: must be a positive integer");
  if (c.M >= 1 && c.N < static_cast<std::size_t>(c.M)) bad.push_back("smoothing.M: N >= M required");
  if (c.quadrature_oversample < 4) bad.push_back("smoothing.quadrature_oversample: must be >= 4");
  if (c.profile.kind != "arctan" && c.profile.kind != "table") {
    bad.push_back("profile.kind: unknown value '" + c.profile.kind + "'");
  }
  if (c.profile.kind == "table" && c.profile.path.empty()) {
    bad.push_back("profile.path: required for kind 'table'");
  }
  if (c.scheme.dt > c.scheme.T) bad.push_back("time.dt: dt <= T required");
  try {
    c.scheme.validate();
  } catch (const ConfigError& e) {
    bad.insert(bad.end(), e.violations().begin(), e.violations().end());
  }
  return bad;
}

}  // namespace

RunConfig parse_config(const json& doc) {
  RunConfig c;
  if (doc.is_null()) return c;
  Reader r(doc);
  r.unknown_keys();
  if (!doc.is_object()) throw ConfigError(r.errors);

  r.number("kernel", "amplitude", c.kernel.amplitude);
  r.number("kernel", "zeta", c.kernel.zeta);
  r.number("domain", "P", c.P);
  r.integer("domain", "N", c.N);
  r.integer("smoothing", "M", c.M);
  r.enumeration("smoothing", "mode", c.sigma_mode, sigma_mode_from_string);
  r.integer("smoothing", "quadrature_oversample", c.quadrature_oversample);
  r.number("time", "dt", c.scheme.dt);
  r.number("time", "T", c.scheme.T);
  r.enumeration("time", "time_mode", c.scheme.time_mode, time_mode_from_string);
  r.number("solver", "fixed_point_tol", c.scheme.fixed_point_tol);
  r.integer("solver", "max_iter", c.scheme.fixed_point_max_iter);
  r.enumeration("solver", "cfl_mode", c.scheme.cfl_mode, cfl_mode_from_string);
  r.enumeration("solver", "velocity_mode", c.scheme.velocity_mode, velocity_mode_from_string);
  r.number("solver", "positivity_slack", c.scheme.positivity_slack);
  r.number("solver", "identity_slack", c.scheme.identity_slack);
  r.integer("output", "every_k_steps", c.output.every_k_steps);
  r.string("output", "dir", c.output.dir);
  r.string("profile", "kind", c.profile.kind);
  r.string("profile", "path", c.profile.path);

  auto bad = std::move(r.errors);
  auto more = constraint_violations(c);
  bad.insert(bad.end(), more.begin(), more.end());
  if (!bad.empty()) throw ConfigError(std::move(bad));
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  json doc;
  try {
    doc = text.find_first_not_of(" \t\r\n") == std::string::npos ? json::object() : json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  json j;
  j["kernel"] = {{"amplitude", c.kernel.amplitude}, {"zeta", c.kernel.zeta}};
  j["domain"] = {{"P", c.P}, {"N", c.N}};
  j["smoothing"] = {{"M", c.M},
                    {"mode", to_string(c.sigma_mode)},
                    {"quadrature_oversample", c.quadrature_oversample}};
  j["time"] = {{"dt", c.scheme.dt}, {"T", c.scheme.T}, {"time_mode", to_string(c.scheme.time_mode)}};
  j["solver"] = {{"fixed_point_tol", c.scheme.fixed_point_tol},
                 {"max_iter", c.scheme.fixed_point_max_iter},
                 {"cfl_mode", to_string(c.scheme.cfl_mode)},
                 {"velocity_mode", to_string(c.scheme.velocity_mode)},
                 {"positivity_slack", c.scheme.positivity_slack},
                 {"identity_slack", c.scheme.identity_slack}};
  j["output"] = {{"every_k_steps", c.output.every_k_steps}, {"dir", c.output.dir}};
  j["profile"] = {{"kind", c.profile.kind}, {"path", c.profile.path}};
  return j;
}

void validate(const RunConfig& c) {
  auto bad = constraint_violations(c);
  if (!bad.empty()) throw ConfigError(std::move(bad));
}

InitialProfile make_profile(const RunConfig& c) {
  if (c.profile.kind == "table") return InitialProfile::load_csv(c.profile.path);
  return InitialProfile::arctan();
}

RunConfig with_override(const RunConfig& c, const std::string& dotted_key, const json& value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos) throw ConfigError(dotted_key + ": expected section.key");
  json j = to_json(c);
  j[dotted_key.substr(0, dot)][dotted_key.substr(dot + 1)] = value;
  return parse_config(j);
}

}  // namespace dislo
