#pragma once

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "blowuplab/common.hpp"
#include "blowuplab/exponents.hpp"
#include "blowuplab/problem.hpp"

namespace blowuplab {

// Line-oriented configuration:  `key = value` grouped under [problem],
// [grid], [sweep]; `#` starts a comment.  Every field is optional at the
// parse stage so command-line flags can fill or override them; the required
// problem keys (n, p, mu, beta, eps) are enforced by make_problem.
struct ConfigData {
  std::optional<int> n;
  std::optional<double> p, mu, beta, eps, R;
  std::optional<double> f_amplitude, f_radius;
  std::optional<int> f_smoothness;
  std::optional<double> g_amplitude, g_radius;
  std::optional<int> g_smoothness;
  std::optional<bool> nonlinear;

  std::optional<double> dr, cfl, t_max, r_max;
  std::optional<int> trace_stride;

  std::vector<double> eps_values;
  std::optional<int> theorem;  // 1, 2, 3: which lifespan track the sweep tests
  std::optional<double> lifespan_guess;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& v, int line) {
  const std::string t = trim(v);
  char* rest = nullptr;
  const double x = std::strtod(t.c_str(), &rest);
  if (rest == t.c_str() || *rest != '\0')
    throw contract_error("config line " + std::to_string(line) +
                         ": expected a number, got '" + t + "'");
  return x;
}

inline int parse_int(const std::string& v, int line) {
  const std::string t = trim(v);
  char* rest = nullptr;
  const long x = std::strtol(t.c_str(), &rest, 10);
  if (rest == t.c_str() || *rest != '\0')
    throw contract_error("config line " + std::to_string(line) +
                         ": expected an integer, got '" + t + "'");
  return static_cast<int>(x);
}

inline bool parse_bool(const std::string& v, int line) {
  const std::string t = trim(v);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw contract_error("config line " + std::to_string(line) +
                       ": expected true/false, got '" + t + "'");
}

inline std::vector<double> parse_list(const std::string& v, int line) {
  std::string t = v;
  for (char& c : t)
    if (c == ',') c = ' ';
  std::istringstream in(t);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(tok, line));
  if (out.empty())
    throw contract_error("config line " + std::to_string(line) +
                         ": expected a list of numbers");
  return out;
}

}  // namespace detail

inline ConfigData parse_config_text(const std::string& text) {
  ConfigData cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = detail::trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw contract_error("config line " + std::to_string(line) +
                             ": malformed section header '" + s + "'");
      section = s.substr(1, s.size() - 2);
      if (section != "problem" && section != "grid" && section != "sweep")
        throw contract_error("config line " + std::to_string(line) +
                             ": unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw contract_error("config line " + std::to_string(line) +
                           ": expected 'key = value', got '" + s + "'");
    const std::string key = detail::trim(s.substr(0, eq));
    const std::string val = detail::trim(s.substr(eq + 1));
    if (section.empty())
      throw contract_error("config line " + std::to_string(line) + ": key '" +
                           key + "' appears before any [section]");
    if (val.empty())
      throw contract_error("config line " + std::to_string(line) +
                           ": empty value for key '" + key + "'");

    if (section == "problem") {
      if (key == "n") cfg.n = detail::parse_int(val, line);
      else if (key == "p") cfg.p = detail::parse_double(val, line);
      else if (key == "mu") cfg.mu = detail::parse_double(val, line);
      else if (key == "beta") cfg.beta = detail::parse_double(val, line);
      else if (key == "eps") cfg.eps = detail::parse_double(val, line);
      else if (key == "R") cfg.R = detail::parse_double(val, line);
      else if (key == "f_amplitude") cfg.f_amplitude = detail::parse_double(val, line);
      else if (key == "f_radius") cfg.f_radius = detail::parse_double(val, line);
      else if (key == "f_smoothness") cfg.f_smoothness = detail::parse_int(val, line);
      else if (key == "g_amplitude") cfg.g_amplitude = detail::parse_double(val, line);
      else if (key == "g_radius") cfg.g_radius = detail::parse_double(val, line);
      else if (key == "g_smoothness") cfg.g_smoothness = detail::parse_int(val, line);
      else if (key == "nonlinear") cfg.nonlinear = detail::parse_bool(val, line);
      else
        throw contract_error("config line " + std::to_string(line) +
                             ": unknown key '" + key + "' in section [problem]");
    } else if (section == "grid") {
      if (key == "dr") cfg.dr = detail::parse_double(val, line);
      else if (key == "cfl") cfg.cfl = detail::parse_double(val, line);
      else if (key == "t_max") cfg.t_max = detail::parse_double(val, line);
      else if (key == "r_max") cfg.r_max = detail::parse_double(val, line);
      else if (key == "trace_stride") cfg.trace_stride = detail::parse_int(val, line);
      else
        throw contract_error("config line " + std::to_string(line) +
                             ": unknown key '" + key + "' in section [grid]");
    } else {  // sweep
      if (key == "eps_values") cfg.eps_values = detail::parse_list(val, line);
      else if (key == "theorem") cfg.theorem = detail::parse_int(val, line);
      else if (key == "lifespan_guess") cfg.lifespan_guess = detail::parse_double(val, line);
      else
        throw contract_error("config line " + std::to_string(line) +
                             ": unknown key '" + key + "' in section [sweep]");
    }
  }
  return cfg;
}

inline ConfigData parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw contract_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

inline LifespanVariant variant_from_theorem(int theorem) {
  switch (theorem) {
    case 1: return LifespanVariant::General;
    case 2: return LifespanVariant::TwoDLowP;
    case 3: return LifespanVariant::OneD;
  }
  throw contract_error("theorem must be 1, 2, or 3");
}

// Builds the problem from the merged configuration, enforcing the required
// keys and applying defaults for the rest.
inline ProblemConfig make_problem(const ConfigData& cfg) {
  std::string missing;
  auto need = [&missing](bool have, const char* name) {
    if (!have) missing += missing.empty() ? name : (std::string(", ") + name);
  };
  need(cfg.n.has_value(), "n");
  need(cfg.p.has_value(), "p");
  need(cfg.mu.has_value(), "mu");
  need(cfg.beta.has_value(), "beta");
  need(cfg.eps.has_value(), "eps");
  if (!missing.empty())
    throw contract_error("missing required problem key(s): " + missing);

  ProblemConfig pc;
  pc.n = *cfg.n;
  pc.p = *cfg.p;
  pc.mu = *cfg.mu;
  pc.beta = *cfg.beta;
  pc.eps = *cfg.eps;
  pc.R = cfg.R.value_or(1.0);
  pc.f = RadialProfile{cfg.f_amplitude.value_or(1.0),
                       cfg.f_radius.value_or(1.0),
                       cfg.f_smoothness.value_or(3)};
  pc.g = RadialProfile{cfg.g_amplitude.value_or(1.0),
                       cfg.g_radius.value_or(1.0),
                       cfg.g_smoothness.value_or(3)};
  pc.nonlinear = cfg.nonlinear.value_or(true);
  pc.validate();
  return pc;
}

// Canonical rendering of the resolved configuration; unset optional fields
// render as `auto`.  This is what lands in the .manifest sidecars.
inline std::string render_config(const ConfigData& cfg) {
  auto num = [](const std::optional<double>& v) {
    return v ? fmt_g(*v) : std::string("auto");
  };
  auto integer = [](const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string("auto");
  };
  std::string out;
  out += "[problem]\n";
  out += "n = " + integer(cfg.n) + "\n";
  out += "p = " + num(cfg.p) + "\n";
  out += "mu = " + num(cfg.mu) + "\n";
  out += "beta = " + num(cfg.beta) + "\n";
  out += "eps = " + num(cfg.eps) + "\n";
  out += "R = " + fmt_g(cfg.R.value_or(1.0)) + "\n";
  out += "f_amplitude = " + fmt_g(cfg.f_amplitude.value_or(1.0)) + "\n";
  out += "f_radius = " + fmt_g(cfg.f_radius.value_or(1.0)) + "\n";
  out += "f_smoothness = " + std::to_string(cfg.f_smoothness.value_or(3)) + "\n";
  out += "g_amplitude = " + fmt_g(cfg.g_amplitude.value_or(1.0)) + "\n";
  out += "g_radius = " + fmt_g(cfg.g_radius.value_or(1.0)) + "\n";
  out += "g_smoothness = " + std::to_string(cfg.g_smoothness.value_or(3)) + "\n";
  out += std::string("nonlinear = ") +
         (cfg.nonlinear.value_or(true) ? "true" : "false") + "\n";
  out += "\n[grid]\n";
  out += "dr = " + num(cfg.dr) + "\n";
  out += "cfl = " + num(cfg.cfl) + "\n";
  out += "t_max = " + num(cfg.t_max) + "\n";
  out += "r_max = " + num(cfg.r_max) + "\n";
  out += "trace_stride = " + integer(cfg.trace_stride) + "\n";
  out += "\n[sweep]\n";
  if (cfg.eps_values.empty()) {
    out += "eps_values = auto\n";
  } else {
    out += "eps_values =";
    for (double e : cfg.eps_values) out += " " + fmt_g(e);
    out += "\n";
  }
  out += "theorem = " + integer(cfg.theorem) + "\n";
  out += "lifespan_guess = " + num(cfg.lifespan_guess) + "\n";
  return out;
}

}  // namespace blowuplab
