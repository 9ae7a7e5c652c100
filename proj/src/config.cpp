#include "ssmbeam/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "ssmbeam/errors.hpp"

namespace ssmbeam {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) throw ValidationError("not a number: '" + s + "'");
  return v;
}

int to_int(const std::string& s) {
  int v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) throw ValidationError("not an integer: '" + s + "'");
  return v;
}

std::vector<double> to_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) out.push_back(to_double(item));
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

// "start:stop:count" (inclusive, uniform) or a comma list.
std::vector<double> to_grid(const std::string& s) {
  if (s.find(':') == std::string::npos) return to_list(s);
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw ValidationError("grid must be start:stop:count");
  const double a = to_double(parts[0]);
  const double b = to_double(parts[1]);
  const int n = to_int(parts[2]);
  if (n < 1) throw ValidationError("grid count must be >= 1");
  if (n == 1) return {a};
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = a + (b - a) * k / (n - 1);
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"alpha", [](RunConfig& c, const std::string& v) { c.params.alpha = to_double(v); }},
      {"beta", [](RunConfig& c, const std::string& v) { c.params.beta = to_double(v); }},
      {"gamma", [](RunConfig& c, const std::string& v) { c.params.gamma = to_double(v); }},
      {"delta", [](RunConfig& c, const std::string& v) { c.params.delta = to_double(v); }},
      {"mu", [](RunConfig& c, const std::string& v) { c.params.mu = to_double(v); }},
      {"kappa", [](RunConfig& c, const std::string& v) { c.params.kappa = to_double(v); }},
      {"epsilon", [](RunConfig& c, const std::string& v) { c.params.epsilon = to_double(v); }},
      {"omega",
       [](RunConfig& c, const std::string& v) { c.params.omega = c.forcing.omega = to_double(v); }},
      {"forcing",
       [](RunConfig& c, const std::string& v) {
         c.forcing.modal_amplitudes.clear();
         for (const auto& item : split(v, ',')) {
           const auto kv = split(item, ':');
           if (kv.size() != 2) throw ValidationError("forcing entries must be mode:amplitude");
           c.forcing.modal_amplitudes[to_int(kv[0])] = to_double(kv[1]);
         }
       }},
      {"n_modes", [](RunConfig& c, const std::string& v) { c.galerkin.n_modes = to_int(v); }},
      {"dt", [](RunConfig& c, const std::string& v) { c.galerkin.dt = to_double(v); }},
      {"integrator",
       [](RunConfig& c, const std::string& v) { c.galerkin.integrator = parse_integrator(v); }},
      {"abs_tol", [](RunConfig& c, const std::string& v) { c.galerkin.abs_tol = to_double(v); }},
      {"rel_tol", [](RunConfig& c, const std::string& v) { c.galerkin.rel_tol = to_double(v); }},
      {"output_dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
      {"n_max", [](RunConfig& c, const std::string& v) { c.n_max = to_int(v); }},
      {"n_slow", [](RunConfig& c, const std::string& v) { c.n_slow = to_int(v); }},
      {"m_max", [](RunConfig& c, const std::string& v) { c.m_max = to_int(v); }},
      {"resonance_tol", [](RunConfig& c, const std::string& v) { c.resonance_tol = to_double(v); }},
      {"mass_scaling",
       [](RunConfig& c, const std::string& v) { c.mass_scaling = parse_mass_scaling(v); }},
      {"amp_norm", [](RunConfig& c, const std::string& v) { c.amp_norm = parse_amp_norm(v); }},
      {"theta_samples", [](RunConfig& c, const std::string& v) { c.theta_samples = to_int(v); }},
      {"r_grid", [](RunConfig& c, const std::string& v) { c.r_grid = to_grid(v); }},
      {"kappa_list",
       [](RunConfig& c, const std::string& v) {
         c.kappa_list = to_list(v);
         c.kappa_labels = split(v, ',');
       }},
      {"t_final", [](RunConfig& c, const std::string& v) { c.t_final = to_double(v); }},
      {"sample_dt", [](RunConfig& c, const std::string& v) { c.sample_dt = to_double(v); }},
      {"initial_z",
       [](RunConfig& c, const std::string& v) {
         const auto xy = to_list(v);
         if (xy.size() != 2) throw ValidationError("initial_z must be re, im");
         c.initial_z = std::complex<double>(xy[0], xy[1]);
       }},
      {"initial_a", [](RunConfig& c, const std::string& v) { c.initial_a = to_list(v); }},
      {"initial_b", [](RunConfig& c, const std::string& v) { c.initial_b = to_list(v); }},
      {"fit_begin", [](RunConfig& c, const std::string& v) { c.fit_begin = to_double(v); }},
      {"fit_end", [](RunConfig& c, const std::string& v) { c.fit_end = to_double(v); }},
      {"r_low", [](RunConfig& c, const std::string& v) { c.r_low = to_double(v); }},
      {"r_high", [](RunConfig& c, const std::string& v) { c.r_high = to_double(v); }},
      {"rate_tol", [](RunConfig& c, const std::string& v) { c.rate_tol = to_double(v); }},
      {"theta0", [](RunConfig& c, const std::string& v) { c.theta0 = to_double(v); }},
      {"newton_tol", [](RunConfig& c, const std::string& v) { c.newton_tol = to_double(v); }},
      {"max_iterations", [](RunConfig& c, const std::string& v) { c.max_iterations = to_int(v); }},
      {"strobe_count", [](RunConfig& c, const std::string& v) { c.strobe_count = to_int(v); }},
  };
  return table;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw ValidationError(where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ValidationError(where + "unknown key '" + key + "'");
    try {
      it->second(config, value);
    } catch (const ValidationError& e) {
      throw ValidationError(where + key + ": " + e.what());
    }
  }
  config.params.validate();
  config.forcing.validate();
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace ssmbeam
