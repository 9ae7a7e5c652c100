#include "ssmbeam/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssmbeam/config.hpp"
#include "ssmbeam/errors.hpp"
#include "ssmbeam/forced_ssm.hpp"
#include "ssmbeam/forcing.hpp"
#include "ssmbeam/galerkin.hpp"
#include "ssmbeam/validation.hpp"

namespace ssmbeam {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

json coords_json(const EigenCoords& c) {
  return json::array({complex_json(c.plus), complex_json(c.minus)});
}

std::string index_key(IndexPair i) { return std::to_string(i.n1) + "," + std::to_string(i.n2); }

class Outputs {
 public:
  explicit Outputs(const std::string& dir) : dir_(dir) { fs::create_directories(dir_); }

  std::ofstream open(const std::string& name) const {
    std::ofstream f(dir_ / name);
    if (!f) throw ValidationError("cannot write " + (dir_ / name).string());
    return f;
  }

 private:
  fs::path dir_;
};

int cmd_spectrum(const RunConfig& c, const Outputs& files, std::ostream& out) {
  if (c.n_max < 1) throw ValidationError("n_max must be >= 1");
  auto f = files.open("spectrum.csv");
  f << "n,re_plus,im_plus,re_minus,im_minus\n";
  for (int n = 1; n <= c.n_max; ++n) {
    const EigenPair e = eigenvalues(c.params, n);
    f << n << ',' << num(e.lambda_plus.real()) << ',' << num(e.lambda_plus.imag()) << ','
      << num(e.lambda_minus.real()) << ',' << num(e.lambda_minus.imag()) << '\n';
  }
  out << "real_part_limit=" << num(real_part_limit(c.params)) << '\n';
  return kExitOk;
}

int cmd_check(const RunConfig& c, std::ostream& out) {
  if (c.n_max < 1) throw ValidationError("n_max must be >= 1");
  AssumptionReport r = check_assumptions(c.params, c.n_max);
  r.forcing_nonresonant =
      check_forcing_nonresonance(c.params, c.n_max, c.m_max, c.resonance_tol);
  for (const auto& [key, value] : r.fields()) {
    if (key == "all_hold") continue;
    out << key << '=' << value << '\n';
  }
  out << "all_hold=" << (r.all_hold() ? "true" : "false") << '\n';
  if (!r.ineq4) {
    out << "note: delta*mu >= beta, fast-manifold regime: the slow spectral manifold is not "
           "available, an attracting fast manifold exists instead\n";
  }
  return r.all_hold() ? kExitOk : kExitCheckFailed;
}

int cmd_ssm(const RunConfig& c, const Outputs& files, std::ostream& out) {
  const UnforcedSsm ssm = build_ssm(c.params, {c.mass_scaling});
  json doc;
  doc["lambda1"] = complex_json(ssm.model.lambda1);
  doc["R0"] = complex_json(ssm.model.R0);
  doc["mass_scaling"] = to_string(c.mass_scaling);
  json& coeffs = doc["coefficients"];
  coeffs = json::object();
  for (const auto& [index, modes] : ssm.table.entries) {
    json& slot = coeffs[index_key(index)];
    slot = json::object();
    for (const auto& [mode, value] : modes) slot[std::to_string(mode)] = coords_json(value);
  }
  files.open("ssm.json") << doc.dump(2) << '\n';
  out << "R0=" << num(ssm.model.R0.real()) << ',' << num(ssm.model.R0.imag()) << '\n';
  return kExitOk;
}

void write_backbone(const RunConfig& c, const BeamParameters& p, const Outputs& files,
                    const std::string& name, std::ostream& out) {
  const UnforcedSsm ssm = build_ssm(p, {c.mass_scaling});
  const auto points = backbone(ssm.model, ssm.table, c.r_grid, c.amp_norm, c.theta_samples);
  auto f = files.open(name);
  f << "r,omega_inst,amplitude\n";
  for (const auto& b : points) {
    f << num(b.r) << ',' << num(b.omega_inst) << ',' << num(b.amplitude) << '\n';
  }
  for (const auto& b : points) {
    if (b.r > 0.0) {
      out << name << ": amp_norm=" << to_string(c.amp_norm)
          << " amplitude/(2r) at r=" << num(b.r) << " is " << num(b.amplitude / (2.0 * b.r))
          << '\n';
      break;
    }
  }
}

int cmd_backbone(const RunConfig& c, const Outputs& files, std::ostream& out) {
  if (c.r_grid.empty()) throw ValidationError("r_grid must not be empty");
  if (c.kappa_list.empty()) {
    write_backbone(c, c.params, files, "backbone.csv", out);
    return kExitOk;
  }
  for (std::size_t k = 0; k < c.kappa_list.size(); ++k) {
    BeamParameters p = c.params;
    p.kappa = c.kappa_list[k];
    p.validate();
    write_backbone(c, p, files, "backbone_kappa_" + c.kappa_labels[k] + ".csv", out);
  }
  return kExitOk;
}

GalerkinState initial_state(const RunConfig& c) {
  const int n = c.galerkin.n_modes;
  GalerkinState s = GalerkinState::zero(n);
  if (c.initial_z) {
    const UnforcedSsm ssm = build_ssm(c.params, {c.mass_scaling});
    const auto lifted = evaluate_parametrization(ssm.table, *c.initial_z, n);
    for (int k = 0; k < n; ++k) {
      s.a[k] = lifted[k].u.real();
      s.b[k] = lifted[k].v.real();
    }
    return s;
  }
  if (c.initial_a.empty() && c.initial_b.empty()) {
    throw ValidationError("simulate needs initial_z or initial_a / initial_b");
  }
  if (static_cast<int>(c.initial_a.size()) > n || static_cast<int>(c.initial_b.size()) > n) {
    throw ValidationError("initial_a / initial_b longer than n_modes");
  }
  std::copy(c.initial_a.begin(), c.initial_a.end(), s.a.begin());
  std::copy(c.initial_b.begin(), c.initial_b.end(), s.b.begin());
  return s;
}

int cmd_simulate(const RunConfig& c, const Outputs& files, std::ostream& out) {
  c.galerkin.validate();
  const GalerkinState s0 = initial_state(c);
  const Trajectory traj = integrate(c.params, c.forcing, c.galerkin, s0, c.t_final, c.sample_dt);
  auto f = files.open("simulate.csv");
  auto g = files.open("energy.csv");
  const int n = c.galerkin.n_modes;
  f << 't';
  for (int k = 1; k <= n; ++k) f << ",a" << k;
  for (int k = 1; k <= n; ++k) f << ",b" << k;
  f << '\n';
  g << "t,total,kinetic,bending,foundation,rotary,quartic\n";
  for (const GalerkinState& s : traj) {
    f << num(s.t);
    for (double v : s.a) f << ',' << num(v);
    for (double v : s.b) f << ',' << num(v);
    f << '\n';
    const EnergyReport e = energy(c.params, s);
    g << num(s.t) << ',' << num(e.total) << ',' << num(e.kinetic) << ',' << num(e.bending) << ','
      << num(e.foundation) << ',' << num(e.rotary) << ',' << num(e.potential_f) << '\n';
  }
  out << "samples=" << traj.size() << '\n';
  return kExitOk;
}

int cmd_validate(const RunConfig& c, const Outputs& files, std::ostream& out) {
  const UnforcedSsm ssm = build_ssm(c.params, {c.mass_scaling});
  ValidationOptions opt;
  opt.t_final = c.t_final;
  opt.sample_dt = c.sample_dt;
  opt.fit_begin = c.fit_begin;
  opt.fit_end = c.fit_end;
  opt.r_low = c.r_low;
  opt.r_high = c.r_high;
  const cplx z0 = c.initial_z.value_or(cplx{0.05, 0.0});
  const SsmValidationReport r = validate_ssm(c.params, ssm.table, ssm.model, c.galerkin, z0, opt);
  auto f = files.open("validate.csv");
  f << "t,manifold_distance,projection_distance,z_abs,z_abs_predicted,phase_rate,omega_predicted\n";
  for (const auto& s : r.samples) {
    f << num(s.t) << ',' << num(s.manifold_distance) << ',' << num(s.projection_distance)
      << ',' << num(s.z_abs) << ','
      << num(s.z_abs_predicted) << ',' << num(s.phase_rate) << ',' << num(s.omega_predicted)
      << '\n';
  }
  const bool decay_ok = r.decay_slope_rel_error <= c.rate_tol;
  const bool phase_ok = r.phase_samples > 0 && r.max_phase_rel_error <= c.rate_tol;
  auto g = files.open("validate.txt");
  for (std::ostream* s : {static_cast<std::ostream*>(&g), &out}) {
    *s << "decay_slope=" << num(r.decay_slope) << '\n'
       << "decay_rate_expected=" << num(r.decay_rate_expected) << '\n'
       << "decay_slope_rel_error=" << num(r.decay_slope_rel_error) << '\n'
       << "max_phase_rel_error=" << num(r.max_phase_rel_error) << '\n'
       << "phase_samples=" << r.phase_samples << '\n'
       << "max_radius_rel_error=" << num(r.max_radius_rel_error) << '\n'
       << "max_manifold_distance=" << num(r.max_manifold_distance) << '\n'
       << "max_projection_distance=" << num(r.max_projection_distance) << '\n'
       << "rate_tol=" << num(c.rate_tol) << '\n'
       << "decay_ok=" << (decay_ok ? "true" : "false") << '\n'
       << "phase_ok=" << (phase_ok ? "true" : "false") << '\n';
  }
  return decay_ok && phase_ok ? kExitOk : kExitCheckFailed;
}

void write_orbit(const PeriodicOrbit& orbit, const Outputs& files) {
  auto f = files.open("orbit.csv");
  f << "n,m,re,im\n";
  for (const auto& [key, w] : orbit.coefficients) {
    f << key.first << ',' << key.second << ',' << num(w.real()) << ',' << num(w.imag()) << '\n';
  }
}

int cmd_poincare(const RunConfig& c, const Outputs& files, std::ostream& out) {
  PoincareOptions opt;
  opt.tol = c.newton_tol;
  opt.max_iterations = c.max_iterations;
  const PoincareResult r = poincare_fixed_point(c.params, c.forcing, c.galerkin, c.theta0, opt);
  const PeriodicOrbit orbit = linear_periodic_response(c.params, c.forcing, c.params.epsilon);
  write_orbit(orbit, files);
  const auto [a_lin, b_lin] = orbit.state_at(c.theta0 / c.forcing.omega, c.galerkin.n_modes);
  auto f = files.open("poincare.csv");
  f << "n,a,b,a_linear,b_linear\n";
  double dist = 0.0;
  for (int k = 0; k < c.galerkin.n_modes; ++k) {
    f << k + 1 << ',' << num(r.state.a[k]) << ',' << num(r.state.b[k]) << ',' << num(a_lin[k])
      << ',' << num(b_lin[k]) << '\n';
    dist += (r.state.a[k] - a_lin[k]) * (r.state.a[k] - a_lin[k]) +
            (r.state.b[k] - b_lin[k]) * (r.state.b[k] - b_lin[k]);
  }
  out << "iterations=" << r.iterations << '\n'
      << "residual=" << num(r.residual) << '\n'
      << "fixed_point_norm=" << num(r.state.norm()) << '\n'
      << "distance_to_linear_response=" << num(std::sqrt(dist)) << '\n';
  return kExitOk;
}

int cmd_forced(const RunConfig& c, const Outputs& files, std::ostream& out) {
  const UnforcedSsm base = build_ssm(c.params, {c.mass_scaling});
  const ForcedSsm forced = first_order_coefficients(c.params, c.forcing, base);
  const cplx z0 = c.initial_z.value_or(cplx{0.0, 0.0});
  const auto samples = stroboscopic_samples(forced.model, z0, c.theta0, c.strobe_count);
  auto f = files.open("forced.csv");
  f << "k,re_z,im_z\n";
  for (std::size_t k = 0; k < samples.size(); ++k) {
    f << k << ',' << num(samples[k].real()) << ',' << num(samples[k].imag()) << '\n';
  }
  write_orbit(linear_periodic_response(c.params, c.forcing, c.params.epsilon), files);

  json doc;
  doc["forcing_coeff"] = complex_json(forced.model.forcing_coeff);
  doc["epsilon"] = forced.model.epsilon;
  doc["omega"] = forced.model.omega;
  json& coeffs = doc["first_order"];
  coeffs = json::object();
  for (const auto& [index, harmonics] : forced.first_order.entries) {
    json& slot = coeffs[index_key(index)];
    slot = json::object();
    for (const auto& [key, value] : harmonics) {
      slot[std::to_string(key.first) + "," + std::to_string(key.second)] = coords_json(value);
    }
  }
  files.open("forced_ssm.json") << doc.dump(2) << '\n';

  const StroboscopicFixedPoint fp = stroboscopic_fixed_point(forced.model, c.theta0);
  out << "fixed_point=" << num(fp.z.real()) << ',' << num(fp.z.imag()) << '\n'
      << "newton_iterations=" << fp.iterations << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Slow spectral submanifolds of the damped-forced Rayleigh beam", "ssm-beam"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  const std::pair<const char*, const char*> commands[] = {
      {"spectrum", "write modal eigenvalues to spectrum.csv"},
      {"check", "report the admissibility and non-resonance conditions"},
      {"ssm", "write the cubic manifold coefficients to ssm.json"},
      {"backbone", "write amplitude/frequency backbone curves"},
      {"simulate", "integrate the Galerkin model, write states and energy"},
      {"validate", "compare the Galerkin decay against the reduced model"},
      {"poincare", "periodic orbit of the forced Galerkin model"},
      {"forced", "stroboscopic map and fixed point of the forced reduced model"}};
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    RunConfig config = load_config(config_path);
    if (!out_dir.empty()) config.output_dir = out_dir;
    const Outputs files(config.output_dir);
    if (command == "spectrum") return cmd_spectrum(config, files, out);
    if (command == "check") return cmd_check(config, out);
    if (command == "ssm") return cmd_ssm(config, files, out);
    if (command == "backbone") return cmd_backbone(config, files, out);
    if (command == "simulate") return cmd_simulate(config, files, out);
    if (command == "validate") return cmd_validate(config, files, out);
    if (command == "poincare") return cmd_poincare(config, files, out);
    return cmd_forced(config, files, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ResonanceError& e) {
    err << "resonance: " << e.what() << '\n';
    return kExitResonance;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace ssmbeam
