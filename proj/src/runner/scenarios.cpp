#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <limits>
#include <optional>
#include <sstream>

#include "nlw/diagnostics.hpp"
#include "nlw/evolver.hpp"
#include "nlw/ground_state.hpp"
#include "nlw/modulation.hpp"
#include "nlw/proximity.hpp"
#include "nlw/reduced_ode.hpp"
#include "nlw/runner.hpp"
#include "nlw/spectral.hpp"
#include "nlw/virial_cutoff.hpp"

namespace nlw {

std::string version() { return "0.1.0"; }

namespace {

using json = nlohmann::ordered_json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json base_metadata(const ScenarioConfig& c, const std::string& subcommand) {
  json m;
  m["tool"] = "nlwlab";
  m["version"] = version();
  m["subcommand"] = subcommand;
  m["seed"] = c.seed;
  m["threads"] = c.threads;
  m["config"] = to_text(c);
  return m;
}

json constants_json(int dim) {
  const auto k = closed_form_constants(dim);
  json j;
  j["dim"] = dim;
  j["interaction_constant"] = k.interaction_constant;
  j["lamW_L2_sq"] = k.lamW_L2_sq ? json(*k.lamW_L2_sq) : json(nullptr);
  j["lamW_L2_sq_published"] = k.lamW_L2_sq_published ? json(*k.lamW_L2_sq_published) : json(nullptr);
  j["omega_sq"] = k.omega_sq ? json(*k.omega_sq) : json(nullptr);
  j["pairing_UL"] = k.pairing_UL;
  j["E_W"] = k.E_W;
  j["grad_W_sq"] = k.grad_W_sq;
  return j;
}

EigenPair reference_eigenpair(const ScenarioConfig& c) { return negative_eigenpair(make_grid(c.dim, c.eigen_n, 40.0), 1.0); }

RunRecord finish(json meta, RunRecord rec) {
  meta["status"] = "ok";
  meta["exit_code"] = 0;
  rec.metadata = meta.dump(2) + "\n";
  return rec;
}

template <class F>
RunRecord guarded(const ScenarioConfig& c, const std::string& name, F&& body) {
  json meta = base_metadata(c, name);
  try {
    return body(meta);
  } catch (const ContractViolation&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    RunRecord rec;
    meta["status"] = "numeric_failure";
    meta["error"] = e.what();
    meta["exit_code"] = 3;
    rec.metadata = meta.dump(2) + "\n";
    rec.exit_code = 3;
    return rec;
  }
}

std::string plot_script(const std::vector<std::string>& header, const std::string& x,
                        const std::vector<std::string>& prefixes) {
  std::ostringstream o;
  o << "set datafile separator ','\nset key autotitle columnhead\nset terminal pngcairo size 900,600\n";
  for (const auto& p : prefixes) {
    std::vector<std::size_t> cols;
    std::size_t xcol = 0;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == x) xcol = i + 1;
      if (header[i].rfind(p, 0) == 0) cols.push_back(i + 1);
    }
    if (cols.empty() || xcol == 0) continue;
    o << "set output '" << p << ".png'\nplot ";
    for (std::size_t k = 0; k < cols.size(); ++k)
      o << (k ? ", " : "") << "'series.csv' using " << xcol << ":" << cols[k] << " with lines";
    o << "\n";
  }
  return o.str();
}

double energy_norm_of_W(int dim) {
  auto g = make_grid(dim, 8192, 200.0);
  return energy_norm(synthesize(BubbleConfig{{1}, {1.0}}, g));
}

// Per-snapshot modulation analysis shared by collide and analyze.
RunRecord analyze_states(const ScenarioConfig& c, const GridPtr& grid, const Trajectory& traj, json meta) {
  const int dim = c.dim;
  const std::size_t K = c.scales.size();
  const std::size_t N = c.N == 0 ? K : c.N;
  const double t_conv = c.t_conv > 0.0 ? c.t_conv : grid->r_max();
  const auto eig = reference_eigenpair(c);
  const auto q = build_cutoff(dim, c.q_c, c.q_R);
  const double kappa1 = c.kappa1 > 0.0 ? c.kappa1 : 0.1 * energy_norm_of_W(dim);

  std::vector<std::string> header{"t", "energy", "d", "dK"};
  auto add = [&](const std::string& name) {
    for (std::size_t j = 1; j <= K; ++j) header.push_back(name + "_" + std::to_string(j));
  };
  add("lambda");
  add("a_minus");
  add("a_plus");
  add("xi");
  add("beta");
  add("ortho");
  for (const char* h : {"virial", "omega1", "omega2", "mu", "mu_star", "phi", "virial_residual", "jk_residual"})
    header.push_back(h);

  std::vector<std::vector<double>> rows;
  std::vector<double> times, d_series, dK_series, mu_series, rho_series;
  BubbleConfig seed = c.bubbles();
  BubbleConfig d_seed;
  std::size_t failures = 0;
  ProximityOptions popt;
  popt.seed = c.seed;
  popt.jitter = 0.25;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const FieldPair& s = traj.states[k];
    std::vector<double> row{traj.times[k], traj.energy[k]};
    const double nu = c.nu > 0.0 ? c.nu : std::min(0.4 * grid->r_max(), 20.0 * seed.scales.back());
    std::optional<ModulationState> m;
    try {
      m = fit(s, seed, nu, eig);
      seed = m->config();
    } catch (const FitFailure&) {
      ++failures;
    }
    // d: multistart at the first record, then polished from the previous
    // minimizer and from the fitted scales.
    ProximityResult d;
    if (d_seed.size() != N) {
      d = distance_d(s, nullptr, N, t_conv, popt);
    } else {
      d = refine_distance(s, nullptr, d_seed, t_conv, popt);
      if (m && m->size() == N) {
        const auto alt = refine_distance(s, nullptr, m->config(), t_conv, popt);
        if (alt.value < d.value) d = alt;
      }
    }
    d_seed = d.config;
    double dK = d.value;
    if (N >= 2) {
      const double rho = std::sqrt(d.config.scales[N - 2] * d.config.scales[N - 1]);
      dK = distance_dK(s, nullptr, N - 1, rho, t_conv, N, popt).value;
    }
    row.push_back(d.value);
    row.push_back(dK);
    const double rho_v = c.rho > 0.0 ? c.rho : std::min(5.0 * seed.scales.back(), 0.5 * grid->r_max());
    double phi = kNaN;
    if (m) {
      for (auto* v : {&m->lambdas, &m->a_minus, &m->a_plus}) row.insert(row.end(), v->begin(), v->end());
      std::vector<double> xs, bs;
      for (std::size_t j = 1; j <= K; ++j) {
        try {
          xs.push_back(xi(j, *m, c.L));
        } catch (const Error&) {
          xs.push_back(kNaN);
        }
        try {
          bs.push_back(beta(j, *m, q, c.L));
        } catch (const Error&) {
          bs.push_back(kNaN);
        }
      }
      row.insert(row.end(), xs.begin(), xs.end());
      row.insert(row.end(), bs.begin(), bs.end());
      row.insert(row.end(), m->ortho_residual.begin(), m->ortho_residual.end());
      phi = 0.0;
      for (std::size_t j = 0; j < K; ++j) {
        if (j + 1 < K && m->signs[j] == m->signs[j + 1]) phi += std::ldexp(m->lambdas[j] * bs[j], -int(j + 1));
        phi += c.C1 * m->lambdas[j] * (m->a_plus[j] * m->a_plus[j] - m->a_minus[j] * m->a_minus[j]);
      }
    } else {
      row.insert(row.end(), 6 * K, kNaN);
    }
    const auto vr = virial_terms(s, traj.times[k], rho_v, 0.0);
    double mu = kNaN;
    try {
      mu = mu_scale(s, nu, kappa1);
    } catch (const OutOfRegime&) {
    }
    row.push_back(vr.v);
    row.push_back(vr.omega1);
    row.push_back(vr.omega2);
    row.push_back(mu);
    row.push_back(kNaN);  // mu_star, filled below
    row.push_back(phi);
    row.push_back(kNaN);
    row.push_back(kNaN);
    rows.push_back(row);
    times.push_back(traj.times[k]);
    d_series.push_back(d.value);
    dK_series.push_back(dK);
    mu_series.push_back(mu);
    rho_series.push_back(rho_v);
  }

  const std::size_t col_mu_star = header.size() - 4, col_vres = header.size() - 2, col_jk = header.size() - 1;
  if (std::none_of(mu_series.begin(), mu_series.end(), [](double x) { return std::isnan(x); })) {
    const auto ms = mu_star(times, mu_series);
    for (std::size_t k = 0; k < rows.size(); ++k) rows[k][col_mu_star] = ms[k];
  }
  if (traj.states.size() >= 3) {
    // The virial radius must not move for the identity check to be meaningful
    // with rho' = 0; a fixed radius is used over the whole run.
    std::vector<double> rho_fixed(rho_series.size(), rho_series.front());
    const auto kin = virial_identity_residual(traj, rho_fixed, VirialIdentity::Kinetic);
    const auto jk = virial_identity_residual(traj, rho_fixed, VirialIdentity::JiaKenig);
    for (std::size_t i = 0; i < kin.size(); ++i) {
      rows[i + 1][col_vres] = kin[i].second;
      rows[i + 1][col_jk] = jk[i].second;
    }
  }
  CsvWriter csv(header);
  for (const auto& r : rows) csv.row(r);

  const auto intervals = detect_collision_intervals(times, d_series, dK_series, c.eps, c.eta);
  json iv = json::array();
  for (const auto& i : intervals) iv.push_back({{"a", i.a}, {"b", i.b}, {"peak_d", i.peak_d}, {"dK_max", i.dK_max}});

  meta["constants"] = constants_json(dim);
  meta["measured"] = {{"kappa", eig.kappa},
                      {"energy_drift", energy_drift(traj)},
                      {"kappa1", kappa1},
                      {"fit_failures", failures},
                      {"cutoff_log_R_tilde", q.log_R_tilde()},
                      {"records", traj.states.size()}};
  RunRecord rec;
  rec.files["series.csv"] = csv.text();
  rec.files["intervals.json"] = iv.dump(2) + "\n";
  rec.files["plots.gp"] = plot_script(header, "t", {"d", "lambda", "a_minus", "a_plus", "phi", "virial_residual"});
  return finish(meta, rec);
}

Trajectory run_pde(const ScenarioConfig& c, const GridPtr& grid) {
  const FieldPair u0 = initial_data(c, grid);
  auto settings = c.evolution();
  settings.keep_states = true;
  return evolve(u0, settings);
}

}  // namespace

RunRecord run_verify_constants(const ScenarioConfig& c) {
  return guarded(c, "verify-constants", [&](json meta) {
    const int D = c.dim;
    const auto k = closed_form_constants(D);
    const auto qc = quadrature_constants(D);
    std::string csv = "check,value,reference,rel_err,tolerance,pass\n";
    json checks = json::array();
    bool all = true;
    auto check = [&](const std::string& name, double value, double ref, double tol) {
      const double err = ref != 0.0 ? std::abs(value - ref) / std::abs(ref) : std::abs(value);
      const bool ok = err <= tol;
      all = all && ok;
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%d\n", name.c_str(), value, ref, err, tol, ok ? 1 : 0);
      csv += buf;
      checks.push_back({{"name", name}, {"value", value}, {"reference", ref}, {"rel_err", err}, {"tolerance", tol},
                        {"pass", ok}});
    };
    // The quadrature is (D+2)/(D-2) int Lambda W W^{4/(D-2)} r^{D-1} dr = -interaction_constant.
    check("interaction_constant", qc.interaction, -k.interaction_constant, 1e-8);
    if (k.lamW_L2_sq) {
      check("lamW_L2_sq", *qc.lamW_L2_sq, *k.lamW_L2_sq, 1e-8);
      check("omega_sq", k.interaction_constant / *qc.lamW_L2_sq, *k.omega_sq, 1e-8);
      check("pairing_UL_normalized", qc.pairing_UL / qc.pairing_scale, 0.0, 1e-8);
    } else {
      const double c1 = d4_log_coefficient(1e3), c2 = d4_log_coefficient(1e4);
      check("d4_log_coefficient_R_independence", c2, c1, 1e-2);
      check("d4_partial_integral_antiderivative", d4_lamW_partial_integral(100.0), d4_lamW_partial_integral_exact(100.0),
            1e-8);
      check("pairing_UL_abs", std::abs(qc.pairing_UL), 32.0, 1e-8);
    }
    check("pohozaev", qc.potential_W, qc.grad_W_sq, 1e-10);
    check("grad_W_sq", qc.grad_W_sq, k.grad_W_sq, 1e-8);
    const double r1 = static_residual(RadialGrid(D, 1024, 40.0)), r2 = static_residual(RadialGrid(D, 2048, 40.0));
    check("static_residual_order", r1 / r2, 4.0, 0.125);
    meta["constants"] = constants_json(D);
    meta["checks"] = checks;
    meta["all_pass"] = all;
    RunRecord rec;
    rec.files["constants.csv"] = csv;
    rec = finish(meta, rec);
    rec.exit_code = all ? 0 : 3;
    return rec;
  });
}

RunRecord run_eigen(const ScenarioConfig& c) {
  return guarded(c, "eigen", [&](json meta) {
    std::vector<double> kap;
    std::vector<std::size_t> ns{c.eigen_n / 4, c.eigen_n / 2, c.eigen_n};
    EigenPair fine;
    for (auto n : ns) {
      fine = negative_eigenpair(make_grid(c.dim, n, 40.0), 1.0);
      kap.push_back(fine.kappa);
    }
    const double richardson = (kap[1] - kap[0]) / (kap[2] - kap[1]);
    const double extrapolated = kap[2] + (kap[2] - kap[1]) / 3.0;
    CsvWriter csv({"r", "Y", "LambdaW"});
    const auto& g = *fine.grid;
    const std::size_t stride = std::max<std::size_t>(1, g.size() / 2048);
    for (std::size_t i = 0; i < g.size(); i += stride)
      csv.row({g.node(i), fine.value(g.node(i)), LambdaW(g.node(i), c.dim)});
    meta["measured"] = {{"kappa", kap},        {"cells", ns},
                        {"richardson_ratio", richardson}, {"kappa_extrapolated", extrapolated}};
    meta["constants"] = constants_json(c.dim);
    RunRecord rec;
    rec.files["series.csv"] = csv.text();
    rec.files["plots.gp"] = plot_script({"r", "Y", "LambdaW"}, "r", {"Y", "LambdaW"});
    return finish(meta, rec);
  });
}

RunRecord run_evolve(const ScenarioConfig& c) {
  return guarded(c, "evolve", [&](json meta) {
    const auto grid = make_grid(c.dim, c.n, c.r_max);
    const Trajectory traj = run_pde(c, grid);
    const double rho = c.rho > 0.0 ? c.rho : std::min(5.0 * c.scales.back(), 0.5 * c.r_max);
    std::vector<std::string> header{"t", "energy", "relative_drift", "deviation_E", "virial", "jia_kenig"};
    CsvWriter csv(header);
    const double e0 = traj.energy.front();
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      const auto& s = traj.states[k];
      csv.row({traj.times[k], traj.energy[k], (traj.energy[k] - e0) / std::max(std::abs(e0), 1e-12),
               energy_norm(s - traj.states.front(), 0.0, observation_radius(*grid, traj.times[k], c.cfl) > 0
                                                            ? observation_radius(*grid, traj.times[k], c.cfl)
                                                            : grid->h()),
               virial_value(s, rho), jia_kenig_value(s, rho)});
    }
    meta["measured"] = {{"energy_drift", energy_drift(traj)}, {"dt", traj.dt}, {"records", traj.states.size()}};
    meta["constants"] = constants_json(c.dim);
    RunRecord rec;
    rec.files["series.csv"] = csv.text();
    rec.files["intervals.json"] = "[]\n";
    rec.files["plots.gp"] = plot_script(header, "t", {"relative_drift", "deviation_E", "virial"});
    if (c.save_trajectory) rec.trajectory = encode_trajectory(traj, *grid);
    return finish(meta, rec);
  });
}

RunRecord run_collide(const ScenarioConfig& c) {
  return guarded(c, "collide", [&](json meta) {
    const auto grid = make_grid(c.dim, c.n, c.r_max);
    const FieldPair u0 = initial_data(c, grid);
    auto settings = c.evolution();
    settings.keep_states = false;
    // Records are collected through an observer so that a blow-up still
    // leaves the snapshots before it.
    Trajectory traj;
    traj.dt = settings.dt(*grid);
    traj.ghost = outer_ghost(u0, settings.boundary);
    traj.nonlinear = settings.nonlinear;
    Observer keep = [&](double t, const FieldPair& s) {
      traj.times.push_back(t);
      traj.energy.push_back(discrete_hamiltonian(s, traj.ghost, traj.nonlinear));
      traj.states.push_back(s);
    };
    std::optional<BlowUpError> blowup;
    try {
      evolve(u0, settings, {keep});
    } catch (const BlowUpError& e) {
      blowup = e;
    }
    RunRecord rec = analyze_states(c, grid, traj, meta);
    if (c.save_trajectory) rec.trajectory = encode_trajectory(traj, *grid);
    if (blowup) {
      auto m = json::parse(rec.metadata);
      m["status"] = "blowup";
      m["error"] = blowup->what();
      m["blowup_time"] = blowup->time();
      m["exit_code"] = 3;
      rec.metadata = m.dump(2) + "\n";
      rec.exit_code = 3;
    }
    return rec;
  });
}

RunRecord run_analyze(const ScenarioConfig& c, const DecodedTrajectory& data) {
  ScenarioConfig cc = c;
  cc.dim = data.grid->dim();
  return guarded(cc, "analyze", [&](json meta) { return analyze_states(cc, data.grid, data.traj, meta); });
}

RunRecord run_reduced(const ScenarioConfig& c) {
  return guarded(c, "reduced", [&](json meta) {
    const auto k = closed_form_constants(c.dim);
    if (!k.omega_sq) throw OutOfRegime("reduced: the reduced model needs D >= 5");
    const auto eig = reference_eigenpair(c);
    ReducedState s;
    s.dim = c.dim;
    s.signs = c.signs;
    s.lambda = c.scales;
    s.beta = c.beta0.empty() ? std::vector<double>(c.scales.size(), 0.0) : c.beta0;
    s.a_minus.assign(c.scales.size(), 0.0);
    s.a_plus.assign(c.scales.size(), 0.0);
    s.a_plus.back() = c.y_amplitude;
    s.omega_sq = *k.omega_sq;
    s.kappa = eig.kappa;
    ReducedOptions opt;
    opt.dt_out = c.reduced_t_end / 1000.0;
    const auto tr = integrate_reduced(s, c.reduced_t_end, opt);
    const std::size_t K = s.size();
    std::vector<std::string> header{"t"};
    for (const char* p : {"lambda", "beta", "a_minus", "a_plus"})
      for (std::size_t j = 1; j <= K; ++j) header.push_back(std::string(p) + "_" + std::to_string(j));
    header.push_back("d_par");
    header.push_back("phi");
    CsvWriter csv(header);
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
      std::vector<double> row{tr.t[i]};
      const auto x = tr.states[i].pack();
      row.insert(row.end(), x.begin(), x.end());
      row.push_back(std::sqrt(d_par_sq(tr.states[i])));
      row.push_back(lyapunov_phi(tr.states[i], c.C1));
      csv.row(row);
    }
    json events = json::array();
    for (const auto& e : tr.events) events.push_back({{"kind", e.kind}, {"t", e.t}, {"index", e.index}});
    meta["events"] = events;
    meta["measured"] = {{"kappa", eig.kappa}, {"omega_sq", s.omega_sq}, {"exited", tr.exited}, {"collapsed", tr.collapsed}};
    if (K == 2) {
      const auto rep = collision_report(s, c.reduced_t_end, c.C1, c.eta0, opt);
      meta["collision"] = {{"exited", rep.exited},
                           {"exit_time", rep.exit_time},
                           {"d_integral", rep.d_integral},
                           {"ejection_scale", rep.ejection_scale},
                           {"ejection_ratio", rep.ejection_ratio},
                           {"no_return", rep.no_return},
                           {"phi_rate_min", rep.phi_rate_min}};
    }
    meta["constants"] = constants_json(c.dim);
    RunRecord rec;
    rec.files["series.csv"] = csv.text();
    rec.files["intervals.json"] = "[]\n";
    rec.files["plots.gp"] = plot_script(header, "t", {"lambda", "beta", "a_plus", "d_par", "phi"});
    return finish(meta, rec);
  });
}

}  // namespace nlw
