#pragma once

// Subcommand runners behind the pointwave executable. Work is split over the
// configured alpha values; results are gathered in config order and written
// once, so output does not depend on the thread count.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "pointwave/config.hpp"
#include "pointwave/dynamics.hpp"
#include "pointwave/geometry.hpp"
#include "pointwave/oracle.hpp"
#include "pointwave/radial.hpp"
#include "pointwave/scattering.hpp"
#include "pointwave/spectral.hpp"

namespace pointwave::cli {

struct LightconeError : Error {
  using Error::Error;
};

struct Check {
  std::string check;
  double alpha = 0.0;
  double tolerance = 0.0;
  double observed = 0.0;
  bool pass = false;
};

struct RunResult {
  std::vector<Check> checks;
  std::vector<std::string> warnings;
  std::vector<std::string> files;

  std::vector<Check> failures() const {
    std::vector<Check> out;
    for (const auto& c : checks)
      if (!c.pass) out.push_back(c);
    return out;
  }
};

inline Check make_check(std::string name, double alpha, double tol, double observed) {
  return {std::move(name), alpha, tol, observed, std::isfinite(observed) && observed <= tol};
}

// POINTWAVE_THREADS caps the worker count; unset means hardware concurrency.
inline int thread_cap() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  const char* env = std::getenv("POINTWAVE_THREADS");
  if (!env || !*env) return hw;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw ConfigError("POINTWAVE_THREADS must be a positive integer, got '" + std::string(env) + "'");
  return static_cast<int>(std::min<long>(v, hw));
}

template <class R, class F>
std::vector<R> parallel_map(std::size_t n, F&& f) {
  std::vector<R> out(n);
  std::vector<std::exception_ptr> err(n);
  const std::size_t cap = static_cast<std::size_t>(thread_cap());
  for (std::size_t start = 0; start < n; start += cap) {
    std::vector<std::thread> pool;
    const std::size_t stop = std::min(n, start + cap);
    for (std::size_t i = start; i < stop; ++i)
      pool.emplace_back([&, i] {
        try {
          out[i] = f(i);
        } catch (...) {
          err[i] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : err)
    if (e) std::rethrow_exception(e);
  return out;
}

inline std::string num(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline std::string alpha_label(double a) { return num(a); }

// phi = A exp(-((r - c)/w)^2), so u = sqrt(4 pi) r phi
inline std::vector<double> bump_profile(const RadialGrid& g, const GaussianBump& b) {
  std::vector<double> u(g.size());
  for (int i = 0; i <= g.n_r; ++i) {
    const double r = g.r(i), z = (r - b.center) / b.width;
    u[i] = sqrt_4pi * b.amplitude * r * std::exp(-z * z);
  }
  return u;
}

inline PhaseState build_initial(const Model& model, const std::vector<InitialTerm>& terms) {
  const RadialGrid& g = model.grid;
  std::vector<double> u(g.size(), 0.0), v(g.size(), 0.0);
  for (const auto& term : terms) {
    if (const auto* b = std::get_if<GaussianBump>(&term)) {
      const auto p = bump_profile(g, *b);
      auto& dst = b->component == Component::position ? u : v;
      for (std::size_t j = 0; j < p.size(); ++j) dst[j] += p[j];
    } else if (const auto* gl = std::get_if<GLambdaTerm>(&term)) {
      const auto p = sample_g_lambda(gl->lambda, g);
      for (std::size_t j = 0; j < u.size(); ++j) u[j] += gl->coefficient * p.u[j];
    } else if (const auto* ev = std::get_if<EigenvectorTerm>(&term)) {
      std::optional<std::size_t> k = model.bound_index();
      if (!k) k = model.zero_index();
      if (!k) throw ConfigError("initial eigenvector: alpha = " + num(model.coupling.alpha) +
                                " has no bound or zero-energy mode");
      const auto e = model.point.vector(*k);
      for (std::size_t j = 0; j < u.size(); ++j) u[j] += ev->coefficient * e[j];
    } else if (const auto* q = std::get_if<ChargeTerm>(&term)) {
      for (double& x : u) x += q->q / sqrt_4pi;
    }
  }
  return PhaseState(split_at_origin(g, std::move(u)), split_at_origin(g, std::move(v)));
}

// Outer edge of the bumps (5 widths past the center); 0 without bumps.
inline double bump_reach(const std::vector<InitialTerm>& terms) {
  double reach = 0.0;
  for (const auto& term : terms)
    if (const auto* b = std::get_if<GaussianBump>(&term)) reach = std::max(reach, b->center + 5.0 * b->width);
  return reach;
}

inline void enforce_lightcone(const RunConfig& cfg, bool hard, bool override_flag, RunResult& res) {
  if (!cfg.t_max) return;
  const double need = bump_reach(cfg.initial) + 2.0 * *cfg.t_max;
  if (need <= cfg.r_max) return;
  const std::string msg = "light cone: r_max = " + num(cfg.r_max) + " but bump support + 2 t_max = " + num(need) +
                          "; results near the boundary are not trustworthy";
  if (hard && !override_flag) throw LightconeError(msg + " (pass --override-lightcone to run anyway)");
  res.warnings.push_back(msg);
}

inline const double& require_horizon(const std::optional<double>& t, const RunConfig& cfg) {
  if (!t) throw ConfigError(cfg.source + ": missing required table [horizon] (fields 'horizon.t_max', 'horizon.n_samples')");
  return *t;
}

inline void require_initial(const RunConfig& cfg) {
  if (cfg.initial.empty()) throw ConfigError(cfg.source + ": at least one [[initial]] term is required");
}

inline std::vector<double> sample_times(const RunConfig& cfg) {
  const double t_max = require_horizon(cfg.t_max, cfg);
  const int n = *cfg.n_samples;
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = t_max * i / (n - 1);
  return t;
}

// Seeded smooth states: three Gaussian bumps in each component plus a
// decaying charged tail.
inline std::vector<PhaseState> random_states(const RadialGrid& g, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  const double hi = std::max(3.0, std::min(12.0, g.r_max / 4.0));
  std::uniform_real_distribution<double> center(2.0, hi), width(0.8, 2.0);
  std::vector<PhaseState> out;
  for (int n = 0; n < count; ++n) {
    std::vector<double> uv[2];
    for (auto& p : uv) {
      p.assign(g.size(), 0.0);
      for (int k = 0; k < 3; ++k) {
        const GaussianBump b{center(rng), width(rng), amp(rng), Component::position};
        const auto q = bump_profile(g, b);
        for (std::size_t j = 0; j < p.size(); ++j) p[j] += q[j];
      }
    }
    const double q = amp(rng);
    for (int i = 0; i <= g.n_r; ++i) uv[0][i] += q * std::exp(-g.r(i)) / sqrt_4pi;
    out.emplace_back(split_at_origin(g, std::move(uv[0])), split_at_origin(g, std::move(uv[1])));
  }
  return out;
}

inline double nonzero_or_one(double x) { return x > 1e-200 ? x : 1.0; }

inline double rel_l2(const PhaseState& a, const PhaseState& b) {
  const double n = l2_state_norm(b);
  return l2_state_norm(difference(a, b)) / (n > 0.0 ? n : 1.0);
}

namespace detail {

inline void write_file(const std::filesystem::path& p, const std::string& body, RunResult& res) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << body;
  if (!out) throw Error("write failed for " + p.string());
  res.files.push_back(p.string());
}

inline nlohmann::ordered_json check_json(const Check& c) {
  nlohmann::ordered_json j;
  j["check"] = c.check;
  j["alpha"] = c.alpha;
  j["tolerance"] = c.tolerance;
  j["observed"] = std::isfinite(c.observed) ? nlohmann::ordered_json(c.observed) : nlohmann::ordered_json(num(c.observed));
  j["pass"] = c.pass;
  return j;
}

inline void write_report(const RunConfig& cfg, const std::string& command, const RunResult& res,
                         nlohmann::ordered_json extra, RunResult& out) {
  if (!cfg.wants("json")) return;
  nlohmann::ordered_json j;
  j["command"] = command;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : res.checks) j["checks"].push_back(check_json(c));
  j["warnings"] = res.warnings;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  write_file(std::filesystem::path(cfg.directory) / "report.json", j.dump(2) + "\n", out);
}

inline std::filesystem::path prepare_dir(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.directory);
  std::filesystem::create_directories(dir);
  return dir;
}

inline int probe_node(const RadialGrid& g, double r) {
  return std::clamp(static_cast<int>(std::lround(r / g.h())), 0, g.n_r);
}

} // namespace detail

// evolve: invariant traces along the point flow.
inline RunResult run_evolve(const RunConfig& cfg, bool override_lightcone) {
  RunResult res;
  require_initial(cfg);
  const auto times = sample_times(cfg);
  enforce_lightcone(cfg, true, override_lightcone, res);
  const RadialGrid g = make_grid(cfg.r_max, cfg.n_r);

  struct Series {
    std::vector<std::string> rows;
    std::vector<Check> checks;
  };
  auto series = parallel_map<Series>(cfg.alphas.size(), [&](std::size_t ia) {
    const double alpha = cfg.alphas[ia];
    const Model m = make_model(make_coupling(alpha), g);
    const PhaseState s0 = build_initial(m, cfg.initial);
    const PhaseState js0 = complex_structure(m, s0);
    const bool special = m.coupling.regime != Regime::positive;
    const double n0 = phase_norm(m.coupling, s0), nj = phase_norm(m.coupling, js0);
    const double e0 = energy(m.coupling, s0), w0 = symplectic_form(m, s0, js0);
    // absolute drift when the state carries no energy, e.g. (G, 0) at alpha = 0
    const double e_scale = nonzero_or_one(std::max(std::abs(e0), 0.5 * n0 * n0));
    const double w_scale = nonzero_or_one(std::max(std::abs(w0), n0 * nj));
    Series out;
    double e_drift = 0.0, w_drift = 0.0;
    for (double t : times) {
      const PhaseState st = t == 0.0 ? s0 : propagate_point(m, t, s0);
      const PhaseState jt = t == 0.0 ? js0 : propagate_point(m, t, js0);
      const double e = energy(m.coupling, st), w = symplectic_form(m, st, jt);
      e_drift = std::max(e_drift, std::abs(e - e0) / e_scale);
      w_drift = std::max(w_drift, std::abs(w - w0) / w_scale);
      std::string row = num(t) + "," + alpha_label(alpha) + "," + num(e) + "," + num(w) + "," +
                        num(st.position.charge) + ",";
      if (special) {
        const auto z = special_pair(m, st);
        row += num(z.x) + "," + num(z.xdot);
      } else {
        row += ",";
      }
      const auto u = st.position.full_profile();
      for (double r : cfg.probes) row += "," + num(u[detail::probe_node(g, r)]);
      out.rows.push_back(std::move(row));
    }
    out.checks.push_back(make_check("energy_conservation", alpha, 1e-8, e_drift));
    out.checks.push_back(make_check("symplectic_pairing", alpha, 1e-8, w_drift));
    return out;
  });

  const auto dir = detail::prepare_dir(cfg);
  for (auto& s : series) res.checks.insert(res.checks.end(), s.checks.begin(), s.checks.end());
  if (cfg.wants("csv")) {
    std::string body = "t,alpha,energy,omega_pairing,charge,x,xdot";
    for (double r : cfg.probes) body += ",u@" + short_num(g.r(detail::probe_node(g, r)));
    body += "\n";
    for (const auto& s : series)
      for (const auto& row : s.rows) body += row + "\n";
    detail::write_file(dir / "series.csv", body, res);
  }
  detail::write_report(cfg, "evolve", res, nlohmann::ordered_json::object(), res);
  return res;
}

inline const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names{"oracle_agreement", "energy_conservation", "group_law",
                                              "symplectic_pairing", "complex_structure", "krein_rank",
                                              "resolvent", "scattering_isometry"};
  return names;
}

// verify: property suites on the initial state and seeded random states.
inline RunResult run_verify(const RunConfig& cfg, bool override_lightcone) {
  RunResult res;
  const double t_max = require_horizon(cfg.t_max, cfg);
  enforce_lightcone(cfg, false, override_lightcone, res);
  std::vector<std::string> suites = cfg.checks.empty() ? verify_suites() : cfg.checks;
  for (const auto& s : suites)
    if (std::find(verify_suites().begin(), verify_suites().end(), s) == verify_suites().end())
      throw ConfigError(cfg.source + ": field 'checks': unknown suite '" + s + "'");
  const RadialGrid g = make_grid(cfg.r_max, cfg.n_r);
  if (cfg.initial.empty() && cfg.random_states == 0)
    throw ConfigError(cfg.source + ": verify needs [[initial]] terms or 'random_states' with a 'seed'");
  const auto randoms = cfg.random_states > 0 ? random_states(g, cfg.random_states, *cfg.seed) : std::vector<PhaseState>{};

  auto per_alpha = parallel_map<std::vector<Check>>(cfg.alphas.size(), [&](std::size_t ia) {
    const double alpha = cfg.alphas[ia];
    const Model m = make_model(make_coupling(alpha), g);
    std::vector<PhaseState> states;
    if (!cfg.initial.empty()) states.push_back(build_initial(m, cfg.initial));
    states.insert(states.end(), randoms.begin(), randoms.end());
    std::vector<Check> out;
    for (const auto& suite : suites) {
      double obs = 0.0, tol = 1e-8;
      if (suite == "oracle_agreement") {
        tol = 1e-4;
        const auto op = oracle::build(m.coupling, g);
        for (const auto& s : states)
          obs = std::max(obs, rel_l2(propagate_point(m, t_max, s), oracle::oracle_propagate(op, t_max, s)));
      } else if (suite == "energy_conservation") {
        for (const auto& s : states) {
          const double e0 = energy(m.coupling, s), n0 = phase_norm(m.coupling, s);
          const double scale = nonzero_or_one(std::max(std::abs(e0), 0.5 * n0 * n0));
          for (int k = 1; k <= 4; ++k)
            obs = std::max(obs, std::abs(energy(m.coupling, propagate_point(m, t_max * k / 4.0, s)) - e0) / scale);
        }
      } else if (suite == "group_law") {
        const double t1 = 0.5 * t_max, t2 = 0.25 * t_max;
        for (const auto& s : states)
          obs = std::max(obs, rel_l2(propagate_point(m, t1, propagate_point(m, t2, s)), propagate_point(m, t1 + t2, s)));
      } else if (suite == "symplectic_pairing") {
        for (std::size_t i = 0; i < states.size(); ++i) {
          const auto& a = states[i];
          const auto& b = states[(i + 1) % states.size()];
          const double w0 = symplectic_form(m, a, b);
          const double w1 = symplectic_form(m, propagate_point(m, t_max, a), propagate_point(m, t_max, b));
          const double scale = nonzero_or_one(phase_norm(m.coupling, a) * phase_norm(m.coupling, b));
          obs = std::max(obs, std::abs(w1 - w0) / scale);
        }
      } else if (suite == "complex_structure") {
        for (const auto& s : states) {
          const PhaseState jj = complex_structure(m, complex_structure(m, s));
          auto u = jj.position.full_profile(), v = jj.velocity.full_profile();
          const auto su = s.position.full_profile(), sv = s.velocity.full_profile();
          for (std::size_t j = 0; j < u.size(); ++j) {
            u[j] += su[j];
            v[j] += sv[j];
          }
          const PhaseState sum(split_at_origin(g, std::move(u)), split_at_origin(g, std::move(v)));
          obs = std::max(obs, phase_norm(m.coupling, sum) / std::max(phase_norm(m.coupling, s), 1e-300));
        }
      } else if (suite == "krein_rank") {
        obs = oracle::krein_rank_bound(m.coupling, g, 2.0);
      } else if (suite == "resolvent") {
        tol = 1e-6;
        const auto op = oracle::build(m.coupling, g);
        for (const auto& s : states) {
          const auto a = resolvent_apply(m, 2.0, s.position);
          const auto b = oracle::oracle_resolvent(op, 2.0, s.position);
          obs = std::max(obs, rel_l2(PhaseState(a, ChargedField(g)), PhaseState(b, ChargedField(g))));
        }
      } else if (suite == "scattering_isometry") {
        // charged states leave an O(h^2) share in the above-band mode, which the wave operator drops
        tol = 1e-4;
        obs = verify_scattering(m, states, {}).isometry;
      }
      out.push_back(make_check(suite, alpha, tol, obs));
    }
    return out;
  });

  detail::prepare_dir(cfg);
  for (auto& v : per_alpha) res.checks.insert(res.checks.end(), v.begin(), v.end());
  nlohmann::ordered_json extra;
  extra["states"] = (cfg.initial.empty() ? 0 : 1) + cfg.random_states;
  extra["horizon"] = t_max;
  detail::write_report(cfg, "verify", res, extra, res);
  return res;
}

// scatter: time-dependent wave operator against the stationary one.
inline RunResult run_scatter(const RunConfig& cfg, bool override_lightcone) {
  RunResult res;
  require_initial(cfg);
  const double t_max = require_horizon(cfg.t_max, cfg);
  enforce_lightcone(cfg, false, override_lightcone, res);
  const RadialGrid g = make_grid(cfg.r_max, cfg.n_r);
  const Direction dir = cfg.direction == "minus" ? Direction::minus : Direction::plus;
  std::vector<double> schedule;
  for (int i = 1; i <= *cfg.n_samples; ++i) schedule.push_back(t_max * i / *cfg.n_samples);

  struct Out {
    MollerReport rep;
    double norm = 0.0;
    std::vector<Check> checks;
  };
  auto outs = parallel_map<Out>(cfg.alphas.size(), [&](std::size_t ia) {
    const double alpha = cfg.alphas[ia];
    const Model m = make_model(make_coupling(alpha), g);
    const PhaseState s0 = build_initial(m, cfg.initial);
    const double need = required_rmax(s0, t_max);
    if (need > g.r_max)
      throw LightconeError("light cone: the time limit needs r_max >= " + num(need) + " for t_max = " + num(t_max));
    Out o;
    o.norm = ac_norm(m, s0);
    if (o.norm == 0.0) throw ConfigError(cfg.source + ": initial state has no scattering part for alpha = " + num(alpha));
    o.rep = moller_time(m, dir, schedule, s0).second;
    o.checks.push_back(make_check("moller_isometry", alpha, 1e-6, o.rep.isometry_defect));
    o.checks.push_back(make_check("intertwining", alpha, 1e-4, o.rep.intertwining_defect / o.norm));
    o.checks.push_back(make_check("time_limit_defect", alpha, 1e-3, o.rep.defects.back() / o.norm));
    return o;
  });

  const auto out_dir = detail::prepare_dir(cfg);
  nlohmann::ordered_json extra;
  extra["moller"] = nlohmann::ordered_json::array();
  std::string csv = "t,alpha,defect,relative_defect,increment\n";
  for (std::size_t ia = 0; ia < outs.size(); ++ia) {
    const auto& o = outs[ia];
    res.checks.insert(res.checks.end(), o.checks.begin(), o.checks.end());
    nlohmann::ordered_json j;
    j["alpha"] = cfg.alphas[ia];
    j["direction"] = cfg.direction;
    j["times"] = o.rep.times;
    j["defects"] = o.rep.defects;
    j["increments"] = o.rep.increments;
    j["isometry_defect"] = o.rep.isometry_defect;
    j["intertwining_defect"] = o.rep.intertwining_defect;
    j["extrapolated_defect"] = o.rep.extrapolated_defect;
    extra["moller"].push_back(j);
    for (std::size_t i = 0; i < o.rep.times.size(); ++i)
      csv += num(o.rep.times[i]) + "," + alpha_label(cfg.alphas[ia]) + "," + num(o.rep.defects[i]) + "," +
             num(o.rep.defects[i] / o.norm) + "," + (i > 0 ? num(o.rep.increments[i - 1]) : "") + "\n";
  }
  if (cfg.wants("csv")) detail::write_file(out_dir / "moller.csv", csv, res);
  detail::write_report(cfg, "scatter", res, extra, res);
  return res;
}

// spectrum: oracle eigenvalues beside the closed-form basis, with phase shifts.
inline RunResult run_spectrum(const RunConfig& cfg, bool) {
  RunResult res;
  if (cfg.n_k == 0) throw ConfigError(cfg.source + ": missing required table [spectral] (fields 'spectral.k_max', 'spectral.n_k')");
  const RadialGrid g = make_grid(cfg.r_max, cfg.n_r);
  const double h = g.h();

  struct Out {
    std::vector<std::string> rows;
    std::vector<double> lowest;
    std::vector<Check> checks;
  };
  auto outs = parallel_map<Out>(cfg.alphas.size(), [&](std::size_t ia) {
    const double alpha = cfg.alphas[ia];
    const Coupling c = make_coupling(alpha);
    const Model m = make_model(c, g);
    const auto op = oracle::build(c, g);
    std::vector<double> mus;
    for (const auto& md : m.point.modes()) mus.push_back(md.mu);
    std::sort(mus.begin(), mus.end());
    Out o;
    double eig_err = 0.0;
    for (std::size_t k = 0; k < op.values.size(); ++k)
      eig_err = std::max(eig_err, std::abs(op.values[k] - mus[k]) / std::max(1.0, std::abs(mus[k])));
    for (std::size_t k = 0; k < std::min<std::size_t>(10, op.values.size()); ++k) o.lowest.push_back(op.values[k]);

    std::vector<std::size_t> band;
    for (std::size_t k = 0; k < op.values.size(); ++k) {
      const double mu = op.values[k];
      if (!(mu > 1e-9) || 0.5 * h * std::sqrt(mu) >= 1.0) continue;
      if (oracle::lattice_wavenumber(g, mu) <= cfg.k_max) band.push_back(k);
    }
    const std::size_t rows = std::min<std::size_t>(band.size(), static_cast<std::size_t>(cfg.n_k));
    double fit_err = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      const std::size_t k = band[i * band.size() / rows];
      const double mu = op.values[k];
      const double kk = oracle::lattice_wavenumber(g, mu);
      const double d_lat = lattice_phase(c.beta(), h, kk * h);
      double d_fit = oracle::fit_phase(g, op.vector(k), kk, 0.0, g.r_max);
      if (d_fit <= 0.0) d_fit += pi;
      fit_err = std::max(fit_err, std::min(std::abs(d_fit - d_lat), pi - std::abs(d_fit - d_lat)));
      o.rows.push_back(num(kk) + "," + alpha_label(alpha) + "," + num(mu) + "," + num(mus[k]) + "," +
                       num(phase_shift(c, kk)) + "," + num(d_lat) + "," + num(d_fit));
    }
    o.checks.push_back(make_check("eigenvalue_agreement", alpha, 1e-8, eig_err));
    o.checks.push_back(make_check("phase_fit", alpha, 1e-6, fit_err));
    if (c.regime == Regime::negative)
      o.checks.push_back(make_check("bound_eigenvalue", alpha, 1e-3, std::abs(op.values.front() + *c.lambda0) / *c.lambda0));
    return o;
  });

  const auto out_dir = detail::prepare_dir(cfg);
  nlohmann::ordered_json extra;
  extra["oracle_lowest_eigenvalues"] = nlohmann::ordered_json::array();
  std::string csv = "k,alpha,mu_oracle,mu_spectral,delta,delta_lattice,delta_fit\n";
  for (std::size_t ia = 0; ia < outs.size(); ++ia) {
    const auto& o = outs[ia];
    res.checks.insert(res.checks.end(), o.checks.begin(), o.checks.end());
    extra["oracle_lowest_eigenvalues"].push_back({{"alpha", cfg.alphas[ia]}, {"values", o.lowest}});
    for (const auto& r : o.rows) csv += r + "\n";
  }
  if (cfg.wants("csv")) detail::write_file(out_dir / "spectrum.csv", csv, res);
  detail::write_report(cfg, "spectrum", res, extra, res);
  return res;
}

inline RunResult execute(const std::string& command, const RunConfig& cfg, bool override_lightcone) {
  if (command == "evolve") return run_evolve(cfg, override_lightcone);
  if (command == "verify") return run_verify(cfg, override_lightcone);
  if (command == "scatter") return run_scatter(cfg, override_lightcone);
  if (command == "spectrum") return run_spectrum(cfg, override_lightcone);
  throw InvalidParameter("unknown subcommand '" + command + "'");
}

} // namespace pointwave::cli
