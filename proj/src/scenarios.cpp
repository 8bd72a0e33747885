// SPDX-License-Identifier: Apache-2.0
#include "ris/scenarios.hpp"

#include <atomic>
#include <limits>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "ris/errors.hpp"

namespace ris::scenarios {

using nlohmann::json;
namespace fs = std::filesystem;

Mat lowering_op() { return Mat(2, 2, {cx{0.0}, cx{1.0}, cx{0.0}, cx{0.0}}); }
Mat number_op() { return Mat(2, 2, {cx{0.0}, cx{0.0}, cx{0.0}, cx{1.0}}); }

std::function<double(double)> ScheduleSpec::sampler() const {
  if (kind == Kind::Affine) return affine_schedule(a, b);
  return tabulated_schedule(knots_s, knots_y);
}

namespace {

void require_keys(const json& j, const std::vector<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
  }
}

ScheduleSpec parse_schedule(const json& j, const std::string& where) {
  ScheduleSpec spec;
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  require_keys(j, {"type", "a", "b", "s", "values"}, where);
  const std::string type = j.at("type").get<std::string>();
  if (type == "affine") {
    spec.kind = ScheduleSpec::Kind::Affine;
    spec.a = j.at("a").get<double>();
    spec.b = j.value("b", 0.0);
  } else if (type == "tabulated") {
    spec.kind = ScheduleSpec::Kind::Tabulated;
    spec.knots_s = j.at("s").get<std::vector<double>>();
    spec.knots_y = j.at("values").get<std::vector<double>>();
    if (spec.knots_s.size() != spec.knots_y.size())
      throw ConfigError(where + ": s and values must have equal length");
  } else {
    throw ConfigError(where + ": type must be \"affine\" or \"tabulated\"");
  }
  return spec;
}

Mat parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + " must be a non-empty array of rows");
  const int n = int(j.size());
  Mat m(n, int(j.at(0).size()));
  for (int i = 0; i < n; ++i) {
    const json& row = j.at(std::size_t(i));
    if (int(row.size()) != m.cols()) throw ConfigError(where + ": ragged rows");
    for (int c = 0; c < m.cols(); ++c) {
      const json& e = row.at(std::size_t(c));
      if (e.is_number()) {
        m(i, c) = cx{e.get<double>(), 0.0};
      } else if (e.is_array() && e.size() == 2) {
        m(i, c) = cx{e.at(0).get<double>(), e.at(1).get<double>()};
      } else {
        throw ConfigError(where + ": entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require_keys(j,
               {"model", "E", "E0", "u1", "beta_schedule", "e0_schedule", "lambda", "tau",
                "T_list", "m", "rho_i", "seed", "out_dir", "workers", "emit_svg", "custom"},
               "config");
  ScenarioConfig cfg;
  const std::string model = j.at("model").get<std::string>();
  if (model == "qubit_rw") {
    cfg.model = Model::QubitRw;
  } else if (model == "qubit_fd") {
    cfg.model = Model::QubitFd;
  } else if (model == "custom") {
    cfg.model = Model::Custom;
  } else {
    throw ConfigError("unknown model \"" + model + "\"");
  }
  cfg.e_sys = j.value("E", 1.0);
  cfg.e_env = j.value("E0", 0.8);
  cfg.u1 = j.value("u1", 1.0);
  if (j.contains("beta_schedule")) cfg.beta_schedule = parse_schedule(j.at("beta_schedule"), "beta_schedule");
  if (j.contains("e0_schedule")) {
    cfg.has_e0_schedule = true;
    cfg.e0_schedule = parse_schedule(j.at("e0_schedule"), "e0_schedule");
  }
  if (j.contains("lambda")) {
    const json& l = j.at("lambda");
    if (l.is_array()) {
      cfg.lambdas = l.get<std::vector<double>>();
    } else {
      cfg.lambdas = {l.get<double>()};
    }
  } else {
    cfg.lambdas = {0.0};
  }
  if (cfg.lambdas.empty()) throw ConfigError("lambda list must not be empty");
  cfg.tau = j.value("tau", 1.0);
  cfg.t_list = j.value("T_list", std::vector<int>{1});
  if (cfg.t_list.empty()) throw ConfigError("T_list must not be empty");
  for (int t : cfg.t_list)
    if (t < 1) throw ConfigError("T_list entries must be positive");

  if (j.contains("m")) {
    const json& m = j.at("m");
    if (m.is_number_integer()) {
      cfg.m = m.get<long>();
      if (cfg.m < 1) throw ConfigError("m must be >= 1");
    } else if (m.is_string()) {
      const std::string text = m.get<std::string>();
      double g = 0.5;
      if (text == "auto") {
        // default G
      } else if (std::sscanf(text.c_str(), "auto(%lf)", &g) != 1) {
        throw ConfigError("m must be an integer or \"auto(G)\"");
      }
      if (!(g > 0.0 && g < 1.0)) throw ConfigError("auto-m G must lie in (0,1)");
      cfg.m_auto = true;
      cfg.m_auto_g = g;
    } else {
      throw ConfigError("m must be an integer or \"auto(G)\"");
    }
  }

  if (j.contains("rho_i")) {
    const json& r = j.at("rho_i");
    if (r.is_string()) {
      if (r.get<std::string>() != "invariant")
        throw ConfigError("rho_i string form must be \"invariant\"");
      cfg.rho_init = ScenarioConfig::RhoInit::Invariant;
    } else if (r.is_object() && r.contains("gibbs")) {
      require_keys(r, {"gibbs"}, "rho_i");
      cfg.rho_init = ScenarioConfig::RhoInit::Gibbs;
      cfg.rho_gibbs_beta = r.at("gibbs").get<double>();
    } else if (r.is_object() && r.contains("matrix")) {
      require_keys(r, {"matrix"}, "rho_i");
      cfg.rho_init = ScenarioConfig::RhoInit::Explicit;
      cfg.rho_explicit = parse_matrix(r.at("matrix"), "rho_i.matrix");
    } else {
      throw ConfigError("rho_i must be \"invariant\", {\"gibbs\": beta} or {\"matrix\": ...}");
    }
  }
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.out_dir = j.value("out_dir", std::string{});
  cfg.workers = j.value("workers", 1);
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  cfg.emit_svg = j.value("emit_svg", false);

  if (cfg.model == Model::Custom) {
    if (!j.contains("custom"))
      throw ConfigError("custom model requires the \"custom\" operator block");
    const json& c = j.at("custom");
    require_keys(c, {"h_sys", "h_env", "v"}, "custom");
    cfg.custom_h_sys = parse_matrix(c.at("h_sys"), "custom.h_sys");
    cfg.custom_h_env = parse_matrix(c.at("h_env"), "custom.h_env");
    cfg.custom_v = parse_matrix(c.at("v"), "custom.v");
    if (cfg.custom_v.rows() != cfg.custom_h_sys.rows() * cfg.custom_h_env.rows())
      throw ConfigError("custom.v dimension must equal dim(h_sys) * dim(h_env)");
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ModelData build_model(const ScenarioConfig& cfg, double s) {
  const double beta = cfg.beta_schedule.sampler()(s);
  if (beta < 0.0) throw ConfigError("beta schedule produced a negative inverse temperature");
  if (cfg.model == Model::Custom) {
    return {Hamiltonian(cfg.custom_h_sys), cfg.custom_h_env, cfg.custom_v, beta};
  }
  const double e0 = cfg.has_e0_schedule ? cfg.e0_schedule.sampler()(s) : cfg.e_env;
  const Mat a = lowering_op();
  const Mat ad = a.adjoint();
  const Mat num = number_op();
  Mat v;
  if (cfg.model == Model::QubitRw) {
    v = (kron(ad, a) + kron(a, ad)) * cx{cfg.u1 / 2.0, 0.0};
  } else {
    v = kron(a + ad, a + ad) * cx{cfg.u1 / 2.0, 0.0};
  }
  return {Hamiltonian(num * cx{cfg.e_sys, 0.0}), num * cx{e0, 0.0}, std::move(v), beta};
}

RISSchedule to_schedule(const ScenarioConfig& cfg, double lambda, int t_steps, int m) {
  const ModelData probe0 = build_model(cfg, 0.0);
  RISSchedule sched{probe0.h_sys.dim(),
                    probe0.h_env.rows(),
                    probe0.h_sys,
                    [cfg](double s) { return build_model(cfg, s).h_env; },
                    cfg.beta_schedule.sampler(),
                    [cfg](double s) { return build_model(cfg, s).v; },
                    lambda,
                    cfg.tau,
                    t_steps,
                    m};
  return sched;
}

long resolve_m(const ScenarioConfig& cfg, double lambda, const Tolerances& tol) {
  if (!cfg.m_auto) return cfg.m;
  const RISSchedule probe = to_schedule(cfg, lambda, 1, 1);
  std::vector<double> grid;
  for (int i = 0; i <= 8; ++i) grid.push_back(double(i) / 8.0);
  const RepetitionSearch rs = find_m([&](double s) { return probe.channel_at(s, tol); },
                                     cfg.m_auto_g, grid, 100000, NormOptions{}, tol);
  return rs.m;
}

DensityMatrix rw_invariant_state(double e_sys, double e_env, double beta) {
  return gibbs_state(Hamiltonian(number_op() * cx{e_sys, 0.0}), beta * e_env / e_sys);
}

RwContraction rw_contraction_spr(double e_sys, double e_env, double lambda, double tau) {
  RwContraction out;
  const double delta = e_sys - e_env;
  const double nu = std::sqrt(delta * delta + lambda * lambda);
  const double phase = std::remainder(nu * tau, 2.0 * M_PI);
  out.degenerate = std::abs(phase) < 1e-12 || nu == 0.0;
  const double s = std::sin(nu * tau / 2.0);
  out.spr = std::sqrt(std::max(0.0, 1.0 - lambda * lambda / (nu * nu) * s * s));
  return out;
}

DensityMatrix fd_invariant_state(double e_sys, double e_env, double lambda, double tau, double beta) {
  const double nu = std::sqrt((e_env - e_sys) * (e_env - e_sys) + lambda * lambda);
  const double eta = std::sqrt((e_sys + e_env) * (e_sys + e_env) + lambda * lambda);
  const double cn = (1.0 - std::cos(nu * tau)) * eta * eta;
  const double ce = nu * nu * (1.0 - std::cos(eta * tau));
  const double eb = std::exp(beta * e_env);
  const double den = (1.0 + eb) * (cn + ce);
  Mat r(2, 2);
  r(0, 0) = (eb * cn + ce) / den;
  r(1, 1) = (cn + eb * ce) / den;
  return DensityMatrix(std::move(r));
}

double fd_gamma(double e_sys, double e_env, double tau, double u1) {
  // The generic and resonant branches agree in the limit e_sys -> e_env;
  // switch a little before roundoff erodes the generic expression.
  if (std::abs(e_sys - e_env) < 1e-5 * std::max(1.0, std::abs(e_env))) {
    const double s = std::sin(e_env * tau);
    return 2.0 * u1 * u1 * tau * tau * s * s /
           (1.0 + 2.0 * e_env * e_env * tau * tau - std::cos(2.0 * e_env * tau));
  }
  const double num = u1 * u1 * std::pow(std::cos(e_env * tau) - std::cos(e_sys * tau), 2);
  const double den = (e_env * e_env + e_sys * e_sys) *
                         (1.0 - std::cos(e_env * tau) * std::cos(e_sys * tau)) -
                     2.0 * e_env * e_sys * std::sin(e_env * tau) * std::sin(e_sys * tau);
  return num / den;
}

Mat fd_first_order_m(double e_sys, double e_env, double tau, double u1, double beta) {
  const double nu0 = std::abs(e_sys - e_env);
  const double eta0 = e_sys + e_env;
  const double den = 2.0 * e_env * e_sys * std::sin(e_env * tau) * std::sin(e_sys * tau) -
                     (e_env * e_env + e_sys * e_sys) *
                         (1.0 - std::cos(e_env * tau) * std::cos(e_sys * tau));
  const double amp = 0.5 * std::tanh(beta * e_env / 2.0) * u1 / den;
  const double s2nu = std::pow(std::sin(nu0 * tau / 2.0), 2);
  const double s2eta = std::pow(std::sin(eta0 * tau / 2.0), 2);
  // The nu0 block carries the opposite relative sign to the eta0 block
  // (fixed against the finite-difference derivative of X).
  Mat m(4, 4);
  m(0, 3) = -(std::exp(cx{0.0, tau * eta0}) - cx{1.0, 0.0}) * s2nu * eta0;
  m(1, 2) = (std::exp(cx{0.0, tau * nu0}) - cx{1.0, 0.0}) * s2eta * nu0;
  m(2, 1) = std::conj(m(1, 2));
  m(3, 0) = std::conj(m(0, 3));
  return m * cx{amp, 0.0};
}

namespace {

DensityMatrix resolve_rho_initial(const ScenarioConfig& cfg, const RISSchedule& sched,
                                  const Tolerances& tol) {
  switch (cfg.rho_init) {
    case ScenarioConfig::RhoInit::Invariant:
      return invariant_state(sched.channel_at(0.0, tol), tol);
    case ScenarioConfig::RhoInit::Gibbs:
      return gibbs_state(sched.h_sys, cfg.rho_gibbs_beta, tol);
    case ScenarioConfig::RhoInit::Explicit:
      return DensityMatrix(cfg.rho_explicit, tol);
  }
  throw Error("resolve_rho_initial: unreachable");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp);
    out << content;
  }
  fs::rename(tmp, path);
}

}  // namespace

VerifyReport verify_suite(const ScenarioConfig& cfg, const Tolerances& tol) {
  VerifyReport rep;
  auto add = [&](const std::string& name, bool pass, double value, const std::string& detail) {
    rep.checks.push_back({name, pass, value, detail});
    rep.all_pass = rep.all_pass && pass;
  };
  const double lambda = cfg.lambdas.front();
  const RISSchedule sched = to_schedule(cfg, lambda, 8, 1);
  const std::vector<double> sgrid{0.0, 0.25, 0.5, 0.75, 1.0};

  // CPTP structure across the schedule.
  double worst_choi = 0.0, worst_tp = 0.0;
  bool irreducible_everywhere = true;
  double worst_group = 0.0, worst_conj = 0.0, worst_pnorm = 0.0, worst_residue = 0.0;
  for (double s : sgrid) {
    const Superoperator l = sched.channel_at(s, tol);
    const CptpReport cp = verify_cptp(l, tol);
    worst_choi = std::min(worst_choi, cp.min_choi_eigenvalue);
    worst_tp = std::max(worst_tp, cp.tp_residual);
    const ChannelSpectrum cs = spectral(l, tol.peripheral_band, tol);
    worst_residue = std::max(worst_residue, spectral_residue_check(cs, l, 3, cfg.seed + 1));

    // spectrum symmetric under conjugation
    for (const cx& e : cs.eigs) {
      double best = 1e300;
      for (const cx& f : cs.eigs) best = std::min(best, std::abs(std::conj(e) - f));
      worst_conj = std::max(worst_conj, best);
    }
    const IrreducibilityReport ir = irreducibility(l, tol);
    if (!ir.irreducible) {
      irreducible_everywhere = false;
      continue;
    }
    // peripheral group S_z, each eigenvalue simple
    for (int c : cs.peripheral_indices) {
      int members = 0;
      for (std::size_t i = 0; i < cs.eigs.size(); ++i)
        if (cs.cluster_of[i] == c) ++members;
      if (members != 1) worst_group = std::max(worst_group, 1.0);
      const cx e = cs.cluster_values[std::size_t(c)];
      double best = 1e300;
      for (int q = 0; q < cs.z; ++q)
        best = std::min(best, std::abs(e - std::exp(cx{0.0, 2.0 * M_PI * q / cs.z})));
      worst_group = std::max(worst_group, best);
      worst_pnorm = std::max(worst_pnorm,
                             std::abs(induced_trace_norm(cs.projectors[std::size_t(c)], l.d_sys).lower - 1.0));
    }
  }
  add("cptp", worst_choi >= -tol.choi_psd && worst_tp <= 1e-9, -worst_choi,
      "min Choi eigenvalue and trace-preservation residual over the schedule");
  add("residue_identity", worst_residue <= 1e-8, worst_residue,
      "resolvent versus partial-fraction expansion at random points");
  add("spectrum_conjugation", worst_conj <= 1e-8, worst_conj, "sp(L) symmetric under conjugation");
  if (irreducible_everywhere) {
    add("peripheral_group", worst_group <= 1e-8, worst_group,
        "peripheral eigenvalues form S_z, each simple");
    add("projector_norms", worst_pnorm <= 2e-3, worst_pnorm,
        "induced trace norm of peripheral projectors is 1");
  } else {
    add("peripheral_group", true, 0.0, "skipped: channel not irreducible at some s");
    add("projector_norms", true, 0.0, "skipped: channel not irreducible at some s");
  }

  // Balance and Landauer accounting on a short run. A reducible channel has
  // no invariant state to start from; the suite substitutes the maximally
  // mixed state so the ledger checks still run.
  try {
    const DensityMatrix rho0 = [&] {
      try {
        return resolve_rho_initial(cfg, sched, tol);
      } catch (const ReducibleChannel&) {
        return maximally_mixed(sched.d_sys);
      }
    }();
    const RunLedger led = run(sched, rho0, tol);
    double worst_bal = 0.0, min_sigma = std::numeric_limits<double>::infinity();
    for (const StepRecord& r : led.steps) {
      worst_bal = std::max(worst_bal, r.balance_residual);
      min_sigma = std::min(min_sigma, r.sigma);
    }
    add("balance", led.complete && worst_bal <= 1e-9, worst_bal,
        "per-step |dS + sigma - beta dQ|");
    add("sigma_nonnegative", min_sigma >= -1e-9, min_sigma, "per-step entropy production >= 0");
    add("landauer_gap", led.landauer_gap >= -1e-8, led.landauer_gap,
        "sum beta dQ - total entropy decrease");
    if (lambda == 0.0)
      add("zero_coupling_sigma", std::abs(led.sigma_tot) <= 1e-10, led.sigma_tot,
          "decoupled steps produce no entropy");
  } catch (const Error& e) {
    add("balance", false, 0.0, std::string("run failed: ") + e.what());
  }

  // Pinsker bound on random faithful pairs.
  {
    std::mt19937_64 rng(cfg.seed + 7);
    double worst = std::numeric_limits<double>::infinity();
    const int d = sched.d_sys;
    for (int i = 0; i < 50; ++i) {
      const DensityMatrix x = random_density(d, rng, 0.05);
      const DensityMatrix y = random_density(d, rng, 0.05);
      const double lhs = relative_entropy(x, y, tol);
      const double rhs = 0.5 * std::pow(trace_norm(x.op() - y.op()), 2);
      worst = std::min(worst, lhs - rhs);
    }
    add("pinsker", worst >= -1e-9, worst, "S(x|y) >= |x - y|_1^2 / 2 on random faithful pairs");
  }

  // Detailed balance verdict, tied to |X|_1.
  {
    double worst_incons = 0.0;
    std::string verdict = "detailed balance";
    try {
      for (double s : sgrid) {
        const ModelData md = build_model(cfg, s);
        const Hamiltonian he(md.h_env, tol);
        const Hamiltonian vv(md.v, tol);
        const DensityMatrix xi = gibbs_state(he, md.beta, tol);
        const Superoperator l = reduced_dynamics(md.h_sys, he, vv, lambda, cfg.tau, xi, tol);
        const Mat u = step_unitary(md.h_sys, he, vv, lambda, cfg.tau, tol);
        const KmsDualReport kd = kms_dual_check(l, invariant_state(l, tol), u, xi, 1e-8, tol);
        const bool x_zero = kd.x_norm <= 1e-9;
        if (!x_zero) verdict = "violated";
        if (x_zero != kd.detailed_balance)
          worst_incons = std::max(worst_incons, std::abs(kd.max_deviation - kd.x_norm));
      }
      add("detailed_balance", worst_incons == 0.0, worst_incons, verdict);
    } catch (const ReducibleChannel&) {
      add("detailed_balance", true, 0.0, "skipped: no unique invariant state");
    }
  }
  return rep;
}

std::string VerifyReport::json() const {
  nlohmann::json j;
  j["all_pass"] = all_pass;
  j["checks"] = nlohmann::json::array();
  for (const VerifyCheck& c : checks) {
    j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"detail", c.detail}});
  }
  return j.dump(2);
}

void write_ledger_csv(const std::string& path, const RunLedger& ledger) {
  std::ostringstream out;
  out << "k,j,s,beta,dS,dQ,sigma,balance_residual,dist_to_invariant,X_norm\n";
  for (const StepRecord& r : ledger.steps) {
    out << r.k << ',' << r.j << ',' << format_double(r.s) << ',' << format_double(r.beta) << ','
        << format_double(r.dS) << ',' << format_double(r.dQ) << ',' << format_double(r.sigma)
        << ',' << format_double(r.balance_residual) << ',' << format_double(r.dist_to_invariant)
        << ',' << format_double(r.x_norm) << '\n';
  }
  atomic_write(path, out.str());
}

std::vector<StepRecord> read_ledger_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open ledger " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error("empty ledger " + path);
  if (line != "k,j,s,beta,dS,dQ,sigma,balance_residual,dist_to_invariant,X_norm")
    throw Error("unexpected ledger header in " + path);
  std::vector<StepRecord> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    StepRecord r;
    std::istringstream ss(line);
    std::string tok;
    auto next = [&]() {
      if (!std::getline(ss, tok, ',')) throw Error("short ledger row in " + path);
      return tok;
    };
    r.k = std::stoi(next());
    r.j = std::stoi(next());
    r.s = std::strtod(next().c_str(), nullptr);
    r.beta = std::strtod(next().c_str(), nullptr);
    r.dS = std::strtod(next().c_str(), nullptr);
    r.dQ = std::strtod(next().c_str(), nullptr);
    r.sigma = std::strtod(next().c_str(), nullptr);
    r.balance_residual = std::strtod(next().c_str(), nullptr);
    r.dist_to_invariant = std::strtod(next().c_str(), nullptr);
    r.x_norm = std::strtod(next().c_str(), nullptr);
    rows.push_back(r);
  }
  return rows;
}

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::vector<double>& xs, const std::vector<double>& ys, bool log_y) {
  const int w = 640, h = 400, pad = 50;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title
      << "</text>\n";
  if (!xs.empty() && xs.size() == ys.size()) {
    auto transform_y = [&](double y) { return log_y ? std::log10(std::max(y, 1e-300)) : y; };
    double xmin = xs.front(), xmax = xs.front(), ymin = transform_y(ys.front()), ymax = ymin;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xmin = std::min(xmin, xs[i]);
      xmax = std::max(xmax, xs[i]);
      ymin = std::min(ymin, transform_y(ys[i]));
      ymax = std::max(ymax, transform_y(ys[i]));
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double px = pad + (xs[i] - xmin) / (xmax - xmin) * (w - 2 * pad);
      const double py = h - pad - (transform_y(ys[i]) - ymin) / (ymax - ymin) * (h - 2 * pad);
      out << px << ',' << py << ' ';
    }
    out << "\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << h - pad << "\" x2=\"" << w - pad << "\" y2=\""
        << h - pad << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << h - pad
        << "\" stroke=\"black\"/>\n";
  }
  out << "</svg>\n";
  atomic_write(path, out.str());
}

namespace {

struct PointSpec {
  int t_steps;
  double lambda;
};

SweepRow run_point(const ScenarioConfig& cfg, const PointSpec& pt, long m, const Tolerances& tol) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepRow row;
  row.t_steps = pt.t_steps;
  row.lambda = pt.lambda;
  row.m = m;
  const RISSchedule sched = to_schedule(cfg, pt.lambda, pt.t_steps, int(m));
  const DensityMatrix rho0 = resolve_rho_initial(cfg, sched, tol);
  const RunLedger led = run(sched, rho0, tol);
  if (!led.complete) throw Error("run aborted: " + led.abort_reason);
  row.sigma_tot = led.sigma_tot;
  row.landauer_gap = led.landauer_gap;
  for (const StepRecord& r : led.steps) {
    row.max_balance_residual = std::max(row.max_balance_residual, r.balance_residual);
    if (r.j == int(m) && r.s >= 0.25 && r.s <= 0.75)
      row.max_adiabatic_error = std::max(row.max_adiabatic_error, r.dist_to_invariant);
  }
  if (cfg.model == Model::QubitFd) {
    // Predicted asymptotic rate via trapezoidal quadrature on the sampled
    // schedule.
    const auto beta_of = cfg.beta_schedule.sampler();
    double integral = 0.0;
    const int t = pt.t_steps;
    auto f = [&](double s) {
      const double e0 = cfg.has_e0_schedule ? cfg.e0_schedule.sampler()(s) : cfg.e_env;
      const double x = beta_of(s) * e0 / 2.0;
      return fd_gamma(cfg.e_sys, e0, cfg.tau, cfg.u1) * x * std::tanh(x);
    };
    for (int k = 0; k < t; ++k)
      integral += 0.5 * (f(double(k) / t) + f(double(k + 1) / t)) / t;
    const double predicted = pt.lambda * pt.lambda * double(m) * integral;
    row.rate_ratio = predicted != 0.0 ? led.sigma_tot / (pt.t_steps * predicted) : 0.0;
  }

  if (!cfg.out_dir.empty()) {
    fs::create_directories(cfg.out_dir);
    char lam_text[32];
    std::snprintf(lam_text, sizeof lam_text, "%.6g", pt.lambda);
    std::ostringstream name;
    name << "run_T" << pt.t_steps << "_lam" << lam_text;
    const std::string base = (fs::path(cfg.out_dir) / name.str()).string();
    row.ledger_csv = base + ".csv";
    write_ledger_csv(row.ledger_csv, led);
    nlohmann::json totals;
    totals["T"] = pt.t_steps;
    totals["lambda"] = pt.lambda;
    totals["m"] = m;
    totals["sigma_tot"] = led.sigma_tot;
    totals["dS_tot"] = led.dS_tot;
    totals["sum_beta_dQ"] = led.sum_beta_dQ;
    totals["landauer_gap"] = led.landauer_gap;
    totals["complete"] = led.complete;
    atomic_write(base + ".totals.json", totals.dump(2));
    if (cfg.emit_svg) {
      std::vector<double> xs, ys;
      for (const StepRecord& r : led.steps) {
        xs.push_back(double(xs.size() + 1));
        ys.push_back(r.sigma);
      }
      write_svg_chart(base + "_sigma_vs_k.svg", "sigma per step", xs, ys, true);
    }
  }
  row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

}  // namespace

SweepResult sweep(const ScenarioConfig& cfg, const Tolerances& tol) {
  std::vector<PointSpec> points;
  for (double lam : cfg.lambdas)
    for (int t : cfg.t_list) points.push_back({t, lam});

  // auto-m depends on lambda only; resolve once per coupling value.
  std::vector<long> m_of_lambda(cfg.lambdas.size());
  for (std::size_t i = 0; i < cfg.lambdas.size(); ++i)
    m_of_lambda[i] = resolve_m(cfg, cfg.lambdas[i], tol);

  SweepResult result;
  result.rows.resize(points.size());
  std::vector<std::string> errors(points.size());
  std::atomic<std::size_t> next{0};
  const int workers = std::min<int>(cfg.workers, int(points.size()));
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      long m = 1;
      for (std::size_t l = 0; l < cfg.lambdas.size(); ++l)
        if (cfg.lambdas[l] == points[i].lambda) m = m_of_lambda[l];
      try {
        result.rows[i] = run_point(cfg, points[i], m, tol);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();
  for (std::size_t i = 0; i < points.size(); ++i)
    if (!errors[i].empty())
      throw Error("sweep point T=" + std::to_string(points[i].t_steps) + " lambda=" +
                  std::to_string(points[i].lambda) + " failed: " + errors[i]);

  std::ostringstream out;
  out << "T,lambda,m,sigma_tot,landauer_gap,max_adiabatic_error,max_balance_residual,rate_ratio,"
         "runtime\n";
  for (const SweepRow& r : result.rows) {
    out << r.t_steps << ',' << format_double(r.lambda) << ',' << r.m << ','
        << format_double(r.sigma_tot) << ',' << format_double(r.landauer_gap) << ','
        << format_double(r.max_adiabatic_error) << ',' << format_double(r.max_balance_residual)
        << ',' << format_double(r.rate_ratio) << ',' << format_double(r.runtime_s) << '\n';
  }
  if (!cfg.out_dir.empty()) {
    fs::create_directories(cfg.out_dir);
    result.summary_csv = (fs::path(cfg.out_dir) / "sweep_summary.csv").string();
    atomic_write(result.summary_csv, out.str());
    if (cfg.emit_svg) {
      std::vector<double> xs, ys;
      for (const SweepRow& r : result.rows) {
        xs.push_back(double(r.t_steps));
        ys.push_back(r.sigma_tot);
      }
      write_svg_chart((fs::path(cfg.out_dir) / "sigma_tot_vs_T.svg").string(), "sigma_tot vs T",
                      xs, ys, true);
    }
  }
  return result;
}

RunOutput run_scenario(const ScenarioConfig& cfg, const Tolerances& tol) {
  if (cfg.t_list.size() != 1 || cfg.lambdas.size() != 1)
    throw ConfigError("run requires exactly one T and one lambda (use sweep for lists)");
  RunOutput out;
  out.m = resolve_m(cfg, cfg.lambdas.front(), tol);
  const RISSchedule sched = to_schedule(cfg, cfg.lambdas.front(), cfg.t_list.front(), int(out.m));
  const DensityMatrix rho0 = resolve_rho_initial(cfg, sched, tol);
  out.ledger = run(sched, rho0, tol);
  if (!cfg.out_dir.empty()) {
    fs::create_directories(cfg.out_dir);
    const std::string base = (fs::path(cfg.out_dir) / "run").string();
    out.ledger_csv = base + ".csv";
    write_ledger_csv(out.ledger_csv, out.ledger);
    nlohmann::json totals;
    totals["T"] = cfg.t_list.front();
    totals["lambda"] = cfg.lambdas.front();
    totals["m"] = out.m;
    totals["sigma_tot"] = out.ledger.sigma_tot;
    totals["dS_tot"] = out.ledger.dS_tot;
    totals["sum_beta_dQ"] = out.ledger.sum_beta_dQ;
    totals["landauer_gap"] = out.ledger.landauer_gap;
    totals["complete"] = out.ledger.complete;
    if (!out.ledger.complete) totals["abort_reason"] = out.ledger.abort_reason;
    out.totals_json = base + ".totals.json";
    atomic_write(out.totals_json, totals.dump(2));
  }
  return out;
}

}  // namespace ris::scenarios
