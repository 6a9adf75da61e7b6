#include "dprime/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>

#include "dprime/io.hpp"

namespace dprime {

using nlohmann::json;
using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

void ExperimentConfig::check() const {
  if (pair != "sine" && pair != "eta_csv" && pair != "pair_csv")
    throw ConfigError("config: pair must be \"sine\", {\"eta_csv\": path} or {\"pair_csv\": path}");
  if (pair != "sine" && pair_path.empty()) throw ConfigError("config: pair CSV path is empty");
  if (!std::isfinite(alpha) || !std::isfinite(beta)) throw ConfigError("config: alpha and beta must be finite");
  if (alpha == 0.0) throw ConfigError("config: alpha must be nonzero");
  if (alpha_override && (*alpha_override == 0.0 || !std::isfinite(*alpha_override)))
    throw ConfigError("config: alpha_override must be finite and nonzero");
  if (zetas.empty()) throw ConfigError("config: zeta list is empty");
  for (const auto& z : zetas)
    if (!(std::isfinite(z.real()) && std::isfinite(z.imag())) || z.imag() == 0.0)
      throw ConfigError("config: every zeta must be nonreal");
  if (eps.empty()) throw ConfigError("config: epsilon list is empty");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0 && eps[i] <= 1)) throw ConfigError("config: epsilon values must lie in (0, 1]");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw ConfigError("config: epsilon values must be strictly decreasing");
  }
  if (n < 3 || n % 2 == 0) throw ConfigError("config: grid.n must be odd and >= 3");
  if (points_per_eps < 32) throw ConfigError("config: grid.points_per_eps must be >= 32");
  if (!(half_width > 0)) throw ConfigError("config: grid.half_width must be positive");
  if (window != "quartic") throw ConfigError("config: window must be \"quartic\"");
  if (forcing != "gaussian" && forcing != "zero") throw ConfigError("config: forcing must be \"gaussian\" or \"zero\"");
  if (max_iterations < 1 || !(rel_tol > 0)) throw ConfigError("config: bad power iteration settings");
  if (synthetic && !(synthetic->first > 0)) throw ConfigError("config: synthetic.C must be positive");
}

ExperimentConfig config_from_json(const json& j) {
  static const std::set<std::string> known{"pair", "alpha", "beta", "zeta", "epsilon", "grid", "window", "forcing",
                                           "out", "seed", "power", "alpha_override", "synthetic"};
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw ConfigError("config: unknown key '" + k + "'");
  ExperimentConfig c;
  try {
    if (j.contains("pair")) {
      const auto& p = j.at("pair");
      if (p.is_string()) {
        c.pair = p.get<std::string>();
      } else if (p.is_object() && p.size() == 1) {
        c.pair = p.begin().key();
        c.pair_path = p.begin().value().get<std::string>();
      } else {
        throw ConfigError("config: bad pair entry");
      }
    }
    if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
    if (j.contains("beta")) c.beta = j.at("beta").get<double>();
    if (j.contains("zeta")) {
      c.zetas.clear();
      for (const auto& z : j.at("zeta")) {
        if (!z.is_array() || z.size() != 2) throw ConfigError("config: zeta entries are [re, im]");
        c.zetas.emplace_back(z[0].get<double>(), z[1].get<double>());
      }
    }
    if (j.contains("epsilon")) c.eps = j.at("epsilon").get<std::vector<double>>();
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      for (const auto& [k, v] : g.items())
        if (k != "n" && k != "points_per_eps" && k != "half_width") throw ConfigError("config: unknown grid key '" + k + "'");
      if (g.contains("n")) c.n = g.at("n").get<std::size_t>();
      if (g.contains("points_per_eps")) c.points_per_eps = g.at("points_per_eps").get<int>();
      if (g.contains("half_width")) c.half_width = g.at("half_width").get<double>();
    }
    if (j.contains("window")) c.window = j.at("window").get<std::string>();
    if (j.contains("forcing")) c.forcing = j.at("forcing").get<std::string>();
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("power")) {
      const auto& p = j.at("power");
      if (p.contains("max_iterations")) c.max_iterations = p.at("max_iterations").get<int>();
      if (p.contains("rel_tol")) c.rel_tol = p.at("rel_tol").get<double>();
    }
    if (j.contains("alpha_override") && !j.at("alpha_override").is_null())
      c.alpha_override = j.at("alpha_override").get<double>();
    if (j.contains("synthetic") && !j.at("synthetic").is_null())
      c.synthetic = std::make_pair(j.at("synthetic").at("C").get<double>(), j.at("synthetic").at("p").get<double>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.check();
  return c;
}

ojson config_to_json(const ExperimentConfig& c) {
  ojson j;
  if (c.pair == "sine")
    j["pair"] = "sine";
  else
    j["pair"] = ojson{{c.pair, c.pair_path}};
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["zeta"] = ojson::array();
  for (const auto& z : c.zetas) j["zeta"].push_back({z.real(), z.imag()});
  j["epsilon"] = c.eps;
  j["grid"] = ojson{{"n", c.n}, {"points_per_eps", c.points_per_eps}, {"half_width", c.half_width}};
  j["window"] = c.window;
  j["forcing"] = c.forcing;
  j["out"] = c.out;
  j["seed"] = c.seed;
  j["power"] = ojson{{"max_iterations", c.max_iterations}, {"rel_tol", c.rel_tol}};
  j["alpha_override"] = c.alpha_override ? ojson(*c.alpha_override) : ojson(nullptr);
  j["synthetic"] = c.synthetic ? ojson{{"C", c.synthetic->first}, {"p", c.synthetic->second}} : ojson(nullptr);
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
  return config_from_json(j);
}

PerturbationPair make_pair(const ExperimentConfig& c) {
  if (c.pair == "sine") return sine_pair(c.n);
  if (c.pair == "eta_csv") return io::read_eta_csv(c.pair_path);
  return io::read_pair_csv(c.pair_path);
}

std::function<Complex(double)> make_forcing(const std::string& name) {
  if (name == "zero") return [](double) { return Complex{}; };
  if (name == "gaussian") {
    const double c = std::pow(std::numbers::pi, -0.25);
    return [c](double x) { return Complex(c * std::exp(-x * x), 0.0); };
  }
  throw ConfigError("unknown forcing " + name);
}

RealFn random_smooth_rhs(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  double c[8], d[8];
  for (int j = 0; j < 8; ++j) {
    c[j] = nd(rng) / (1 + j);
    d[j] = nd(rng) / (1 + j);
  }
  RealFn h = make_grid_function(
      [&](double t) {
        double s = 0;
        for (int j = 0; j < 8; ++j) {
          const double a = j * std::numbers::pi * (t + 1) / 2;
          s += c[j] * std::cos(a) + d[j] * std::sin(a);
        }
        return s;
      },
      g);
  const double nh = pair_norm(h);
  for (auto& v : h.values) v /= nh;
  return h;
}

BvpSuiteResult bvp_suite(const PerturbationPair& pair, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BvpSuiteResult r;
  for (int i = 0; i < count; ++i) {
    const RealFn h = random_smooth_rhs(pair.grid(), rng);
    const auto [a, b] = solvability_data(pair, h);
    const BvpSolution s = solve_bvp(pair, {h, a, b});
    const double nh = pair_norm(h);
    r.max_boundary = std::max({r.max_boundary, std::abs(s.v.values.front()), std::abs(s.v.values.back())});
    r.max_residual = std::max(r.max_residual, s.residual / nh);
    r.max_consistency = std::max(r.max_consistency, std::abs(s.g1 - s.g2) / (1 + nh));
    r.max_w2_ratio = std::max(r.max_w2_ratio, w2_norm(s.v) / nh);
  }
  return r;
}

namespace {

void write_json(const fs::path& p, const ojson& j) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << j.dump(2) << '\n';
}

fs::path out_dir(const ExperimentConfig& c) {
  fs::path d(c.out);
  fs::create_directories(d);
  return d;
}

ojson zeta_json(Complex z) { return ojson::array({z.real(), z.imag()}); }

struct Coupling {
  PerturbationPair pair;
  CouplingPotential q;
};

Coupling design_coupling(const ExperimentConfig& c) {
  Coupling k{make_pair(c), {}};
  const Moments a = moments_for_target(c.alpha, c.beta, k.pair.kappa);
  k.q = synthesize_q(k.pair, a, quartic_window(k.pair.grid()));
  return k;
}

LineProblem base_problem(const ExperimentConfig& c, Complex zeta) {
  LineProblem p;
  p.half_width = c.half_width;
  p.zeta = zeta;
  return p;
}

}  // namespace

int cmd_verify(const ExperimentConfig& c, std::ostream& log) {
  const fs::path dir = out_dir(c);
  const PerturbationPair pair = make_pair(c);
  struct Row {
    std::string name;
    double measured, tol;
    bool pass;
  };
  std::vector<Row> rows;
  auto add = [&](const std::string& name, double m, double tol) {
    rows.push_back({name, m, tol, std::isfinite(m) && std::abs(m) <= tol});
  };

  const PairValidationReport rep = validate_pair(pair);
  for (const auto& ch : rep.checks) rows.push_back({"pair." + ch.name, ch.measured, ch.tolerance, ch.pass});
  const KappaPair kp = kappa_crosscheck(pair);
  add("kappa_crosscheck", kp.from_omega - kp.from_moments, 1e-8);
  const HalfboundResiduals hb = halfbound_residuals(pair);
  add("halfbound.r_const", hb.r_const, 1e-10);
  add("halfbound.r_omega", hb.r_omega, 1e-6);
  add("halfbound.kernel_degeneracy", pair.n1 * pair.n1 * pair.n2 * pair.n2 - 1.0, 1e-12);
  try {
    const BvpSuiteResult b = bvp_suite(pair, 100, c.seed);
    add("bvp.boundary", b.max_boundary, 1e-8);
    add("bvp.residual", b.max_residual, 1e-6);
    add("bvp.consistency", b.max_consistency, 1e-10);
    std::mt19937_64 rng(c.seed);
    const RealFn h = random_smooth_rhs(pair.grid(), rng);
    const auto [a, bb] = solvability_data(pair, h);
    io::write_bvp_csv((dir / "bvp_sample.csv").string(), solve_bvp(pair, {h, a, bb}).v);
  } catch (const Error& e) {
    log << "bvp suite: " << e.what() << '\n';
    add("bvp.solvable", INFINITY, 0.0);
  }
  io::write_pair_csv((dir / "pair.csv").string(), pair);

  bool ok = true;
  ojson checks = ojson::array();
  for (const auto& r : rows) {
    ok = ok && r.pass;
    checks.push_back(ojson{{"name", r.name}, {"measured", std::isfinite(r.measured) ? ojson(r.measured) : ojson(nullptr)},
                           {"tolerance", r.tol}, {"pass", r.pass}});
    if (!r.pass) log << "FAILED " << r.name << ": measured " << r.measured << ", tolerance " << r.tol << '\n';
  }
  write_json(dir / "verify.json", ojson{{"pass", ok}, {"kappa", pair.kappa}, {"checks", checks}});
  log << (ok ? "verify: all checks pass" : "verify: check failure") << " (kappa = " << pair.kappa << ")\n";
  return ok ? 0 : 1;
}

int cmd_design(const ExperimentConfig& c, std::ostream& log) {
  const fs::path dir = out_dir(c);
  const PerturbationPair pair = make_pair(c);
  Moments target;
  try {
    target = moments_for_target(c.alpha, c.beta, pair.kappa);
  } catch (const ConfigError& e) {
    log << "design: " << e.what() << '\n';
    return 1;
  }
  const CouplingPotential q = synthesize_q(pair, target, quartic_window(pair.grid()));
  const PointInteraction back = alphabeta_of(q.a, pair.kappa);
  io::write_q_csv((dir / "q.csv").string(), q.q);
  write_json(dir / "design.json", ojson{{"alpha", c.alpha},
                                        {"beta", c.beta},
                                        {"kappa", pair.kappa},
                                        {"a0", q.a[0]},
                                        {"a1", q.a[1]},
                                        {"a2", q.a[2]},
                                        {"gram_residual", q.gram_residual}});
  std::vector<double> ks;
  for (int i = 1; i <= 100; ++i) ks.push_back(0.1 * i);
  io::write_scattering_csv((dir / "scattering.csv").string(), {c.alpha, c.beta}, ks);
  log << "design: a = (" << q.a[0] << ", " << q.a[1] << ", " << q.a[2] << "), recovered alpha = " << back.alpha
      << ", beta = " << back.beta << '\n';
  return 0;
}

int cmd_converge(const ExperimentConfig& c, std::ostream& log) {
  if (c.eps.size() < 3) {
    log << "converge: need at least 3 epsilon values to fit a rate\n";
    return 2;
  }
  const fs::path dir = out_dir(c);
  std::optional<Coupling> k;
  std::optional<FastCoupling> fast;
  if (!c.synthetic) {
    k = design_coupling(c);
    fast = adapt_coupling(k->pair, k->q, c.points_per_eps);
  }
  const SamplingSpec spec{c.seed, c.max_iterations, c.rel_tol};
  bool ok = true;
  for (std::size_t i = 0; i < c.zetas.size(); ++i) {
    ConvergenceReport rep;
    if (c.synthetic) {
      rep.zeta = c.zetas[i];
      std::vector<std::pair<double, double>> pts;
      for (double e : c.eps) {
        const double g = c.synthetic->first * std::pow(e, c.synthetic->second);
        rep.entries.push_back({e, {g, 0, false}});
        pts.emplace_back(e, g);
      }
      rep.fit = fit_rate(pts);
    } else {
      const LineProblem p = base_problem(c, c.zetas[i]);
      rep = convergence_sweep(*fast, {c.alpha, c.beta}, p, c.eps, spec);
    }
    const std::string suffix = c.zetas.size() == 1 ? "" : "_zeta" + std::to_string(i);
    io::write_sweep_csv((dir / ("sweep" + suffix + ".csv")).string(), rep);
    write_json(dir / ("rate" + suffix + ".json"), ojson{{"slope", rep.fit.slope},
                                                        {"intercept", rep.fit.intercept},
                                                        {"r2", rep.fit.r2},
                                                        {"zeta", zeta_json(c.zetas[i])},
                                                        {"alpha", c.alpha},
                                                        {"beta", c.beta}});
    const bool dec = rep.strictly_decreasing();
    ok = ok && dec && rep.fit.slope >= 0.45;
    log << "converge: zeta = " << c.zetas[i] << ", slope " << rep.fit.slope << ", r2 " << rep.fit.r2
        << (dec ? "" : ", gaps not strictly decreasing") << '\n';
    for (const auto& e : rep.entries)
      if (e.gap.warn) log << "  warning: power iteration did not settle at eps = " << e.eps << '\n';
  }
  return ok ? 0 : 1;
}

int cmd_diagnose(const ExperimentConfig& c, std::ostream& log) {
  const fs::path dir = out_dir(c);
  const Coupling k = design_coupling(c);
  const FastCoupling fast = adapt_coupling(k.pair, k.q, c.points_per_eps);
  PointInteraction in{c.alpha, c.beta};
  if (c.alpha_override) in.alpha = *c.alpha_override;
  const auto f = make_forcing(c.forcing);
  const double fnorm = c.forcing == "zero" ? 0.0 : 1.0;
  const LineProblem p = base_problem(c, c.zetas.front());
  const auto rows = diagnostic_sweep(fast, in, p, c.eps, f);
  io::write_diagnostics_csv((dir / "diagnostics.csv").string(), rows);
  const double tol = 1e-7 * (fnorm + 1);
  bool ok = true;
  ojson per = ojson::array();
  for (const auto& r : rows) {
    ok = ok && r.zero_terms <= tol;
    per.push_back(ojson{{"epsilon", r.eps},
                        {"zero_terms", r.zero_terms},
                        {"trace_sum", r.trace_sum},
                        {"gluing_defect", r.gluing},
                        {"jump_mismatch", r.jump_mismatch}});
  }
  write_json(dir / "diagnostics.json", ojson{{"zeta", zeta_json(p.zeta)},
                                             {"alpha", in.alpha},
                                             {"beta", in.beta},
                                             {"zero_terms_tolerance", tol},
                                             {"pass", ok},
                                             {"rows", per}});
  for (const auto& r : rows)
    log << "diagnose: eps " << r.eps << ", jumps " << r.jump_sum << ", residual " << r.residual << ", |Y-u| "
        << r.y_minus_u << ", zero terms " << r.zero_terms << '\n';
  if (!ok) log << "diagnose: zero-terms residual above " << tol << " (q inconsistent with alpha, beta)\n";
  return ok ? 0 : 1;
}

}  // namespace dprime
