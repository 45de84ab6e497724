#pragma once

// Subcommands of the coexkit command-line tool. Kept in a header so the test
// suite can drive the tool in-process through run().

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coexkit/coexkit.hpp"
#include "coexkit/json_io.hpp"

namespace coexkit::cli {

using nlohmann::json;
namespace io = coexkit::json;

namespace exit_code {
inline constexpr int yes = 0;
inline constexpr int no = 1;
inline constexpr int uncertain = 2;
inline constexpr int usage = 3;
inline constexpr int failure = 4;
}  // namespace exit_code

/// Bad flags or malformed/invalid input; maps to exit_code::usage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::uint64_t seed = 0;
  double tol = 1e-6;  // decision slack for closed-form verdicts
  std::size_t grid_n = default_grid_points;
  double grid_l = default_grid_half_width;
  std::size_t quad_order = 64;
  std::optional<std::string> json_file;
  bool oracle = false;

  void validate() const {
    if (!(tol > 0.0)) throw UsageError("--tol must be positive");
    if (grid_n < 2 || (grid_n & (grid_n - 1)) != 0) throw UsageError("--grid-n must be a power of two >= 2");
    if (!(grid_l > 0.0)) throw UsageError("--grid-l must be positive");
    if (quad_order < 2 || quad_order % 2 != 0) throw UsageError("--quad-order must be even and >= 2");
  }
  Grid grid() const { return Grid::symmetric(grid_n, grid_l); }
};

struct CommandResult {
  json report;
  int code = exit_code::yes;
};

namespace detail {

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

inline json bloch_json(const QubitBloch& q) { return {{"a0", q.a0}, {"a", {q.a[0], q.a[1], q.a[2]}}}; }

inline Vec3 to_vec3(const std::vector<double>& v, const char* flag) {
  if (v.size() != 3) throw UsageError(std::string(flag) + " expects three comma-separated numbers");
  return {v[0], v[1], v[2]};
}

inline QubitBloch checked_effect(const QubitBloch& q, const char* which) {
  if (!q.is_effect()) {
    std::ostringstream s;
    s << "effect " << which << " is not in [0, I]: a0 = " << q.a0 << ", |a| = " << norm(q.a);
    throw UsageError(s.str());
  }
  return q;
}

}  // namespace detail

// ---- coex / oracle -----------------------------------------------------------

struct PairInput {
  std::optional<std::vector<double>> a, b;
  double a0 = 0.5, b0 = 0.5;
  bool unbiased = false;
};

/// Two effects, from --json {"A": matrix, "B": matrix} or Bloch flags.
struct EffectPair {
  HermitianMatrix a, b;
};

inline EffectPair load_pair(const PairInput& in, const RunConfig& cfg) {
  if (cfg.json_file) {
    const json j = detail::read_json_file(*cfg.json_file);
    try {
      EffectPair p{io::hermitian_from_json(j.at("A")), io::hermitian_from_json(j.at("B"))};
      Effect(p.a);
      Effect(p.b);
      if (p.a.dim() != p.b.dim()) throw UsageError("effects A and B differ in dimension");
      return p;
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(*cfg.json_file + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw UsageError(*cfg.json_file + ": " + e.what());
    }
  }
  if (!in.a || !in.b) throw UsageError("need --a and --b (or --json)");
  if (in.unbiased && (in.a0 != 0.5 || in.b0 != 0.5)) throw UsageError("--unbiased fixes a0 = b0 = 0.5");
  const auto qa = detail::checked_effect({in.a0, detail::to_vec3(*in.a, "--a")}, "A");
  const auto qb = detail::checked_effect({in.b0, detail::to_vec3(*in.b, "--b")}, "B");
  return {bloch_to_matrix(qa), bloch_to_matrix(qb)};
}

inline FeasibilityResult run_oracle(const EffectPair& p, const RunConfig& cfg, double feas_tol) {
  if (p.a.dim() > 8) throw UsageError("oracle supports dimension <= 8");
  FeasibilityConfig fc;
  fc.seed = cfg.seed;
  fc.feas_tol = feas_tol;
  return joint_feasibility(binary_povm(p.a), binary_povm(p.b), fc);
}

inline int oracle_code(const FeasibilityResult& r) {
  switch (r.status) {
    case FeasibilityStatus::feasible: return exit_code::yes;
    case FeasibilityStatus::infeasible: return exit_code::no;
    case FeasibilityStatus::boundary_uncertain: return exit_code::uncertain;
  }
  return exit_code::failure;
}

inline CommandResult cmd_coex(const PairInput& in, const RunConfig& cfg, double feas_tol = 1e-7) {
  const EffectPair p = load_pair(in, cfg);
  if (p.a.dim() != 2) throw UsageError("coex needs qubit effects; use the oracle subcommand for d > 2");
  const QubitBloch qa = matrix_to_bloch(p.a), qb = matrix_to_bloch(p.b);
  const bool unbiased = in.unbiased && !cfg.json_file;
  const CoexistenceReport rep = unbiased ? coexist_unbiased(qa.a, qb.a, cfg.tol) : coexist_qubit(qa, qb, cfg.tol);

  CommandResult out;
  out.report = {{"command", "coex"},
                {"criterion", unbiased ? "unbiased" : "general"},
                {"tol", cfg.tol},
                {"A", detail::bloch_json(qa)},
                {"B", detail::bloch_json(qb)},
                {"report", io::to_json(rep)}};
  out.code = rep.coexistent ? exit_code::yes : exit_code::no;
  if (cfg.oracle) {
    const FeasibilityResult r = run_oracle(p, cfg, feas_tol);
    out.report["seed"] = cfg.seed;
    out.report["oracle"] = io::to_json(r);
    const bool agree = r.status != FeasibilityStatus::boundary_uncertain && r.feasible == rep.coexistent;
    out.report["oracle_agrees"] = agree;
    if (!agree) out.code = exit_code::uncertain;
  }
  return out;
}

inline CommandResult cmd_oracle(const PairInput& in, const RunConfig& cfg, double feas_tol = 1e-7) {
  const EffectPair p = load_pair(in, cfg);
  const FeasibilityResult r = run_oracle(p, cfg, feas_tol);
  CommandResult out;
  out.report = {{"command", "oracle"}, {"seed", cfg.seed}, {"dim", p.a.dim()}, {"feas_tol", feas_tol},
                {"result", io::to_json(r)}};
  out.code = oracle_code(r);
  return out;
}

// ---- moments -----------------------------------------------------------------

struct MomentsInput {
  std::optional<unsigned> hermite;
  std::optional<double> gaussian;  // packet width
  double sigma = 0.5;
  std::size_t order = 8;
};

inline WaveFunction state_from(const std::optional<unsigned>& hermite, const std::optional<double>& gaussian,
                               const RunConfig& cfg) {
  if (hermite && gaussian) throw UsageError("choose one of --hermite and --gaussian");
  const Grid g = cfg.grid();
  try {
    if (gaussian) {
      if (!(*gaussian > 0.0)) throw UsageError("--gaussian width must be positive");
      return gaussian_state(g, 0.0, *gaussian);
    }
    return hermite_state(hermite.value_or(0), g);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

inline CommandResult cmd_moments(const MomentsInput& in, const RunConfig& cfg) {
  if (in.sigma < 0.0) throw UsageError("--sigma must be >= 0");
  if (in.order < 1 || in.order > 20) throw UsageError("--order must be in 1..20");
  auto load = [&]() -> WaveFunction {
    if (!cfg.json_file) return state_from(in.hermite, in.gaussian, cfg);
    try {
      return io::wavefunction_from_json(detail::read_json_file(*cfg.json_file));
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(e.what());
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  };
  const WaveFunction psi = load();
  const auto sharp_p = position_distribution(psi);
  const auto mu = gaussian_kernel(in.sigma, psi.grid().dx);
  const auto sharp = moments(sharp_p, in.order);
  const auto mu_m = moments(mu, in.order);
  const auto conv = moments(convolve(mu, sharp_p), in.order);
  const auto rec = reconstruct_moments(conv, mu_m, in.order);
  double worst = 0.0;
  for (std::size_t k = 0; k <= in.order; ++k)
    worst = std::max(worst, std::abs(rec[k] - sharp[k]) / std::max(1.0, std::abs(sharp[k])));
  const auto growth = growth_check(sharp, 2.0, 2.0);

  CommandResult out;
  json state = cfg.json_file ? json{{"source", "file"}}
               : in.gaussian ? json{{"gaussian_width", *in.gaussian}}
                             : json{{"hermite", in.hermite.value_or(0)}};
  out.report = {{"command", "moments"},
                {"state", state},
                {"sigma", in.sigma},
                {"order", in.order},
                {"grid", {{"n", psi.grid().size}, {"x0", psi.grid().x0}, {"dx", psi.grid().dx}}},
                {"sharp", sharp.values()},
                {"smearing", mu_m.values()},
                {"convolved", conv.values()},
                {"reconstructed", rec.values()},
                {"max_relative_error", worst},
                {"growth_check",
                 {{"C", 2.0}, {"R", 2.0}, {"passed", growth.passed},
                  {"first_violation", growth.first_violation ? json(*growth.first_violation) : json()}}}};
  return out;
}

// ---- spin --------------------------------------------------------------------

struct SpinInput {
  std::optional<std::vector<double>> direction;
};

inline CommandResult cmd_spin(const SpinInput& in, const RunConfig& cfg) {
  Direction n;
  if (in.direction) {
    try {
      n = Direction::normalize(detail::to_vec3(*in.direction, "--direction"));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  const auto g = build_spin_joint();
  const auto [e1, e2] = spin_marginals(g);
  json recon = json::array();
  bool exact = true;
  for (const auto* e : {&e1, &e2}) {
    const auto r = reconstruct_sharp(*e);
    const double err = std::max(frobenius_distance(r.projections[0], spin_projection(r.axis, 1)),
                                frobenius_distance(r.projections[1], spin_projection(r.axis, -1)));
    exact = exact && err < 1e-12;
    recon.push_back({{"axis", {r.axis[0], r.axis[1], r.axis[2]}},
                     {"contrast", r.contrast},
                     {"mu", r.mu},
                     {"projections", io::to_json(r.projections)},
                     {"projection_error", err}});
  }
  const auto coex = coexist_unbiased(matrix_to_bloch(e1[0]).a, matrix_to_bloch(e2[0]).a);

  const auto quad = make_sphere_quadrature(cfg.quad_order, 2 * cfg.quad_order);
  const auto hemi = hemisphere_marginal(n, quad);
  const auto hemi_rec = reconstruct_sharp(hemi);

  CommandResult out;
  out.report = {{"command", "spin"},
                {"joint", io::to_json(g)},
                {"marginals", {io::to_json(e1), io::to_json(e2)}},
                {"marginal_bloch", {detail::bloch_json(matrix_to_bloch(e1[0])), detail::bloch_json(matrix_to_bloch(e2[0]))}},
                {"reconstruction", recon},
                {"reconstruction_exact", exact},
                {"coexistence", io::to_json(coex)},
                {"hemisphere",
                 {{"direction", {n.v[0], n.v[1], n.v[2]}},
                  {"quad_order", cfg.quad_order},
                  {"effects", io::to_json(hemi)},
                  {"bloch", {detail::bloch_json(matrix_to_bloch(hemi[0])), detail::bloch_json(matrix_to_bloch(hemi[1]))}},
                  {"contrast", hemi_rec.contrast},
                  {"mu", hemi_rec.mu}}}};
  return out;
}

// ---- phase -------------------------------------------------------------------

struct PhaseInput {
  std::optional<unsigned> hermite;
  std::optional<double> gaussian;
};

inline CommandResult cmd_phase(const PhaseInput& in, const RunConfig& cfg) {
  auto load = [&]() -> GeneratingOperator {
    if (!cfg.json_file) {
      const auto width = in.hermite || in.gaussian ? in.gaussian : std::optional<double>(1.0);
      return GeneratingOperator(state_from(in.hermite, width, cfg));
    }
    try {
      return io::generator_from_json(detail::read_json_file(*cfg.json_file));
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(e.what());
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  };
  const GeneratingOperator t = load();
  const auto md = marginal_densities(t);
  const auto u = uncertainty_check(md);
  CommandResult out;
  json gen = cfg.json_file ? json{{"source", "file"}, {"components", t.components().size()}}
             : in.hermite  ? json{{"hermite", *in.hermite}}
                           : json{{"gaussian_width", in.gaussian.value_or(1.0)}};
  out.report = {{"command", "phase"},
                {"generator", gen},
                {"mean_f", mean(md.f)},
                {"mean_g", mean(md.g)},
                {"var_f", u.var_f},
                {"var_g", u.var_g},
                {"product", u.product},
                {"bound", uncertainty_bound},
                {"satisfied", u.satisfied}};
  out.code = u.satisfied ? exit_code::yes : exit_code::no;
  return out;
}

// ---- selftest ----------------------------------------------------------------

inline CommandResult cmd_selftest(const RunConfig& cfg) {
  json checks = json::array();
  bool all = true;
  auto check = [&](const std::string& name, bool ok, double value) {
    checks.push_back({{"name", name}, {"passed", ok}, {"value", value}});
    all = all && ok;
  };
  const double q = std::numbers::sqrt2 / 4;

  const auto boundary = coexist_unbiased({q, 0, 0}, {0, q, 0});
  check("unbiased boundary margin", std::abs(boundary.margin) < 1e-12, boundary.margin);

  const auto proj = coexist_qubit({0.5, {0.5, 0, 0}}, {0.5, {0, 0.5, 0}});
  check("orthogonal projections excluded", !proj.coexistent, proj.margin);

  FeasibilityConfig fc;
  fc.seed = cfg.seed;
  const auto [e1, e2] = spin_marginals(build_spin_joint());
  const auto feas = joint_feasibility(e1, e2, fc);
  check("oracle finds spin joint observable", feas.feasible, feas.residual);
  const auto infeas = joint_feasibility(sharp_spin({1, 0, 0}), sharp_spin({0, 0, 1}), fc);
  check("oracle rejects sharp sigma1/sigma3", infeas.status == FeasibilityStatus::infeasible, infeas.residual);

  const auto r = reconstruct_sharp(e1);
  const double rerr = frobenius_distance(r.projections[0], spin_projection({1, 0, 0}, 1));
  check("spin reconstruction", rerr < 1e-12, rerr);

  const Grid g = cfg.grid();
  const auto psi = hermite_state(2, g);
  const auto sharp_p = position_distribution(psi);
  const auto mu = gaussian_kernel(0.5, g.dx);
  const auto rec = reconstruct_moments(moments(convolve(mu, sharp_p), 8), moments(mu, 8), 8);
  const auto sharp = moments(sharp_p, 8);
  double merr = 0.0;
  for (std::size_t k = 0; k <= 8; ++k) merr = std::max(merr, std::abs(rec[k] - sharp[k]) / std::max(1.0, std::abs(sharp[k])));
  check("moment recursion", merr < 1e-4, merr);

  const auto u = uncertainty_check(marginal_densities(GeneratingOperator(hermite_state(0, g))));
  check("ground state uncertainty product", std::abs(u.product - 0.25) < 1e-6, u.product);

  const auto hemi = hemisphere_marginal(Direction({0, 0, 1}), make_sphere_quadrature(cfg.quad_order, 2 * cfg.quad_order));
  const double herr = frobenius_distance(hemi[0], bloch_to_matrix({0.5, {0, 0, 0.25}}));
  check("hemisphere marginal", herr < 1e-8, herr);

  CommandResult out;
  out.report = {{"command", "selftest"}, {"checks", checks}, {"passed", all}};
  out.code = all ? exit_code::yes : exit_code::no;
  return out;
}

// ---- dispatcher ----------------------------------------------------------------

/// Parses argv (program name first), runs one subcommand, prints its JSON
/// report to `out` and returns the exit code. Nothing reaches `out` unless the
/// command completed. `env_seed` is the COEXKIT_SEED value, if any.
inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err,
               const char* env_seed = nullptr) {
  RunConfig cfg;
  if (env_seed && *env_seed) {
    try {
      std::size_t used = 0;
      cfg.seed = std::stoull(env_seed, &used);
      if (used != std::string(env_seed).size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      err << "error: COEXKIT_SEED must be a non-negative integer\n";
      return exit_code::usage;
    }
  }

  CLI::App app{"coexkit: joint measurability and indirect measurement toolkit", "coexkit"};
  app.require_subcommand(1);
  app.add_option("--seed", cfg.seed, "Random seed (default: COEXKIT_SEED or 0)");
  app.add_option("--tol", cfg.tol, "Decision slack for closed-form verdicts")->capture_default_str();
  app.add_option("--grid-n", cfg.grid_n, "Grid points (power of two)")->capture_default_str();
  app.add_option("--grid-l", cfg.grid_l, "Grid half-width")->capture_default_str();
  app.add_option("--quad-order", cfg.quad_order, "Sphere quadrature order in cos(theta)")->capture_default_str();
  app.add_option("--json", cfg.json_file, "Input file");
  app.add_flag("--oracle", cfg.oracle, "Cross-check with the numerical feasibility search");

  PairInput pair;
  double feas_tol = 1e-7;
  auto add_pair = [&](CLI::App* sub) {
    sub->add_option("--a0", pair.a0, "Identity coefficient of A")->capture_default_str();
    sub->add_option("--a", pair.a, "Bloch vector of A: x,y,z")->delimiter(',')->allow_extra_args(false);
    sub->add_option("--b0", pair.b0, "Identity coefficient of B")->capture_default_str();
    sub->add_option("--b", pair.b, "Bloch vector of B: x,y,z")->delimiter(',')->allow_extra_args(false);
    sub->add_option("--feas-tol", feas_tol, "Oracle feasibility threshold")->capture_default_str();
  };
  auto* coex = app.add_subcommand("coex", "Closed-form qubit coexistence test");
  add_pair(coex);
  coex->add_flag("--unbiased", pair.unbiased, "Use the a0 = b0 = 1/2 form");
  auto* oracle = app.add_subcommand("oracle", "Search for a joint observable of two binary POVMs");
  add_pair(oracle);

  MomentsInput mom;
  auto* moments = app.add_subcommand("moments", "Reconstruct sharp position moments from smeared ones");
  moments->add_option("--hermite", mom.hermite, "Hermite function index");
  moments->add_option("--gaussian", mom.gaussian, "Gaussian packet width");
  moments->add_option("--sigma", mom.sigma, "Smearing width")->capture_default_str();
  moments->add_option("--order", mom.order, "Highest moment")->capture_default_str();

  SpinInput spin_in;
  auto* spin = app.add_subcommand("spin", "Spin-1/2 joint observable, reconstruction and hemisphere marginals");
  spin->add_option("--direction", spin_in.direction, "Hemisphere pole: x,y,z")->delimiter(',')->allow_extra_args(false);

  PhaseInput ph;
  auto* phase = app.add_subcommand("phase", "Phase-space marginal variances and uncertainty product");
  phase->add_option("--hermite", ph.hermite, "Hermite function index");
  phase->add_option("--gaussian", ph.gaussian, "Gaussian packet width");

  auto* selftest = app.add_subcommand("selftest", "Run built-in consistency checks");
  for (auto* sub : {coex, oracle, moments, spin, phase, selftest}) sub->fallthrough();

  std::vector<const char*> args;
  for (const auto& a : argv) args.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(args.size()), args.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::yes;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_code::yes;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::usage;
  }

  CommandResult result;
  try {
    cfg.validate();
    if (!(feas_tol > 0.0)) throw UsageError("--feas-tol must be positive");
    if (*coex) result = cmd_coex(pair, cfg, feas_tol);
    else if (*oracle) result = cmd_oracle(pair, cfg, feas_tol);
    else if (*moments) result = cmd_moments(mom, cfg);
    else if (*spin) result = cmd_spin(spin_in, cfg);
    else if (*phase) result = cmd_phase(ph, cfg);
    else result = cmd_selftest(cfg);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::failure;
  }
  out << result.report.dump(2) << "\n";
  return result.code;
}

}  // namespace coexkit::cli
