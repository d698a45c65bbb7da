#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "grid_spec.hpp"
#include "stieltjes/generators.hpp"

namespace stieltjes::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string render(const Json& j) { return j.dump(2) + "\n"; }

bool csv(const RunConfig& cfg) {
  if (cfg.format == "csv") return true;
  if (cfg.format == "json") return false;
  throw Error(ErrorKind::ParseError, "--format must be json or csv");
}

void require_dims(const RunConfig& cfg) {
  if (cfg.dim_m < 1 || cfg.dim_k < 1)
    throw Error(ErrorKind::ParseError, "--dim-m and --dim-k must be >= 1");
}

struct Check {
  std::string name;
  double worst = 0.0;
  bool passed = true;
};

Json checks_json(const std::vector<Check>& checks) {
  Json arr = Json::array();
  for (const Check& c : checks) arr.push_back(Json{{"name", c.name}, {"worst", c.worst}, {"passed", c.passed}});
  return arr;
}

std::string checks_csv(const std::vector<Check>& checks) {
  std::string out = "check,worst,passed\n";
  for (const Check& c : checks) out += c.name + "," + num(c.worst) + "," + (c.passed ? "1" : "0") + "\n";
  return out;
}

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

CommandOutput report(const RunConfig& cfg, Json j, const std::vector<Check>& checks) {
  const bool ok = all_passed(checks);
  j["checks"] = checks_json(checks);
  j["passed"] = ok;
  return {ok ? kExitPass : kExitViolation, csv(cfg) ? checks_csv(checks) : render(j)};
}

// ------------------------------------------------------------ suites

std::vector<Check> rs_suite(const RSFunction& omega, double tol, Json* violations) {
  const MembershipReport rep = rs_membership(omega, default_rs_grid(), tol);
  if (violations)
    for (const MembershipEntry& e : rep.entries)
      if (e.min_eig < -tol)
        violations->push_back(Json{{"check", e.check}, {"z", to_json(e.z)}, {"min_eig", e.min_eig}});
  return {{"inequality", rep.worst_inequality, rep.worst_inequality >= -tol},
          {"kernel", rep.worst_kernel, rep.worst_kernel >= -tol},
          {"real_bounds", rep.worst_real, rep.worst_real >= -tol}};
}

std::vector<Check> sector_suite(const Family& f, const std::vector<Complex>& grid,
                                std::uint64_t seed, double tol, Json* violations) {
  double viol = 0.0, nev = 0.0, excess = 0.0;
  bool ok_v = true, ok_n = true, ok_a = true;
  for (Complex l : grid) {
    const SectorReport s = sector_check(f, l, 64, seed, tol);
    viol = std::min(viol, s.worst_violation);
    nev = std::min(nev, s.worst_nevanlinna);
    excess = std::max(excess, s.worst_angle_excess);
    ok_v = ok_v && s.worst_violation >= -tol;
    ok_n = ok_n && s.worst_nevanlinna >= -tol;
    ok_a = ok_a && s.worst_angle_excess <= 1e-8;
    if (violations && !s.passed)
      violations->push_back(Json{{"lambda", to_json(l)},
                                 {"violation", s.worst_violation},
                                 {"nevanlinna", s.worst_nevanlinna},
                                 {"angle_excess", s.worst_angle_excess}});
  }
  return {{"sector_inequality", viol, ok_v},
          {"nevanlinna", nev, ok_n},
          {"angle_excess", excess, ok_a}};
}

std::vector<Check> kernel_suite(const Family& f, const std::vector<Complex>& grid, double tol) {
  const KernelReport k = kernel_check(f, grid, tol);
  return {{f.kind == FamilyKind::Stieltjes ? "kernel_min_eig" : "kernel_max_eig", k.extreme_eig,
           k.passed}};
}

std::vector<Check> equiv_suite(const Family& f, const std::vector<Complex>& grid,
                               std::uint64_t seed, double tol) {
  const TransformReport t = transform_equivalences(f, grid, 64, seed, tol);
  std::vector<Check> out;
  for (const TransformCheck& c : t.checks) out.push_back({c.name, c.worst, c.passed});
  return out;
}

struct RepResult {
  IntegralRepresentation rep;
  double error = 0.0;
};

RepResult representation_for(const StieltjesConstruction& cons, FamilyKind kind) {
  if (kind == FamilyKind::Stieltjes) {
    RepResult r{stieltjes_rep(cons), 0.0};
    r.error = reconstruction_error(r.rep, cons, default_rep_grid());
    return r;
  }
  // Z^* R0((A_hat, V), l) Z is represented through the inverse relation
  StieltjesConstruction inv = cons;
  inv.A_hat = inverse(cons.A_hat);
  RepResult r{inverse_stieltjes_rep(inv), 0.0};
  r.error = reconstruction_error(r.rep, inv, default_rep_grid());
  return r;
}

std::vector<Check> rep_checks(const RepResult& r, double tol) {
  return {{"reconstruction_error", r.error, r.error < tol},
          {"moment_residual", r.rep.moment_residual, r.rep.moment_residual <= 1e-10}};
}

const std::vector<double> kOrderPoints = {-1e-2, -1.0, -1e2};

Json error_json(const Error& e) {
  Json j;
  j["kind"] = to_string(e.kind());
  j["message"] = e.what();
  j["residual"] = e.residual();
  return j;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::IOError:
    case ErrorKind::ShapeMismatch:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NotHermitian:
    case ErrorKind::NotContraction:
    case ErrorKind::NotNonnegativeSelfadjoint:
    case ErrorKind::NotPSD:
    case ErrorKind::BadPoint:
    case ErrorKind::GridDegenerate:
    case ErrorKind::Unsupported:
    case ErrorKind::OutsideDomain:
      return kExitInput;
    case ErrorKind::SignViolation:
    case ErrorKind::MembershipViolated:
    case ErrorKind::BoundViolated:
      return kExitViolation;
    default:
      return kExitNumerical;
  }
}

Json load_instance(const RunConfig& cfg) {
  if (cfg.instance.empty()) throw Error(ErrorKind::ParseError, "--instance is required");
  Json j = read_json_file(cfg.instance);
  if (j.contains("origin")) return j;
  if (j.contains(cfg.member) && j.at(cfg.member).contains("origin")) return j.at(cfg.member);
  throw Error(ErrorKind::ParseError, "'" + cfg.instance + "' holds no instance '" + cfg.member + "'");
}

CommandOutput cmd_gen(const RunConfig& cfg) {
  require_dims(cfg);
  Generator g(cfg.seed);
  const PassiveSelfadjointSystem sys = g.system(cfg.dim_m, cfg.dim_k);
  const StieltjesConstruction cons = g.construction(cfg.dim_m, cfg.dim_k);
  Json j;
  j["seed"] = cfg.seed;
  j["dim_m"] = cfg.dim_m;
  j["dim_k"] = cfg.dim_k;
  j["system"] = family_instance(FamilyKind::Stieltjes, Json{{"system", to_json(sys)}});
  j["construction"] = family_instance(FamilyKind::Stieltjes, Json{{"construction", to_json(cons)}});
  return {kExitPass, render(j)};
}

CommandOutput cmd_eval(const RunConfig& cfg) {
  const bool as_csv = csv(cfg);
  const Family f = family_from_json(load_instance(cfg));
  const std::vector<Complex> grid = parse_grid(cfg.grid);
  Json rows = Json::array();
  std::string text = "lambda_re,lambda_im,type,rows,cols,cond,entries\n";
  for (Complex l : grid) {
    const LinearRelation r = f(l);
    Matrix m;
    std::string type = "value";
    if (f.value) {
      m = f.value(l);
    } else {
      try {
        m = to_operator(r);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotAnOperator) throw;
        m = r.graph().basis;
        type = "graph";
      }
    }
    const double cond = r.dim() == r.space_dim() ? condition_number(r.first()) : kInf;
    Json row;
    row["lambda"] = to_json(l);
    row["type"] = type;
    row[type] = to_json(m);
    row["cond"] = cond;
    rows.push_back(row);
    text += num(l.real()) + "," + num(l.imag()) + "," + type + "," + std::to_string(m.rows()) + "," +
            std::to_string(m.cols()) + "," + num(cond);
    for (Index i = 0; i < m.rows(); ++i)
      for (Index c = 0; c < m.cols(); ++c) text += "," + num(m(i, c).real()) + "," + num(m(i, c).imag());
    text += "\n";
  }
  if (as_csv) return {kExitPass, text};
  Json j;
  j["kind"] = to_string(f.kind);
  j["grid"] = cfg.grid;
  j["rows"] = rows;
  return {kExitPass, render(j)};
}

CommandOutput cmd_check(const RunConfig& cfg) {
  const Json inst = load_instance(cfg);
  Json j;
  j["suite"] = cfg.suite;
  Json violations = Json::array();
  std::vector<Check> checks;
  double tol = 0.0;
  if (cfg.suite == "rs") {
    tol = cfg.tol.value_or(1e-8);
    checks = rs_suite(rs_from_json(inst), tol, &violations);
  } else {
    const Family f = family_from_json(inst);
    const std::vector<Complex> grid = parse_grid(cfg.grid);
    if (cfg.suite == "sector") {
      tol = cfg.tol.value_or(1e-10);
      checks = sector_suite(f, grid, cfg.seed, tol, &violations);
    } else if (cfg.suite == "kernel") {
      tol = cfg.tol.value_or(1e-7);
      checks = kernel_suite(f, grid, tol);
    } else if (cfg.suite == "equiv") {
      tol = cfg.tol.value_or(1e-10);
      checks = equiv_suite(f, grid, cfg.seed, tol);
    } else {
      throw Error(ErrorKind::ParseError, "suite must be rs, sector, kernel or equiv");
    }
  }
  j["tol"] = tol;
  j["violations"] = violations;
  return report(cfg, j, checks);
}

CommandOutput cmd_rep(const RunConfig& cfg) {
  const Json inst = load_instance(cfg);
  if (!inst.at("origin").contains("construction"))
    throw Error(ErrorKind::ParseError, "rep needs a construction instance");
  const FamilyKind kind = parse_family_kind(inst.value("kind", std::string("stieltjes")));
  const StieltjesConstruction cons = construction_from_json(inst.at("origin").at("construction"));
  const RepResult r = representation_for(cons, kind);
  Json j;
  j["representation"] = to_json(r.rep);
  j["grid_points"] = default_rep_grid().size();
  return report(cfg, j, rep_checks(r, cfg.tol.value_or(1e-9)));
}

CommandOutput cmd_limits(const RunConfig& cfg) {
  const Family f = family_from_json(load_instance(cfg));
  const ResolventLimits lim = resolvent_limits(f);
  const double slack = limits_order_slack(f, lim, kOrderPoints);
  const double tol = cfg.tol.value_or(1e-9);
  Json j;
  j["at_minus_zero"] = to_json(lim.at_minus_zero);
  j["at_minus_infinity"] = to_json(lim.at_minus_infinity);
  const RelationParts pz = parts(lim.at_minus_zero), pi = parts(lim.at_minus_infinity);
  j["diagnostics"] = Json{{"method_plus", lim.method_plus},
                          {"method_minus", lim.method_minus},
                          {"mul_dim_at_minus_zero", pz.mul.dim()},
                          {"mul_dim_at_minus_infinity", pi.mul.dim()},
                          {"form_residual_zero", lim.form_residual_zero},
                          {"form_residual_infinity", lim.form_residual_infinity},
                          {"form_checks", lim.form_checks}};
  return report(cfg, j, {{"order_slack", slack, slack >= -tol}});
}

CommandOutput cmd_verify_all(const RunConfig& cfg) {
  require_dims(cfg);
  const std::vector<Complex> grid = parse_grid(cfg.grid);
  Generator g(cfg.seed);
  std::vector<Check> checks;
  Json failures = Json::array();
  auto run = [&](std::size_t i, const std::string& prefix, auto&& body) {
    try {
      for (Check c : body()) {
        c.name = "instance" + std::to_string(i) + "." + prefix + "." + c.name;
        checks.push_back(c);
      }
    } catch (const Error& e) {
      checks.push_back({"instance" + std::to_string(i) + "." + prefix + ".error", 0.0, false});
      failures.push_back(Json{{"check", prefix}, {"instance", i}, {"error", error_json(e)}});
    }
  };
  for (std::size_t i = 0; i < cfg.count; ++i) {
    const SelfadjointBlockSystem blk = g.block_system(cfg.dim_m, cfg.dim_k);
    const PassiveSelfadjointSystem sys(cfg.dim_m, blk.T, 1e-9);
    const StieltjesConstruction cons = g.construction(cfg.dim_m, cfg.dim_k, i % 2 == 0);
    const RSFunction omega = RSFunction::from_system(sys);
    const Family sf = family_from_rs(omega, FamilyKind::Stieltjes);
    const Family cf = family_from_construction(cons, FamilyKind::Stieltjes);
    const Family ci = family_from_construction(cons, FamilyKind::InverseStieltjes);

    run(i, "cayley", [&] {
      const double d = relation_distance(cayley(cayley(cons.A_hat)), cons.A_hat);
      const double n = spectral_norm(to_operator(cayley(cons.A_hat)));
      return std::vector<Check>{{"involution", d, d < 1e-10}, {"norm", n, n <= 1.0 + 1e-12}};
    });
    run(i, "omega0", [&] {
      double worst = 0.0;
      for (Complex z : default_rs_grid())
        if (z.imag() != 0.0) worst = std::max(worst, omega0(blk.N, blk.F_prime, blk.F_doubleprime, z).worst());
      return std::vector<Check>{{"identities", worst, worst < 1e-9}};
    });
    run(i, "rs", [&] { return rs_suite(omega, cfg.tol.value_or(1e-8), nullptr); });
    run(i, "sector.system", [&] { return sector_suite(sf, grid, cfg.seed, 1e-10, nullptr); });
    run(i, "sector.construction", [&] { return sector_suite(cf, grid, cfg.seed, 1e-10, nullptr); });
    run(i, "sector.construction_inverse", [&] { return sector_suite(ci, grid, cfg.seed, 1e-10, nullptr); });
    run(i, "kernel.system", [&] { return kernel_suite(sf, grid, 1e-7); });
    run(i, "kernel.construction", [&] { return kernel_suite(cf, grid, 1e-7); });
    run(i, "equiv", [&] { return equiv_suite(sf, grid, cfg.seed, 1e-10); });
    run(i, "rep.stieltjes", [&] { return rep_checks(representation_for(cons, FamilyKind::Stieltjes), 1e-9); });
    run(i, "rep.inverse", [&] { return rep_checks(representation_for(cons, FamilyKind::InverseStieltjes), 1e-9); });
    run(i, "limits", [&] {
      const ResolventLimits lim = resolvent_limits(sf);
      const double slack = limits_order_slack(sf, lim, kOrderPoints);
      return std::vector<Check>{{"order_slack", slack, slack >= -1e-9}};
    });
  }
  Json j;
  j["seed"] = cfg.seed;
  j["count"] = cfg.count;
  j["dim_m"] = cfg.dim_m;
  j["dim_k"] = cfg.dim_k;
  j["grid"] = cfg.grid;
  j["failures"] = failures;
  return report(cfg, j, checks);
}

CommandOutput run_command(const std::string& name, const RunConfig& cfg) {
  try {
    if (name == "gen") return cmd_gen(cfg);
    if (name == "eval") return cmd_eval(cfg);
    if (name == "check") return cmd_check(cfg);
    if (name == "rep") return cmd_rep(cfg);
    if (name == "limits") return cmd_limits(cfg);
    if (name == "verify-all") return cmd_verify_all(cfg);
    throw Error(ErrorKind::ParseError, "unknown command '" + name + "'");
  } catch (const Error& e) {
    Json j;
    j["command"] = name;
    j["error"] = error_json(e);
    return {exit_code_for(e.kind()), render(j)};
  }
}

}  // namespace stieltjes::cli
