// Command-line front end: formula | scheme | verify | oracle | simulate | table.
// Exit codes: 0 accept, 1 structural or usage error, 2 semantic reject.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "doflab/config.hpp"
#include "doflab/errors.hpp"
#include "doflab/io.hpp"
#include "doflab/numeric.hpp"
#include "doflab/oracle.hpp"
#include "doflab/schemes.hpp"
#include "doflab/sweep.hpp"
#include "doflab/zf_verify.hpp"

namespace fs = std::filesystem;
using namespace doflab;

namespace {

constexpr int kAccept = 0;
constexpr int kStructural = 1;
constexpr int kReject = 2;

int default_threads() {
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string fixed(double v, int decimals) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(decimals) << v;
  return os.str();
}

// ---------------------------------------------------------------------------

struct FormulaArgs {
  std::string session;
  std::optional<int> L;
  int Nc = 1;
};

int run_formula(const FormulaArgs& a) {
  const FormulaSession session = parse_formula_session(a.session);
  int L = 1;
  if (a.L) {
    L = *a.L;
  } else if (session != FormulaSession::wyner) {
    throw CLI::ValidationError("-L", "required for session " + a.session);
  }
  std::cout << evaluate_formula(session, L, a.Nc).describe() << '\n';
  return kAccept;
}

// ---------------------------------------------------------------------------

struct SchemeArgs {
  std::string session;
  int K = 0;
  int L = 0;
  int Nc = 1;
  std::string out = ".";
};

void print_declared(const char* name, const DeclaredDof& d) {
  std::cout << name << ": " << d.finite_count << " DoF (subnetwork " << d.subnetwork_size
            << ", " << d.per_subnetwork << " per subnetwork, asymptotic puDoF "
            << d.asymptotic.describe() << ")\n";
}

int run_scheme(const SchemeArgs& a) {
  SchemeBundle bundle = a.session == "downlink" ? build_downlink_scheme(a.K, a.L, a.Nc)
                        : a.session == "uplink" ? build_uplink_scheme(a.K, a.L, a.Nc)
                                                : build_joint_scheme(a.K, a.L, a.Nc);
  fs::create_directories(a.out);
  const fs::path dir(a.out);
  write_json_file((dir / "association.json").string(),
                  association_to_json(bundle.association, bundle.topology));
  std::cout << "association: " << (dir / "association.json").string() << '\n';
  if (bundle.uplink_plan) {
    const auto path = (dir / "uplink_plan.json").string();
    write_json_file(path, plan_to_json(*bundle.uplink_plan, bundle.uplink->subnetwork_size));
    std::cout << "uplink plan: " << path << '\n';
    print_declared("uplink", *bundle.uplink);
  }
  if (bundle.downlink_plan) {
    const auto path = (dir / "downlink_plan.json").string();
    write_json_file(path, plan_to_json(*bundle.downlink_plan, bundle.downlink->subnetwork_size));
    std::cout << "downlink plan: " << path << '\n';
    print_declared("downlink", *bundle.downlink);
  }
  if (bundle.uplink && bundle.downlink) {
    const int total = bundle.uplink->finite_count + bundle.downlink->finite_count;
    std::cout << "average: " << Rational(total, 2).to_string() << " DoF, per-user "
              << Rational(total, 2 * a.K).describe() << " (asymptotic "
              << ((bundle.uplink->asymptotic + bundle.downlink->asymptotic) / Rational(2)).describe()
              << ")\n";
  }
  return kAccept;
}

// ---------------------------------------------------------------------------

struct LoadedPlan {
  AssociationDocument assoc;
  PlanDocument plan;
};

LoadedPlan load_plan(const std::string& plan_path, const std::string& assoc_path) {
  auto assoc = association_from_json(read_json_file(assoc_path));
  auto plan = plan_from_json(read_json_file(plan_path));
  return {std::move(assoc), std::move(plan)};
}

DofReport check(const LoadedPlan& p) {
  CheckOptions options{p.plan.subnetwork_size};
  if (const auto* up = std::get_if<UplinkPlan>(&p.plan.plan)) {
    return check_uplink(*up, p.assoc.association, p.assoc.topology, options);
  }
  return check_downlink(std::get<DownlinkPlan>(p.plan.plan), p.assoc.association,
                        p.assoc.topology, options);
}

struct VerifyArgs {
  std::string plan;
  std::string assoc;
};

int run_verify(const VerifyArgs& a) {
  const LoadedPlan loaded = load_plan(a.plan, a.assoc);
  const DofReport report = check(loaded);
  std::cout << report_to_json(report).dump(2) << '\n';
  if (!report.accepted) {
    for (const auto& v : report.violations) {
      std::cerr << "condition (" << v.condition << ") violated: " << v.message << '\n';
    }
  }
  return report.accepted ? kAccept : kReject;
}

// ---------------------------------------------------------------------------

struct OracleArgs {
  std::string session;
  int K = 0;
  int L = 0;
  int Nc = 1;
  int window = -1;
  bool no_prune = false;
  int threads = 0;
  std::optional<int> limit;
  std::string out;
  std::string ledger;
  bool stats = false;
};

// Finite-K count of the matching construction, or -1 when none applies.
int scheme_value(OracleSession session, int K, int L, int Nc) {
  try {
    switch (session) {
      case OracleSession::uplink:
        return build_uplink_scheme(K, L, Nc).uplink->finite_count;
      case OracleSession::downlink:
        return build_downlink_scheme(K, L, Nc).downlink->finite_count;
      case OracleSession::average: {
        const auto b = build_joint_scheme(K, L, Nc);
        return b.uplink->finite_count + b.downlink->finite_count;
      }
    }
  } catch (const InstanceTooSmall&) {
  }
  return -1;
}

Rational session_formula(OracleSession session, int L, int Nc) {
  switch (session) {
    case OracleSession::uplink:
      return tau_u_zf(L, Nc);
    case OracleSession::downlink:
      return tau_d_zf(L, Nc);
    case OracleSession::average:
      return tau_avg_lower(L, Nc);
  }
  return Rational(0);
}

int run_oracle(const OracleArgs& a, const ToolConfig& config) {
  OracleSession session;
  if (a.session == "uplink") {
    session = OracleSession::uplink;
  } else if (a.session == "downlink") {
    session = OracleSession::downlink;
  } else {
    session = OracleSession::average;
  }
  OracleOptions options;
  options.limit = a.limit ? *a.limit
                  : session == OracleSession::average ? config.average_limit
                                                      : config.oracle_limit;
  options.prune = !a.no_prune;
  options.threads = a.threads > 0 ? a.threads : default_threads();
  options.window = a.window;

  const OracleResult result = session == OracleSession::uplink ? brute_force_uplink(a.K, a.L, a.Nc, options)
                              : session == OracleSession::downlink
                                  ? brute_force_downlink(a.K, a.L, a.Nc, options)
                                  : brute_force_average(a.K, a.L, a.Nc, options);
  const int scheme = scheme_value(session, a.K, a.L, a.Nc);
  const Rational tau = session_formula(session, a.L, a.Nc);
  // Average totals count both sessions, so the comparison uses 2*tau*K.
  const Rational target = tau * Rational(session == OracleSession::average ? 2 * a.K : a.K);

  std::cout << "optimal: " << result.optimal_dof << '\n';
  if (session == OracleSession::average) {
    std::cout << "uplink: " << result.uplink_dof << ", downlink: " << result.downlink_dof
              << ", average: " << result.average.to_string() << '\n';
  }
  std::cout << "formula x K: " << target.describe() << " ("
            << (Rational(result.optimal_dof) == target ? "match"
                : Rational(result.optimal_dof) > target ? "oracle above"
                                                         : "oracle below")
            << "; finite K differs from the asymptotic value by a boundary term)\n";
  if (scheme >= 0) {
    std::cout << "scheme: " << scheme << " ("
              << (scheme == result.optimal_dof ? "match" : "mismatch") << ")\n";
  } else {
    std::cout << "scheme: none for this K\n";
  }
  if (a.stats) {
    std::cout << "nodes: " << result.stats.nodes << ", pruned: " << result.stats.pruned
              << ", wall: " << fixed(result.stats.wall_ms, 1) << " ms\n";
  }
  const json doc = oracle_to_json(result, a.stats);
  if (!a.out.empty()) {
    write_json_file(a.out, doc);
    std::cout << "witness: " << a.out << '\n';
  } else {
    std::cout << doc.dump(2) << '\n';
  }
  if (!a.ledger.empty()) append_ledger_row(a.ledger, result, scheme);
  return kAccept;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string plan;
  std::string assoc;
  std::uint64_t seed = 0;
  int seeds = 20;
  double p_min_exp = 10;
  double p_max_exp = 40;
  int points = 7;
  int threads = 0;
  std::string out = ".";
};

struct SeedResult {
  std::string csv;
  DofEstimate estimate;
  double residual = 0.0;
};

int run_simulate(const SimulateArgs& a, const ToolConfig& config) {
  if (a.p_max_exp <= a.p_min_exp) {
    throw CLI::ValidationError("--p-max-exp", "must exceed --p-min-exp");
  }
  if (a.seeds < 1) throw CLI::ValidationError("--seeds", "must be at least 1");
  const LoadedPlan loaded = load_plan(a.plan, a.assoc);
  const DofReport report = check(loaded);
  if (!report.accepted) {
    std::cerr << "plan fails verification; refusing to simulate\n";
    for (const auto& v : report.violations) {
      std::cerr << "condition (" << v.condition << ") violated: " << v.message << '\n';
    }
    return kReject;
  }
  const auto grid = power_grid(a.p_min_exp, a.p_max_exp, a.points);
  const Topology& topology = loaded.assoc.topology;
  const bool uplink = loaded.plan.session() == Session::uplink;

  std::vector<SeedResult> results(a.seeds);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int n = next++; n < a.seeds; n = next++) {
      const auto channels = sample_channels(topology, a.seed + n);
      RateCurve curve;
      if (uplink) {
        curve = simulate_uplink(std::get<UplinkPlan>(loaded.plan.plan), channels, grid);
      } else {
        const auto& plan = std::get<DownlinkPlan>(loaded.plan.plan);
        results[n].residual = solve_downlink_precoders(plan, channels).max_residual;
        curve = simulate_downlink(plan, channels, grid);
      }
      std::ostringstream csv;
      write_rate_csv(csv, curve);
      results[n].csv = csv.str();
      results[n].estimate = estimate_dof(curve);
    }
  };
  const int threads = std::min(a.threads > 0 ? a.threads : default_threads(), a.seeds);
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  fs::create_directories(a.out);
  const fs::path dir(a.out);
  const IndexSet& active = uplink ? std::get<UplinkPlan>(loaded.plan.plan).active_mts
                                  : std::get<DownlinkPlan>(loaded.plan.plan).active_receivers;
  json seeds = json::array();
  double max_residual = 0.0;
  bool within = true;
  for (int n = 0; n < a.seeds; ++n) {
    const auto& r = results[n];
    const std::string name = "rates_seed" + std::to_string(a.seed + n) + ".csv";
    std::ofstream((dir / name).string()) << r.csv;
    max_residual = std::max(max_residual, r.residual);
    bool ok = r.residual < config.residual_tolerance;
    for (int i = 1; i <= topology.users(); ++i) {
      const double slope = r.estimate.per_user[i - 1];
      ok = ok && (active.contains(i) ? std::abs(slope - 1.0) <= config.slope_tolerance
                                     : std::abs(slope) <= config.slope_tolerance);
    }
    const double dof = report.achieved_dof;
    ok = ok && std::abs(r.estimate.sum - dof) <= config.sum_slope_tolerance * std::max(dof, 1.0);
    within = within && ok;
    json entry;
    entry["seed"] = a.seed + n;
    entry["csv"] = name;
    json slopes = json::array();
    for (double s : r.estimate.per_user) slopes.push_back(std::round(s * 1e6) / 1e6);
    entry["slopes"] = slopes;
    entry["sum_slope"] = std::round(r.estimate.sum * 1e6) / 1e6;
    if (!uplink) entry["max_residual"] = r.residual;
    entry["within_tolerance"] = ok;
    seeds.push_back(entry);
  }
  json summary;
  summary["session"] = to_string(loaded.plan.session());
  summary["K"] = topology.users();
  summary["achieved_dof"] = report.achieved_dof;
  summary["p_exponents"] = {a.p_min_exp, a.p_max_exp, a.points};
  if (!uplink) summary["max_residual"] = max_residual;
  summary["within_tolerance"] = within;
  summary["seeds"] = seeds;
  write_json_file((dir / "summary.json").string(), summary);

  double mean_sum = 0.0;
  for (const auto& r : results) mean_sum += r.estimate.sum / a.seeds;
  std::cout << "seeds: " << a.seeds << ", achieved DoF: " << report.achieved_dof
            << ", mean sum slope: " << fixed(mean_sum, 4);
  if (!uplink) std::cout << ", max residual: " << std::scientific << std::setprecision(2) << max_residual;
  std::cout << "\nsummary: " << (dir / "summary.json").string() << '\n';
  return kAccept;
}

// ---------------------------------------------------------------------------

struct TableArgs {
  std::string vary = "Nc";
  int from = 1;
  int to = 1;
  int fixed_L = 1;
  int fixed_Nc = 1;
  std::vector<std::string> sessions{"all"};
  std::string out;
  std::string svg;
};

int run_table(const TableArgs& a) {
  SweepSpec spec;
  spec.vary = a.vary == "L" ? SweepParameter::connectivity : SweepParameter::budget;
  spec.from = a.from;
  spec.to = a.to;
  spec.fixed_connectivity = a.fixed_L;
  spec.fixed_budget = a.fixed_Nc;
  for (const auto& name : a.sessions) {
    if (name == "all") {
      for (auto s : {FormulaSession::uplink_zf, FormulaSession::downlink_zf,
                     FormulaSession::avg_lower, FormulaSession::gamma_d, FormulaSession::wyner}) {
        if (std::find(spec.sessions.begin(), spec.sessions.end(), s) == spec.sessions.end()) {
          spec.sessions.push_back(s);
        }
      }
    } else {
      spec.sessions.push_back(parse_formula_session(name));
    }
  }
  const auto rows = run_sweep(spec);
  if (a.out.empty()) {
    write_sweep_csv(std::cout, rows);
  } else {
    std::ofstream out(a.out);
    if (!out) throw std::runtime_error("cannot write " + a.out);
    write_sweep_csv(out, rows);
  }
  if (!a.svg.empty()) {
    std::ofstream svg(a.svg);
    if (!svg) throw std::runtime_error("cannot write " + a.svg);
    write_sweep_svg(svg, spec, rows);
  }
  return kAccept;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-forcing DoF toolkit for locally connected cellular networks"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key = value file with limits and tolerances")
      ->check(CLI::ExistingFile);

  FormulaArgs formula;
  auto* f = app.add_subcommand("formula", "closed-form puDoF value");
  f->add_option("--session", formula.session, "downlink-zf | uplink-zf | avg-lower | gamma-d | wyner")
      ->required();
  f->add_option("-L", formula.L, "connectivity L");
  f->add_option("--nc", formula.Nc, "association budget Nc")->required();

  SchemeArgs scheme;
  auto* s = app.add_subcommand("scheme", "build a plan and association");
  s->add_option("--session", scheme.session)->required()->check(
      CLI::IsMember({"downlink", "uplink", "joint"}));
  s->add_option("-K", scheme.K, "number of users")->required();
  s->add_option("-L", scheme.L, "connectivity")->required();
  s->add_option("--nc", scheme.Nc, "association budget")->required();
  s->add_option("--out", scheme.out, "output directory")->capture_default_str();

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "check a plan against an association");
  v->add_option("--plan", verify.plan)->required();
  v->add_option("--assoc", verify.assoc)->required();

  OracleArgs oracle;
  auto* o = app.add_subcommand("oracle", "exhaustive optimum for small K");
  o->add_option("--session", oracle.session)->required()->check(
      CLI::IsMember({"uplink", "downlink", "avg"}));
  o->add_option("-K", oracle.K)->required();
  o->add_option("-L", oracle.L)->required();
  o->add_option("--nc", oracle.Nc)->required();
  o->add_option("--window", oracle.window, "downlink association window (default Nc)");
  o->add_flag("--no-prune", oracle.no_prune, "disable pruning and memoization");
  o->add_option("--threads", oracle.threads, "worker threads (default: all cores)");
  o->add_option("--limit", oracle.limit, "largest K searched");
  o->add_option("--out", oracle.out, "write the result JSON here instead of stdout");
  o->add_option("--ledger", oracle.ledger, "append a CSV ledger row");
  o->add_flag("--stats", oracle.stats, "report node counts and wall time");

  SimulateArgs simulate;
  auto* m = app.add_subcommand("simulate", "numeric rate curves for a verified plan");
  m->add_option("--plan", simulate.plan)->required();
  m->add_option("--assoc", simulate.assoc)->required();
  m->add_option("--seed", simulate.seed, "first seed")->capture_default_str();
  m->add_option("--seeds", simulate.seeds, "number of seeds")->capture_default_str();
  m->add_option("--p-min-exp", simulate.p_min_exp, "smallest power exponent (P = 2^e)")->capture_default_str();
  m->add_option("--p-max-exp", simulate.p_max_exp, "largest power exponent")->capture_default_str();
  m->add_option("--points", simulate.points, "grid points")->capture_default_str();
  m->add_option("--threads", simulate.threads, "worker threads (default: all cores)");
  m->add_option("--out", simulate.out, "output directory")->capture_default_str();

  TableArgs table;
  auto* t = app.add_subcommand("table", "sweep closed-form values");
  t->add_option("--vary", table.vary)->check(CLI::IsMember({"L", "Nc"}));
  t->add_option("--from", table.from)->required();
  t->add_option("--to", table.to)->required();
  t->add_option("-L", table.fixed_L, "fixed L when varying Nc")->capture_default_str();
  t->add_option("--nc", table.fixed_Nc, "fixed Nc when varying L")->capture_default_str();
  t->add_option("--sessions", table.sessions, "sessions or 'all'")->capture_default_str()->delimiter(',');
  t->add_option("--out", table.out, "CSV path (default stdout)");
  t->add_option("--svg", table.svg, "optional SVG line plot");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kAccept : kStructural;
  }

  try {
    ToolConfig config;
    if (!config_path.empty()) config = load_config(config_path, config);
    config = apply_environment(config);
    if (*f) return run_formula(formula);
    if (*s) return run_scheme(scheme);
    if (*v) return run_verify(verify);
    if (*o) return run_oracle(oracle, config);
    if (*m) return run_simulate(simulate, config);
    if (*t) return run_table(table);
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kStructural;
  } catch (const LimitExceeded& e) {
    std::cerr << "limit exceeded: " << e.what() << '\n';
    return kStructural;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kStructural;
  } catch (const StructuralError& e) {
    std::cerr << "structural error: " << e.what() << '\n';
    return kStructural;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kStructural;
  }
  return kStructural;
}
