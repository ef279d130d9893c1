#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doflab/config.hpp"
#include "doflab/errors.hpp"
#include "doflab/sweep.hpp"

using namespace doflab;

namespace {

SweepSpec nc_sweep(int L, int from, int to, std::vector<FormulaSession> sessions) {
  SweepSpec spec;
  spec.vary = SweepParameter::budget;
  spec.from = from;
  spec.to = to;
  spec.fixed_connectivity = L;
  spec.sessions = std::move(sessions);
  return spec;
}

const SweepRow& find(const std::vector<SweepRow>& rows, int Nc, FormulaSession s) {
  for (const auto& r : rows) {
    if (r.budget == Nc && r.session == s) return r;
  }
  throw std::runtime_error("row missing");
}

}  // namespace

TEST_CASE("formula dispatch") {
  CHECK(evaluate_formula(parse_formula_session("uplink-zf"), 3, 3) == Rational(4, 5));
  CHECK(evaluate_formula(FormulaSession::wyner, 1, 2) == Rational(5, 6));
  CHECK_THROWS_AS(evaluate_formula(FormulaSession::gamma_d, 3, 3), DomainError);
  CHECK_THROWS_AS(evaluate_formula(FormulaSession::wyner, 2, 2), DomainError);
  CHECK_THROWS_AS(parse_formula_session("bogus"), DomainError);
}

TEST_CASE("sweep over Nc at L = 3") {
  using F = FormulaSession;
  const auto rows =
      run_sweep(nc_sweep(3, 1, 6, {F::uplink_zf, F::downlink_zf, F::avg_lower, F::gamma_d}));
  CHECK(rows.size() == 24);
  CHECK(find(rows, 3, F::uplink_zf).value == Rational(4, 5));
  CHECK(find(rows, 3, F::downlink_zf).value == Rational(2, 3));
  CHECK(find(rows, 3, F::avg_lower).value == Rational(2, 3));
  CHECK_FALSE(find(rows, 3, F::gamma_d).defined);
  CHECK(find(rows, 4, F::gamma_d).value == Rational(4, 7));
}

TEST_CASE("sweep at L = 1 matches the closed form for that network") {
  using F = FormulaSession;
  const auto rows = run_sweep(nc_sweep(1, 1, 4, {F::avg_lower, F::wyner}));
  for (int Nc = 1; Nc <= 4; ++Nc) {
    CHECK(find(rows, Nc, F::avg_lower).value == find(rows, Nc, F::wyner).value);
  }
}

TEST_CASE("sweep over L and CSV output") {
  SweepSpec spec;
  spec.vary = SweepParameter::connectivity;
  spec.from = 0;
  spec.to = 5;
  spec.fixed_budget = 2;
  spec.sessions = {FormulaSession::uplink_zf};
  std::ostringstream os;
  write_sweep_csv(os, run_sweep(spec));
  CHECK(os.str() ==
        "L,Nc,session,value,decimal\n"
        "0,2,uplink-zf,1,1.0000\n"
        "1,2,uplink-zf,1,1.0000\n"
        "2,2,uplink-zf,3/4,0.7500\n"
        "3,2,uplink-zf,3/5,0.6000\n"
        "4,2,uplink-zf,1/2,0.5000\n"
        "5,2,uplink-zf,4/9,0.4444\n");
  std::ostringstream svg;
  write_sweep_svg(svg, spec, run_sweep(spec));
  CHECK(svg.str().find("<polyline") != std::string::npos);
  CHECK(svg.str().rfind("</svg>") != std::string::npos);
}

TEST_CASE("invalid sweeps") {
  CHECK_THROWS_AS(run_sweep(nc_sweep(3, 4, 2, {FormulaSession::uplink_zf})), DomainError);
  CHECK_THROWS_AS(run_sweep(nc_sweep(3, 0, 2, {FormulaSession::uplink_zf})), DomainError);
  CHECK_THROWS_AS(run_sweep(nc_sweep(3, 1, 2, {})), DomainError);
}

TEST_CASE("config file and environment") {
  const auto path = (std::filesystem::temp_directory_path() / "doflab_test.toml").string();
  std::ofstream(path) << "# limits\noracle_limit = 9\nresidual_tolerance = 1e-10 # tighter\n";
  const ToolConfig c = load_config(path);
  CHECK(c.oracle_limit == 9);
  CHECK(c.average_limit == 8);
  CHECK(c.residual_tolerance == doctest::Approx(1e-10));
  std::ofstream(path) << "unknown = 1\n";
  CHECK_THROWS_AS(load_config(path), SchemaError);
  std::ofstream(path) << "oracle_limit = ten\n";
  CHECK_THROWS_AS(load_config(path), SchemaError);

  setenv("DOFLAB_ORACLE_LIMIT", "5", 1);
  const ToolConfig e = apply_environment(ToolConfig{});
  CHECK(e.oracle_limit == 5);
  CHECK(e.average_limit == 5);
  unsetenv("DOFLAB_ORACLE_LIMIT");
  CHECK(apply_environment(ToolConfig{}).oracle_limit == 10);
}
