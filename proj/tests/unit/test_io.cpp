#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doflab/errors.hpp"
#include "doflab/io.hpp"
#include "doflab/schemes.hpp"

using namespace doflab;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("doflab_test_" + name)).string();
}

}  // namespace

TEST_CASE("association round-trip") {
  const auto b = build_joint_scheme(7, 3, 4);
  const json doc = association_to_json(b.association, b.topology);
  CHECK(doc["K"] == 7);
  CHECK(doc.contains("C_D"));
  const auto back = association_from_json(doc);
  CHECK(back.association == b.association);
  CHECK(back.topology == b.topology);
}

TEST_CASE("plan round-trip") {
  const auto b = build_joint_scheme(9, 3, 3);
  const auto up = plan_from_json(plan_to_json(*b.uplink_plan, 9));
  CHECK(up.session() == Session::uplink);
  CHECK(up.subnetwork_size == 9);
  CHECK(std::get<UplinkPlan>(up.plan) == *b.uplink_plan);
  const auto down = plan_from_json(plan_to_json(*b.downlink_plan));
  CHECK(down.session() == Session::downlink);
  CHECK(down.subnetwork_size == 0);
  CHECK(std::get<DownlinkPlan>(down.plan) == *b.downlink_plan);
}

TEST_CASE("schema violations name the field") {
  CHECK_THROWS_WITH_AS(plan_from_json(json::parse(R"({"active":[1]})")),
                       doctest::Contains("session"), SchemaError);
  CHECK_THROWS_WITH_AS(plan_from_json(json::parse(R"({"session":"up","active":[]})")),
                       doctest::Contains("session"), SchemaError);
  CHECK_THROWS_WITH_AS(
      plan_from_json(json::parse(R"({"session":"uplink","active":[1],"pairs":{"a":1}})")),
      doctest::Contains("pairs"), SchemaError);
  CHECK_THROWS_WITH_AS(
      plan_from_json(json::parse(R"({"session":"uplink","active":[1],"shares":[[1,2]]})")),
      doctest::Contains("shares[0]"), SchemaError);
  CHECK_THROWS_AS(plan_from_json(json::parse(R"({"session":"downlink","active":[1],"pairs":{}})")),
                  SchemaError);
  CHECK_THROWS_WITH_AS(
      association_from_json(json::parse(R"({"K":3,"L":1,"Nc":1,"C":{"1":[1,"x"]}})")),
      doctest::Contains("C.1[1]"), SchemaError);
  CHECK_THROWS_AS(association_from_json(json::parse(R"({"K":3,"L":1,"C":{}})")), SchemaError);
  CHECK_THROWS_AS(association_from_json(json::parse(R"({"K":3,"L":1,"Nc":1,"C":{},"X":1})")),
                  SchemaError);
}

TEST_CASE("truncated files report a line number") {
  const auto path = temp_path("truncated.json");
  std::ofstream(path) << "{\n  \"session\": \"uplink\",\n  \"active\": [1,\n";
  CHECK_THROWS_WITH_AS(read_json_file(path), doctest::Contains("line"), SchemaError);
  CHECK_THROWS_AS(read_json_file(temp_path("missing.json")), SchemaError);
}

TEST_CASE("rate CSV layout") {
  RateCurve curve{{1024.0, 2048.0}, {{1.5, 0.0}, {2.0, 0.0}}};
  std::ostringstream os;
  write_rate_csv(os, curve);
  CHECK(os.str() == "P_exponent,user_1,user_2\n10,1.5,0\n11,2,0\n");
}

TEST_CASE("oracle JSON is byte-stable and omits timing by default") {
  const auto a = oracle_to_json(brute_force_uplink(5, 3, 2)).dump();
  const auto b = oracle_to_json(brute_force_uplink(5, 3, 2)).dump();
  CHECK(a == b);
  CHECK(a.find("wall_ms") == std::string::npos);
  CHECK(oracle_to_json(brute_force_uplink(5, 3, 2), true).contains("stats"));
}

TEST_CASE("ledger rows") {
  const auto path = temp_path("ledger.csv");
  std::filesystem::remove(path);
  append_ledger_row(path, brute_force_uplink(5, 3, 2), 3);
  append_ledger_row(path, brute_force_uplink(4, 1, 1), -1);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() ==
        "K,L,Nc,session,optimal,scheme_value,match_flag\n"
        "5,3,2,uplink,3,3,match\n"
        "4,1,1,uplink,3,NA,no_scheme\n");
}
