#include <doctest.h>

#include <algorithm>

#include "doflab/errors.hpp"
#include "doflab/schemes.hpp"
#include "doflab/zf_verify.hpp"

using namespace doflab;

namespace {

bool names_condition(const DofReport& r, int condition) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const Violation& v) { return v.condition == condition; });
}

}  // namespace

TEST_CASE("full coverage uplink is accepted with a top-down decode order") {
  const Topology t(4, 1);
  SetMap sets{{1, {1}}, {2, {1, 2}}, {3, {2, 3}}, {4, {3, 4}}};
  UplinkPlan plan;
  for (int i = 1; i <= 4; ++i) {
    plan.active_mts.insert(i);
    plan.decoding_pairs[i] = i;
  }
  for (int i = 2; i <= 4; ++i) plan.shares.insert({i, i - 1, i});
  const DofReport r = check_uplink(plan, CellAssociation(4, 2, sets), t);
  CHECK(r.accepted);
  CHECK(r.achieved_dof == 4);
  CHECK(r.per_user_ratio == Rational(1));
  CHECK(r.decode_order == std::vector<int>{4, 3, 2, 1});
  CHECK(r.prefix_active == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("uplink pairs violating exclusivity are rejected") {
  const Topology t(4, 1);
  UplinkPlan plan;
  plan.active_mts = {2, 3};
  plan.decoding_pairs = {{3, 2}, {2, 3}};
  const CellAssociation a(4, 2, {{2, {2, 3}}, {3, {2, 3}}});
  const DofReport r = check_uplink(plan, a, t);
  CHECK_FALSE(r.accepted);
  CHECK(names_condition(r, 1));
  CHECK(ordering_violations(plan).size() == 1);
}

TEST_CASE("empty uplink plan is accepted with zero DoF") {
  const DofReport r = check_uplink(UplinkPlan{}, CellAssociation(3, 1), Topology(3, 1));
  CHECK(r.accepted);
  CHECK(r.achieved_dof == 0);
}

TEST_CASE("uplink conditions are reported individually") {
  const Topology t(3, 1);
  SUBCASE("missing share edge") {
    UplinkPlan plan;
    plan.active_mts = {1, 2};
    plan.decoding_pairs = {{1, 1}, {2, 2}};
    const CellAssociation a(3, 2, {{1, {1}}, {2, {1, 2}}});
    const DofReport r = check_uplink(plan, a, t);
    CHECK_FALSE(r.accepted);
    CHECK(names_condition(r, 3));
  }
  SUBCASE("two messages decoded at one BS") {
    UplinkPlan plan;
    plan.active_mts = {2, 3};
    plan.decoding_pairs = {{2, 2}, {3, 2}};
    const CellAssociation a(3, 2, {{2, {2}}, {3, {2}}});
    CHECK(names_condition(check_uplink(plan, a, t), 2));
  }
  SUBCASE("budget exceeded") {
    UplinkPlan plan;
    plan.active_mts = {2};
    plan.decoding_pairs = {{2, 2}};
    const CellAssociation a(3, 1, {{2, {1, 2}}});
    CHECK(names_condition(check_uplink(plan, a, t), 5));
  }
  SUBCASE("cyclic dependencies") {
    const Topology t2(4, 2);
    UplinkPlan plan;
    plan.active_mts = {2, 3};
    plan.decoding_pairs = {{2, 2}, {3, 1}};
    plan.shares = {{2, 1, 2}, {1, 2, 3}};
    const CellAssociation a(4, 3, {{2, {1, 2}}, {3, {1, 2}}});
    const DofReport r = check_uplink(plan, a, t2);
    CHECK(names_condition(r, 4));
    CHECK_FALSE(uplink_decode_order(plan, t2).has_value());
  }
  SUBCASE("active MT without a decoding pair") {
    UplinkPlan plan;
    plan.active_mts = {1};
    CHECK(names_condition(check_uplink(plan, CellAssociation(3, 1), t), 0));
  }
}

TEST_CASE("out-of-range plan indices are structural errors") {
  UplinkPlan plan;
  plan.active_mts = {5};
  plan.decoding_pairs = {{5, 5}};
  CHECK_THROWS_AS(check_uplink(plan, CellAssociation(3, 1), Topology(3, 1)), StructuralError);
  DownlinkPlan down;
  down.active_receivers = {1};
  down.transmit_sets = {{1, {9}}};
  CHECK_THROWS_AS(check_downlink(down, CellAssociation(3, 1), Topology(3, 1)), StructuralError);
}

TEST_CASE("downlink scheme instance is accepted with certificates") {
  const auto b = build_downlink_scheme(9, 5, 2);
  const DofReport r = check_downlink(*b.downlink_plan, b.association, b.topology);
  CHECK(r.accepted);
  CHECK(r.achieved_dof == 4);
  CHECK(r.per_user_ratio == Rational(4, 9));
  CHECK(r.certificates.size() == 4);
}

TEST_CASE("one transmitter cannot serve and null two receivers") {
  const Topology t(3, 1);
  DownlinkPlan plan;
  plan.active_receivers = {1, 2};
  plan.transmit_sets = {{1, {1}}, {2, {2}}};
  const CellAssociation a(3, 1, {{1, {1}}, {2, {2}}});
  const DofReport r = check_downlink(plan, a, t);
  CHECK_FALSE(r.accepted);
  CHECK(names_condition(r, 2));
  REQUIRE_FALSE(r.hall_witnesses.empty());
  CHECK(r.hall_witnesses[0].message == 1);
  CHECK(r.hall_witnesses[0].receivers.size() == 2);
  CHECK(r.hall_witnesses[0].transmitters == std::vector<int>{1});
}

TEST_CASE("downlink condition bookkeeping") {
  const Topology t(3, 1);
  SUBCASE("transmit set outside the association") {
    DownlinkPlan plan;
    plan.active_receivers = {1};
    plan.transmit_sets = {{1, {1}}};
    CHECK(names_condition(check_downlink(plan, CellAssociation(3, 1), t), 0));
  }
  SUBCASE("active receiver without a message") {
    DownlinkPlan plan;
    plan.active_receivers = {3};
    CHECK(names_condition(check_downlink(plan, CellAssociation(3, 1), t), 1));
  }
  SUBCASE("transmit set that cannot reach its receiver") {
    DownlinkPlan plan;
    plan.active_receivers = {1};
    plan.transmit_sets = {{1, {3}}};
    const DofReport r = check_downlink(plan, CellAssociation(3, 1, {{1, {3}}}), t);
    CHECK(names_condition(r, 3));
  }
}

TEST_CASE("joint full-coverage downlink is accepted") {
  const auto b = build_joint_scheme(7, 3, 4);
  const DofReport r = check_downlink(*b.downlink_plan, b.association, b.topology);
  CHECK(r.accepted);
  CHECK(r.achieved_dof == 4);
}

TEST_CASE("ordering violations") {
  UplinkPlan full;
  for (int i = 1; i <= 5; ++i) full.decoding_pairs[i] = i;
  CHECK(ordering_violations(full).empty());
  UplinkPlan crossed;
  crossed.decoding_pairs = {{3, 5}, {4, 2}};
  CHECK(ordering_violations(crossed).size() == 1);
}

TEST_CASE("set budget bound on windows") {
  const auto b = build_uplink_scheme(10, 3, 3);
  const Topology& t = b.topology;
  for (int first = 1; first + 3 <= 10; ++first) {
    CHECK(set_budget_bound(b.association, t, {first, first + 3}, *b.uplink_plan));
  }
  // Last L+1 indices of the first subnetwork hold exactly Nc decoding pairs.
  int inside = 0;
  for (const auto& [mt, bs] : b.uplink_plan->decoding_pairs) {
    if (mt >= 2 && mt <= 5 && bs >= 2 && bs <= 5) ++inside;
  }
  CHECK(inside == 3);

  UplinkPlan crowded;
  for (int i = 1; i <= 3; ++i) crowded.decoding_pairs[i] = i;
  CHECK_FALSE(set_budget_bound(CellAssociation(4, 2), Topology(4, 2), {1, 3}, crowded));
  CHECK_THROWS(set_budget_bound(CellAssociation(4, 2), Topology(4, 2), {0, 2}, crowded));
}

TEST_CASE("borrowing and blocking diagnostics") {
  SUBCASE("full coverage never borrows") {
    const auto b = build_uplink_scheme(6, 1, 2);
    const auto d = uplink_subnetwork_diagnostics(*b.uplink_plan, b.topology, 3);
    CHECK(d.borrowed == std::vector<int>{0, 0});
  }
  SUBCASE("middle regime decodes within each subnetwork") {
    const auto b = build_uplink_scheme(15, 3, 2);
    const auto d = uplink_subnetwork_diagnostics(*b.uplink_plan, b.topology, 5);
    CHECK(d.borrowed == std::vector<int>{0, 0, 0});
  }
  SUBCASE("hand-built borrow") {
    UplinkPlan plan;
    plan.active_mts = {4};
    plan.decoding_pairs = {{4, 3}};
    const auto d = uplink_subnetwork_diagnostics(plan, Topology(6, 1), 3);
    CHECK(d.borrowed == std::vector<int>{0, 1});
  }
}
