#include <doctest.h>

#include "doflab/matching.hpp"

using namespace doflab;

TEST_CASE("maximum matching covers a perfect instance") {
  const BipartiteGraph g{3, 3, {{0, 1}, {0}, {1, 2}}};
  const Matching m = maximum_matching(g);
  CHECK(m.covers_left());
  CHECK(m.mate_of_left == std::vector<int>{1, 0, 2});
  CHECK(is_covering_matching(g, m.mate_of_left));
  CHECK_FALSE(hall_violation(g, m).has_value());
}

TEST_CASE("hall violation is reported when no cover exists") {
  const BipartiteGraph g{3, 2, {{0}, {0}, {1}}};
  const Matching m = maximum_matching(g);
  CHECK(m.size == 2);
  const auto w = hall_violation(g, m);
  REQUIRE(w.has_value());
  CHECK(w->left_set == std::vector<int>{0, 1});
  CHECK(w->neighbourhood == std::vector<int>{0});
}

TEST_CASE("covering check rejects shared or missing edges") {
  const BipartiteGraph g{2, 2, {{0, 1}, {1}}};
  CHECK(is_covering_matching(g, {0, 1}));
  CHECK_FALSE(is_covering_matching(g, {1, 1}));
  CHECK_FALSE(is_covering_matching(g, {0, 0}));
  CHECK_FALSE(is_covering_matching(g, {0, -1}));
}
