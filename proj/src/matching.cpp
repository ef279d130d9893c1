#include "doflab/matching.hpp"

#include <algorithm>

namespace doflab {

namespace {

bool augment(const BipartiteGraph& g, int l, std::vector<char>& seen, Matching& m) {
  for (int r : g.adjacency[l]) {
    if (seen[r]) continue;
    seen[r] = 1;
    if (m.mate_of_right[r] < 0 || augment(g, m.mate_of_right[r], seen, m)) {
      m.mate_of_right[r] = l;
      m.mate_of_left[l] = r;
      return true;
    }
  }
  return false;
}

}  // namespace

Matching maximum_matching(const BipartiteGraph& graph) {
  Matching m;
  m.mate_of_left.assign(graph.left, -1);
  m.mate_of_right.assign(graph.right, -1);
  std::vector<char> seen(graph.right);
  for (int l = 0; l < graph.left; ++l) {
    std::fill(seen.begin(), seen.end(), 0);
    if (augment(graph, l, seen, m)) ++m.size;
  }
  return m;
}

std::optional<HallViolation> hall_violation(const BipartiteGraph& graph,
                                            const Matching& matching) {
  const auto first_free =
      std::find(matching.mate_of_left.begin(), matching.mate_of_left.end(), -1);
  if (first_free == matching.mate_of_left.end()) return std::nullopt;

  // Left vertices reachable from the free vertex by alternating paths form S;
  // every neighbour of S is matched back into S, so |N(S)| = |S| - 1.
  std::vector<char> in_left(graph.left), in_right(graph.right);
  std::vector<int> stack{static_cast<int>(first_free - matching.mate_of_left.begin())};
  in_left[stack.back()] = 1;
  while (!stack.empty()) {
    const int l = stack.back();
    stack.pop_back();
    for (int r : graph.adjacency[l]) {
      if (in_right[r]) continue;
      in_right[r] = 1;
      const int next = matching.mate_of_right[r];
      if (next >= 0 && !in_left[next]) {
        in_left[next] = 1;
        stack.push_back(next);
      }
    }
  }
  HallViolation out;
  for (int l = 0; l < graph.left; ++l) {
    if (in_left[l]) out.left_set.push_back(l);
  }
  for (int r = 0; r < graph.right; ++r) {
    if (in_right[r]) out.neighbourhood.push_back(r);
  }
  return out;
}

bool is_covering_matching(const BipartiteGraph& graph, const std::vector<int>& mate_of_left) {
  if (static_cast<int>(mate_of_left.size()) != graph.left) return false;
  std::vector<char> used(graph.right);
  for (int l = 0; l < graph.left; ++l) {
    const int r = mate_of_left[l];
    if (r < 0 || r >= graph.right || used[r]) return false;
    const auto& adj = graph.adjacency[l];
    if (std::find(adj.begin(), adj.end(), r) == adj.end()) return false;
    used[r] = 1;
  }
  return true;
}

}  // namespace doflab
