#pragma once

#include <optional>
#include <vector>

namespace doflab {

// Bipartite graph with `left` vertices that must be covered and `right`
// vertices that can cover them. adjacency[l] lists right neighbours.
struct BipartiteGraph {
  int left = 0;
  int right = 0;
  std::vector<std::vector<int>> adjacency;
};

struct Matching {
  std::vector<int> mate_of_left;   // -1 when unmatched
  std::vector<int> mate_of_right;  // -1 when unmatched
  int size = 0;

  bool covers_left() const noexcept {
    return size == static_cast<int>(mate_of_left.size());
  }
};

// Maximum matching by repeated augmenting-path search. Left vertices are
// processed in index order and neighbours in adjacency order, so the result
// is deterministic.
Matching maximum_matching(const BipartiteGraph& graph);

// Left set S with |N(S)| < |S|, certifying that no matching covers the left
// side.
struct HallViolation {
  std::vector<int> left_set;
  std::vector<int> neighbourhood;
};

// Returns a Hall violator grown from the lowest unmatched left vertex, or
// nullopt when `matching` already covers every left vertex. `matching` must be
// maximum.
std::optional<HallViolation> hall_violation(const BipartiteGraph& graph,
                                            const Matching& matching);

// True iff every left vertex is matched along an existing edge and no right
// vertex is used twice.
bool is_covering_matching(const BipartiteGraph& graph,
                          const std::vector<int>& mate_of_left);

}  // namespace doflab
