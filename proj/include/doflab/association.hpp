#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "doflab/topology.hpp"

namespace doflab {

using SetMap = std::map<int, IndexSet>;

// Per-MT sets C_i of BSs allowed to hold W_i, under a budget |C_i| <= Nc.
// One association serves both sessions; the optional downlink-extra sets
// C_i^D record which members were added for the downlink only.
class CellAssociation {
 public:
  CellAssociation(int users, int budget);
  CellAssociation(int users, int budget, const SetMap& sets,
                  std::optional<SetMap> downlink_extra = std::nullopt);

  int users() const noexcept { return static_cast<int>(sets_.size()); }
  int budget() const noexcept { return budget_; }

  const IndexSet& of(int mt) const;
  const std::optional<SetMap>& downlink_extra() const noexcept {
    return downlink_extra_;
  }
  const IndexSet* downlink_extra_of(int mt) const;

  SetMap as_map() const;

  friend bool operator==(const CellAssociation&, const CellAssociation&) = default;

 private:
  int budget_;
  std::vector<IndexSet> sets_;
  std::optional<SetMap> downlink_extra_;
};

struct BudgetViolation {
  int mt;
  std::size_t size;
  friend bool operator==(const BudgetViolation&, const BudgetViolation&) = default;
};

struct AssociationVerdict {
  std::vector<BudgetViolation> violations;
  bool valid() const noexcept { return violations.empty(); }
};

// Lists every MT with |C_i| > Nc. Structural problems (BS index out of
// range, K mismatch, C_i^D inconsistent with C_i) throw StructuralError.
AssociationVerdict validate(const CellAssociation& assoc, const Topology& topology);

// True iff connected_bs(i) is a subset of C_i for every MT.
bool is_full_coverage(const CellAssociation& assoc, const Topology& topology);

}  // namespace doflab
