#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "doflab/rational.hpp"

namespace doflab {

enum class SweepParameter { connectivity, budget };

enum class FormulaSession { downlink_zf, uplink_zf, avg_lower, gamma_d, wyner };

std::string to_string(FormulaSession s);
FormulaSession parse_formula_session(const std::string& name);

// Dispatches to the closed-form formula for `session`. Throws DomainError
// naming the valid range when (L, Nc) is outside it.
PuDofValue evaluate_formula(FormulaSession session, int L, int Nc);

struct SweepSpec {
  SweepParameter vary = SweepParameter::budget;
  int from = 1;
  int to = 1;
  int fixed_connectivity = 1;  // used when varying Nc
  int fixed_budget = 1;        // used when varying L
  std::vector<FormulaSession> sessions;
};

struct SweepRow {
  int connectivity;
  int budget;
  FormulaSession session;
  bool defined;  // false when (L, Nc) lies outside the session's range
  PuDofValue value;
};

// Throws DomainError for an empty range or invalid fixed parameters.
void validate_sweep(const SweepSpec& spec);
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// Columns: L, Nc, session, value, decimal. Undefined cells print "NA".
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

// Line plot with one polyline per session against the varied parameter.
void write_sweep_svg(std::ostream& os, const SweepSpec& spec,
                     const std::vector<SweepRow>& rows);

}  // namespace doflab
