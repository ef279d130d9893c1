#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include <json.hpp>

#include "doflab/association.hpp"
#include "doflab/numeric.hpp"
#include "doflab/oracle.hpp"
#include "doflab/plans.hpp"
#include "doflab/schemes.hpp"
#include "doflab/zf_verify.hpp"

namespace doflab {

using json = nlohmann::ordered_json;

struct AssociationDocument {
  Topology topology;
  CellAssociation association;
};

struct PlanDocument {
  std::variant<UplinkPlan, DownlinkPlan> plan;
  int subnetwork_size = 0;  // optional field, 0 when absent

  Session session() const {
    return std::holds_alternative<UplinkPlan>(plan) ? Session::uplink : Session::downlink;
  }
};

json association_to_json(const CellAssociation& assoc, const Topology& topology);
AssociationDocument association_from_json(const json& doc);

json plan_to_json(const UplinkPlan& plan, int subnetwork_size = 0);
json plan_to_json(const DownlinkPlan& plan, int subnetwork_size = 0);
PlanDocument plan_from_json(const json& doc);

json report_to_json(const DofReport& report);
json oracle_to_json(const OracleResult& result, bool include_stats = false);

// Parses a file; syntax errors and layout problems throw SchemaError.
json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& doc);

// Columns: P_exponent, user_1..user_K.
void write_rate_csv(std::ostream& os, const RateCurve& curve);

// Appends "K,L,Nc,session,optimal,scheme_value,match_flag", writing the
// header first when the file is new or empty.
void append_ledger_row(const std::string& path, const OracleResult& result,
                       int scheme_value);

}  // namespace doflab
