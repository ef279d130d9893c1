#include "doflab/io.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "doflab/errors.hpp"

namespace doflab {

namespace {

json index_list(const IndexSet& set) {
  json out = json::array();
  for (int v : set) out.push_back(v);
  return out;
}

json set_map(const SetMap& sets, bool skip_empty) {
  json out = json::object();
  for (const auto& [mt, set] : sets) {
    if (skip_empty && set.empty()) continue;
    out[std::to_string(mt)] = index_list(set);
  }
  return out;
}

[[noreturn]] void schema_fail(const std::string& field, const std::string& what) {
  throw SchemaError("field '" + field + "': " + what);
}

const json& require(const json& doc, const std::string& key, const std::string& path = "") {
  if (!doc.is_object()) schema_fail(path.empty() ? "<root>" : path, "expected an object");
  const auto it = doc.find(key);
  if (it == doc.end()) schema_fail(path + key, "missing");
  return *it;
}

int as_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) schema_fail(field, "expected an integer");
  return v.get<int>();
}

int key_index(const std::string& key, const std::string& field) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(key, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != key.size()) schema_fail(field, "key '" + key + "' is not an index");
  return value;
}

IndexSet as_index_set(const json& v, const std::string& field) {
  if (!v.is_array()) schema_fail(field, "expected an array of indices");
  IndexSet out;
  for (std::size_t n = 0; n < v.size(); ++n) {
    const int idx = as_int(v[n], field + "[" + std::to_string(n) + "]");
    if (!out.insert(idx).second) schema_fail(field, "duplicate index " + std::to_string(idx));
  }
  return out;
}

SetMap as_set_map(const json& v, const std::string& field) {
  if (!v.is_object()) schema_fail(field, "expected an object keyed by MT index");
  SetMap out;
  for (const auto& [key, value] : v.items()) {
    out[key_index(key, field)] = as_index_set(value, field + "." + key);
  }
  return out;
}

json violation_to_json(const Violation& v) {
  json out;
  out["condition"] = v.condition;
  out["mt"] = v.mt;
  out["bs"] = v.bs;
  out["message"] = v.message;
  return out;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t n = 0; n < std::min(byte, text.size()); ++n) {
    if (text[n] == '\n') ++line;
  }
  return line;
}

}  // namespace

json association_to_json(const CellAssociation& assoc, const Topology& topology) {
  json out;
  out["K"] = topology.users();
  out["L"] = topology.connectivity();
  out["Nc"] = assoc.budget();
  out["C"] = set_map(assoc.as_map(), false);
  if (assoc.downlink_extra()) out["C_D"] = set_map(*assoc.downlink_extra(), false);
  return out;
}

AssociationDocument association_from_json(const json& doc) {
  const int K = as_int(require(doc, "K"), "K");
  const int L = as_int(require(doc, "L"), "L");
  const int Nc = as_int(require(doc, "Nc"), "Nc");
  SetMap sets = as_set_map(require(doc, "C"), "C");
  std::optional<SetMap> extra;
  if (doc.contains("C_D")) extra = as_set_map(doc["C_D"], "C_D");
  for (const auto& [key, _] : doc.items()) {
    if (key != "K" && key != "L" && key != "Nc" && key != "C" && key != "C_D") {
      schema_fail(key, "unknown field");
    }
  }
  try {
    Topology topology(K, L);
    return {topology, CellAssociation(K, Nc, sets, std::move(extra))};
  } catch (const DomainError& e) {
    throw SchemaError(std::string("K/L: ") + e.what());
  }
}

json plan_to_json(const UplinkPlan& plan, int subnetwork_size) {
  json out;
  out["session"] = "uplink";
  out["active"] = index_list(plan.active_mts);
  json pairs = json::object();
  for (const auto& [mt, bs] : plan.decoding_pairs) pairs[std::to_string(mt)] = bs;
  out["pairs"] = pairs;
  json shares = json::array();
  for (const auto& e : plan.shares) shares.push_back({e.from_bs, e.to_bs, e.mt});
  out["shares"] = shares;
  if (subnetwork_size > 0) out["subnetwork_size"] = subnetwork_size;
  return out;
}

json plan_to_json(const DownlinkPlan& plan, int subnetwork_size) {
  json out;
  out["session"] = "downlink";
  out["active"] = index_list(plan.active_receivers);
  json sets = json::object();
  for (const auto& [mt, set] : plan.transmit_sets) sets[std::to_string(mt)] = index_list(set);
  out["transmit_sets"] = sets;
  if (subnetwork_size > 0) out["subnetwork_size"] = subnetwork_size;
  return out;
}

PlanDocument plan_from_json(const json& doc) {
  const json& session = require(doc, "session");
  if (!session.is_string()) schema_fail("session", "expected \"uplink\" or \"downlink\"");
  const std::string name = session.get<std::string>();
  PlanDocument out;
  if (doc.contains("subnetwork_size")) {
    out.subnetwork_size = as_int(doc["subnetwork_size"], "subnetwork_size");
    if (out.subnetwork_size < 1) schema_fail("subnetwork_size", "must be positive");
  }
  const IndexSet active = as_index_set(require(doc, "active"), "active");
  if (name == "uplink") {
    if (doc.contains("transmit_sets")) schema_fail("transmit_sets", "not allowed in an uplink plan");
    UplinkPlan plan;
    plan.active_mts = active;
    if (doc.contains("pairs")) {
      const json& pairs = doc["pairs"];
      if (!pairs.is_object()) schema_fail("pairs", "expected an object keyed by MT index");
      for (const auto& [key, value] : pairs.items()) {
        plan.decoding_pairs[key_index(key, "pairs")] = as_int(value, "pairs." + key);
      }
    }
    if (doc.contains("shares")) {
      const json& shares = doc["shares"];
      if (!shares.is_array()) schema_fail("shares", "expected an array of [from, to, mt]");
      for (std::size_t n = 0; n < shares.size(); ++n) {
        const std::string field = "shares[" + std::to_string(n) + "]";
        const json& e = shares[n];
        if (!e.is_array() || e.size() != 3) schema_fail(field, "expected [from, to, mt]");
        plan.shares.insert({as_int(e[0], field), as_int(e[1], field), as_int(e[2], field)});
      }
    }
    out.plan = std::move(plan);
  } else if (name == "downlink") {
    if (doc.contains("pairs") || doc.contains("shares")) {
      schema_fail(doc.contains("pairs") ? "pairs" : "shares", "not allowed in a downlink plan");
    }
    DownlinkPlan plan;
    plan.active_receivers = active;
    if (doc.contains("transmit_sets")) {
      for (auto& [mt, set] : as_set_map(doc["transmit_sets"], "transmit_sets")) {
        plan.transmit_sets[mt] = std::move(set);
      }
    }
    out.plan = std::move(plan);
  } else {
    schema_fail("session", "expected \"uplink\" or \"downlink\", got \"" + name + "\"");
  }
  for (const auto& [key, _] : doc.items()) {
    if (key != "session" && key != "active" && key != "pairs" && key != "shares" &&
        key != "transmit_sets" && key != "subnetwork_size") {
      schema_fail(key, "unknown field");
    }
  }
  return out;
}

json report_to_json(const DofReport& r) {
  json out;
  out["session"] = to_string(r.session);
  out["users"] = r.users;
  out["accepted"] = r.accepted;
  json violations = json::array();
  for (const auto& v : r.violations) violations.push_back(violation_to_json(v));
  out["violations"] = violations;
  out["achieved_dof"] = r.achieved_dof;
  out["per_user_ratio"] = r.per_user_ratio.to_string();
  out["subnetwork_size"] = r.subnetwork_size;
  out["per_subnetwork"] = r.per_subnetwork;
  out["prefix_active"] = r.prefix_active;
  if (r.session == Session::uplink) {
    out["borrowed"] = r.borrowed;
    out["blocked"] = r.blocked;
    out["decode_order"] = r.decode_order;
  } else {
    json certs = json::array();
    for (const auto& c : r.certificates) {
      json pairs = json::array();
      for (const auto& [rx, tx] : c.pairs) pairs.push_back({rx, tx});
      certs.push_back({{"message", c.message}, {"pairs", pairs}});
    }
    out["certificates"] = certs;
    json hall = json::array();
    for (const auto& h : r.hall_witnesses) {
      hall.push_back({{"message", h.message},
                      {"receivers", h.receivers},
                      {"transmitters", h.transmitters}});
    }
    out["hall_witnesses"] = hall;
  }
  return out;
}

json oracle_to_json(const OracleResult& r, bool include_stats) {
  json out;
  out["session"] = to_string(r.session);
  out["K"] = r.users;
  out["L"] = r.connectivity;
  out["Nc"] = r.budget;
  out["optimal_dof"] = r.optimal_dof;
  if (r.session == OracleSession::average) {
    out["uplink_dof"] = r.uplink_dof;
    out["downlink_dof"] = r.downlink_dof;
    out["average"] = r.average.to_string();
  }
  out["per_user"] = Rational(r.session == OracleSession::average ? r.optimal_dof : 2 * r.optimal_dof,
                             2 * r.users)
                        .to_string();
  if (r.session != OracleSession::uplink) out["window"] = r.window;
  out["pruned"] = r.pruned;
  out["assumptions"] = r.assumptions;
  json witness;
  if (r.witness) {
    witness["association"] = association_to_json(r.witness->association, r.witness->topology);
    if (r.witness->uplink_plan) witness["uplink_plan"] = plan_to_json(*r.witness->uplink_plan);
    if (r.witness->downlink_plan) {
      witness["downlink_plan"] = plan_to_json(*r.witness->downlink_plan);
    }
  }
  out["witness"] = witness;
  if (include_stats) {
    out["stats"] = {{"nodes", r.stats.nodes},
                    {"pruned", r.stats.pruned},
                    {"wall_ms", r.stats.wall_ms}};
  }
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": line " + std::to_string(line_of(text, e.byte)) + ": " +
                      e.what());
  }
}

void write_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << doc.dump(2) << '\n';
}

void write_rate_csv(std::ostream& os, const RateCurve& curve) {
  os << "P_exponent";
  for (int i = 1; i <= curve.users(); ++i) os << ",user_" << i;
  os << '\n';
  for (std::size_t g = 0; g < curve.powers.size(); ++g) {
    os << std::setprecision(10) << std::log2(curve.powers[g]);
    for (double r : curve.rates[g]) os << ',' << std::setprecision(12) << r;
    os << '\n';
  }
}

void append_ledger_row(const std::string& path, const OracleResult& result, int scheme_value) {
  namespace fs = std::filesystem;
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot append to " + path);
  if (fresh) out << "K,L,Nc,session,optimal,scheme_value,match_flag\n";
  const char* flag = scheme_value < 0                       ? "no_scheme"
                     : result.optimal_dof == scheme_value   ? "match"
                     : result.optimal_dof > scheme_value    ? "oracle_above"
                                                            : "scheme_above";
  out << result.users << ',' << result.connectivity << ',' << result.budget << ','
      << to_string(result.session) << ',' << result.optimal_dof << ','
      << (scheme_value < 0 ? std::string("NA") : std::to_string(scheme_value)) << ',' << flag
      << '\n';
}

}  // namespace doflab
