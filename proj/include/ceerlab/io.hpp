#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ceerlab/ceer.hpp"
#include "ceerlab/dark.hpp"
#include "ceerlab/error.hpp"
#include "ceerlab/oracle.hpp"
#include "ceerlab/reductions.hpp"
#include "ceerlab/segments.hpp"
#include "ceerlab/spectra.hpp"

namespace ceerlab::io {

using Json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void schema(const std::string& what) { throw Error(ErrorKind::SchemaError, what); }

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) schema(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) schema(std::string("missing field '") + key + "'");
  return *it;
}

inline Nat natural(const Json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    schema(std::string("'") + what + "' must be a natural number");
  }
  return j.get<Nat>();
}

inline Nat natural_field(const Json& j, const char* key) { return natural(field(j, key), key); }

inline std::optional<Nat> optional_natural(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return natural(*it, key);
}

inline std::vector<Nat> naturals(const Json& j, const char* what) {
  if (!j.is_array()) schema(std::string("'") + what + "' must be an array");
  std::vector<Nat> out;
  for (const Json& v : j) out.push_back(natural(v, what));
  return out;
}

inline Json nat_pair(const std::optional<std::pair<Nat, Nat>>& p) {
  if (!p) return nullptr;
  return Json::array({p->first, p->second});
}

inline std::optional<std::pair<Nat, Nat>> read_pair(const Json& j, const char* what) {
  if (j.is_null()) return std::nullopt;
  auto v = naturals(j, what);
  if (v.size() != 2) schema(std::string("'") + what + "' must hold two naturals");
  return std::pair{v[0], v[1]};
}

}  // namespace detail

inline Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::SchemaError, std::string("malformed JSON: ") + e.what());
  }
}

inline Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::SchemaError, "cannot read '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::SchemaError, "cannot write '" + path + "'");
  out << text;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json error_json(const Error& e) {
  return {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
}

// ---------------------------------------------------------------------------
// Oracle tables

inline Json to_json(const OracleTable& t) {
  return {{"bits", t.to_string()}, {"bound", t.bound()}, {"tag", t.tag()}};
}

inline OracleTable oracle_from_json(const Json& j) {
  const Json& bits = detail::field(j, "bits");
  if (!bits.is_string()) detail::schema("'bits' must be a string of 0/1");
  std::string tag;
  if (auto it = j.find("tag"); it != j.end()) {
    if (!it->is_string()) detail::schema("'tag' must be a string");
    tag = it->get<std::string>();
  }
  OracleTable out = OracleTable::from_string(bits.get<std::string>(), tag);
  if (auto bound = detail::optional_natural(j, "bound"); bound && *bound != out.bound()) {
    detail::schema("'bound' is " + std::to_string(*bound) + " but 'bits' holds " + std::to_string(out.bound()));
  }
  return out;
}

inline Json bases_to_json(const std::vector<OracleTable>& tables) {
  Json list = Json::array();
  for (const auto& t : tables) list.push_back(to_json(t));
  return {{"tables", list}};
}

inline std::vector<OracleTable> bases_from_json(const Json& j) {
  const Json& list = detail::field(j, "tables");
  if (!list.is_array() || list.empty()) detail::schema("'tables' must be a nonempty array");
  std::vector<OracleTable> out;
  for (const Json& t : list) out.push_back(oracle_from_json(t));
  return out;
}

// ---------------------------------------------------------------------------
// Ceer snapshots

inline Json classes_json(const FrozenCeer& r) {
  Json classes = Json::array();
  for (const ClassView& c : r.classes()) classes.push_back(c.members);
  return classes;
}

inline Json to_json(const FrozenCeer& r) {
  return {{"support", r.support()}, {"stage", 0}, {"classes", classes_json(r)}};
}

/// Staged snapshot: the partition at the current stage plus the collapse trace.
inline Json to_json(const StagedCeer& r) {
  Json trace = Json::array();
  for (const CollapseEvent& e : r.trace()) trace.push_back(Json::array({e.stage, e.x, e.y}));
  return {{"support", r.support()},
          {"stage", r.stage()},
          {"classes", classes_json(FrozenCeer(r.current()))},
          {"trace", trace}};
}

inline std::vector<FiniteSet> classes_from_json(const Json& j) {
  const Json& list = detail::field(j, "classes");
  if (!list.is_array()) detail::schema("'classes' must be an array of arrays");
  std::vector<FiniteSet> out;
  for (const Json& c : list) {
    auto members = detail::naturals(c, "classes");
    out.push_back(make_set(std::move(members)));
  }
  return out;
}

/// A snapshot read as a frozen relation. With a trace, the trace is replayed and must
/// agree with the listed classes.
inline FrozenCeer frozen_from_json(const Json& j) {
  const Nat support = detail::natural_field(j, "support");
  FrozenCeer out = FrozenCeer::from_classes(support, classes_from_json(j));
  if (j.contains("trace")) {
    const Nat stage = detail::optional_natural(j, "stage").value_or(0);
    std::vector<CollapseEvent> events;
    const Json& trace = j.at("trace");
    if (!trace.is_array()) detail::schema("'trace' must be an array of [stage, x, y]");
    for (const Json& e : trace) {
      auto v = detail::naturals(e, "trace");
      if (v.size() != 3) detail::schema("trace entries are [stage, x, y]");
      events.push_back({v[0], v[1], v[2], true});
    }
    const StagedCeer replayed = StagedCeer::replay(support, stage, events);
    if (FrozenCeer(replayed.current()) != out) detail::schema("'trace' does not reproduce 'classes'");
  }
  return out;
}

inline StagedCeer staged_from_json(const Json& j) {
  const Nat support = detail::natural_field(j, "support");
  const Nat stage = detail::optional_natural(j, "stage").value_or(0);
  std::vector<CollapseEvent> events;
  if (j.contains("trace")) {
    for (const Json& e : j.at("trace")) {
      auto v = detail::naturals(e, "trace");
      if (v.size() != 3) detail::schema("trace entries are [stage, x, y]");
      events.push_back({v[0], v[1], v[2], true});
    }
  } else {
    for (const FiniteSet& c : classes_from_json(j)) {
      for (Nat x : c) {
        if (x != c.front()) events.push_back({0, c.front(), x, true});
      }
    }
  }
  return StagedCeer::replay(support, stage, events);
}

// ---------------------------------------------------------------------------
// Reductions and verdicts

inline Json to_json(const ReductionCandidate& f) {
  Json out = {{"kind", std::string(to_string(f.kind()))}};
  if (f.kind() == ReductionCandidate::Kind::Program) {
    out["code"] = f.code();
    out["budget"] = f.budget();
    out["domain_bound"] = f.domain_bound();
  } else {
    if (!f.name().empty()) out["name"] = f.name();
    out["values"] = f.values();
  }
  return out;
}

inline ReductionCandidate reduction_from_json(const Json& j) {
  const Json& kind = detail::field(j, "kind");
  if (!kind.is_string()) detail::schema("'kind' must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "program") {
    return ReductionCandidate::program(detail::natural_field(j, "code"), detail::natural_field(j, "budget"),
                                       detail::natural_field(j, "domain_bound"));
  }
  auto values = detail::naturals(detail::field(j, "values"), "values");
  if (values.empty()) detail::schema("'values' must be nonempty");
  if (k == "table") return ReductionCandidate::table(std::move(values));
  if (k == "builtin") {
    std::string name;
    if (auto it = j.find("name"); it != j.end() && it->is_string()) name = it->get<std::string>();
    return ReductionCandidate::builtin(std::move(name), std::move(values));
  }
  detail::schema("unknown reduction kind '" + k + "'");
}

inline Json to_json(const Verdict& v) {
  Json out = {{"verdict", std::string(to_string(v.kind))}, {"witness", detail::nat_pair(v.witness)},
              {"support", v.support}};
  out["stage"] = v.stage ? Json(*v.stage) : Json(nullptr);
  return out;
}

// ---------------------------------------------------------------------------
// Trees and families

inline Json level_json(Nat depth, const std::vector<Bits>& nodes) {
  Json list = Json::array();
  for (const Bits& b : nodes) list.push_back(bits_to_string(b));
  return {{"depth", depth}, {"nodes", list}};
}

inline Json to_json(const std::vector<FamilyLevel>& levels) {
  Json list = Json::array();
  for (const FamilyLevel& level : levels) {
    list.push_back({{"n", level.n}, {"index_cut", level.index_cut}, {"members", level.members}});
  }
  return {{"levels", list}};
}

inline std::vector<FamilyLevel> family_from_json(const Json& j) {
  const Json& list = detail::field(j, "levels");
  if (!list.is_array()) detail::schema("'levels' must be an array");
  std::vector<FamilyLevel> out;
  for (const Json& level : list) {
    FamilyLevel l;
    l.n = detail::natural_field(level, "n");
    l.index_cut = detail::optional_natural(level, "index_cut").value_or(0);
    for (const Json& m : detail::field(level, "members")) l.members.push_back(make_set(detail::naturals(m, "members")));
    out.push_back(std::move(l));
  }
  return out;
}

inline Json to_json(const EncodedSet& x) {
  return {{"limit", x.limit}, {"completeness_bound", x.completeness_bound}, {"fragment", x.fragment}};
}

// ---------------------------------------------------------------------------
// Dark construction

inline Json to_json(const RequirementState& r) {
  Json out = {{"e", r.index}, {"status", std::string(to_string(r.status))}, {"witnesses", detail::nat_pair(r.witnesses)}};
  out["settle_stage"] = r.settle_stage ? Json(*r.settle_stage) : Json(nullptr);
  return out;
}

inline Json to_json(const StageRecord& r) {
  return {{"stage", r.stage},         {"e", r.requirement},
          {"n", r.n},                 {"action", std::string(to_string(r.action))},
          {"pair", detail::nat_pair(r.pair)}, {"requirement", to_json(r.snapshot)}};
}

inline Json to_json(const DarkConstruction& d) {
  Json records = Json::array();
  for (const StageRecord& r : d.trace()) records.push_back(to_json(r));
  Json out = {{"support", d.support()}, {"stages", d.stage()}};
  out["requirement_limit"] = d.requirement_limit() ? Json(*d.requirement_limit()) : Json(nullptr);
  out["relation"] = to_json(d.relation());
  out["records"] = records;
  return out;
}

inline ActionKind action_from_string(const std::string& s) {
  if (s == "none") return ActionKind::None;
  if (s == "collapse") return ActionKind::Collapse;
  if (s == "vacuous-settle") return ActionKind::VacuousSettle;
  detail::schema("unknown action '" + s + "'");
}

/// Rebuilds a construction from its trace JSON by replaying the action records.
inline DarkConstruction dark_from_json(const Json& j) {
  const Nat support = detail::natural_field(j, "support");
  const auto limit = detail::optional_natural(j, "requirement_limit");
  const Json& list = detail::field(j, "records");
  if (!list.is_array()) detail::schema("'records' must be an array");
  std::vector<StageRecord> records;
  for (const Json& r : list) {
    StageRecord rec;
    rec.stage = detail::natural_field(r, "stage");
    rec.requirement = detail::natural_field(r, "e");
    rec.n = detail::optional_natural(r, "n").value_or(0);
    const Json& action = detail::field(r, "action");
    if (!action.is_string()) detail::schema("'action' must be a string");
    rec.action = action_from_string(action.get<std::string>());
    if (auto it = r.find("pair"); it != r.end()) rec.pair = detail::read_pair(*it, "pair");
    records.push_back(rec);
  }
  DarkConstruction out = DarkConstruction::replay(support, limit, records);
  if (auto stages = detail::optional_natural(j, "stages"); stages && *stages < out.stage()) {
    detail::schema("'stages' is below the last record");
  }
  return out;
}

inline Json to_json(const CheckResult& c) {
  Json out = {{"name", c.name}, {"passed", c.passed}};
  out["stage"] = c.stage ? Json(*c.stage) : Json(nullptr);
  out["detail"] = c.detail;
  return out;
}

inline Json to_json(const AuditReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"stage", r.stage}, {"passed", r.passed()}, {"checks", checks}};
}

}  // namespace ceerlab::io
