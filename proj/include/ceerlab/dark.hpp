#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ceerlab/ceer.hpp"
#include "ceerlab/machine.hpp"
#include "ceerlab/pairing.hpp"
#include "ceerlab/transversals.hpp"

namespace ceerlab {

// Priority construction of a ceer whose partial transversals avoid every infinite W_e.
//
//   stage 0:          R is the identity; every P_e is in stand-by.
//   stage s+1=<e,n>:  if P_e is in stand-by and some x != y in W_{e,s} have
//                     min([x] u [y]) >= 3e, collapse the lexicographically least such
//                     pair and settle P_e. If that pair is already related, P_e settles
//                     without a collapse.
//
// Everything is truncated to the support {0..n}; a requirement whose action would fall
// outside it stays in stand-by.

enum class RequirementStatus { StandBy, Settled };

struct RequirementState {
  Nat index = 0;
  RequirementStatus status = RequirementStatus::StandBy;
  std::optional<std::pair<Nat, Nat>> witnesses;
  std::optional<Nat> settle_stage;
  static RequirementState stand_by(Nat e) {
    RequirementState out;
    out.index = e;
    return out;
  }
  bool operator==(const RequirementState&) const = default;
};

enum class ActionKind { None, Collapse, VacuousSettle };

inline std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::None: return "none";
    case ActionKind::Collapse: return "collapse";
    case ActionKind::VacuousSettle: return "vacuous-settle";
  }
  return "none";
}

inline std::string_view to_string(RequirementStatus status) {
  return status == RequirementStatus::Settled ? "settled" : "stand-by";
}

/// What happened at one stage, with the snapshot of the requirement dealt with.
struct StageRecord {
  Nat stage = 0;
  Nat requirement = 0;
  Nat n = 0;
  ActionKind action = ActionKind::None;
  std::optional<std::pair<Nat, Nat>> pair;
  RequirementState snapshot;
  bool operator==(const StageRecord&) const = default;
};

class DarkConstruction {
 public:
  /// `requirement_limit` restricts the active requirements to P_e with e below it.
  explicit DarkConstruction(Nat support, std::optional<Nat> requirement_limit = std::nullopt)
      : relation_(support), limit_(requirement_limit) {}

  Nat support() const { return relation_.support(); }
  Nat stage() const { return relation_.stage(); }
  std::optional<Nat> requirement_limit() const { return limit_; }
  const StagedCeer& relation() const { return relation_; }
  const std::vector<StageRecord>& trace() const { return trace_; }

  RequirementState requirement(Nat e) const {
    if (e < requirements_.size()) return requirements_[e];
    return RequirementState::stand_by(e);
  }

  /// States of P_0 .. P_{k-1} where k is one past the largest index visited so far.
  const std::vector<RequirementState>& requirements() const { return requirements_; }

  void step() {
    relation_.next_stage();
    const Nat stage = relation_.stage();
    auto [e, n] = unpair(stage);
    StageRecord record{stage, e, n, ActionKind::None, std::nullopt, {}};
    RequirementState& req = slot(e);
    const bool active = !limit_ || e < *limit_;
    if (active && req.status == RequirementStatus::StandBy) {
      if (auto found = least_qualifying_pair(e, stage - 1)) {
        auto [x, y] = *found;
        if (relation_.related(x, y)) {
          record.action = ActionKind::VacuousSettle;
        } else {
          relation_.collapse(x, y);
          record.action = ActionKind::Collapse;
          req.witnesses = found;
        }
        record.pair = found;
        req.status = RequirementStatus::Settled;
        req.settle_stage = stage;
      }
    }
    record.snapshot = req;
    trace_.push_back(record);
  }

  void run_to(Nat stage) {
    while (this->stage() < stage) step();
  }

  /// Rebuilds a construction from a trace without searching, e.g. to audit a stored run.
  static DarkConstruction replay(Nat support, std::optional<Nat> requirement_limit,
                                 const std::vector<StageRecord>& records) {
    DarkConstruction out(support, requirement_limit);
    for (const StageRecord& record : records) {
      if (record.stage <= out.stage()) {
        throw Error(ErrorKind::RangeError, "trace stages must increase");
      }
      out.relation_.advance_to(record.stage);
      RequirementState& req = out.slot(record.requirement);
      if (record.action != ActionKind::None) {
        if (!record.pair) throw Error(ErrorKind::RangeError, "an action record needs its pair");
        auto [x, y] = *record.pair;
        if (record.action == ActionKind::Collapse) {
          out.relation_.collapse(x, y);
          req.witnesses = record.pair;
        }
        req.status = RequirementStatus::Settled;
        req.settle_stage = record.stage;
      }
      out.trace_.push_back(record);
      out.trace_.back().snapshot = req;
    }
    return out;
  }

 private:
  RequirementState& slot(Nat e) {
    while (requirements_.size() <= e) requirements_.push_back(RequirementState::stand_by(requirements_.size()));
    return requirements_[e];
  }

  /// Least (x, y), x != y, in W_{e,s} within the support with both classes' minima >= 3e.
  std::optional<std::pair<Nat, Nat>> least_qualifying_pair(Nat e, Nat s) {
    if (3 * e > support() || s == 0) return std::nullopt;
    auto& runs = runs_[e];
    if (!runs) runs = std::make_shared<ProgramRuns>(e);
    std::optional<Nat> first;
    const Nat top = std::min(s - 1, support());
    for (Nat x = 0; x <= top; ++x) {
      if (relation_.current().representative(x) < 3 * e) continue;
      if (!runs->entry_stage(x, s)) continue;
      if (!first) {
        first = x;
      } else {
        return std::pair{*first, x};
      }
    }
    return std::nullopt;
  }

  StagedCeer relation_;
  std::optional<Nat> limit_;
  std::vector<RequirementState> requirements_;
  std::vector<StageRecord> trace_;
  std::map<Nat, std::shared_ptr<ProgramRuns>> runs_;
};

inline DarkConstruction dark_init(Nat support, std::optional<Nat> requirement_limit = std::nullopt) {
  return DarkConstruction(support, requirement_limit);
}

inline DarkConstruction dark_run(Nat support, Nat stages, std::optional<Nat> requirement_limit = std::nullopt) {
  DarkConstruction out(support, requirement_limit);
  out.run_to(stages);
  return out;
}

/// Current-stage singletons inside blocks 0..m of the strong array. Provisional: a
/// later collapse can still destroy singletonhood.
inline FiniteSet candidate_A(const DarkConstruction& state, Nat m) {
  const StrongArray blocks;
  const Block last = blocks.block(m);
  detail::check_support(last.high, state.support());
  FiniteSet out;
  const Partition& current = state.relation().current();
  for (Nat x = 0; x <= last.high; ++x) {
    if (current.class_size(x) == 1) out.push_back(x);
  }
  return out;
}

struct CheckResult {
  std::string name;
  bool passed = true;
  std::optional<Nat> stage;
  std::string detail;
};

struct AuditReport {
  Nat stage = 0;
  std::vector<CheckResult> checks;
  bool passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }
};

namespace detail {

inline CheckResult fail(std::string name, std::optional<Nat> stage, std::string detail) {
  return {std::move(name), false, stage, std::move(detail)};
}

}  // namespace detail

/// Window singleton bound at the current stage: {0..3k} holds at least k singletons for
/// every k with 3k <= support.
inline CheckResult audit_singleton_windows(const DarkConstruction& state) {
  const Partition& current = state.relation().current();
  Nat singletons = 0;
  for (Nat x = 0; x <= state.support(); ++x) {
    if (current.class_size(x) == 1) ++singletons;
    if (x % 3 == 0) {
      const Nat k = x / 3;
      if (singletons < k) {
        return detail::fail("singleton-windows", state.stage(),
                            "window {0.." + std::to_string(x) + "} holds " + std::to_string(singletons) +
                                " singletons, fewer than " + std::to_string(k));
      }
    }
  }
  return {"singleton-windows", true, std::nullopt, ""};
}

/// Finite-stage checks of the construction, replaying the action log independently of
/// the stored relation.
inline AuditReport audit(const DarkConstruction& state) {
  AuditReport report;
  report.stage = state.stage();

  // One pass over the log, replaying actions on a fresh partition.
  Partition replay(state.support());
  std::map<Nat, Nat> actions;  // requirement -> first acting stage
  CheckResult once{"acts-at-most-once", true, std::nullopt, ""};
  CheckResult witness{"witness-min-class", true, std::nullopt, ""};
  CheckResult disturbance{"disturbance-bound", true, std::nullopt, ""};
  FiniteSet witnesses;

  for (const StageRecord& r : state.trace()) {
    if (r.action == ActionKind::None || !r.pair) continue;
    const Nat e = r.requirement;
    if (auto [it, fresh] = actions.emplace(e, r.stage); !fresh && once.passed) {
      once = detail::fail("acts-at-most-once", r.stage,
                          "P_" + std::to_string(e) + " acted at stage " + std::to_string(it->second) +
                              " and again at stage " + std::to_string(r.stage));
    }
    auto [x, y] = *r.pair;
    if (x > state.support() || y > state.support()) {
      witness = detail::fail("witness-min-class", r.stage, "witness outside the support");
      continue;
    }
    const Nat least = std::min(replay.representative(x), replay.representative(y));
    if (least < 3 * e && witness.passed) {
      witness = detail::fail("witness-min-class", r.stage,
                             "P_" + std::to_string(e) + " used witnesses (" + std::to_string(x) + "," +
                                 std::to_string(y) + ") with min-class " + std::to_string(least) + " < " +
                                 std::to_string(3 * e));
    }
    if (r.action == ActionKind::Collapse) {
      witnesses.push_back(x);
      witnesses.push_back(y);
      replay.merge(x, y);
      for (Nat z : replay.class_of(x)) {
        if (z < 3 * e && disturbance.passed) {
          disturbance = detail::fail("disturbance-bound", r.stage,
                                     "collapse by P_" + std::to_string(e) + " reached element " +
                                         std::to_string(z) + " < " + std::to_string(3 * e));
          break;
        }
      }
    }
  }
  witnesses = make_set(std::move(witnesses));

  CheckResult coverage{"witness-coverage", true, std::nullopt, ""};
  const Partition& current = state.relation().current();
  for (Nat x = 0; x <= state.support(); ++x) {
    if (current.representative(x) != x || current.class_size(x) == 1) continue;
    const FiniteSet cls = current.class_of(x);
    if (set_intersection(cls, witnesses).empty()) {
      coverage = detail::fail("witness-coverage", state.stage(),
                              "class of " + std::to_string(x) + " is not a singleton yet holds no witness");
      break;
    }
  }

  CheckResult fidelity{"replay-fidelity", true, std::nullopt, ""};
  if (FrozenCeer(replay) != FrozenCeer(current)) {
    fidelity = detail::fail("replay-fidelity", state.stage(), "replayed actions disagree with the relation");
  }

  report.checks = {once, witness, audit_singleton_windows(state), coverage, disturbance, fidelity};
  return report;
}

}  // namespace ceerlab
