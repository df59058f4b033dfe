#include <gtest/gtest.h>

#include "ceerlab/dark.hpp"
#include "ceerlab/io.hpp"

using namespace ceerlab;

namespace {

const CheckResult& check(const AuditReport& report, const std::string& name) {
  for (const auto& c : report.checks) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("no check named " + name);
}

// The lexicographically least x < y, both at most min(s - 1, support), in W_{e,s} with
// class minima >= 3e in `state`.
std::optional<std::pair<Nat, Nat>> expected_pair(Nat e, Nat s, const Partition& state, Nat support) {
  const FiniteSet w = we_at_stage(e, s);
  std::optional<Nat> first;
  for (Nat x : w) {
    if (x > support) break;
    if (state.representative(x) < 3 * e) continue;
    if (!first) {
      first = x;
    } else {
      return std::pair{*first, x};
    }
  }
  return std::nullopt;
}

}  // namespace

TEST(DarkInit, IsDiscreteAndQuiet) {
  const DarkConstruction d = dark_init(40);
  EXPECT_EQ(d.stage(), 0u);
  EXPECT_TRUE(d.trace().empty());
  EXPECT_EQ(singleton_count(d.relation(), 40, 0), 41u);
  for (Nat e = 0; e < 20; ++e) EXPECT_EQ(d.requirement(e).status, RequirementStatus::StandBy);
  const AuditReport report = audit(d);
  EXPECT_TRUE(report.passed());
  EXPECT_EQ(report.checks.size(), 6u);
}

TEST(DarkStep, DecodesTheStageCode) {
  DarkConstruction d = dark_init(30);
  d.run_to(50);
  ASSERT_EQ(d.trace().size(), 50u);
  for (const StageRecord& r : d.trace()) {
    auto [e, n] = unpair(r.stage);
    EXPECT_EQ(r.requirement, e);
    EXPECT_EQ(r.n, n);
    EXPECT_EQ(r.snapshot.index, e);
  }
}

TEST(DarkStep, SettledRequirementsNeverActAgain) {
  const DarkConstruction d = dark_run(128, 3000);
  std::map<Nat, Nat> settled;
  for (const StageRecord& r : d.trace()) {
    if (auto it = settled.find(r.requirement); it != settled.end()) {
      EXPECT_EQ(r.action, ActionKind::None) << "P_" << r.requirement << " at stage " << r.stage;
      EXPECT_EQ(r.snapshot.settle_stage, it->second);
    }
    if (r.action != ActionKind::None) settled.emplace(r.requirement, r.stage);
  }
  EXPECT_FALSE(settled.empty());
}

TEST(DarkStep, ConstantHaltProgramsCollapseAtTheirFirstVisit) {
  // Codes 7 and 37 halt on every input, so W_e is everything.
  for (Nat e : {Nat{7}, Nat{37}}) {
    const Nat first_visit = pair(e, 0);
    DarkConstruction d = dark_init(256);
    d.run_to(first_visit - 1);
    const Partition before = d.relation().current();
    const auto expected = expected_pair(e, first_visit - 1, before, 256);
    ASSERT_TRUE(expected);
    d.step();
    const StageRecord& r = d.trace().back();
    EXPECT_EQ(r.requirement, e);
    EXPECT_EQ(r.pair, expected);
    EXPECT_EQ(r.action, ActionKind::Collapse);
    EXPECT_EQ(d.requirement(e).status, RequirementStatus::Settled);
    EXPECT_EQ(d.requirement(e).settle_stage, first_visit);
    EXPECT_EQ(d.requirement(e).witnesses, expected);
    EXPECT_TRUE(d.relation().related(expected->first, expected->second));
  }
}

TEST(DarkStep, MatchesIndependentSearchAtEveryStage) {
  const Nat support = 64;
  DarkConstruction d = dark_init(support);
  std::map<Nat, bool> done;
  for (Nat s = 1; s <= 1200; ++s) {
    const Partition before = d.relation().current();
    d.step();
    const StageRecord& r = d.trace().back();
    const Nat e = r.requirement;
    if (done[e] || 3 * e > support) {
      ASSERT_EQ(r.action, ActionKind::None) << s;
      continue;
    }
    const auto expected = expected_pair(e, s - 1, before, support);
    ASSERT_EQ(r.pair, expected) << "stage " << s;
    if (expected) {
      done[e] = true;
      ASSERT_EQ(r.action, before.related(expected->first, expected->second) ? ActionKind::VacuousSettle
                                                                           : ActionKind::Collapse);
    }
  }
}

TEST(DarkStep, WitnessesRespectThePriorityBound) {
  DarkConstruction d = dark_init(200);
  for (Nat s = 1; s <= 4000; ++s) {
    const Partition before = d.relation().current();
    d.step();
    const StageRecord& r = d.trace().back();
    if (r.action == ActionKind::None) continue;
    const Nat least = std::min(before.representative(r.pair->first), before.representative(r.pair->second));
    EXPECT_GE(least, 3 * r.requirement);
  }
}

TEST(DarkRun, NonSingletonClassesAtMostCollapses) {
  const DarkConstruction d = dark_run(256, 5000, 16);
  Nat collapses = 0;
  for (const auto& r : d.trace()) collapses += r.action == ActionKind::Collapse;
  Nat non_singleton = 0;
  for (const auto& cls : d.relation().freeze(256, d.stage()).classes()) non_singleton += !cls.is_singleton;
  EXPECT_LE(non_singleton, collapses);
  for (const auto& r : d.trace()) {
    if (r.requirement >= 16) EXPECT_EQ(r.action, ActionKind::None);
  }
}

TEST(DarkRun, DeterministicTraceJson) {
  const std::string a = io::dump(io::to_json(dark_run(128, 2000)));
  const std::string b = io::dump(io::to_json(dark_run(128, 2000)));
  EXPECT_EQ(a, b);
}

TEST(DarkRun, ReplayReproducesTheRelation) {
  const DarkConstruction d = dark_run(128, 2500, 12);
  const DarkConstruction again = DarkConstruction::replay(128, 12, d.trace());
  EXPECT_EQ(again.relation().freeze(128, again.stage()), d.relation().freeze(128, d.stage()));
  EXPECT_EQ(again.trace(), d.trace());
  EXPECT_EQ(again.requirements(), d.requirements());
  EXPECT_TRUE(audit(again).passed());
}

TEST(DarkRun, ReplayRejectsMalformedRecords) {
  StageRecord a{5, 2, 0, ActionKind::None, std::nullopt, RequirementState::stand_by(2)};
  StageRecord b = a;
  EXPECT_THROW(DarkConstruction::replay(20, std::nullopt, {a, b}), Error);
  b.stage = 6;
  b.action = ActionKind::Collapse;
  EXPECT_THROW(DarkConstruction::replay(20, std::nullopt, {a, b}), Error);
}

TEST(CandidateA, Examples) {
  const DarkConstruction fresh = dark_init(40);
  FiniteSet all;
  for (Nat x = 0; x <= 12; ++x) all.push_back(x);
  EXPECT_EQ(candidate_A(fresh, 2), all);
  EXPECT_EQ(candidate_A(fresh, 3).size(), 40u);  // blocks 0..3 cover {0..39}
  EXPECT_THROW(candidate_A(fresh, 4), Error);

  const DarkConstruction d = dark_run(256, 5000, 16);
  const FiniteSet a = candidate_A(d, 4);
  EXPECT_TRUE(is_partial_transversal(a, d.relation(), d.stage()));
  for (Nat i = 0; i <= 4; ++i) {
    const FiniteSet block = strong_array_block(i);
    EXPECT_FALSE(set_intersection(a, block).empty()) << "block " << i;
  }
}

TEST(Audit, LongRunPassesEveryCheck) {
  DarkConstruction d = dark_init(256, 16);
  for (Nat s = 100; s <= 5000; s += 100) {
    d.run_to(s);
    ASSERT_TRUE(audit_singleton_windows(d).passed) << "stage " << s;
  }
  const AuditReport report = audit(d);
  for (const auto& c : report.checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
}

TEST(Audit, CorruptedWitnessIsCaught) {
  const DarkConstruction d = dark_run(64, 40);
  std::vector<StageRecord> records = d.trace();
  // P_5 claims the pair (14, 15): its class minimum is 14 = 3*5 - 1.
  const Nat e = 5;
  const Nat stage = pair(e, 50);
  StageRecord bad{stage, e, 50, ActionKind::Collapse, std::pair<Nat, Nat>{14, 15}, RequirementState::stand_by(e)};
  records.push_back(bad);
  const DarkConstruction corrupted = DarkConstruction::replay(64, std::nullopt, records);
  const AuditReport report = audit(corrupted);
  EXPECT_FALSE(report.passed());
  const CheckResult& witness = check(report, "witness-min-class");
  EXPECT_FALSE(witness.passed);
  EXPECT_EQ(witness.stage, stage);
  EXPECT_NE(witness.detail.find("14"), std::string::npos);
  EXPECT_FALSE(check(report, "disturbance-bound").passed);
  EXPECT_TRUE(check(report, "replay-fidelity").passed);
}

TEST(Audit, DoubleActionIsCaught) {
  StageRecord first{pair(1, 0), 1, 0, ActionKind::Collapse, std::pair<Nat, Nat>{5, 6}, RequirementState::stand_by(1)};
  StageRecord second{pair(1, 1), 1, 1, ActionKind::Collapse, std::pair<Nat, Nat>{7, 8},
                     RequirementState::stand_by(1)};
  const AuditReport report = audit(DarkConstruction::replay(20, std::nullopt, {first, second}));
  const CheckResult& once = check(report, "acts-at-most-once");
  EXPECT_FALSE(once.passed);
  EXPECT_EQ(once.stage, pair(1, 1));
}
