#include <gtest/gtest.h>

#include <algorithm>
#include <optional>
#include <random>
#include <set>

#include "ceerlab/enumerable.hpp"
#include "ceerlab/finite_set.hpp"
#include "ceerlab/machine.hpp"
#include "ceerlab/oracle.hpp"
#include "ceerlab/pairing.hpp"
#include "ceerlab/segments.hpp"

using namespace ceerlab;

namespace {

constexpr Nat kConstZero = 37;  // HALT r1
constexpr Nat kIdentity = 7;    // HALT r0
constexpr Nat kDiverge = 0;     // empty body

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::SchemaError;
}

}  // namespace

TEST(Pairing, SmallValues) {
  EXPECT_EQ(pair(0, 0), 0u);
  EXPECT_EQ(pair(1, 0), 1u);
  EXPECT_EQ(pair(0, 1), 2u);
}

TEST(Pairing, UnpairFourByExhaustiveScan) {
  std::optional<std::pair<Nat, Nat>> found;
  for (Nat i = 0; i <= 4; ++i) {
    for (Nat x = 0; x <= 4; ++x) {
      if ((i + x) * (i + x + 1) / 2 + x == 4) found = std::pair{i, x};
    }
  }
  ASSERT_TRUE(found);
  EXPECT_EQ(unpair(4), *found);
  EXPECT_EQ(unpair(4), (std::pair<Nat, Nat>{1, 1}));
}

TEST(Pairing, BijectionBelowTenThousand) {
  std::set<std::pair<Nat, Nat>> seen;
  for (Nat z = 0; z < 10000; ++z) {
    auto p = unpair(z);
    EXPECT_EQ(pair(p.first, p.second), z);
    EXPECT_TRUE(seen.insert(p).second);
  }
}

TEST(Pairing, StrictlyMonotoneInEachArgument) {
  for (Nat i = 0; i < 60; ++i) {
    for (Nat x = 0; x < 60; ++x) {
      EXPECT_LT(pair(i, x), pair(i + 1, x));
      EXPECT_LT(pair(i, x), pair(i, x + 1));
    }
  }
}

TEST(Pairing, LargeCodesAndOverflow) {
  const Nat big = Nat{1} << 62;
  auto [i, x] = unpair(big);
  EXPECT_EQ(pair(i, x), big);
  auto [j, y] = unpair(UINT64_MAX);
  EXPECT_EQ(pair(j, y), UINT64_MAX);
  EXPECT_EQ(kind_of([] { pair(Nat{1} << 40, Nat{1} << 40); }), ErrorKind::RangeError);
}

TEST(Pairing, MaxSecondComponent) {
  EXPECT_EQ(max_second_component(0, 9), 3u);  // pair(0,3) = 9
  EXPECT_EQ(max_second_component(1, 9), 2u);  // pair(1,2) = 8
  EXPECT_FALSE(max_second_component(5, 9));   // pair(5,0) = 15
  for (Nat i = 0; i < 10; ++i) {
    if (auto top = max_second_component(i, 100)) {
      EXPECT_LE(pair(i, *top), 100u);
      EXPECT_GT(pair(i, *top + 1), 100u);
    }
  }
}

TEST(CanonicalSet, Examples) {
  EXPECT_TRUE(canonical_set(0).empty());
  EXPECT_EQ(canonical_set(5), (FiniteSet{0, 2}));
  for (Nat k = 0; k < 63; ++k) EXPECT_EQ(canonical_index({k}), Nat{1} << k);
}

TEST(CanonicalSet, RoundTrip) {
  for (Nat z = 0; z < 5000; ++z) EXPECT_EQ(canonical_index(canonical_set(z)), z);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 500; ++t) {
    std::vector<Nat> v;
    for (int k = 0; k < 8; ++k) v.push_back(rng() % 64);
    const FiniteSet x = make_set(v);
    EXPECT_EQ(canonical_set(canonical_index(x)), x);
  }
  EXPECT_EQ(kind_of([] { canonical_index({64}); }), ErrorKind::RangeError);
}

TEST(Machine, EveryCodeDecodes) {
  for (Nat code = 0; code < 20000; ++code) {
    std::vector<Nat> raw;
    for (Nat rest = code; rest != 0;) {
      auto [head, tail] = unpair(rest - 1);
      raw.push_back(head);
      rest = tail;
    }
    EXPECT_EQ(Program::decode(code).body.size(), raw.size());
    EXPECT_EQ(asm_::assemble(raw), code);
  }
}

TEST(Machine, ConstantZeroProgramHalts) {
  EXPECT_EQ(asm_::assemble({asm_::halt(1)}), kConstZero);
  for (Nat x : {0u, 1u, 17u, 999u}) {
    const Outcome o = run_program(kConstZero, x, 5);
    EXPECT_TRUE(o.halted);
    EXPECT_EQ(o.output, 0u);
  }
}

TEST(Machine, DivergeProgramNeverHalts) {
  const Nat explicit_diverge = asm_::assemble({asm_::diverge()});
  for (Nat budget : {0u, 1u, 100u, 10000u}) {
    EXPECT_FALSE(run_program(kDiverge, 3, budget).halted);
    EXPECT_FALSE(run_program(explicit_diverge, 3, budget).halted);
  }
}

TEST(Machine, HandWrittenCopyLoop) {
  // R1 := R0 by a loop: DECJZ r0 -> 3; INC r1; JMP 0; HALT r1. Longer loops overflow the code space.
  const Nat code = asm_::assemble({asm_::decjz(0, 3), asm_::inc(1), asm_::jmp(0), asm_::halt(1)});
  for (Nat x = 0; x < 20; ++x) {
    const Outcome o = run_program(code, x, 1000);
    ASSERT_TRUE(o.halted);
    EXPECT_EQ(o.output, x);
  }
  // 3 steps per round plus the final test and halt.
  EXPECT_FALSE(run_program(code, 5, 3 * 5 + 1).halted);
  EXPECT_TRUE(run_program(code, 5, 3 * 5 + 2).halted);
  EXPECT_EQ(kind_of([] {
              asm_::assemble({asm_::decjz(0, 4), asm_::inc(1), asm_::inc(1), asm_::jmp(0), asm_::halt(1)});
            }),
            ErrorKind::RangeError);
}

TEST(Machine, HaltingMonotoneInBudget) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 400; ++t) {
    const Nat e = rng() % 100000, x = rng() % 50, b = rng() % 200;
    const Outcome o = run_program(e, x, b);
    const Outcome later = run_program(e, x, b + 1);
    if (o.halted) {
      EXPECT_TRUE(later.halted);
      EXPECT_EQ(later.output, o.output);
    }
    EXPECT_EQ(run_program(e, x, b), o);
  }
}

TEST(Machine, ProgramRunsMatchesFreshRuns) {
  for (Nat e = 0; e < 300; ++e) {
    const ProgramRuns runs(e);
    for (Nat x = 0; x < 10; ++x) {
      for (Nat b : {3u, 10u, 40u}) EXPECT_EQ(runs.outcome(x, b), run_program(e, x, b));
    }
  }
}

TEST(WeAtStage, Examples) {
  for (Nat s : {0u, 5u, 50u}) EXPECT_TRUE(we_at_stage(kDiverge, s).empty());
  FiniteSet all;
  for (Nat x = 0; x < 40; ++x) all.push_back(x);
  EXPECT_EQ(we_at_stage(kIdentity, 40), all);
  EXPECT_EQ(we_at_stage(kConstZero, 40), all);
}

TEST(WeAtStage, MonotoneForRandomCodes) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const Nat e = rng() % 5000, s = rng() % 60;
    EXPECT_TRUE(is_subset(we_at_stage(e, s), we_at_stage(e, s + 1)));
  }
}

TEST(KSet, Examples) {
  for (Nat j = 0; j < 5; ++j) EXPECT_TRUE(k_set(j, 0).empty());
  for (Nat s : {10u, 100u, 400u}) EXPECT_TRUE(set_intersection(k_set(0, s), k_set(1, s)).empty());
  // phi_37(37) = 0 within 1 step; it enters at stage 38.
  EXPECT_TRUE(run_program(kConstZero, kConstZero, 1).halted);
  EXPECT_TRUE(contains(k_set(0, 100), kConstZero));
  EXPECT_FALSE(contains(k_set(0, kConstZero), kConstZero));
  // phi_7(7) = 7.
  EXPECT_TRUE(contains(k_set(7, 100), kIdentity));
}

TEST(Principal, Examples) {
  const OracleTable all = OracleTable::from_predicate(50, [](Nat) { return true; });
  for (Nat x = 0; x < 50; ++x) EXPECT_EQ(principal(all, x), x);
  const OracleTable evens = OracleTable::from_predicate(50, [](Nat x) { return x % 2 == 0; });
  EXPECT_EQ(principal(evens, 3), 6u);
  const OracleTable three = OracleTable::from_members(10, {1, 4, 7});
  EXPECT_EQ(kind_of([&] { principal(three, 3); }), ErrorKind::ExhaustedOracle);
  EXPECT_EQ(principal(FiniteSet{2, 5, 9}, 2), 9u);
  EXPECT_EQ(kind_of([] { principal(FiniteSet{2, 5, 9}, 3); }), ErrorKind::ExhaustedOracle);
}

TEST(OracleTable, PastBoundIsRejected) {
  const OracleTable t = OracleTable::from_string("0110", "t");
  EXPECT_TRUE(t.contains(1));
  EXPECT_FALSE(t.contains(3));
  EXPECT_EQ(kind_of([&] { t.contains(4); }), ErrorKind::ExhaustedOracle);
  EXPECT_EQ(kind_of([] { OracleTable::from_string("01x"); }), ErrorKind::SchemaError);
  EXPECT_EQ(t.rank(3), 2u);
  EXPECT_EQ(kind_of([&] { t.rank(5); }), ErrorKind::ExhaustedOracle);
}

TEST(OracleTable, RandomIsSeededAndHonoursExclusions) {
  std::mt19937_64 a(9), b(9);
  const OracleTable x = OracleTable::random(128, 0.5, a, {0, 1});
  const OracleTable y = OracleTable::random(128, 0.5, b, {0, 1});
  EXPECT_EQ(x, y);
  EXPECT_FALSE(x.contains(0));
  EXPECT_FALSE(x.contains(1));
}

TEST(EnumerableSet, ExplicitStages) {
  const EnumerableSet w = EnumerableSet::from_stages({{}, {2}, {2, 5}, {1, 2, 5}});
  EXPECT_EQ(w.at_stage(0), FiniteSet{});
  EXPECT_EQ(w.at_stage(2), (FiniteSet{2, 5}));
  EXPECT_EQ(w.at_stage(99), (FiniteSet{1, 2, 5}));
  EXPECT_EQ(w.entered_at(3), FiniteSet{1});
  EXPECT_EQ(*w.final_stage(), 3u);
  EXPECT_EQ(kind_of([] { EnumerableSet::from_stages({{1, 2}, {2}}); }), ErrorKind::RangeError);
}

TEST(EnumerableSet, ProgramMatchesWeAtStage) {
  for (Nat e = 0; e < 60; ++e) {
    const EnumerableSet w = EnumerableSet::program(e);
    FiniteSet previous;
    for (Nat s = 0; s < 40; ++s) {
      const FiniteSet now = w.at_stage(s);
      EXPECT_EQ(now, we_at_stage(e, s));
      EXPECT_TRUE(is_subset(previous, now));
      previous = now;
    }
  }
}

TEST(EnumerableSet, ComplementOfTable) {
  const EnumerableSet c = EnumerableSet::complement_of(OracleTable::from_string("1010"));
  EXPECT_EQ(c.at_stage(1), FiniteSet{});
  EXPECT_EQ(c.at_stage(2), FiniteSet{1});
  EXPECT_EQ(c.at_stage(4), (FiniteSet{1, 3}));
}

TEST(Segments, RoundTripRandomPrefixes) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 1000; ++t) {
    Bits p(1 + rng() % 16);
    for (auto&& b : p) b = rng() & 1;
    EXPECT_EQ(decode_segments(encode_segments(p)), p);
  }
}

TEST(Segments, RoundTripAllShortPrefixes) {
  for (Nat len = 1; len <= 12; ++len) {
    for (Nat w = 0; w < (Nat{1} << len); ++w) {
      Bits p(len);
      for (Nat k = 0; k < len; ++k) p[k] = (w >> k) & 1;
      EXPECT_EQ(decode_segments(encode_segments(p)), p);
    }
  }
}

TEST(Segments, SingleSegment) {
  const Bits p = bits_from_string("1101001");
  const Bits first3(p.begin(), p.begin() + 3);
  EXPECT_EQ(decode_segments({segment_code(first3)}), first3);
  EXPECT_EQ(segment_code(bits_from_string("101")), pair(3, 5));
}

TEST(Segments, AnyFiveCodesGiveFiveBits) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 300; ++t) {
    Bits p(5 + rng() % 20);
    for (auto&& b : p) b = rng() & 1;
    FiniteSet codes = encode_segments(p);
    std::shuffle(codes.begin(), codes.end(), rng);
    FiniteSet five(codes.begin(), codes.begin() + 5);
    std::sort(five.begin(), five.end());
    const Bits got = decode_segments(five);
    EXPECT_GE(got.size(), 5u);
    EXPECT_TRUE(std::equal(got.begin(), got.end(), p.begin()));
  }
}

TEST(Segments, InconsistentCodes) {
  const FiniteSet codes{segment_code(bits_from_string("10")), segment_code(bits_from_string("11"))};
  EXPECT_EQ(kind_of([&] { decode_segments(codes); }), ErrorKind::InconsistentSegments);
  EXPECT_EQ(kind_of([] { segment_of(pair(2, 7)); }), ErrorKind::InconsistentSegments);
}
