#pragma once

// Property suites. Each recomputes what it checks through a separate, deliberately naive
// path (label arrays, direct scans of table bits, restricted-growth enumeration) and
// compares it with the library.

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ceerlab/ceer.hpp"
#include "ceerlab/dark.hpp"
#include "ceerlab/enumerable.hpp"
#include "ceerlab/machine.hpp"
#include "ceerlab/oracle.hpp"
#include "ceerlab/pairing.hpp"
#include "ceerlab/reductions.hpp"
#include "ceerlab/segments.hpp"
#include "ceerlab/spectra.hpp"
#include "ceerlab/transversals.hpp"

namespace ceerlab::suites {

struct SuiteResult {
  int number = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

using Rng = std::mt19937_64;

namespace oracle {

/// Cantor pairing by walking the diagonals.
inline std::vector<std::pair<Nat, Nat>> diagonal_walk(Nat count) {
  std::vector<std::pair<Nat, Nat>> out;
  for (Nat d = 0; out.size() < count; ++d) {
    for (Nat x = 0; x <= d && out.size() < count; ++x) out.emplace_back(d - x, x);
  }
  return out;
}

/// Members of a table below its bound, by scanning the bits.
inline std::vector<Nat> members(const OracleTable& t) {
  std::vector<Nat> out;
  for (Nat x = 0; x < t.bits().size(); ++x) {
    if (t.bits()[x]) out.push_back(x);
  }
  return out;
}

/// Canonical labels (least member) from arbitrary labels.
inline std::vector<Nat> least_labels(const std::vector<Nat>& labels) {
  std::map<Nat, Nat> first;
  std::vector<Nat> out(labels.size());
  for (Nat x = 0; x < labels.size(); ++x) {
    auto it = first.emplace(labels[x], x).first;
    out[x] = it->second;
  }
  return out;
}

/// Label array with naive relabelling merges.
struct Labels {
  std::vector<Nat> label;
  explicit Labels(Nat support) : label(support + 1) {
    for (Nat x = 0; x <= support; ++x) label[x] = x;
  }
  void merge(Nat x, Nat y) {
    const Nat a = label[x], b = label[y];
    if (a == b) return;
    const Nat keep = std::min(a, b), drop = std::max(a, b);
    for (Nat& l : label) {
      if (l == drop) l = keep;
    }
  }
  Nat size_of(Nat x) const { return std::count(label.begin(), label.end(), label[x]); }
  Nat least_of(Nat x) const {
    for (Nat y = 0; y < label.size(); ++y) {
      if (label[y] == label[x]) return y;
    }
    return x;
  }
};

/// All restricted growth strings of length n: every partition of {0..n-1} once.
inline void partitions(Nat n, const std::function<void(const std::vector<Nat>&)>& visit) {
  std::vector<Nat> rgs(n, 0);
  std::function<void(Nat, Nat)> go = [&](Nat pos, Nat max_label) {
    if (pos == n) {
      visit(rgs);
      return;
    }
    for (Nat v = 0; v <= max_label + 1; ++v) {
      if (pos == 0 && v > 0) break;
      rgs[pos] = v;
      go(pos + 1, std::max(max_label, v));
    }
  };
  if (n == 0) return;
  go(0, 0);
}

inline Nat bell(Nat n) {
  std::vector<std::vector<Nat>> tri{{1}};
  for (Nat i = 1; i <= n; ++i) {
    std::vector<Nat> row{tri.back().back()};
    for (Nat v : tri.back()) row.push_back(row.back() + v);
    tri.push_back(row);
  }
  return tri[n].front();
}

inline Nat distinct(const std::vector<Nat>& labels) {
  return std::set<Nat>(labels.begin(), labels.end()).size();
}

/// Strong-array blocks by the set recursion.
inline std::vector<std::vector<Nat>> strong_blocks(Nat count) {
  std::vector<std::vector<Nat>> out{{0}};
  while (out.size() < count) {
    const Nat m = out.back().back();
    std::vector<Nat> next;
    for (Nat x = m + 1; x <= 3 * (m + 1); ++x) next.push_back(x);
    out.push_back(next);
  }
  return out;
}

}  // namespace oracle

namespace detail {

inline std::string join(const std::vector<std::string>& parts, const std::string& sep = "; ") {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? sep : "") + parts[k];
  return out;
}

inline std::vector<OracleTable> random_bases(Rng& rng, Nat count, Nat bound, const FiniteSet& excluded) {
  std::vector<OracleTable> out;
  for (Nat i = 0; i < count; ++i) {
    out.push_back(OracleTable::random(bound, 0.5, rng, excluded, "B" + std::to_string(i)));
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline constexpr Nat kC1Ceers = 200;
inline constexpr Nat kC1Support = 12;

/// Tree membership agrees with partial transversality on every string of length <= 12.
inline SuiteResult tree_transversal_equivalence(Nat seed) {
  Rng rng(seed);
  Nat discrepancies = 0, strings = 0;
  std::string first;
  for (Nat c = 0; c < kC1Ceers; ++c) {
    std::uniform_int_distribution<Nat> width(1, kC1Support + 1);
    std::uniform_int_distribution<Nat> pick(0, width(rng) - 1);
    std::vector<Nat> labels(kC1Support + 1);
    for (Nat& l : labels) l = pick(rng);
    const FrozenCeer r = FrozenCeer::from_labels(labels);
    for (Nat len = 0; len <= kC1Support; ++len) {
      for (Nat mask = 0; mask < (Nat{1} << len); ++mask) {
        Bits sigma(len);
        std::set<Nat> seen;
        bool oracle = true;
        for (Nat x = 0; x < len; ++x) {
          sigma[x] = (mask >> x) & 1u;
          if (sigma[x] && !seen.insert(labels[x]).second) oracle = false;
        }
        ++strings;
        const bool node = tr_node(r, sigma);
        const bool transversal = is_partial_transversal(selected(sigma), r, len);
        if (node != oracle || transversal != oracle) {
          if (discrepancies++ == 0) first = "ceer " + std::to_string(c) + " string " + bits_to_string(sigma);
        }
      }
    }
  }
  return {1, "tree-transversal equivalence", discrepancies == 0,
          std::to_string(strings) + " strings over " + std::to_string(kC1Ceers) + " ceers, " +
              std::to_string(discrepancies) + " discrepancies" + (first.empty() ? "" : " (first: " + first + ")")};
}

// ---------------------------------------------------------------------------

inline constexpr Nat kC2MaxElements = 8;
inline constexpr Nat kC2PairBudget = 10000;

/// greedy succeeds <=> brute force finds a witness <=> c_R <= c_S; every table verifies.
inline SuiteResult greedy_completeness(Nat seed) {
  Rng rng(seed);
  Nat checked = 0, failures = 0;
  std::vector<std::string> notes;
  std::string first;
  auto check = [&](const std::vector<Nat>& rl, const std::vector<Nat>& sl) {
    const FrozenCeer r(oracle::least_labels(rl));
    const FrozenCeer s(oracle::least_labels(sl));
    const Nat n = rl.size() - 1;
    const bool expected = oracle::distinct(rl) <= oracle::distinct(sl);
    bool greedy_ok = false, tables_ok = true;
    try {
      const ReductionCandidate g = greedy_reduction(r, s, n);
      greedy_ok = true;
      tables_ok = verify_frozen(r, s, g).kind == Verdict::Kind::CertifiedPass;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::FreshClassExhausted) throw;
    }
    const auto witness = brute_force_exists(r, s);
    if (witness) tables_ok = tables_ok && verify_frozen(r, s, *witness).kind == Verdict::Kind::CertifiedPass;
    ++checked;
    if (greedy_ok != expected || witness.has_value() != expected || !tables_ok) {
      if (failures++ == 0) first = "support " + std::to_string(n);
    }
  };
  for (Nat size = 1; size <= kC2MaxElements; ++size) {
    const Nat b = oracle::bell(size);
    if (b * b <= kC2PairBudget) {
      std::vector<std::vector<Nat>> all;
      oracle::partitions(size, [&](const std::vector<Nat>& p) { all.push_back(p); });
      for (const auto& rl : all) {
        for (const auto& sl : all) check(rl, sl);
      }
      notes.push_back(std::to_string(size) + " elements: " + std::to_string(b * b) + " pairs exhaustive");
    } else {
      std::vector<std::vector<Nat>> all;
      oracle::partitions(size, [&](const std::vector<Nat>& p) { all.push_back(p); });
      std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
      for (Nat k = 0; k < kC2PairBudget; ++k) check(all[pick(rng)], all[pick(rng)]);
      notes.push_back(std::to_string(size) + " elements: " + std::to_string(kC2PairBudget) + " of " +
                      std::to_string(b * b) + " pairs sampled");
    }
  }
  return {2, "greedy-reduction completeness", failures == 0,
          std::to_string(checked) + " pairs, " + std::to_string(failures) + " failures" +
              (first.empty() ? "" : " (first at " + first + ")") + "; " + detail::join(notes)};
}

// ---------------------------------------------------------------------------

inline constexpr Nat kC3Support = 256;
inline constexpr Nat kC3Stages = 5000;
inline constexpr Nat kC3Requirements = 16;
inline constexpr Nat kC3SampleEvery = 100;  // 50 sampled stages, the last being final
inline constexpr Nat kC3MaxK = 85;
inline constexpr Nat kC3Blocks = 5;

/// Dark construction audit, recomputed from the action log with a label array.
inline SuiteResult dark_audit(Nat) {
  DarkConstruction d(kC3Support, kC3Requirements);
  oracle::Labels labels(kC3Support);
  std::map<Nat, Nat> acted;
  std::vector<std::string> failures;
  Nat collapses = 0, sampled = 0;
  auto window_check = [&](Nat stage) {
    Nat singletons = 0, worst = 0;
    bool ok = true;
    for (Nat x = 0; x <= 3 * kC3MaxK; ++x) {
      if (labels.size_of(x) == 1) ++singletons;
      if (x % 3 == 0 && singletons < x / 3) {
        ok = false;
        worst = x / 3;
        break;
      }
    }
    if (!ok) failures.push_back("(c) window for k=" + std::to_string(worst) + " at stage " + std::to_string(stage));
  };
  while (d.stage() < kC3Stages) {
    d.step();
    const StageRecord& r = d.trace().back();
    if (r.action != ActionKind::None) {
      if (!acted.emplace(r.requirement, r.stage).second) {
        failures.push_back("(a) P_" + std::to_string(r.requirement) + " acted twice");
      }
      auto [x, y] = *r.pair;
      const Nat least = std::min(labels.least_of(x), labels.least_of(y));
      if (least < 3 * r.requirement) {
        failures.push_back("(b) stage " + std::to_string(r.stage) + " min-class " + std::to_string(least));
      }
      if (r.action == ActionKind::Collapse) {
        labels.merge(x, y);
        ++collapses;
      }
    }
    if (d.stage() % kC3SampleEvery == 0) {
      window_check(d.stage());
      ++sampled;
    }
  }
  // The library's own audit must agree.
  const AuditReport report = audit(d);
  if (!report.passed()) failures.push_back("library audit failed");
  for (Nat x = 0; x <= kC3Support; ++x) {
    if (d.relation().current().class_size(x) != labels.size_of(x)) {
      failures.push_back("relation disagrees with the replayed log at " + std::to_string(x));
      break;
    }
  }
  const FiniteSet a = candidate_A(d, kC3Blocks - 1);
  for (const auto& block : oracle::strong_blocks(kC3Blocks)) {
    bool hit = false;
    for (Nat x : block) hit = hit || (contains(a, x) && labels.size_of(x) == 1);
    if (!hit) failures.push_back("(d) block starting at " + std::to_string(block.front()) + " missed");
  }
  return {3, "dark-construction audit", failures.empty(),
          std::to_string(acted.size()) + " requirements acted, " + std::to_string(collapses) + " collapses, " +
              std::to_string(sampled) + " sampled stages" + (failures.empty() ? "" : "; " + detail::join(failures))};
}

// ---------------------------------------------------------------------------

inline SuiteResult strong_array_values(Nat) {
  const std::vector<std::vector<Nat>> expected{{0}, {1, 2, 3}, {4, 5, 6, 7, 8, 9, 10, 11, 12}};
  const auto recursion = oracle::strong_blocks(kC3Blocks);
  std::vector<std::string> failures;
  for (Nat i = 0; i < kC3Blocks; ++i) {
    const FiniteSet got = strong_array_block(i);
    if (got != recursion[i]) failures.push_back("block " + std::to_string(i) + " differs from the recursion");
    if (i < expected.size() && got != expected[i]) failures.push_back("block " + std::to_string(i) + " differs");
  }
  return {4, "strong-array values", failures.empty(),
          failures.empty() ? "blocks 0..4 match" : detail::join(failures)};
}

// ---------------------------------------------------------------------------

inline constexpr Nat kC5Trials = 6;
inline constexpr Nat kC5Bound = 128;
inline constexpr Nat kC5Columns = 4;

/// h_j reduces Id into the relation generated by X-bar, up to the completeness bound.
inline SuiteResult interleaved_encoding(Nat seed) {
  Rng rng(seed);
  std::vector<std::string> failures;
  Nat verdicts = 0;
  for (Nat trial = 0; trial < kC5Trials; ++trial) {
    const auto bases = detail::random_bases(rng, kC5Columns, kC5Bound, {});
    const EncodedSet x = build_X(bases, completeness_bound(bases));
    // Independent fragment: every <p_0(i), p_i(y)> below the bound.
    const auto b0 = oracle::members(bases[0]);
    std::set<Nat> expected;
    for (Nat i = 0; i < b0.size(); ++i) {
      const auto bi = oracle::members(bases[i < bases.size() ? i : 0]);
      for (Nat v : bi) {
        const Nat code = (b0[i] + v) * (b0[i] + v + 1) / 2 + v;
        if (code < x.limit) expected.insert(code);
      }
    }
    if (FiniteSet(expected.begin(), expected.end()) != x.fragment) failures.push_back("fragment differs");
    for (Nat support : {Nat{63}, Nat{1023}, x.completeness_bound - 1}) {
      const FrozenCeer s = generated_complement(x, support);
      for (Nat j = 0; j < kC5Columns; ++j) {
        auto domain = column_domain(j, bases, support + 1);
        if (!domain) continue;
        const ReductionCandidate h = column_reduction(j, bases, *domain);
        const auto bj = oracle::members(bases[j]);
        for (Nat v = 0; v <= *domain; ++v) {
          if (h(v) != (b0[j] + bj[v]) * (b0[j] + bj[v] + 1) / 2 + bj[v]) failures.push_back("h value differs");
        }
        ++verdicts;
        if (verify_frozen(id_ceer(*domain), s, h).kind != Verdict::Kind::CertifiedPass) {
          failures.push_back("h_" + std::to_string(j) + " fails on support " + std::to_string(support));
        }
      }
    }
  }
  return {5, "interleaved encoding", failures.empty(),
          std::to_string(verdicts) + " certified verdicts over " + std::to_string(kC5Trials) + " table families" +
              (failures.empty() ? "" : "; " + detail::join(failures))};
}

// ---------------------------------------------------------------------------

inline constexpr Nat kC6MaxLength = 12;

/// Any m codes of initial segments decode to a prefix of length >= m.
inline SuiteResult segment_coding(Nat) {
  Nat subsets = 0, failures = 0;
  std::string first;
  for (Nat len = 0; len <= kC6MaxLength; ++len) {
    for (Nat word = 0; word < (Nat{1} << len); ++word) {
      Bits prefix(len);
      for (Nat k = 0; k < len; ++k) prefix[k] = (word >> k) & 1u;
      const FiniteSet codes = encode_segments(prefix);
      for (Nat mask = 1; mask < (Nat{1} << codes.size()); ++mask) {
        FiniteSet subset;
        for (Nat k = 0; k < codes.size(); ++k) {
          if ((mask >> k) & 1u) subset.push_back(codes[k]);
        }
        const Bits got = decode_segments(subset);
        ++subsets;
        const bool ok = got.size() >= subset.size() && got.size() <= prefix.size() &&
                        std::equal(got.begin(), got.end(), prefix.begin());
        if (!ok && failures++ == 0) first = bits_to_string(prefix);
      }
    }
  }
  return {6, "segment coding", failures == 0,
          std::to_string(subsets) + " subsets decoded, " + std::to_string(failures) + " failures" +
              (first.empty() ? "" : " (first prefix " + first + ")")};
}

// ---------------------------------------------------------------------------

inline constexpr Nat kC7Levels = 5;
inline constexpr Nat kC7IndexCut = 4;
inline constexpr Nat kC7Bound = 128;

/// Family sizes, disjointness, corner exclusion and f_i in both directions.
inline SuiteResult bi_family(Nat seed) {
  Rng rng(seed);
  const auto bases = detail::random_bases(rng, kC7IndexCut, kC7Bound, {0, 1});
  std::vector<std::string> failures, notes;

  std::vector<FamilyLevel> levels;
  try {
    levels = family_levels(0, bases, kC7IndexCut);
    while (levels.back().n < kC7Levels) levels.push_back(family_next(levels.back(), bases));
  } catch (const Error& e) {
    failures.push_back("level " + std::to_string(levels.size()) + " not computable: " + e.what());
  }
  notes.push_back("levels 0.." + std::to_string(levels.size() - 1) + " computed");

  for (const FamilyLevel& level : levels) {
    std::set<Nat> sizes;
    for (const auto& m : level.members) sizes.insert(m.size());
    for (Nat size : sizes) {
      if (size != level.n + 1) {
        failures.push_back("level " + std::to_string(level.n) + " has members of size " + std::to_string(size) +
                           ", expected " + std::to_string(level.n + 1));
      }
    }
  }

  std::vector<std::pair<Nat, const FiniteSet*>> all;
  for (const FamilyLevel& level : levels) {
    for (const auto& m : level.members) all.emplace_back(level.n, &m);
  }
  Nat overlaps = 0;
  std::string first_overlap;
  for (std::size_t a = 0; a < all.size(); ++a) {
    for (std::size_t b = a + 1; b < all.size(); ++b) {
      const auto common = set_intersection(*all[a].second, *all[b].second);
      if (!common.empty() && overlaps++ == 0) {
        first_overlap = "members in levels " + std::to_string(all[a].first) + " and " +
                        std::to_string(all[b].first) + " share " + std::to_string(common.front());
      }
    }
  }
  if (overlaps) failures.push_back(std::to_string(overlaps) + " overlapping member pairs (" + first_overlap + ")");

  Nat corners = 0;
  for (std::size_t l = 0; l + 1 < levels.size(); ++l) {
    for (const auto& m : levels[l].members) {
      const Nat c = corner(m, bases);
      ++corners;
      // Independently: c = <0, w> is f_i(x) only if 0 is in B_0, which the bases exclude.
      const bool hit = in_range_fi(c, bases, kC7IndexCut);
      if (hit || unpair(c).first != 0) failures.push_back("corner " + std::to_string(c) + " lies in some f_i range");
    }
  }
  notes.push_back(std::to_string(corners) + " corners checked");

  if (levels.size() >= 2) {
    const Nat domain = certified_domain(levels);
    Nat top = 0;
    for (const auto& [n, m] : all) top = std::max(top, m->back());
    for (Nat i = 0; i < kC7IndexCut; ++i) {
      for (Nat x = 0; x <= domain; ++x) top = std::max(top, f_value(i, bases, x));
    }
    const BiPair pair = build_bi_pair(levels, top);
    for (Nat i = 0; i < kC7IndexCut; ++i) {
      const ReductionCandidate f = fi_reduction(i, bases, domain);
      const bool forward = verify_frozen(pair.r.restrict_to(domain), pair.s, f).kind == Verdict::Kind::CertifiedPass;
      const bool backward = verify_frozen(pair.s.restrict_to(domain), pair.r, f).kind == Verdict::Kind::CertifiedPass;
      if (!forward || !backward) failures.push_back("f_" + std::to_string(i) + " not certified on {0.." + std::to_string(domain) + "}");
    }
    notes.push_back("f_i checked on {0.." + std::to_string(domain) + "}");
  }
  return {7, "bi-spectra family", failures.empty(), detail::join(notes) + (failures.empty() ? "" : "; " + detail::join(failures))};
}

// ---------------------------------------------------------------------------

inline constexpr Nat kC8Component = 20;
inline constexpr Nat kC8Stages = 120;
inline constexpr Nat kC8KCut = 8;

/// Columns checked against K_j computed directly by running phi_x(x).
inline SuiteResult nobasis_pair(Nat) {
  std::vector<std::string> failures;
  const Nat support = pair(kC8Component, kC8Component);
  // W enumerates 0..39, x entering at stage x + 1.
  std::vector<Enumerated> entries;
  for (Nat x = 0; x < 40; ++x) entries.push_back({x + 1, x});
  const ChainApprox levels = chain(EnumerableSet::from_entries(entries), 3);
  // B omits every multiple of 3 and 5 above 0.
  const OracleTable b = OracleTable::from_predicate(64, [](Nat i) { return i == 0 || (i % 3 != 0 && i % 5 != 0); }, "B");
  NobasisPair built = build_nobasis_pair(levels, b, kC8KCut, support);
  built.r.advance_to(kC8Stages);
  built.s.advance_to(kC8Stages);

  Nat checks = 0;
  for (Nat stage : {Nat{0}, Nat{5}, Nat{17}, Nat{40}, kC8Stages}) {
    const FrozenCeer r = built.r.freeze(support, stage);
    const FrozenCeer s = built.s.freeze(support, stage);
    // Level i at this stage: the W-entries (in order) whose position is a multiple of 2^i.
    std::vector<std::set<Nat>> level(levels.levels.size());
    for (Nat i = 0; i < level.size(); ++i) {
      for (Nat x = 0; x < 40; ++x) {
        if (x + 1 <= stage && x % (Nat{1} << i) == 0) level[i].insert(x);
      }
    }
    // K-membership of each relevant x at this stage.
    std::map<Nat, Nat> output;
    for (Nat x = 0; x <= kC8Component && x < stage; ++x) {
      Execution run(std::make_shared<const Program>(Program::decode(x)), x);
      run.advance(stage);
      if (run.halted() && std::max(x + 1, run.steps()) <= stage) output[x] = run.output();
    }
    for (Nat i = 0; i <= kC8Component; ++i) {
      for (Nat j = 0; j <= kC8Component; ++j) {
        for (Nat x = 0; x <= kC8Component; ++x) {
          for (Nat y = 0; y <= kC8Component; ++y) {
            if (i == j && x == y) continue;
            const Nat u = pair(i, x), v = pair(j, y);
            ++checks;
            bool expect_r = false, expect_s = false;
            if (i == j) {
              expect_r = i < level.size() && level[i].count(x) && level[i].count(y);
              if (i > 0) {
                const bool collapsed = !b.contains(i) && stage >= i + 1;
                const bool same_k = output.count(x) && output.count(y) && output[x] == output[y] &&
                                    output[x] < std::min(i, kC8KCut);
                expect_s = collapsed || same_k;
              }
            }
            if (r.related(u, v) != expect_r || s.related(u, v) != expect_s) {
              if (failures.size() < 4) {
                failures.push_back("stage " + std::to_string(stage) + " <" + std::to_string(i) + "," +
                                   std::to_string(x) + "> vs <" + std::to_string(j) + "," + std::to_string(y) + ">");
              }
            }
          }
        }
      }
    }
  }

  // p end to end on a tiny instance: columns 0 and 1 of R each hold two classes.
  const ChainApprox tiny = chain(EnumerableSet::constant({0, 1, 2}), 3);
  const Nat r_support = 9, s_support = 200;
  NobasisPair small = build_nobasis_pair(tiny, b, kC8KCut, s_support);
  small.s.advance_to(kC8Stages);
  const FrozenCeer rf = small.r.freeze(r_support, 0);
  const FrozenCeer sf = small.s.freeze(s_support, kC8Stages);
  const Nat n = 2;
  FiniteSet lower;
  for (Nat z = 0; z <= r_support; ++z) {
    if (unpair(z).first < n) lower.push_back(z);
  }
  std::vector<Nat> lower_labels;
  for (Nat z : lower) lower_labels.push_back(rf.representative(z));
  const FrozenCeer lower_r(oracle::least_labels(lower_labels));
  std::string p_note = "no usable column";
  for (Nat k = 1; max_second_component(k, s_support); ++k) {
    if (!b.contains(k)) continue;
    const Nat top = *max_second_component(k, s_support);
    std::vector<Nat> u_labels;
    for (Nat y = 0; y <= top; ++y) u_labels.push_back(unpair(sf.representative(pair(k, y))).second);
    const FrozenCeer u(oracle::least_labels(u_labels));
    std::optional<ReductionCandidate> g;
    try {
      g = brute_force_exists(lower_r, u);
    } catch (const Error&) {
      continue;
    }
    if (!g) continue;
    std::vector<Nat> table(r_support + 1, 0);
    for (Nat idx = 0; idx < lower.size(); ++idx) table[lower[idx]] = (*g)(idx);
    const ReductionCandidate r = ReductionCandidate::table(table);
    const ReductionCandidate p = nobasis_reduction_p(n, k, r, rf, u, tiny, 0, r_support);
    const Verdict v = verify_frozen(rf, sf, p);
    if (v.kind != Verdict::Kind::CertifiedPass) failures.push_back("p fails verification");
    p_note = "p certified through column " + std::to_string(k);
    break;
  }
  if (p_note == "no usable column") failures.push_back(p_note);
  return {8, "no-basis pair", failures.empty(),
          std::to_string(checks) + " pair checks; " + p_note + (failures.empty() ? "" : "; " + detail::join(failures))};
}

// ---------------------------------------------------------------------------

inline constexpr Nat kC9PairRange = 10000;
inline constexpr Nat kC9MaxJ = 64;
inline constexpr Nat kC9KStage = 10000;

inline SuiteResult substrate_hygiene(Nat) {
  std::vector<std::string> failures;
  const auto walk = oracle::diagonal_walk(kC9PairRange);
  for (Nat z = 0; z < kC9PairRange; ++z) {
    auto [i, x] = unpair(z);
    if (std::pair{i, x} != walk[z] || pair(i, x) != z) {
      failures.push_back("pairing differs at " + std::to_string(z));
      break;
    }
  }
  // K_j for j <= 64 at stage 10^4 from one shared memo of phi_x(x).
  auto runs = std::make_shared<const DiagonalRuns>();
  std::vector<FiniteSet> ks;
  for (Nat j = 0; j <= kC9MaxJ; ++j) ks.push_back(k_enumerable(j, runs).at_stage(kC9KStage));
  std::vector<Nat> owner(kC9KStage, kC9MaxJ + 1);
  Nat members = 0;
  for (Nat j = 0; j <= kC9MaxJ; ++j) {
    for (Nat x : ks[j]) {
      ++members;
      if (owner[x] != kC9MaxJ + 1) {
        failures.push_back(std::to_string(x) + " lies in K_" + std::to_string(owner[x]) + " and K_" + std::to_string(j));
      }
      owner[x] = j;
    }
  }
  // The shared memo against k_set's fresh runs at a smaller stage.
  for (Nat j = 0; j <= kC9MaxJ; ++j) {
    if (k_set(j, 1000) != k_enumerable(j, runs).at_stage(1000)) failures.push_back("K_" + std::to_string(j) + " differs");
  }
  // Monotone enumerations.
  std::vector<EnumerableSet> sets;
  for (Nat e = 0; e < 40; ++e) sets.push_back(EnumerableSet::program(e));
  for (Nat j = 0; j < 4; ++j) sets.push_back(k_enumerable(j, runs));
  auto [odd, even] = mock_split(EnumerableSet::program(7));
  sets.push_back(odd);
  sets.push_back(even);
  for (const auto& set : sets) {
    FiniteSet previous;
    for (Nat s = 0; s <= 300; ++s) {
      const FiniteSet now = set.at_stage(s);
      if (!is_subset(previous, now)) {
        failures.push_back(set.describe() + " shrinks at stage " + std::to_string(s));
        break;
      }
      previous = now;
    }
  }
  for (Nat e = 0; e < 40; ++e) {
    if (EnumerableSet::program(e).at_stage(150) != we_at_stage(e, 150)) failures.push_back("W_" + std::to_string(e) + " differs");
  }
  return {9, "substrate hygiene", failures.empty(),
          std::to_string(members) + " K-members below " + std::to_string(kC9KStage) + ", " +
              std::to_string(sets.size()) + " enumerations probed" + (failures.empty() ? "" : "; " + detail::join(failures))};
}

// ---------------------------------------------------------------------------

struct Suite {
  int number;
  std::string slug;
  std::function<SuiteResult(Nat)> run;
};

inline const std::vector<Suite>& all() {
  static const std::vector<Suite> suites{
      {1, "tree-transversal", tree_transversal_equivalence},
      {2, "greedy-completeness", greedy_completeness},
      {3, "dark-audit", dark_audit},
      {4, "strong-array", strong_array_values},
      {5, "interleaved-encoding", interleaved_encoding},
      {6, "segment-coding", segment_coding},
      {7, "bi-family", bi_family},
      {8, "nobasis-pair", nobasis_pair},
      {9, "substrate-hygiene", substrate_hygiene},
  };
  return suites;
}

inline std::string line(const SuiteResult& r) {
  return std::string(r.passed ? "PASS" : "FAIL") + " criterion " + std::to_string(r.number) + " [" + r.name +
         "]: " + r.detail;
}

}  // namespace ceerlab::suites
