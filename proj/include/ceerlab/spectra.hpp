#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ceerlab/ceer.hpp"
#include "ceerlab/enumerable.hpp"
#include "ceerlab/error.hpp"
#include "ceerlab/finite_set.hpp"
#include "ceerlab/machine.hpp"
#include "ceerlab/oracle.hpp"
#include "ceerlab/pairing.hpp"
#include "ceerlab/reductions.hpp"

namespace ceerlab {

namespace detail {

/// B_i, falling back to B_0 past the supplied list (a finite basis encodes B_0 into all
/// remaining columns).
inline const OracleTable& base(const std::vector<OracleTable>& bases, Nat i) {
  if (bases.empty()) throw Error(ErrorKind::RangeError, "at least one base table is required");
  return i < bases.size() ? bases[i] : bases.front();
}

/// Whether the code lies in X, or nullopt when the tables cannot tell.
inline std::optional<bool> x_membership(const std::vector<OracleTable>& bases, Nat code) {
  auto [a, b] = unpair(code);
  const OracleTable& b0 = bases.front();
  if (a >= b0.bound()) return std::nullopt;
  if (!b0.contains(a)) return false;
  const OracleTable& column = base(bases, b0.rank(a));
  if (b >= column.bound()) return std::nullopt;
  return column.contains(b);
}

inline constexpr Nat kCompletenessScanCap = Nat{1} << 22;

}  // namespace detail

// ---------------------------------------------------------------------------
// Interleaved encoding: X = { <p_{B_0}(i), p_{B_i}(x)> }

/// The fragment of X below `limit`. Membership is certified for every code below
/// `completeness_bound`, which is at least `limit`.
struct EncodedSet {
  std::vector<OracleTable> bases;
  Nat limit = 0;
  Nat completeness_bound = 0;
  FiniteSet fragment;

  bool contains(Nat code) const {
    if (code < limit) return ceerlab::contains(fragment, code);
    if (code >= completeness_bound) {
      throw Error(ErrorKind::CompletenessBoundExceeded,
                  "code " + std::to_string(code) + " lies past the completeness bound " +
                      std::to_string(completeness_bound));
    }
    return *detail::x_membership(bases, code);
  }
};

/// Least code whose membership in X the tables cannot decide (capped).
inline Nat completeness_bound(const std::vector<OracleTable>& bases) {
  if (bases.empty()) throw Error(ErrorKind::RangeError, "at least one base table is required");
  for (Nat z = 0; z < detail::kCompletenessScanCap; ++z) {
    if (!detail::x_membership(bases, z)) return z;
  }
  return detail::kCompletenessScanCap;
}

inline EncodedSet build_X(const std::vector<OracleTable>& bases, Nat limit) {
  EncodedSet out{bases, limit, completeness_bound(bases), {}};
  if (limit > out.completeness_bound) {
    throw Error(ErrorKind::ExhaustedOracle, "tables decide X only below " + std::to_string(out.completeness_bound) +
                                                ", asked for codes below " + std::to_string(limit));
  }
  for (Nat z = 0; z < limit; ++z) {
    if (*detail::x_membership(bases, z)) out.fragment.push_back(z);
  }
  return out;
}

/// h_j(x) = <p_{B_0}(j), p_{B_j}(x)> on {0..domain}.
inline ReductionCandidate column_reduction(Nat j, const std::vector<OracleTable>& bases, Nat domain) {
  const Nat column = principal(detail::base(bases, 0), j);
  const OracleTable& bj = detail::base(bases, j);
  std::vector<Nat> values;
  for (Nat x = 0; x <= domain; ++x) values.push_back(pair(column, principal(bj, x)));
  return ReductionCandidate::builtin("h_" + std::to_string(j), std::move(values));
}

/// Largest x with h_j(x) decided below `bound`, if any.
inline std::optional<Nat> column_domain(Nat j, const std::vector<OracleTable>& bases, Nat bound) {
  const Nat column = principal(detail::base(bases, 0), j);
  const FiniteSet& members = detail::base(bases, j).members();
  std::optional<Nat> out;
  for (Nat x = 0; x < members.size(); ++x) {
    if (pair(column, members[x]) >= bound) break;
    out = x;
  }
  return out;
}

/// The relation generated by the complement of X: X-bar within {0..n} is one class.
inline FrozenCeer generated_complement(const EncodedSet& x, Nat n) {
  if (n >= x.completeness_bound) {
    throw Error(ErrorKind::CompletenessBoundExceeded,
                "support " + std::to_string(n) + " reaches the completeness bound " +
                    std::to_string(x.completeness_bound));
  }
  FiniteSet outside;
  for (Nat z = 0; z <= n; ++z) {
    if (!x.contains(z)) outside.push_back(z);
  }
  return FrozenCeer::from_classes(n, {outside});
}

// ---------------------------------------------------------------------------
// Mock splitting chain

namespace detail {

/// Every other element of a parent's enumeration order, starting at `half`.
class HalfSource final : public EnumerableSet::Source {
 public:
  HalfSource(EnumerableSet parent, Nat half) : parent_(std::move(parent)), half_(half) {}

  std::vector<Enumerated> enumeration(Nat stage) const override {
    std::vector<Enumerated> all = parent_.enumeration(stage);
    std::vector<Enumerated> out;
    for (std::size_t k = half_; k < all.size(); k += 2) out.push_back(all[k]);
    return out;
  }
  std::optional<Nat> final_stage() const override { return parent_.final_stage(); }
  std::string describe() const override {
    return std::string(half_ == 0 ? "odd" : "even") + "-position half of " + parent_.describe();
  }

 private:
  EnumerableSet parent_;
  Nat half_;
};

/// K_j = { x : phi_x(x) halts with output j }.
class DiagonalSource final : public EnumerableSet::Source {
 public:
  DiagonalSource(Nat j, std::shared_ptr<const DiagonalRuns> runs) : j_(j), runs_(std::move(runs)) {}

  std::vector<Enumerated> enumeration(Nat stage) const override {
    std::vector<Enumerated> out;
    for (Nat x = 0; x < stage; ++x) {
      auto hit = runs_->entry(x, stage);
      if (hit && hit->second == j_) out.push_back({hit->first, x});
    }
    std::sort(out.begin(), out.end(), [](const Enumerated& a, const Enumerated& b) {
      return a.stage != b.stage ? a.stage < b.stage : a.element < b.element;
    });
    return out;
  }
  std::optional<Nat> final_stage() const override { return std::nullopt; }
  std::string describe() const override { return "K_" + std::to_string(j_); }

 private:
  Nat j_;
  std::shared_ptr<const DiagonalRuns> runs_;
};

}  // namespace detail

/// K_j as an enumerable set. Sets sharing `runs` share the diagonal computations.
inline EnumerableSet k_enumerable(Nat j, std::shared_ptr<const DiagonalRuns> runs = nullptr) {
  if (!runs) runs = std::make_shared<const DiagonalRuns>();
  return EnumerableSet(std::make_shared<const detail::DiagonalSource>(j, std::move(runs)));
}

/// Alternating split: the 1st, 3rd, 5th... enumerated elements go to the first half.
/// A stand-in for a genuine splitting; only the partition of the parent is preserved.
inline std::pair<EnumerableSet, EnumerableSet> mock_split(const EnumerableSet& w) {
  return {EnumerableSet(std::make_shared<const detail::HalfSource>(w, 0)),
          EnumerableSet(std::make_shared<const detail::HalfSource>(w, 1))};
}

struct ChainApprox {
  /// levels[0] = W; levels[i+1] is the first half of levels[i].
  std::vector<EnumerableSet> levels;
  /// siblings[i] is the second half of levels[i], so levels[i+1] and siblings[i]
  /// partition levels[i].
  std::vector<EnumerableSet> siblings;
  Nat depth() const { return levels.size() - 1; }
};

inline ChainApprox chain(const EnumerableSet& w, Nat depth) {
  ChainApprox out{{w}, {}};
  for (Nat d = 0; d < depth; ++d) {
    auto [first, second] = mock_split(out.levels.back());
    out.levels.push_back(std::move(first));
    out.siblings.push_back(std::move(second));
  }
  return out;
}

// ---------------------------------------------------------------------------
// The pair without a basis

struct NobasisPair {
  StagedCeer r;
  StagedCeer s;
};

/// R: the cylinder of the chain levels. S: column 0 discrete; column i >= 1 carries
/// U_{i-1}, generated by K_0..K_{i-1} (Id once i-1 reaches the cut `k_cut`), and the
/// whole column collapses at stage i+1 when B says i is not a member.
inline NobasisPair build_nobasis_pair(const ChainApprox& levels, const OracleTable& b, Nat k_cut, Nat support) {
  std::vector<Nat> tops;  // tops[i]: largest x with <i,x> in the support
  for (Nat i = 0;; ++i) {
    auto top = max_second_component(i, support);
    if (!top) break;
    tops.push_back(*top);
  }
  std::vector<bool> collapsed(tops.size(), false);
  for (Nat i = 1; i < tops.size(); ++i) collapsed[i] = !b.contains(i);

  auto runs = std::make_shared<const DiagonalRuns>();
  auto rule = [tops, collapsed, k_cut, runs](Nat stage) {
    std::vector<std::pair<Nat, Nat>> out;
    const Nat width = tops.empty() ? 0 : tops.front();
    // K-membership of x <= width as of this stage, split into old and new entries.
    std::map<Nat, FiniteSet> now, fresh;
    for (Nat x = 0; x <= width && x < stage; ++x) {
      auto hit = runs->entry(x, stage);
      if (!hit || hit->second >= k_cut) continue;
      now[hit->second].push_back(x);
      if (hit->first == stage) fresh[hit->second].push_back(x);
    }
    for (Nat i = 1; i < tops.size(); ++i) {
      const Nat top = tops[i];
      auto code = [i](Nat x) { return pair(i, x); };
      if (collapsed[i] && stage >= i + 1) {
        if (stage == i + 1) {
          for (Nat x = 1; x <= top; ++x) out.emplace_back(code(0), code(x));
        }
        continue;
      }
      for (const auto& [j, entered] : fresh) {
        if (j >= i) continue;
        detail::tie_entries(elements_at_most(now[j], top), elements_at_most(entered, top), code, out);
      }
    }
    return out;
  };
  return {cylinder(levels.levels, support), StagedCeer(support, {std::move(rule)})};
}

/// The least stage by which every listed set has stopped changing, or
/// FreezeStageInsufficient.
inline void check_freeze_stage(const std::vector<EnumerableSet>& sets, Nat freeze_stage) {
  for (Nat i = 0; i < sets.size(); ++i) {
    auto last = sets[i].final_stage();
    if (!last || *last > freeze_stage) {
      throw Error(ErrorKind::FreezeStageInsufficient,
                  "level " + std::to_string(i) + " (" + sets[i].describe() + ") is not final at stage " +
                      std::to_string(freeze_stage));
    }
  }
}

/// p(<i,x>) = <k, r(<i,x>)>      if i < n
///            <0, <i,0>>         if i >= n and x in W_{f(i)}
///            <0, <i,x+1>>       otherwise,
/// on the codes {0..domain}. `r` must reduce the restriction of `r_source` to columns
/// below n into `u_target`, which is checked first.
inline ReductionCandidate nobasis_reduction_p(Nat n, Nat k, const ReductionCandidate& r,
                                              const FrozenCeer& r_source, const FrozenCeer& u_target,
                                              const ChainApprox& levels, Nat freeze_stage, Nat domain) {
  detail::check_support(domain, r_source.support());
  FiniteSet lower;
  for (Nat z = 0; z <= domain; ++z) {
    if (unpair(z).first < n) lower.push_back(z);
  }
  auto value = [&](Nat z) {
    if (z > r.domain_bound()) {
      throw Error(ErrorKind::InvalidComponent, "r is undefined at " + std::to_string(z));
    }
    const Nat v = r(z);
    if (v > u_target.support()) {
      throw Error(ErrorKind::InvalidComponent, "r(" + std::to_string(z) + ") = " + std::to_string(v) +
                                                   " lies outside the U support");
    }
    return v;
  };
  for (std::size_t a = 0; a < lower.size(); ++a) {
    for (std::size_t c = a + 1; c < lower.size(); ++c) {
      const Nat x = lower[a];
      const Nat y = lower[c];
      if (r_source.related(x, y) != u_target.related(value(x), value(y))) {
        throw Error(ErrorKind::InvalidComponent, "r fails on the pair (" + std::to_string(x) + "," +
                                                     std::to_string(y) + ")");
      }
    }
  }
  check_freeze_stage(levels.levels, freeze_stage);
  std::vector<FiniteSet> frozen;
  for (const auto& level : levels.levels) frozen.push_back(level.at_stage(freeze_stage));

  std::vector<Nat> values;
  for (Nat z = 0; z <= domain; ++z) {
    auto [i, x] = unpair(z);
    if (i < n) {
      values.push_back(pair(k, value(z)));
    } else if (i < frozen.size() && contains(frozen[i], x)) {
      values.push_back(pair(0, pair(i, 0)));
    } else {
      values.push_back(pair(0, pair(i, x + 1)));
    }
  }
  return ReductionCandidate::builtin("p", std::move(values));
}

// ---------------------------------------------------------------------------
// The family C_n

struct FamilyLevel {
  Nat n = 0;
  /// Only f_i with i < index_cut were applied.
  Nat index_cut = 0;
  std::vector<FiniteSet> members;
};

namespace detail {

inline void check_bases_avoid_zero_one(const std::vector<OracleTable>& bases) {
  for (Nat i = 0; i < bases.size(); ++i) {
    if (bases[i].contains(0) || bases[i].contains(1)) {
      throw Error(ErrorKind::BaseContainsZeroOrOne, "base table " + std::to_string(i) + " contains " +
                                                        (bases[i].contains(0) ? "0" : "1"));
    }
  }
}

}  // namespace detail

/// f_i(x) = <p_{B_0}(i), p_{B_i}(x)>.
inline Nat f_value(Nat i, const std::vector<OracleTable>& bases, Nat x) {
  return pair(principal(detail::base(bases, 0), i), principal(detail::base(bases, i), x));
}

/// <0, p_{B_1}(z)> with z the canonical index of X.
inline Nat corner(const FiniteSet& x, const OracleTable& b1) {
  if (!x.empty() && x.back() >= 64) {
    throw Error(ErrorKind::ExhaustedOracle, "canonical index of a set with maximum " + std::to_string(x.back()) +
                                                " exceeds every table");
  }
  return pair(0, principal(b1, canonical_index(x)));
}

inline Nat corner(const FiniteSet& x, const std::vector<OracleTable>& bases) {
  return corner(x, detail::base(bases, 1));
}

/// Whether z = f_i(x) for some i < index_cut and some x.
inline bool in_range_fi(Nat z, const std::vector<OracleTable>& bases, Nat index_cut) {
  auto [a, b] = unpair(z);
  const OracleTable& b0 = detail::base(bases, 0);
  if (!b0.contains(a)) return false;
  const Nat i = b0.rank(a);
  return i < index_cut && detail::base(bases, i).contains(b);
}

inline FamilyLevel family_next(const FamilyLevel& previous, const std::vector<OracleTable>& bases) {
  FamilyLevel out{previous.n + 1, previous.index_cut, {}};
  for (const FiniteSet& x : previous.members) {
    const Nat top = corner(x, bases);
    for (Nat i = 0; i < previous.index_cut; ++i) {
      std::vector<Nat> image;
      for (Nat v : x) image.push_back(f_value(i, bases, v));
      image.push_back(top);
      out.members.push_back(make_set(std::move(image)));
    }
  }
  return out;
}

/// C_0 .. C_top, with f_i restricted to i < index_cut.
inline std::vector<FamilyLevel> family_levels(Nat top, const std::vector<OracleTable>& bases, Nat index_cut) {
  if (bases.empty()) throw Error(ErrorKind::RangeError, "at least one base table is required");
  detail::check_bases_avoid_zero_one(bases);
  std::vector<FamilyLevel> out{{0, index_cut, {make_set({pair(0, 0), pair(0, 1)})}}};
  while (out.back().n < top) out.push_back(family_next(out.back(), bases));
  return out;
}

inline FamilyLevel family_level(Nat n, const std::vector<OracleTable>& bases, Nat index_cut) {
  return family_levels(n, bases, index_cut).back();
}

/// f_i as a table on {0..domain}.
inline ReductionCandidate fi_reduction(Nat i, const std::vector<OracleTable>& bases, Nat domain) {
  std::vector<Nat> values;
  for (Nat x = 0; x <= domain; ++x) values.push_back(f_value(i, bases, x));
  return ReductionCandidate::builtin("f_" + std::to_string(i), std::move(values));
}

struct BiPair {
  FrozenCeer r;
  FrozenCeer s;
};

/// R generated by the even levels, S by the odd ones. Members sharing an element end up
/// in one class.
inline BiPair build_bi_pair(const std::vector<FamilyLevel>& levels, Nat support) {
  Partition r(support), s(support);
  for (const FamilyLevel& level : levels) {
    Partition& target = level.n % 2 == 0 ? r : s;
    for (const FiniteSet& member : level.members) {
      for (Nat x : member) detail::check_support(x, support);
      for (Nat x : member) target.merge(member.front(), x);
    }
  }
  return {FrozenCeer(r), FrozenCeer(s)};
}

/// Every element of C_{L+1} and beyond exceeds min of the elements of C_L, so on
/// {0..min - 1} the computed levels settle both relations and all f_i-images.
inline Nat certified_domain(const std::vector<FamilyLevel>& levels) {
  if (levels.empty()) throw Error(ErrorKind::RangeError, "no levels were computed");
  Nat least = UINT64_MAX;
  for (const FiniteSet& member : levels.back().members) least = std::min(least, member.front());
  if (least == 0) throw Error(ErrorKind::RangeError, "the top level reaches 0; nothing is certified");
  return least - 1;
}

}  // namespace ceerlab
