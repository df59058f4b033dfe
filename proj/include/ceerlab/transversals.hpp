#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ceerlab/ceer.hpp"
#include "ceerlab/error.hpp"
#include "ceerlab/finite_set.hpp"
#include "ceerlab/segments.hpp"

namespace ceerlab {

/// No two distinct members of A are related at stage s.
template <StageRelation R>
bool is_partial_transversal(const FiniteSet& set, const R& relation, Nat stage) {
  for (Nat x : set) detail::check_support(x, relation.support());
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      if (relation.related(set[i], set[j], stage)) return false;
    }
  }
  return true;
}

/// Positions selected by a 0/1 string.
inline FiniteSet selected(const Bits& sigma) {
  FiniteSet out;
  for (Nat x = 0; x < sigma.size(); ++x) {
    if (sigma[x]) out.push_back(x);
  }
  return out;
}

namespace detail {

template <StageRelation R>
void check_string_fits(const R& relation, const Bits& sigma) {
  if (!sigma.empty() && sigma.size() - 1 > relation.support()) {
    throw Error(ErrorKind::SupportExceeded, "string of length " + std::to_string(sigma.size()) +
                                                " runs past support {0.." +
                                                std::to_string(relation.support()) + "}");
  }
}

}  // namespace detail

/// Node of T_R: distinct selected positions are unrelated at stage |sigma|.
template <StageRelation R>
bool tr_node(const R& relation, const Bits& sigma) {
  detail::check_string_fits(relation, sigma);
  const Nat stage = sigma.size();
  for (Nat x = 0; x < sigma.size(); ++x) {
    if (!sigma[x]) continue;
    for (Nat y = x + 1; y < sigma.size(); ++y) {
      if (sigma[y] && relation.related(x, y, stage)) return false;
    }
  }
  return true;
}

/// A block of the strong array is the interval [low, high].
struct Block {
  Nat low = 0;
  Nat high = 0;
  FiniteSet members() const {
    FiniteSet out;
    for (Nat x = low; x <= high; ++x) out.push_back(x);
    return out;
  }
  bool operator==(const Block&) const = default;
};

/// D_{f(0)} = {0}; D_{f(i+1)} = { x : max D_{f(i)} < x <= 3(max D_{f(i)} + 1) }.
class StrongArray {
 public:
  Block block(Nat i) const {
    Block b{0, 0};
    for (Nat k = 0; k < i; ++k) {
      if (b.high > (UINT64_MAX - 3) / 3) throw Error(ErrorKind::RangeError, "strong array block overflows");
      b = {b.high + 1, 3 * (b.high + 1)};
    }
    return b;
  }

  /// Blocks lying entirely inside {0..bound-1}.
  std::vector<Block> blocks_below(Nat bound) const {
    std::vector<Block> out;
    for (Block b{0, 0}; b.high < bound; b = {b.high + 1, 3 * (b.high + 1)}) out.push_back(b);
    return out;
  }
};

inline FiniteSet strong_array_block(Nat i) { return StrongArray{}.block(i).members(); }

/// tr_node plus: every block entirely inside the domain of sigma has a selected position.
/// Blocks reaching past |sigma| are not yet required.
template <StageRelation R>
bool pruned_node(const R& relation, const StrongArray& blocks, const Bits& sigma) {
  if (!tr_node(relation, sigma)) return false;
  for (const Block& b : blocks.blocks_below(sigma.size())) {
    bool hit = false;
    for (Nat x = b.low; x <= b.high && !hit; ++x) hit = sigma[x];
    if (!hit) return false;
  }
  return true;
}

inline constexpr std::size_t kDefaultLevelCap = std::size_t{1} << 20;

/// The tree of partial transversals of a relation, optionally pruned by the strong array.
/// Stage-s snapshots are taken once so that node tests are cheap.
class TransversalTree {
 public:
  TransversalTree(const FrozenCeer& relation, bool pruned = false)
      : support_(relation.support()), pruned_(pruned) {
    snapshots_.push_back(relation);
    frozen_ = true;
  }

  /// Staged base: snapshots at stages 0..max_depth.
  TransversalTree(const StagedCeer& relation, Nat max_depth, bool pruned = false)
      : support_(relation.support()), pruned_(pruned) {
    for (Nat s = 0; s <= max_depth; ++s) snapshots_.push_back(relation.freeze(relation.support(), s));
  }

  Nat support() const { return support_; }
  bool pruned() const { return pruned_; }

  bool member(const Bits& sigma) const {
    const FrozenCeer& at = snapshot(sigma.size());
    return pruned_ ? pruned_node(at, blocks_, sigma) : tr_node(at, sigma);
  }

  /// All member nodes of length d, lexicographic with 0 before 1.
  std::vector<Bits> level(Nat depth, std::size_t cap = kDefaultLevelCap) const {
    check_depth(depth);
    std::vector<Bits> out;
    Bits current;
    grow(current, depth, cap, out);
    return out;
  }

  std::optional<Bits> leftmost(Nat depth) const {
    check_depth(depth);
    Bits current;
    if (find_leftmost(current, depth)) return current;
    return std::nullopt;
  }

  /// Whether sigma has a member extension of length `depth` (bounded lookahead only).
  bool extendible_to(const Bits& sigma, Nat depth) const {
    check_depth(depth);
    if (!member(sigma)) return false;
    Bits current = sigma;
    return find_leftmost(current, depth);
  }

 private:
  const FrozenCeer& snapshot(Nat stage) const {
    if (frozen_) return snapshots_.front();
    if (stage >= snapshots_.size()) {
      throw Error(ErrorKind::StageNotReached,
                  "tree snapshots stop at stage " + std::to_string(snapshots_.size() - 1));
    }
    return snapshots_[stage];
  }

  void check_depth(Nat depth) const {
    if (depth > support_ + 1) {
      throw Error(ErrorKind::SupportExceeded,
                  "depth " + std::to_string(depth) + " runs past support {0.." + std::to_string(support_) + "}");
    }
    if (!frozen_ && depth >= snapshots_.size()) {
      throw Error(ErrorKind::StageNotReached, "depth " + std::to_string(depth) + " was not snapshotted");
    }
  }

  void grow(Bits& current, Nat depth, std::size_t cap, std::vector<Bits>& out) const {
    if (!member(current)) return;
    if (current.size() == depth) {
      if (out.size() == cap) {
        throw Error(ErrorKind::LevelTooWide,
                    "level " + std::to_string(depth) + " holds more than " + std::to_string(cap) + " nodes");
      }
      out.push_back(current);
      return;
    }
    for (bool bit : {false, true}) {
      current.push_back(bit);
      grow(current, depth, cap, out);
      current.pop_back();
    }
  }

  bool find_leftmost(Bits& current, Nat depth) const {
    if (!member(current)) return false;
    if (current.size() == depth) return true;
    for (bool bit : {false, true}) {
      current.push_back(bit);
      if (find_leftmost(current, depth)) return true;
      current.pop_back();
    }
    return false;
  }

  Nat support_;
  bool pruned_;
  bool frozen_ = false;
  std::vector<FrozenCeer> snapshots_;
  StrongArray blocks_;
};

/// For a relation whose classes have size <= k except those meeting the finite set
/// `exempt`: least elements of the stage-s classes of size exactly k that avoid `exempt`.
inline FiniteSet bounded_transversal(const StagedCeer& relation, Nat k, const FiniteSet& exempt, Nat stage) {
  FiniteSet out;
  for (const ClassView& cls : classes_below(relation, relation.support(), stage)) {
    if (!set_intersection(cls.members, exempt).empty()) continue;
    if (cls.members.size() > k) {
      throw Error(ErrorKind::BoundViolated,
                  "class of " + std::to_string(cls.representative) + " has " +
                      std::to_string(cls.members.size()) + " members, above the bound " + std::to_string(k));
    }
    if (cls.members.size() == k) out.push_back(cls.representative);
  }
  return out;
}

}  // namespace ceerlab
