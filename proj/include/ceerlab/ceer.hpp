#pragma once

#include <algorithm>
#include <concepts>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ceerlab/enumerable.hpp"
#include "ceerlab/error.hpp"
#include "ceerlab/finite_set.hpp"
#include "ceerlab/pairing.hpp"

namespace ceerlab {

namespace detail {

inline void check_support(Nat x, Nat support) {
  if (x > support) {
    throw Error(ErrorKind::SupportExceeded,
                "element " + std::to_string(x) + " lies outside support {0.." +
                    std::to_string(support) + "}");
  }
}

}  // namespace detail

/// Partition of {0..support} with merge. Each element carries a class slot; each slot
/// keeps its members and least member. Merges relabel the smaller class.
class Partition {
 public:
  explicit Partition(Nat support) : slot_(support + 1), members_(support + 1), least_(support + 1) {
    for (Nat x = 0; x <= support; ++x) {
      slot_[x] = x;
      members_[x] = {x};
      least_[x] = x;
    }
    classes_ = support + 1;
  }

  Nat support() const { return slot_.size() - 1; }

  /// Returns true when two distinct classes were merged.
  bool merge(Nat x, Nat y) {
    detail::check_support(x, support());
    detail::check_support(y, support());
    Nat a = slot_[x];
    Nat b = slot_[y];
    if (a == b) return false;
    if (members_[a].size() < members_[b].size()) std::swap(a, b);
    for (Nat z : members_[b]) slot_[z] = a;
    members_[a].insert(members_[a].end(), members_[b].begin(), members_[b].end());
    members_[b].clear();
    members_[b].shrink_to_fit();
    least_[a] = std::min(least_[a], least_[b]);
    --classes_;
    return true;
  }

  bool related(Nat x, Nat y) const {
    detail::check_support(x, support());
    detail::check_support(y, support());
    return slot_[x] == slot_[y];
  }

  /// Least member of the class of x.
  Nat representative(Nat x) const {
    detail::check_support(x, support());
    return least_[slot_[x]];
  }

  Nat class_size(Nat x) const {
    detail::check_support(x, support());
    return members_[slot_[x]].size();
  }

  FiniteSet class_of(Nat x) const {
    detail::check_support(x, support());
    return make_set(members_[slot_[x]]);
  }

  Nat class_count() const { return classes_; }

  /// Least member per element.
  std::vector<Nat> representatives() const {
    std::vector<Nat> out(slot_.size());
    for (Nat x = 0; x < slot_.size(); ++x) out[x] = least_[slot_[x]];
    return out;
  }

 private:
  std::vector<Nat> slot_;
  std::vector<std::vector<Nat>> members_;
  std::vector<Nat> least_;
  Nat classes_ = 0;
};

/// [x]_R as seen in a window.
struct ClassView {
  Nat representative = 0;
  FiniteSet members;
  bool is_singleton = true;
  bool operator==(const ClassView&) const = default;
};

/// A decidable, immutable equivalence relation on {0..support}.
class FrozenCeer {
 public:
  FrozenCeer() : FrozenCeer(std::vector<Nat>{0}) {}

  /// From least-member labels: rep[x] is the least member of x's class.
  explicit FrozenCeer(std::vector<Nat> representatives) : rep_(std::move(representatives)) {
    if (rep_.empty()) throw Error(ErrorKind::RangeError, "a frozen ceer needs a nonempty support");
    size_.assign(rep_.size(), 0);
    for (Nat x = 0; x < rep_.size(); ++x) {
      if (rep_[x] > x || rep_[rep_[x]] != rep_[x]) {
        throw Error(ErrorKind::RangeError, "representative labels must name the least member");
      }
      ++size_[rep_[x]];
    }
    for (Nat x = 0; x < rep_.size(); ++x) {
      if (rep_[x] == x) ++classes_;
    }
  }

  explicit FrozenCeer(const Partition& partition) : FrozenCeer(partition.representatives()) {}

  /// From a list of disjoint classes; elements of {0..support} not listed are singletons.
  static FrozenCeer from_classes(Nat support, const std::vector<FiniteSet>& classes) {
    std::vector<Nat> rep(support + 1);
    std::vector<bool> seen(support + 1, false);
    for (Nat x = 0; x <= support; ++x) rep[x] = x;
    for (const FiniteSet& cls : classes) {
      if (cls.empty()) continue;
      const Nat least = *std::min_element(cls.begin(), cls.end());
      for (Nat x : cls) {
        detail::check_support(x, support);
        if (seen[x]) {
          throw Error(ErrorKind::RangeError, "element " + std::to_string(x) + " listed in two classes");
        }
        seen[x] = true;
        rep[x] = least;
      }
    }
    return FrozenCeer(std::move(rep));
  }

  /// From arbitrary class labels, one per element.
  static FrozenCeer from_labels(const std::vector<Nat>& labels) {
    std::vector<Nat> rep(labels.size());
    std::vector<std::pair<Nat, Nat>> first;  // label -> least element
    for (Nat x = 0; x < labels.size(); ++x) {
      auto it = std::find_if(first.begin(), first.end(),
                             [&](const auto& p) { return p.first == labels[x]; });
      if (it == first.end()) {
        first.emplace_back(labels[x], x);
        rep[x] = x;
      } else {
        rep[x] = it->second;
      }
    }
    return FrozenCeer(std::move(rep));
  }

  Nat support() const { return rep_.size() - 1; }

  bool related(Nat x, Nat y) const {
    detail::check_support(x, support());
    detail::check_support(y, support());
    return rep_[x] == rep_[y];
  }

  /// Stage argument accepted for uniformity with StagedCeer; a frozen relation has one stage.
  bool related(Nat x, Nat y, Nat /*stage*/) const { return related(x, y); }

  Nat representative(Nat x) const {
    detail::check_support(x, support());
    return rep_[x];
  }

  Nat class_size(Nat x) const {
    detail::check_support(x, support());
    return size_[rep_[x]];
  }

  Nat class_count() const { return classes_; }

  const std::vector<Nat>& representatives() const { return rep_; }

  /// Classes within {0..n}, sorted by representative.
  std::vector<ClassView> classes_below(Nat n) const {
    detail::check_support(n, support());
    std::vector<ClassView> out;
    std::vector<std::size_t> index(n + 1, 0);
    for (Nat x = 0; x <= n; ++x) {
      if (rep_[x] == x) {
        index[x] = out.size();
        out.push_back({x, {}, true});
      }
      out[index[rep_[x]]].members.push_back(x);
    }
    for (auto& cls : out) cls.is_singleton = cls.members.size() == 1;
    return out;
  }

  std::vector<ClassView> classes() const { return classes_below(support()); }

  Nat singleton_count(Nat n) const {
    detail::check_support(n, support());
    Nat count = 0;
    for (Nat x = 0; x <= n; ++x) {
      if (size_[rep_[x]] == 1) ++count;
    }
    return count;
  }

  /// The relation on {0..n}.
  FrozenCeer restrict_to(Nat n) const {
    detail::check_support(n, support());
    return FrozenCeer(std::vector<Nat>(rep_.begin(), rep_.begin() + static_cast<std::ptrdiff_t>(n + 1)));
  }

  bool operator==(const FrozenCeer& other) const { return rep_ == other.rep_; }

 private:
  std::vector<Nat> rep_;
  std::vector<Nat> size_;
  Nat classes_ = 0;
};

/// One collapse request as logged; `merged` is false for a no-op.
struct CollapseEvent {
  Nat stage = 0;
  Nat x = 0;
  Nat y = 0;
  bool merged = false;
  bool operator==(const CollapseEvent&) const = default;
};

/// A stage rule returns the collapses to perform when the relation enters `stage`.
/// Rules must be pure functions of the stage.
using GeneratorRule = std::function<std::vector<std::pair<Nat, Nat>>(Nat stage)>;

/// A monotone stage-indexed equivalence relation on {0..support}. Single writer.
class StagedCeer {
 public:
  explicit StagedCeer(Nat support) : current_(support) {}

  StagedCeer(Nat support, std::vector<GeneratorRule> rules)
      : current_(support), rules_(std::move(rules)) {
    apply_rules();
  }

  /// Rebuilds a relation from its trace, replaying from the discrete partition.
  static StagedCeer replay(Nat support, Nat stage, const std::vector<CollapseEvent>& trace) {
    StagedCeer out(support);
    for (const auto& event : trace) {
      if (event.stage < out.stage_) {
        throw Error(ErrorKind::RangeError, "trace stages must be nondecreasing");
      }
      out.stage_ = event.stage;
      out.collapse(event.x, event.y);
    }
    if (stage < out.stage_) throw Error(ErrorKind::RangeError, "trace runs past the stated stage");
    out.stage_ = stage;
    return out;
  }

  Nat support() const { return current_.support(); }
  Nat stage() const { return stage_; }
  const std::vector<CollapseEvent>& trace() const { return trace_; }
  const Partition& current() const { return current_; }

  void next_stage() {
    ++stage_;
    apply_rules();
  }

  void advance_to(Nat target) {
    while (stage_ < target) next_stage();
  }

  /// Merges [x] and [y] at the current stage; a no-op is still logged.
  bool collapse(Nat x, Nat y) {
    const bool merged = current_.merge(x, y);
    trace_.push_back({stage_, x, y, merged});
    return merged;
  }

  bool related(Nat x, Nat y) const { return current_.related(x, y); }

  bool related(Nat x, Nat y, Nat stage) const {
    if (stage >= stage_) {
      check_stage(stage);
      return current_.related(x, y);
    }
    return state_at(stage).related(x, y);
  }

  /// The partition as it stood at the end of `stage`.
  Partition state_at(Nat stage) const {
    check_stage(stage);
    Partition out(support());
    for (const auto& event : trace_) {
      if (event.stage > stage) break;
      out.merge(event.x, event.y);
    }
    return out;
  }

  FrozenCeer freeze(Nat n, Nat stage) const {
    detail::check_support(n, support());
    const FrozenCeer whole(stage >= stage_ ? (check_stage(stage), current_) : state_at(stage));
    return whole.restrict_to(n);
  }

 private:
  void check_stage(Nat stage) const {
    if (stage > stage_) {
      throw Error(ErrorKind::StageNotReached, "stage " + std::to_string(stage) +
                                                  " queried but the relation is at stage " +
                                                  std::to_string(stage_));
    }
  }

  void apply_rules() {
    for (const auto& rule : rules_) {
      for (auto [x, y] : rule(stage_)) collapse(x, y);
    }
  }

  Partition current_;
  Nat stage_ = 0;
  std::vector<CollapseEvent> trace_;
  std::vector<GeneratorRule> rules_;
};

/// Anything answering related(x, y, stage) on {0..support()}.
template <class R>
concept StageRelation = requires(const R& r, Nat x, Nat s) {
  { r.related(x, x, s) } -> std::convertible_to<bool>;
  { r.support() } -> std::convertible_to<Nat>;
};

// ---------------------------------------------------------------------------
// Constructors

/// x Id y iff x = y.
inline FrozenCeer id_ceer(Nat n) {
  std::vector<Nat> rep(n + 1);
  for (Nat x = 0; x <= n; ++x) rep[x] = x;
  return FrozenCeer(std::move(rep));
}

/// A single class.
inline FrozenCeer id1_ceer(Nat n) { return FrozenCeer(std::vector<Nat>(n + 1, 0)); }

namespace detail {

/// Collapses tying freshly entered elements of one approximation into a single class.
/// `entered` and `current` are window-restricted; `current` includes `entered`.
inline void tie_entries(const FiniteSet& current, const FiniteSet& entered,
                        const std::function<Nat(Nat)>& code, std::vector<std::pair<Nat, Nat>>& out) {
  if (entered.empty()) return;
  const Nat anchor = current.front();
  for (Nat x : entered) {
    if (x != anchor) out.emplace_back(code(anchor), code(x));
  }
  if (contains(entered, anchor)) {
    // The anchor is new; join it to what was already there.
    auto old = set_difference(current, entered);
    if (!old.empty()) out.emplace_back(code(anchor), code(old.front()));
  }
}

}  // namespace detail

/// x R y iff x = y or x, y lie in a common A_i, with the A_i read at the current stage.
/// Elements beyond the support are outside the window and ignored. The sets must stay
/// pairwise disjoint; a violation raises GeneratorConflict when the stage is entered.
inline StagedCeer generated_from(std::vector<EnumerableSet> sets, Nat support) {
  auto rule = [sets = std::move(sets), support](Nat stage) {
    std::vector<FiniteSet> approx;
    approx.reserve(sets.size());
    for (const auto& set : sets) approx.push_back(set.at_stage(stage));
    for (std::size_t i = 0; i < approx.size(); ++i) {
      for (std::size_t j = i + 1; j < approx.size(); ++j) {
        auto common = set_intersection(approx[i], approx[j]);
        if (!common.empty()) {
          throw Error(ErrorKind::GeneratorConflict,
                      "stage " + std::to_string(stage) + ": sets " + std::to_string(i) + " and " +
                          std::to_string(j) + " share element " + std::to_string(common.front()));
        }
      }
    }
    std::vector<std::pair<Nat, Nat>> out;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      auto window = elements_at_most(approx[i], support);
      auto entered = elements_at_most(sets[i].entered_at(stage), support);
      detail::tie_entries(window, entered, [](Nat x) { return x; }, out);
    }
    return out;
  };
  return StagedCeer(support, {std::move(rule)});
}

/// <i,x> R <j,y> iff i = j and (x = y or x, y in A_i). Columns past the family are discrete.
inline StagedCeer cylinder(std::vector<EnumerableSet> family, Nat support) {
  auto rule = [family = std::move(family), support](Nat stage) {
    std::vector<std::pair<Nat, Nat>> out;
    for (Nat i = 0; i < family.size(); ++i) {
      auto top = max_second_component(i, support);
      if (!top) break;
      auto window = elements_at_most(family[i].at_stage(stage), *top);
      auto entered = elements_at_most(family[i].entered_at(stage), *top);
      detail::tie_entries(window, entered, [i](Nat x) { return pair(i, x); }, out);
    }
    return out;
  };
  return StagedCeer(support, {std::move(rule)});
}

// ---------------------------------------------------------------------------
// Queries shared by staged and frozen relations

inline bool related(const FrozenCeer& r, Nat x, Nat y, Nat = 0) { return r.related(x, y); }
inline bool related(const StagedCeer& r, Nat x, Nat y, Nat stage) { return r.related(x, y, stage); }

inline bool collapse(StagedCeer& r, Nat x, Nat y) { return r.collapse(x, y); }

inline FrozenCeer freeze(const StagedCeer& r, Nat n, Nat stage) { return r.freeze(n, stage); }
inline FrozenCeer freeze(const FrozenCeer& r, Nat n, Nat = 0) { return r.restrict_to(n); }

inline std::vector<ClassView> classes_below(const FrozenCeer& r, Nat n, Nat = 0) {
  return r.classes_below(n);
}
inline std::vector<ClassView> classes_below(const StagedCeer& r, Nat n, Nat stage) {
  return r.freeze(r.support(), stage).classes_below(n);
}

/// |[x]_R| counting members within the support.
inline Nat class_size(const FrozenCeer& r, Nat x, Nat = 0) { return r.class_size(x); }
inline Nat class_size(const StagedCeer& r, Nat x, Nat stage) {
  if (stage == r.stage()) return r.current().class_size(x);
  return r.state_at(stage).class_size(x);
}

/// Elements of {0..n} whose class (within the support) is a singleton.
inline Nat singleton_count(const FrozenCeer& r, Nat n, Nat = 0) { return r.singleton_count(n); }
inline Nat singleton_count(const StagedCeer& r, Nat n, Nat stage) {
  return r.freeze(r.support(), stage).singleton_count(n);
}

}  // namespace ceerlab
