#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ceerlab/error.hpp"
#include "ceerlab/finite_set.hpp"
#include "ceerlab/machine.hpp"
#include "ceerlab/oracle.hpp"

namespace ceerlab {

/// One enumeration event: `element` appears at `stage`.
struct Enumerated {
  Nat stage = 0;
  Nat element = 0;
  bool operator==(const Enumerated&) const = default;
};

/// A c.e.-style set given by stage approximations. The approximation at stage s is a
/// subset of the one at s+1. Enumeration order is by entry stage, then by element.
class EnumerableSet {
 public:
  struct Source {
    virtual ~Source() = default;
    virtual std::vector<Enumerated> enumeration(Nat stage) const = 0;
    virtual std::optional<Nat> final_stage() const = 0;
    virtual std::string describe() const = 0;
  };

  EnumerableSet() : EnumerableSet(from_entries({})) {}
  explicit EnumerableSet(std::shared_ptr<const Source> source) : source_(std::move(source)) {}

  /// Explicit stage sequence; approximations past the end stay equal to the last one.
  static EnumerableSet from_stages(const std::vector<FiniteSet>& stages) {
    std::vector<Enumerated> entries;
    FiniteSet previous;
    for (Nat s = 0; s < stages.size(); ++s) {
      const FiniteSet& current = stages[s];
      if (!std::is_sorted(current.begin(), current.end()) ||
          std::adjacent_find(current.begin(), current.end()) != current.end()) {
        throw Error(ErrorKind::RangeError, "stage " + std::to_string(s) + " is not a sorted set");
      }
      if (!is_subset(previous, current)) {
        throw Error(ErrorKind::RangeError,
                    "stage approximations must grow; stage " + std::to_string(s) + " drops elements");
      }
      for (Nat x : set_difference(current, previous)) entries.push_back({s, x});
      previous = current;
    }
    return from_entries(std::move(entries));
  }

  /// A set present in full from stage 0.
  static EnumerableSet constant(const FiniteSet& members) { return from_stages({members}); }

  static EnumerableSet from_entries(std::vector<Enumerated> entries);

  /// W_e under the toy machine: x enters at stage max(x + 1, halting time).
  static EnumerableSet program(Nat code);

  /// The complement of a table below its bound, x entering at stage x + 1.
  static EnumerableSet complement_of(const OracleTable& table) {
    std::vector<Enumerated> entries;
    for (Nat x = 0; x < table.bound(); ++x) {
      if (!table.contains(x)) entries.push_back({x + 1, x});
    }
    return from_entries(std::move(entries));
  }

  std::vector<Enumerated> enumeration(Nat stage) const { return source_->enumeration(stage); }

  FiniteSet at_stage(Nat stage) const {
    std::vector<Nat> out;
    for (const auto& e : enumeration(stage)) out.push_back(e.element);
    return make_set(std::move(out));
  }

  /// Elements whose entry stage is exactly `stage`.
  FiniteSet entered_at(Nat stage) const {
    std::vector<Nat> out;
    for (const auto& e : enumeration(stage)) {
      if (e.stage == stage) out.push_back(e.element);
    }
    return make_set(std::move(out));
  }

  /// A stage after which the approximation provably never changes, if known.
  std::optional<Nat> final_stage() const { return source_->final_stage(); }
  std::string describe() const { return source_->describe(); }
  const std::shared_ptr<const Source>& source() const { return source_; }

 private:
  std::shared_ptr<const Source> source_;
};

namespace detail {

class EntryListSource final : public EnumerableSet::Source {
 public:
  explicit EntryListSource(std::vector<Enumerated> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(), [](const Enumerated& a, const Enumerated& b) {
      return a.stage != b.stage ? a.stage < b.stage : a.element < b.element;
    });
    std::vector<Nat> elements;
    for (const auto& e : entries_) elements.push_back(e.element);
    std::sort(elements.begin(), elements.end());
    if (auto dup = std::adjacent_find(elements.begin(), elements.end()); dup != elements.end()) {
      throw Error(ErrorKind::RangeError, "element " + std::to_string(*dup) + " enumerated twice");
    }
  }

  std::vector<Enumerated> enumeration(Nat stage) const override {
    auto end = std::upper_bound(entries_.begin(), entries_.end(), stage,
                                [](Nat s, const Enumerated& e) { return s < e.stage; });
    return {entries_.begin(), end};
  }

  std::optional<Nat> final_stage() const override {
    return entries_.empty() ? 0 : entries_.back().stage;
  }

  std::string describe() const override {
    return "explicit(" + std::to_string(entries_.size()) + " elements)";
  }

 private:
  std::vector<Enumerated> entries_;
};

class ProgramSource final : public EnumerableSet::Source {
 public:
  explicit ProgramSource(Nat code) : runs_(code) {}

  std::vector<Enumerated> enumeration(Nat stage) const override {
    std::vector<Enumerated> out;
    for (Nat x = 0; x < stage; ++x) {
      if (auto entry = runs_.entry_stage(x, stage)) out.push_back({*entry, x});
    }
    std::sort(out.begin(), out.end(), [](const Enumerated& a, const Enumerated& b) {
      return a.stage != b.stage ? a.stage < b.stage : a.element < b.element;
    });
    return out;
  }

  std::optional<Nat> final_stage() const override { return std::nullopt; }

  std::string describe() const override { return "W_" + std::to_string(runs_.code()); }

 private:
  ProgramRuns runs_;
};

}  // namespace detail

inline EnumerableSet EnumerableSet::from_entries(std::vector<Enumerated> entries) {
  return EnumerableSet(std::make_shared<const detail::EntryListSource>(std::move(entries)));
}

inline EnumerableSet EnumerableSet::program(Nat code) {
  return EnumerableSet(std::make_shared<const detail::ProgramSource>(code));
}

}  // namespace ceerlab
