#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ceerlab/error.hpp"
#include "ceerlab/finite_set.hpp"

namespace ceerlab {

/// A finite prefix of a characteristic function. Queries at or past the bound are
/// rejected with ExhaustedOracle, never defaulted.
class OracleTable {
 public:
  OracleTable() = default;

  explicit OracleTable(std::vector<bool> bits, std::string tag = "")
      : bits_(std::move(bits)), tag_(std::move(tag)) {
    for (Nat x = 0; x < bits_.size(); ++x) {
      if (bits_[x]) members_.push_back(x);
    }
  }

  /// Parses a string of '0'/'1' characters.
  static OracleTable from_string(const std::string& bits, std::string tag = "") {
    std::vector<bool> out;
    out.reserve(bits.size());
    for (char c : bits) {
      if (c != '0' && c != '1') {
        throw Error(ErrorKind::SchemaError, std::string("oracle bits must be '0' or '1', got '") +
                                                c + "'");
      }
      out.push_back(c == '1');
    }
    return OracleTable(std::move(out), std::move(tag));
  }

  static OracleTable from_predicate(Nat bound, const std::function<bool(Nat)>& in,
                                    std::string tag = "") {
    std::vector<bool> out(bound);
    for (Nat x = 0; x < bound; ++x) out[x] = in(x);
    return OracleTable(std::move(out), std::move(tag));
  }

  static OracleTable from_members(Nat bound, const FiniteSet& members, std::string tag = "") {
    std::vector<bool> out(bound, false);
    for (Nat x : members) {
      if (x >= bound) {
        throw Error(ErrorKind::RangeError,
                    "member " + std::to_string(x) + " lies past table bound " + std::to_string(bound));
      }
      out[x] = true;
    }
    return OracleTable(std::move(out), std::move(tag));
  }

  /// Each position is a member with probability `density`, except those in `excluded`.
  template <class Rng>
  static OracleTable random(Nat bound, double density, Rng& rng, const FiniteSet& excluded = {},
                            std::string tag = "random") {
    std::bernoulli_distribution coin(density);
    std::vector<bool> out(bound);
    for (Nat x = 0; x < bound; ++x) out[x] = coin(rng) && !ceerlab::contains(excluded, x);
    return OracleTable(std::move(out), std::move(tag));
  }

  Nat bound() const { return bits_.size(); }
  const std::string& tag() const { return tag_; }
  const std::vector<bool>& bits() const { return bits_; }
  /// Members below the bound.
  const FiniteSet& members() const { return members_; }

  bool contains(Nat x) const {
    if (x >= bound()) {
      throw Error(ErrorKind::ExhaustedOracle, "membership of " + std::to_string(x) +
                                                  " queried past bound " + std::to_string(bound()) +
                                                  describe());
    }
    return bits_[x];
  }

  /// p_A(x), the (x+1)-st member.
  Nat principal(Nat x) const {
    if (x >= members_.size()) {
      throw Error(ErrorKind::ExhaustedOracle,
                  "principal function asked for member #" + std::to_string(x) + " but only " +
                      std::to_string(members_.size()) + " members lie below bound " +
                      std::to_string(bound()) + describe());
    }
    return members_[x];
  }

  /// Number of members strictly below a, for a <= bound.
  Nat rank(Nat a) const {
    if (a > bound()) {
      throw Error(ErrorKind::ExhaustedOracle,
                  "rank of " + std::to_string(a) + " needs bits past bound " + std::to_string(bound()) +
                      describe());
    }
    return static_cast<Nat>(std::lower_bound(members_.begin(), members_.end(), a) - members_.begin());
  }

  std::string to_string() const {
    std::string out;
    out.reserve(bits_.size());
    for (bool b : bits_) out.push_back(b ? '1' : '0');
    return out;
  }

  bool operator==(const OracleTable& other) const {
    return bits_ == other.bits_ && tag_ == other.tag_;
  }

 private:
  std::string describe() const { return tag_.empty() ? "" : " (table '" + tag_ + "')"; }

  std::vector<bool> bits_;
  std::string tag_;
  FiniteSet members_;
};

inline Nat principal(const OracleTable& table, Nat x) { return table.principal(x); }

}  // namespace ceerlab
