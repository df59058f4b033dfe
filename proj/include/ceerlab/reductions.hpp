#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ceerlab/ceer.hpp"
#include "ceerlab/error.hpp"
#include "ceerlab/machine.hpp"
#include "ceerlab/oracle.hpp"

namespace ceerlab {

/// A total function on {0..domain_bound}: an explicit table, a step-bounded program,
/// or a named built-in construction materialised as a table.
class ReductionCandidate {
 public:
  enum class Kind { Table, Program, Builtin };

  static ReductionCandidate table(std::vector<Nat> values) {
    return ReductionCandidate(Kind::Table, std::move(values), "", 0, 0);
  }

  static ReductionCandidate builtin(std::string name, std::vector<Nat> values) {
    return ReductionCandidate(Kind::Builtin, std::move(values), std::move(name), 0, 0);
  }

  /// phi_code with a step budget, declared total on {0..domain_bound}.
  static ReductionCandidate program(Nat code, Nat budget, Nat domain_bound) {
    ReductionCandidate out(Kind::Program, {}, "", code, budget);
    out.domain_bound_ = domain_bound;
    return out;
  }

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  Nat code() const { return code_; }
  Nat budget() const { return budget_; }
  Nat domain_bound() const { return domain_bound_; }
  const std::vector<Nat>& values() const { return table_; }

  Nat operator()(Nat x) const {
    if (x > domain_bound_) {
      throw Error(ErrorKind::RangeError, "reduction evaluated at " + std::to_string(x) +
                                             " outside its domain {0.." +
                                             std::to_string(domain_bound_) + "}");
    }
    if (kind_ != Kind::Program) return table_[x];
    const Outcome o = run_program(code_, x, budget_);
    if (!o.halted) {
      throw Error(ErrorKind::NotTotal, "program " + std::to_string(code_) + " does not halt on " +
                                           std::to_string(x) + " within " +
                                           std::to_string(budget_) + " steps");
    }
    return o.output;
  }

  /// Values on {0..domain_bound}.
  std::vector<Nat> materialise() const {
    if (kind_ != Kind::Program) return table_;
    std::vector<Nat> out;
    for (Nat x = 0; x <= domain_bound_; ++x) out.push_back((*this)(x));
    return out;
  }

  bool operator==(const ReductionCandidate&) const = default;

 private:
  ReductionCandidate(Kind kind, std::vector<Nat> values, std::string name, Nat code, Nat budget)
      : kind_(kind), table_(std::move(values)), name_(std::move(name)), code_(code), budget_(budget) {
    if (kind_ != Kind::Program) {
      if (table_.empty()) throw Error(ErrorKind::RangeError, "a reduction table needs a nonempty domain");
      domain_bound_ = table_.size() - 1;
    }
  }

  Kind kind_;
  std::vector<Nat> table_;
  std::string name_;
  Nat code_ = 0;
  Nat budget_ = 0;
  Nat domain_bound_ = 0;
};

inline std::string_view to_string(ReductionCandidate::Kind kind) {
  switch (kind) {
    case ReductionCandidate::Kind::Table: return "table";
    case ReductionCandidate::Kind::Program: return "program";
    case ReductionCandidate::Kind::Builtin: return "builtin";
  }
  return "table";
}

/// Outcome of checking x R y <=> f(x) S f(y). Certified kinds come only from frozen inputs.
struct Verdict {
  enum class Kind { ConsistentSoFar, CertifiedPass, CertifiedViolation, PotentialViolation };

  Kind kind = Kind::ConsistentSoFar;
  std::optional<std::pair<Nat, Nat>> witness;
  Nat support = 0;
  std::optional<Nat> stage;

  bool ok() const { return kind == Kind::CertifiedPass || kind == Kind::ConsistentSoFar; }
  bool operator==(const Verdict&) const = default;
};

inline std::string_view to_string(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::ConsistentSoFar: return "consistent-so-far";
    case Verdict::Kind::CertifiedPass: return "certified-pass";
    case Verdict::Kind::CertifiedViolation: return "certified-violation";
    case Verdict::Kind::PotentialViolation: return "potential-violation";
  }
  return "consistent-so-far";
}

namespace detail {

inline std::vector<Nat> images_within(const FrozenCeer& source, const FrozenCeer& target,
                                      const ReductionCandidate& f) {
  if (f.domain_bound() < source.support()) {
    throw Error(ErrorKind::RangeError, "reduction domain {0.." + std::to_string(f.domain_bound()) +
                                           "} does not cover support {0.." +
                                           std::to_string(source.support()) + "}");
  }
  std::vector<Nat> images(source.support() + 1);
  for (Nat x = 0; x <= source.support(); ++x) {
    images[x] = f(x);
    if (images[x] > target.support()) {
      throw Error(ErrorKind::RangeError, "f(" + std::to_string(x) + ") = " + std::to_string(images[x]) +
                                             " lies outside the target support {0.." +
                                             std::to_string(target.support()) + "}");
    }
  }
  return images;
}

/// Lexicographically least x < y with x R y != f(x) S f(y).
inline std::optional<std::pair<Nat, Nat>> least_violation(const FrozenCeer& source,
                                                          const FrozenCeer& target,
                                                          const std::vector<Nat>& images) {
  const auto& rs = source.representatives();
  const auto& ts = target.representatives();
  const Nat n = source.support();
  for (Nat x = 0; x <= n; ++x) {
    for (Nat y = x + 1; y <= n; ++y) {
      if ((rs[x] == rs[y]) != (ts[images[x]] == ts[images[y]])) return std::pair{x, y};
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Decides whether f reduces R to S on R's support.
inline Verdict verify_frozen(const FrozenCeer& source, const FrozenCeer& target,
                             const ReductionCandidate& f) {
  const auto images = detail::images_within(source, target, f);
  Verdict out;
  out.support = source.support();
  out.witness = detail::least_violation(source, target, images);
  out.kind = out.witness ? Verdict::Kind::CertifiedViolation : Verdict::Kind::CertifiedPass;
  return out;
}

/// Stage-s shadow of the reduction condition on {0..n}. Staged relations can still
/// collapse, so this never certifies anything.
inline Verdict monotone_check(const StagedCeer& source, const StagedCeer& target,
                              const ReductionCandidate& f, Nat n, Nat stage) {
  const FrozenCeer r = source.freeze(n, stage);
  const FrozenCeer s = target.freeze(target.support(), stage);
  const auto images = detail::images_within(r, s, f);
  Verdict out;
  out.support = n;
  out.stage = stage;
  out.witness = detail::least_violation(r, s, images);
  out.kind = out.witness ? Verdict::Kind::PotentialViolation : Verdict::Kind::ConsistentSoFar;
  return out;
}

/// f(0) = 0; f(x+1) = f(y) for the least y <= x with y R x+1, otherwise the least z in
/// S's support outside every [f(y)]_S with y <= x.
inline ReductionCandidate greedy_reduction(const FrozenCeer& source, const FrozenCeer& target, Nat n) {
  detail::check_support(n, source.support());
  const auto& ts = target.representatives();
  std::vector<Nat> f{0};
  std::vector<bool> used(target.support() + 1, false);  // indexed by S-representative
  used[ts[0]] = true;
  Nat fresh = 0;  // every z below this is in a used class
  for (Nat x = 1; x <= n; ++x) {
    std::optional<Nat> mate;
    for (Nat y = 0; y < x; ++y) {
      if (source.related(y, x)) {
        mate = y;
        break;
      }
    }
    if (mate) {
      f.push_back(f[*mate]);
      continue;
    }
    while (fresh <= target.support() && used[ts[fresh]]) ++fresh;
    if (fresh > target.support()) {
      throw Error(ErrorKind::FreshClassExhausted,
                  "no fresh target class for x = " + std::to_string(x) + " within support {0.." +
                      std::to_string(target.support()) + "}");
    }
    used[ts[fresh]] = true;
    f.push_back(fresh);
  }
  return ReductionCandidate::builtin("greedy", std::move(f));
}

/// h(x) = a for x in A, x otherwise, on {0..bound-1}.
inline ReductionCandidate collapse_to_point(const OracleTable& set, Nat point) {
  if (!set.contains(point)) {
    throw Error(ErrorKind::RangeError, "collapse point " + std::to_string(point) + " is not in the set");
  }
  std::vector<Nat> h(set.bound());
  for (Nat x = 0; x < set.bound(); ++x) h[x] = set.contains(x) ? point : x;
  return ReductionCandidate::builtin("collapse-to-point", std::move(h));
}

/// x -> p_A(x) on {0..domain_bound}.
inline ReductionCandidate principal_reduction(const OracleTable& set, Nat domain_bound) {
  std::vector<Nat> p(domain_bound + 1);
  for (Nat x = 0; x <= domain_bound; ++x) p[x] = set.principal(x);
  return ReductionCandidate::builtin("principal", std::move(p));
}

inline ReductionCandidate principal_reduction(const FiniteSet& set, Nat domain_bound) {
  std::vector<Nat> p(domain_bound + 1);
  for (Nat x = 0; x <= domain_bound; ++x) p[x] = principal(set, x);
  return ReductionCandidate::builtin("principal", std::move(p));
}

/// Default search-space cap for brute_force_exists; admits 8 classes into 8 classes.
inline constexpr Nat kBruteForceCap = Nat{1} << 24;

/// Exhaustive search for a reduction: every assignment of R-classes to S-points,
/// extended class-constantly, with pairs checked element by element as the assignment
/// grows. Returns a witness table or nullopt.
inline std::optional<ReductionCandidate> brute_force_exists(const FrozenCeer& source,
                                                            const FrozenCeer& target,
                                                            Nat cap = kBruteForceCap) {
  const auto source_classes = source.classes();
  const auto target_classes = target.classes();
  const Nat cr = source_classes.size();
  const Nat cs = target_classes.size();
  if (cr > 8) {
    throw Error(ErrorKind::SearchSpaceTooLarge,
                "source has " + std::to_string(cr) + " classes; brute force handles at most 8");
  }
  detail::Wide space = 1;
  for (Nat k = 0; k < cr; ++k) {
    space *= cs;
    if (space > cap) {
      throw Error(ErrorKind::SearchSpaceTooLarge,
                  std::to_string(cs) + "^" + std::to_string(cr) + " assignments exceed cap " +
                      std::to_string(cap));
    }
  }
  // Candidate images are the S-class representatives; any point of a class behaves alike.
  std::vector<Nat> choice(cr, 0);
  std::vector<Nat> image_of_class(cr, 0);

  auto consistent_with_earlier = [&](Nat k) {
    for (Nat j = 0; j < k; ++j) {
      for (Nat x : source_classes[k].members) {
        for (Nat y : source_classes[j].members) {
          const bool lhs = source.related(x, y);
          const bool rhs = target.related(image_of_class[k], image_of_class[j]);
          if (lhs != rhs) return false;
        }
      }
    }
    return true;
  };

  Nat k = 0;
  while (true) {
    if (k == cr) {
      std::vector<Nat> table(source.support() + 1);
      for (Nat c = 0; c < cr; ++c) {
        for (Nat x : source_classes[c].members) table[x] = image_of_class[c];
      }
      return ReductionCandidate::builtin("brute-force", std::move(table));
    }
    bool placed = false;
    while (choice[k] < cs) {
      image_of_class[k] = target_classes[choice[k]].representative;
      ++choice[k];
      if (consistent_with_earlier(k)) {
        placed = true;
        break;
      }
    }
    if (placed) {
      ++k;
      continue;
    }
    if (k == 0) return std::nullopt;
    choice[k] = 0;
    --k;
  }
}

struct OrbitPoint {
  Nat value = 0;
  Nat class_size = 0;
  bool operator==(const OrbitPoint&) const = default;
};

/// x_0 = x, x_{n+1} = s(x_n) for even n and t(x_n) for odd n; h(n) is |[x_n]_R| for even n
/// and |[x_n]_S| for odd n. Returns (x_n, h(n)) for n = 0..steps.
inline std::vector<OrbitPoint> alternating_orbit(const ReductionCandidate& s, const ReductionCandidate& t,
                                                 Nat x, Nat steps, const FrozenCeer& r,
                                                 const FrozenCeer& sr) {
  std::vector<OrbitPoint> out;
  Nat current = x;
  for (Nat n = 0; n <= steps; ++n) {
    const FrozenCeer& home = n % 2 == 0 ? r : sr;
    if (current > home.support()) {
      throw Error(ErrorKind::SupportExceeded,
                  "orbit leaves the support at step " + std::to_string(n) + " (value " +
                      std::to_string(current) + ")");
    }
    out.push_back({current, home.class_size(current)});
    if (n == steps) break;
    const ReductionCandidate& next = n % 2 == 0 ? s : t;
    if (current > next.domain_bound()) {
      throw Error(ErrorKind::SupportExceeded,
                  "orbit leaves the reduction domain at step " + std::to_string(n));
    }
    current = next(current);
  }
  return out;
}

/// Window verdict for eventual injectivity on {0..n}: `beyond` is the least m such that
/// no position x > m shares its value with any other position of the window.
struct InjectivityReport {
  bool injective_beyond = false;
  Nat beyond = 0;
  std::optional<std::pair<Nat, Nat>> duplicate;
};

inline InjectivityReport eventually_injective(const ReductionCandidate& f, Nat n) {
  std::vector<std::pair<Nat, Nat>> by_value;
  for (Nat x = 0; x <= n; ++x) by_value.emplace_back(f(x), x);
  std::sort(by_value.begin(), by_value.end());
  Nat last_shared = 0;
  for (std::size_t i = 0; i + 1 < by_value.size(); ++i) {
    if (by_value[i].first == by_value[i + 1].first) {
      last_shared = std::max(last_shared, by_value[i + 1].second);
    }
  }
  InjectivityReport out;
  if (last_shared < n || n == 0) {
    out.injective_beyond = true;
    out.beyond = last_shared;
    return out;
  }
  // Position n itself repeats: report it with its nearest earlier twin.
  const Nat value = f(n);
  for (Nat y = n; y-- > 0;) {
    if (f(y) == value) {
      out.duplicate = std::pair{y, n};
      break;
    }
  }
  return out;
}

}  // namespace ceerlab
