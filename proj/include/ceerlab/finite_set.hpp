#pragma once

#include <algorithm>
#include <initializer_list>
#include <string>
#include <vector>

#include "ceerlab/error.hpp"
#include "ceerlab/pairing.hpp"

namespace ceerlab {

/// A finite set of naturals, kept sorted and duplicate-free.
using FiniteSet = std::vector<Nat>;

inline FiniteSet make_set(std::vector<Nat> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return elements;
}

inline FiniteSet make_set(std::initializer_list<Nat> elements) {
  return make_set(std::vector<Nat>(elements));
}

inline bool contains(const FiniteSet& set, Nat x) {
  return std::binary_search(set.begin(), set.end(), x);
}

inline FiniteSet set_union(const FiniteSet& a, const FiniteSet& b) {
  FiniteSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline FiniteSet set_intersection(const FiniteSet& a, const FiniteSet& b) {
  FiniteSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline FiniteSet set_difference(const FiniteSet& a, const FiniteSet& b) {
  FiniteSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool is_subset(const FiniteSet& a, const FiniteSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline FiniteSet elements_at_most(const FiniteSet& set, Nat bound) {
  return FiniteSet(set.begin(), std::upper_bound(set.begin(), set.end(), bound));
}

/// D_z: binary expansion, x in D_z iff bit x of z is set.
inline FiniteSet canonical_set(Nat z) {
  FiniteSet out;
  for (Nat x = 0; z != 0; ++x, z >>= 1) {
    if (z & 1u) out.push_back(x);
  }
  return out;
}

/// Inverse of canonical_set. Indices of sets reaching 64 do not fit and raise RangeError.
inline Nat canonical_index(const FiniteSet& set) {
  Nat z = 0;
  for (Nat x : set) {
    if (x >= 64) {
      throw Error(ErrorKind::RangeError,
                  "canonical index of a set containing " + std::to_string(x) + " exceeds 64 bits");
    }
    z |= Nat{1} << x;
  }
  return z;
}

/// p_A(x): the (x+1)-st smallest member of A.
inline Nat principal(const FiniteSet& set, Nat x) {
  if (x >= set.size()) {
    throw Error(ErrorKind::ExhaustedOracle, "principal function asked for member #" +
                                                std::to_string(x) + " of a set with " +
                                                std::to_string(set.size()) + " members");
  }
  return set[x];
}

}  // namespace ceerlab
