#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "ceerlab/error.hpp"

namespace ceerlab {

using Nat = std::uint64_t;

namespace detail {

using Wide = unsigned __int128;

constexpr Wide triangle(Wide w) { return w * (w + 1) / 2; }

}  // namespace detail

/// Cantor pairing: <i,x> = (i+x)(i+x+1)/2 + x.
/// Strictly increasing in each argument; throws RangeError on 64-bit overflow.
inline Nat pair(Nat i, Nat x) {
  const detail::Wide w = static_cast<detail::Wide>(i) + x;
  const detail::Wide z = detail::triangle(w) + x;
  if (z > static_cast<detail::Wide>(UINT64_MAX)) {
    throw Error(ErrorKind::RangeError,
                "pair(" + std::to_string(i) + "," + std::to_string(x) + ") overflows 64 bits");
  }
  return static_cast<Nat>(z);
}

/// Inverse of pair: returns (i, x) with pair(i, x) == z.
inline std::pair<Nat, Nat> unpair(Nat z) {
  // Floating point estimate of the diagonal, corrected exactly below.
  auto w = static_cast<detail::Wide>(
      std::floor((std::sqrt(8.0L * static_cast<long double>(z) + 1.0L) - 1.0L) / 2.0L));
  while (detail::triangle(w + 1) <= z) ++w;
  while (detail::triangle(w) > z) --w;
  const auto x = static_cast<Nat>(z - detail::triangle(w));
  const auto i = static_cast<Nat>(w - x);
  return {i, x};
}

/// Largest x with pair(i, x) <= bound; nullopt when column i starts above bound.
inline std::optional<Nat> max_second_component(Nat i, Nat bound) {
  if (static_cast<detail::Wide>(i) > bound || detail::triangle(i) > bound) return std::nullopt;
  Nat lo = 0;
  Nat hi = bound;  // pair(i, x) >= x, so x <= bound
  while (lo < hi) {
    const Nat mid = lo + (hi - lo + 1) / 2;
    const detail::Wide w = static_cast<detail::Wide>(i) + mid;
    if (detail::triangle(w) + mid <= bound) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

}  // namespace ceerlab
