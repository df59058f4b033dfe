#pragma once

#include <string>
#include <vector>

#include "ceerlab/error.hpp"
#include "ceerlab/finite_set.hpp"
#include "ceerlab/pairing.hpp"

namespace ceerlab {

using Bits = std::vector<bool>;

inline Bits bits_from_string(const std::string& text) {
  Bits out;
  for (char c : text) {
    if (c != '0' && c != '1') throw Error(ErrorKind::SchemaError, "bit strings use only '0'/'1'");
    out.push_back(c == '1');
  }
  return out;
}

inline std::string bits_to_string(const Bits& bits) {
  std::string out;
  for (bool b : bits) out.push_back(b ? '1' : '0');
  return out;
}

/// code(sigma) = pair(|sigma|, value), sigma read as a binary numeral with sigma(0) most
/// significant. Segments up to 63 bits.
inline Nat segment_code(const Bits& segment) {
  if (segment.size() > 63) throw Error(ErrorKind::RangeError, "segments are limited to 63 bits");
  Nat value = 0;
  for (bool b : segment) value = (value << 1) | (b ? 1u : 0u);
  return pair(segment.size(), value);
}

inline Bits segment_of(Nat code) {
  auto [length, value] = unpair(code);
  if (length > 63 || (length < 64 && (value >> length) != 0)) {
    throw Error(ErrorKind::InconsistentSegments,
                "code " + std::to_string(code) + " is not the code of any initial segment");
  }
  Bits out(length);
  for (Nat k = 0; k < length; ++k) out[k] = ((value >> (length - 1 - k)) & 1u) != 0;
  return out;
}

/// Codes of every initial segment of `prefix` of length 1..|prefix|.
inline FiniteSet encode_segments(const Bits& prefix) {
  std::vector<Nat> codes;
  Bits segment;
  for (bool b : prefix) {
    segment.push_back(b);
    codes.push_back(segment_code(segment));
  }
  return make_set(std::move(codes));
}

/// The longest segment among `codes`, after checking they all lie on one branch.
inline Bits decode_segments(const FiniteSet& codes) {
  std::vector<Bits> segments;
  for (Nat c : codes) segments.push_back(segment_of(c));
  Bits longest;
  for (const Bits& s : segments) {
    if (s.size() > longest.size()) longest = s;
  }
  for (const Bits& s : segments) {
    if (!std::equal(s.begin(), s.end(), longest.begin())) {
      throw Error(ErrorKind::InconsistentSegments,
                  "segments " + bits_to_string(s) + " and " + bits_to_string(longest) +
                      " are incompatible");
    }
  }
  return longest;
}

}  // namespace ceerlab
