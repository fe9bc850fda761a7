#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "nilmult/errors.hpp"

namespace nilmult {

using BigInt = mpz_class;

inline std::string to_decimal(const BigInt& value) { return value.get_str(10); }

// Accepts an optional sign followed by decimal digits, nothing else.
inline BigInt parse_bigint(std::string_view text) {
  std::string s(text);
  std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (start == s.size()) throw DomainError("expected an integer, got '" + s + "'");
  for (std::size_t i = start; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw DomainError("expected an integer, got '" + s + "'");
  }
  if (s[0] == '+') s.erase(0, 1);
  return BigInt(s, 10);
}

inline int sign(const BigInt& value) { return sgn(value); }

}  // namespace nilmult
