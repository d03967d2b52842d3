#ifndef INSTRIND_NUMBER_WORDS_HPP
#define INSTRIND_NUMBER_WORDS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "instrind/common.hpp"

namespace instrind {

namespace number_detail {

inline constexpr std::array<std::string_view, 20> kOnes = {
    "zero",    "one",     "two",       "three",    "four",     "five",    "six",
    "seven",   "eight",   "nine",      "ten",      "eleven",   "twelve",  "thirteen",
    "fourteen", "fifteen", "sixteen",  "seventeen", "eighteen", "nineteen",
};

inline constexpr std::array<std::string_view, 10> kTens = {
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety",
};

// 1..999
inline std::string below_thousand(unsigned n) {
  std::string out;
  if (n >= 100) {
    out += kOnes[n / 100];
    out += " hundred";
    n %= 100;
    if (n == 0) return out;
    out += ' ';
  }
  if (n < 20) {
    out += kOnes[n];
  } else {
    out += kTens[n / 10];
    if (n % 10) {
      out += '-';
      out += kOnes[n % 10];
    }
  }
  return out;
}

}  // namespace number_detail

/// Cardinal in English words: hyphenated tens-units ("twenty-six"), no
/// "and", no comma after the thousands group ("one thousand two hundred
/// five"). Defined for 0..999'999.
inline std::string number_to_words(std::uint32_t n) {
  using namespace number_detail;
  if (n > 999'999) fail(ErrorCategory::data, "number_to_words: out of range " + std::to_string(n));
  if (n == 0) return "zero";
  std::string out;
  if (n >= 1000) {
    out = below_thousand(n / 1000) + " thousand";
    n %= 1000;
    if (n == 0) return out;
    out += ' ';
  }
  return out + below_thousand(n);
}

}  // namespace instrind

#endif  // INSTRIND_NUMBER_WORDS_HPP
