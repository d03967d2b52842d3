#ifndef INSTRIND_PLURALIZE_HPP
#define INSTRIND_PLURALIZE_HPP

#include <array>
#include <string>
#include <string_view>
#include <utility>

namespace instrind {

namespace plural_detail {

inline constexpr std::array<std::string_view, 17> kInvariant = {
    "sheep",  "fish",  "deer",   "series", "species", "aircraft",  "salmon", "moose", "swine",
    "bison",  "trout", "cod",    "shrimp", "offspring", "spacecraft", "means", "headquarters",
};

inline constexpr std::array<std::pair<std::string_view, std::string_view>, 25> kIrregular = {{
    {"man", "men"},           {"woman", "women"},        {"child", "children"},
    {"foot", "feet"},         {"tooth", "teeth"},        {"mouse", "mice"},
    {"louse", "lice"},        {"goose", "geese"},        {"person", "people"},
    {"ox", "oxen"},           {"cactus", "cacti"},       {"fungus", "fungi"},
    {"nucleus", "nuclei"},    {"radius", "radii"},       {"stimulus", "stimuli"},
    {"alumnus", "alumni"},    {"phenomenon", "phenomena"}, {"criterion", "criteria"},
    {"datum", "data"},        {"bacterium", "bacteria"}, {"curriculum", "curricula"},
    {"die", "dice"},          {"appendix", "appendices"}, {"axis", "axes"},
    {"matrix", "matrices"},
}};

// Words ending in "man" that take a regular -s.
inline constexpr std::array<std::string_view, 9> kRegularMan = {
    "human", "german", "roman", "shaman", "talisman", "caiman", "ottoman", "walkman", "cayman",
};

inline constexpr std::array<std::string_view, 16> kVes = {
    "life", "wife", "knife", "leaf", "wolf",  "half",  "shelf", "thief",
    "loaf", "calf", "self",  "elf",  "sheaf", "scarf", "hoof",  "midwife",
};

inline constexpr std::array<std::string_view, 13> kOes = {
    "hero",   "potato",  "tomato",  "echo",    "veto",   "volcano", "torpedo",
    "embargo", "mosquito", "domino", "tornado", "buffalo", "cargo",
};

// "-ch" words pronounced with a hard k.
inline constexpr std::array<std::string_view, 8> kHardCh = {
    "stomach", "monarch", "epoch", "patriarch", "matriarch", "tech", "czech", "loch",
};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& arr, std::string_view w) {
  for (auto x : arr) {
    if (x == w) return true;
  }
  return false;
}

inline bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

inline bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

/// Returns the "ves" form for a word on the -f/-fe list.
inline std::string ves_form(std::string_view w) {
  if (ends_with(w, "fe")) return std::string(w.substr(0, w.size() - 2)) + "ves";
  return std::string(w.substr(0, w.size() - 1)) + "ves";
}

}  // namespace plural_detail

inline bool is_invariant_plural(std::string_view noun) {
  return plural_detail::contains(plural_detail::kInvariant, noun);
}

/// English plural of a lowercase singular noun.
///
/// Rule cascade, first match wins: invariant nouns, irregular table,
/// compound "-man", Greek "-sis", "-f/-fe" list, "-o/-oes" list,
/// consonant + "y", sibilants, then plain "-s". Compounds ending in a
/// long irregular stem ("grandchild", "policewoman") inherit its plural.
inline std::string pluralize(std::string_view noun) {
  using namespace plural_detail;
  if (noun.empty()) return "s";
  if (is_invariant_plural(noun)) return std::string(noun);
  for (const auto& [sg, pl] : kIrregular) {
    if (noun == sg) return std::string(pl);
  }
  for (const auto& [sg, pl] : kIrregular) {
    // compounds such as "grandchild" or "dormouse"; short stems like "ox"
    // and "die" are too ambiguous as suffixes.
    if (sg.size() >= 4 && ends_with(noun, sg) && noun != "mongoose") {
      return std::string(noun.substr(0, noun.size() - sg.size())) + std::string(pl);
    }
  }
  if (ends_with(noun, "man") && !contains(kRegularMan, noun)) {
    return std::string(noun.substr(0, noun.size() - 3)) + "men";
  }
  if (ends_with(noun, "sis")) {
    return std::string(noun.substr(0, noun.size() - 2)) + "es";
  }
  if (contains(kVes, noun)) return ves_form(noun);
  if (contains(kOes, noun)) return std::string(noun) + "es";

  const char last = noun.back();
  if (last == 'y' && noun.size() >= 2 && !is_vowel(noun[noun.size() - 2])) {
    return std::string(noun.substr(0, noun.size() - 1)) + "ies";
  }
  if (ends_with(noun, "ch") && contains(kHardCh, noun)) return std::string(noun) + "s";
  if (noun == "quiz") return "quizzes";
  if (last == 's' || last == 'x' || last == 'z' || ends_with(noun, "ch") || ends_with(noun, "sh")) {
    return std::string(noun) + "es";
  }
  return std::string(noun) + "s";
}

}  // namespace instrind

#endif  // INSTRIND_PLURALIZE_HPP
