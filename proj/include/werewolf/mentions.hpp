#pragma once

#include <string>
#include <vector>

namespace werewolf {

namespace detail {

inline bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

inline std::string lower_copy(const std::string& s) {
  std::string out = s;
  for (auto& c : out) c = lower(c);
  return out;
}

}  // namespace detail

// Whole-word, case-insensitive name match: "Mona" is mentioned by
// "i suspect mona." but not by "Monastery". Word boundaries are any
// non-letter character (or string edge), so "Mona's" and "@Mona" count.
inline bool mentions(const std::string& text, const std::string& name) {
  if (name.empty()) return false;
  const std::string hay = detail::lower_copy(text);
  const std::string needle = detail::lower_copy(name);
  size_t pos = 0;
  while ((pos = hay.find(needle, pos)) != std::string::npos) {
    const bool left_ok = pos == 0 || !detail::is_word_char(hay[pos - 1]);
    const size_t end = pos + needle.size();
    const bool right_ok = end == hay.size() || !detail::is_word_char(hay[end]);
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

inline std::vector<std::string> mentioned_names(const std::string& text,
                                                const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (const auto& n : names)
    if (mentions(text, n)) out.push_back(n);
  return out;
}

}  // namespace werewolf
