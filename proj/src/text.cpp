#include "ttg/text.hpp"

#include <cctype>

namespace ttg {

namespace {

bool is_token_char(unsigned char c) {
  return std::isalnum(c) || c >= 0x80;
}

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    unsigned char uc = static_cast<unsigned char>(c);
    if (uc < 0x80) c = static_cast<char>(std::tolower(uc));
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : text) {
    if (is_token_char(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    } else if (!cur.empty()) {
      tokens.push_back(to_lower(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(to_lower(cur));
  return tokens;
}

std::unordered_set<std::string> token_set(std::string_view text) {
  auto tokens = tokenize(text);
  return {tokens.begin(), tokens.end()};
}

double token_overlap(const std::vector<std::string>& a,
                     const std::unordered_set<std::string>& b) {
  if (a.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& t : a)
    if (b.count(t)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(a.size());
}

bool contains_substring(std::string_view haystack, std::string_view needle) {
  return !needle.empty() && haystack.find(needle) != std::string_view::npos;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

MaskResult mask_numbers(std::string_view text) {
  MaskResult out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_digit(text[i])) {
      std::size_t j = i;
      while (j < text.size() && is_digit(text[j])) ++j;
      if (j + 1 < text.size() && text[j] == '.' && is_digit(text[j + 1])) {
        ++j;
        while (j < text.size() && is_digit(text[j])) ++j;
      }
      out.numbers.emplace_back(text.substr(i, j - i));
      out.masked += "[NUM]";
      i = j;
    } else {
      out.masked.push_back(text[i]);
      ++i;
    }
  }
  return out;
}

std::string unmask_numbers(std::string_view masked,
                           const std::vector<std::string>& numbers) {
  std::string out;
  std::size_t next = 0;
  std::size_t i = 0;
  static constexpr std::string_view kTok = "[NUM]";
  while (i < masked.size()) {
    if (masked.compare(i, kTok.size(), kTok) == 0 && next < numbers.size()) {
      out += numbers[next++];
      i += kTok.size();
    } else {
      out.push_back(masked[i]);
      ++i;
    }
  }
  return out;
}

}  // namespace ttg
