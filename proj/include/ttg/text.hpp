#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace ttg {

// Lowercases ASCII letters only; multi-byte UTF-8 is left untouched.
std::string to_lower(std::string_view text);

// Splits into lowercase tokens. A token is a maximal run of ASCII
// alphanumerics or non-ASCII bytes, so UTF-8 words survive as units.
std::vector<std::string> tokenize(std::string_view text);

// Fraction of `a`'s tokens that appear in `b`'s token set, in [0,1].
double token_overlap(const std::vector<std::string>& a,
                     const std::unordered_set<std::string>& b);

std::unordered_set<std::string> token_set(std::string_view text);

bool contains_substring(std::string_view haystack, std::string_view needle);

// FNV-1a, used for candidate fingerprints and hashed bag-of-words buckets.
std::uint64_t fnv1a64(std::string_view data);

std::string trim(std::string_view s);

struct MaskResult {
  std::string masked;
  std::vector<std::string> numbers;  // surface forms, in order of appearance
};

// Replaces every maximal numeric token (digits with optional decimal part)
// by "[NUM]" and collects the original surface forms.
MaskResult mask_numbers(std::string_view text);

// Inverse of mask_numbers; used as a test oracle and for payload checks.
std::string unmask_numbers(std::string_view masked,
                           const std::vector<std::string>& numbers);

}  // namespace ttg
