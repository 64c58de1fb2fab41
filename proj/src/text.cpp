// Copyright 2026 The Harmonkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "harmonkit/text.hpp"

namespace harmonkit {
namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
bool is_lower(unsigned char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
// Non-ASCII bytes belong to words (UTF-8 letters have no case here).
bool is_letter(unsigned char c) { return is_lower(c) || is_upper(c) || c >= 0x80; }
char to_lower(unsigned char c) { return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c); }

}  // namespace

std::string normalize_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (const char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    if (c == '_' || c == '-' || is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(to_lower(c));
  }
  return out;
}

NormalizedToken tokenize(std::string_view raw) {
  NormalizedToken result;
  std::string current;
  unsigned char previous = 0;
  auto flush = [&] {
    if (!current.empty()) result.tokens.push_back(std::move(current));
    current.clear();
  };
  for (const char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    if (!is_letter(c) && !is_digit(c)) {
      flush();
      previous = 0;
      continue;
    }
    if (!current.empty()) {
      const bool camel = is_lower(previous) && is_upper(c);
      const bool letter_digit = (is_letter(previous) && is_digit(c)) || (is_digit(previous) && is_letter(c));
      if (camel || letter_digit) flush();
    }
    current.push_back(to_lower(c));
    previous = c;
  }
  flush();
  return result;
}

std::set<std::string> token_set(std::string_view raw) {
  auto tokens = tokenize(raw).tokens;
  return {std::make_move_iterator(tokens.begin()), std::make_move_iterator(tokens.end())};
}

const std::set<std::string>& default_null_vocabulary() {
  static const std::set<std::string> vocabulary = {
      "", "na", "n/a", "nan", "none", "null", "unknown", "not reported"};
  return vocabulary;
}

bool is_null_like(std::string_view raw) { return is_null_like(raw, default_null_vocabulary()); }

bool is_null_like(std::string_view raw, const std::set<std::string>& vocabulary) {
  return vocabulary.count(normalize_text(raw)) > 0;
}

}  // namespace harmonkit
