#include "cotkit/tokens.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "cotkit/error.hpp"
#include "cotkit/text_util.hpp"

namespace cotkit {

std::string_view to_string(TokenScheme s) {
  return s == TokenScheme::whitespace ? "whitespace" : "pluggable";
}

TokenScheme token_scheme_from_string(std::string_view s) {
  if (s == "whitespace") return TokenScheme::whitespace;
  if (s == "pluggable") return TokenScheme::pluggable;
  throw Error(ErrorCode::usage, fmt::format("unknown token scheme '{}'", s));
}

TokenizerTable::TokenizerTable(std::unordered_set<std::string> vocab) : vocab_(std::move(vocab)) {
  for (const auto& v : vocab_) longest_ = std::max(longest_, v.size());
}

TokenizerTable TokenizerTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::config, fmt::format("cannot open tokenizer table '{}'", path));
  std::unordered_set<std::string> vocab;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) vocab.insert(line);
  }
  return TokenizerTable(std::move(vocab));
}

std::size_t TokenizerTable::count(std::string_view textv) const {
  std::size_t tokens = 0;
  std::size_t i = 0;
  while (i < textv.size()) {
    if (text::is_space(textv[i])) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < textv.size() && !text::is_space(textv[end])) ++end;
    std::string_view word = textv.substr(i, end - i);
    std::size_t pos = 0;
    while (pos < word.size()) {
      std::size_t take = 1;
      for (std::size_t len = std::min(longest_, word.size() - pos); len >= 1; --len) {
        if (vocab_.count(std::string(word.substr(pos, len)))) {
          take = len;
          break;
        }
      }
      pos += take;
      ++tokens;
    }
    i = end;
  }
  return tokens;
}

std::size_t count_whitespace_tokens(std::string_view textv) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : textv) {
    if (text::is_space(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++n;
    }
  }
  return n;
}

std::size_t count_tokens(std::string_view textv, TokenScheme scheme, const TokenizerTable* table) {
  if (scheme == TokenScheme::whitespace) return count_whitespace_tokens(textv);
  if (table == nullptr) {
    throw Error(ErrorCode::config, "pluggable token scheme requested but no tokenizer table configured");
  }
  return table->count(textv);
}

}  // namespace cotkit
