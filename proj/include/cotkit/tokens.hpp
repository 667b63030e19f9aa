#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>

namespace cotkit {

enum class TokenScheme { whitespace, pluggable };

std::string_view to_string(TokenScheme s);
TokenScheme token_scheme_from_string(std::string_view s);

/// User-supplied subword vocabulary. Each whitespace-delimited word is split
/// greedily into the longest vocabulary pieces; bytes not covered by any
/// piece count as one token each.
class TokenizerTable {
 public:
  TokenizerTable() = default;
  explicit TokenizerTable(std::unordered_set<std::string> vocab);

  /// One vocabulary piece per line; blank lines ignored.
  static TokenizerTable load(const std::string& path);

  std::size_t count(std::string_view text) const;
  std::size_t size() const { return vocab_.size(); }

 private:
  std::unordered_set<std::string> vocab_;
  std::size_t longest_ = 0;
};

/// Counts maximal runs of non-whitespace characters.
std::size_t count_whitespace_tokens(std::string_view text);

/// Throws Error(config) when the pluggable scheme is requested without a
/// table.
std::size_t count_tokens(std::string_view text, TokenScheme scheme,
                         const TokenizerTable* table = nullptr);

/// Bundles a scheme with its optional table so stages can pass one value.
class TokenCounter {
 public:
  TokenCounter() = default;
  explicit TokenCounter(std::shared_ptr<const TokenizerTable> table)
      : scheme_(TokenScheme::pluggable), table_(std::move(table)) {}

  std::size_t operator()(std::string_view text) const {
    return count_tokens(text, scheme_, table_.get());
  }
  TokenScheme scheme() const { return scheme_; }

 private:
  TokenScheme scheme_ = TokenScheme::whitespace;
  std::shared_ptr<const TokenizerTable> table_;
};

}  // namespace cotkit
