#pragma once

// Rule-based trace segmentation. A new node starts at every paragraph break
// and at every sentence ending that is immediately followed by a sentence
// opening with a discourse marker. Every other sentence ending stays inside
// its node. The output always partitions the input byte-for-byte.

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cotkit/records.hpp"

namespace cotkit {

enum class ParagraphBreak {
  any_newline,  // any run of whitespace containing a newline
  blank_line,   // the run must contain at least two newlines
};

struct SegmenterConfig {
  std::vector<std::string> markers{"However", "But", "Alternatively", "So", "Now"};
  bool case_insensitive = true;
  ParagraphBreak paragraph_break = ParagraphBreak::any_newline;
  std::size_t min_node_chars = 1;
  // Longer openers must come first where one is a prefix of another.
  std::vector<std::pair<std::string, std::string>> math_delimiters{
      {"$$", "$$"}, {"\\(", "\\)"}, {"\\[", "\\]"}, {"$", "$"}};

  /// Throws Error(config) on an empty marker list or min_node_chars == 0.
  void validate() const;

  /// Missing keys keep their defaults.
  static SegmenterConfig from_json(const Json& j);
  Json to_json() const;
};

/// Throws Error(usage) on empty text.
SourceNodeSequence segment(std::string_view text, const SegmenterConfig& config = {},
                           std::string trace_id = {});

std::string reassemble(const SourceNodeSequence& seq);

}  // namespace cotkit
