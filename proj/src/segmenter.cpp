#include "cotkit/segmenter.hpp"

#include <fmt/format.h>

#include "cotkit/text_util.hpp"

namespace cotkit {

void SegmenterConfig::validate() const {
  if (markers.empty()) throw Error(ErrorCode::config, "segmenter needs at least one marker");
  for (const auto& m : markers) {
    if (m.empty()) throw Error(ErrorCode::config, "segmenter markers must be non-empty");
  }
  if (min_node_chars < 1) throw Error(ErrorCode::config, "min_node_chars must be >= 1");
  for (const auto& [open, close] : math_delimiters) {
    if (open.empty() || close.empty()) {
      throw Error(ErrorCode::config, "math delimiters must be non-empty");
    }
  }
}

SegmenterConfig SegmenterConfig::from_json(const Json& j) {
  SegmenterConfig c;
  if (!j.is_object()) throw Error(ErrorCode::config, "segmenter config must be a JSON object");
  try {
    if (j.contains("markers")) c.markers = j.at("markers").get<std::vector<std::string>>();
    if (j.contains("case_insensitive")) c.case_insensitive = j.at("case_insensitive").get<bool>();
    if (j.contains("paragraph_break")) {
      auto pb = j.at("paragraph_break").get<std::string>();
      if (pb == "any_newline") {
        c.paragraph_break = ParagraphBreak::any_newline;
      } else if (pb == "blank_line") {
        c.paragraph_break = ParagraphBreak::blank_line;
      } else {
        throw Error(ErrorCode::config, fmt::format("unknown paragraph_break '{}'", pb));
      }
    }
    if (j.contains("min_node_chars")) c.min_node_chars = j.at("min_node_chars").get<std::size_t>();
    if (j.contains("math_delimiters")) {
      c.math_delimiters.clear();
      for (const auto& pair : j.at("math_delimiters")) {
        c.math_delimiters.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::config, fmt::format("bad segmenter config: {}", e.what()));
  }
  c.validate();
  return c;
}

Json SegmenterConfig::to_json() const {
  Json delims = Json::array();
  for (const auto& [o, c] : math_delimiters) delims.push_back(Json::array({o, c}));
  return Json{{"markers", markers},
              {"case_insensitive", case_insensitive},
              {"paragraph_break",
               paragraph_break == ParagraphBreak::any_newline ? "any_newline" : "blank_line"},
              {"min_node_chars", min_node_chars},
              {"math_delimiters", delims}};
}

namespace {

bool is_sentence_end(char c) { return c == '.' || c == '!' || c == '?'; }

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

class Scanner {
 public:
  Scanner(std::string_view text, const SegmenterConfig& config) : text_(text), config_(config) {}

  std::vector<std::size_t> run() {
    const std::size_t n = text_.size();
    std::size_t i = 0;
    while (i < n) {
      char c = text_[i];
      if (text::is_space(c)) {
        std::size_t end = whitespace_end(i);
        if (is_paragraph_break(i, end)) {
          math_close_ = nullptr;
          cut(end);
        }
        i = end;
        continue;
      }
      if (math_close_ != nullptr) {
        if (text_.compare(i, math_close_->size(), *math_close_) == 0) {
          i += math_close_->size();
          math_close_ = nullptr;
        } else {
          i += (c == '\\' && i + 1 < n) ? 2 : 1;
        }
        continue;
      }
      if (const std::string* close = math_open_at(i)) {
        math_close_ = close;
        i += opener_len_;
        continue;
      }
      if (c == '\\' && i + 1 < n && text_[i + 1] == '$') {
        i += 2;
        continue;
      }
      if (is_sentence_end(c)) {
        std::size_t p = i;
        while (p < n && is_sentence_end(text_[p])) ++p;
        if (p < n && text::is_space(text_[p])) {
          std::size_t q = whitespace_end(p);
          if (is_paragraph_break(p, q)) {
            i = p;  // the break itself starts the next node
            continue;
          }
          if (q < n && marker_at(q)) cut(q);
          i = q;
          continue;
        }
        i = p;
        continue;
      }
      ++i;
    }
    return cuts_;
  }

 private:
  std::size_t whitespace_end(std::size_t i) const {
    while (i < text_.size() && text::is_space(text_[i])) ++i;
    return i;
  }

  bool is_paragraph_break(std::size_t begin, std::size_t end) const {
    std::size_t newlines = 0;
    for (std::size_t k = begin; k < end; ++k) {
      if (text_[k] == '\n') ++newlines;
    }
    // A lone "\r" still counts as a line break.
    if (newlines == 0) {
      for (std::size_t k = begin; k < end; ++k) {
        if (text_[k] == '\r') ++newlines;
      }
    }
    return config_.paragraph_break == ParagraphBreak::any_newline ? newlines >= 1 : newlines >= 2;
  }

  const std::string* math_open_at(std::size_t i) {
    for (const auto& [open, close] : config_.math_delimiters) {
      if (text_.compare(i, open.size(), open) == 0) {
        opener_len_ = open.size();
        return &close;
      }
    }
    return nullptr;
  }

  bool marker_at(std::size_t q) const {
    for (const auto& m : config_.markers) {
      std::size_t after = q + m.size();
      if (after >= text_.size()) continue;
      std::string_view head = text_.substr(q, m.size());
      bool same = config_.case_insensitive ? text::iequals(head, m) : head == m;
      if (same && (text::is_space(text_[after]) || text_[after] == ',')) return true;
    }
    return false;
  }

  // Content so far must be more than whitespace or a bare think tag.
  bool node_has_content(std::size_t end) const {
    std::string_view body = text::trim(text_.substr(node_start_, end - node_start_));
    return !body.empty() && body != "<think>";
  }

  void cut(std::size_t pos) {
    if (pos >= text_.size() || pos <= node_start_ || !node_has_content(pos)) return;
    cuts_.push_back(pos);
    node_start_ = pos;
  }

  std::string_view text_;
  const SegmenterConfig& config_;
  std::vector<std::size_t> cuts_;
  std::size_t node_start_ = 0;
  const std::string* math_close_ = nullptr;
  std::size_t opener_len_ = 0;
};

struct Span {
  std::size_t begin;
  std::size_t end;
};

}  // namespace

SourceNodeSequence segment(std::string_view text, const SegmenterConfig& config, std::string trace_id) {
  config.validate();
  if (text.empty()) throw Error(ErrorCode::usage, "cannot segment empty text");

  std::vector<std::size_t> cuts = Scanner(text, config).run();
  std::vector<Span> spans;
  std::size_t start = 0;
  for (std::size_t c : cuts) {
    spans.push_back({start, c});
    start = c;
  }
  spans.push_back({start, text.size()});

  auto body = [&](const Span& s) { return text.substr(s.begin, s.end - s.begin); };

  // A closing think tag on its own line belongs to the reasoning before it;
  // short nodes are absorbed by their predecessor.
  std::vector<Span> merged;
  for (const Span& s : spans) {
    bool closing_tag = text::trim(body(s)) == "</think>";
    bool too_short = utf8_length(body(s)) < config.min_node_chars;
    if (!merged.empty() && (closing_tag || too_short)) {
      merged.back().end = s.end;
    } else {
      merged.push_back(s);
    }
  }
  while (merged.size() > 1 && utf8_length(body(merged.front())) < config.min_node_chars) {
    merged[1].begin = merged[0].begin;
    merged.erase(merged.begin());
  }

  SourceNodeSequence seq;
  seq.trace_id = std::move(trace_id);
  seq.nodes.reserve(merged.size());
  int index = 1;
  for (const Span& s : merged) {
    seq.nodes.push_back({index, node_label(index), std::string(body(s))});
    ++index;
  }
  return seq;
}

std::string reassemble(const SourceNodeSequence& seq) {
  std::size_t total = 0;
  for (const auto& n : seq.nodes) total += n.text.size();
  std::string out;
  out.reserve(total);
  for (const auto& n : seq.nodes) out += n.text;
  return out;
}

}  // namespace cotkit
