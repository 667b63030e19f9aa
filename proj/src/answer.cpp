#include "cotkit/answer.hpp"

#include <array>
#include <regex>

#include "cotkit/text_util.hpp"

namespace cotkit {

using boost::multiprecision::cpp_int;

std::string format_rational(const Rational& r) {
  cpp_int num = boost::multiprecision::numerator(r);
  cpp_int den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

// Index of the '}' matching the '{' at `open`, or npos.
std::size_t matching_brace(std::string_view s, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      ++i;
      continue;
    }
    if (s[i] == '{') {
      ++depth;
    } else if (s[i] == '}') {
      if (--depth == 0) return i;
    }
  }
  return std::string_view::npos;
}

bool is_trailing_punct(char c) {
  return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?';
}

constexpr std::array<std::string_view, 10> kWrapperCommands{
    "\\boxed", "\\fbox", "\\text", "\\textbf", "\\textit", "\\mathrm",
    "\\mathbf", "\\mbox", "\\displaystyle", "\\operatorname"};

// Removes one layer of markup wrapping the whole string, if any.
bool strip_wrapper(std::string& s) {
  auto enclosed = [&](std::string_view open, std::string_view close) {
    return s.size() >= open.size() + close.size() && s.compare(0, open.size(), open) == 0 &&
           s.compare(s.size() - close.size(), close.size(), close) == 0;
  };
  auto unwrap = [&](std::size_t open_len, std::size_t close_len) {
    s = std::string(text::trim(std::string_view(s).substr(open_len, s.size() - open_len - close_len)));
    return true;
  };
  if (enclosed("$$", "$$") && s.size() >= 4) return unwrap(2, 2);
  if (enclosed("$", "$") && s.size() >= 2) return unwrap(1, 1);
  if (enclosed("\\(", "\\)")) return unwrap(2, 2);
  if (enclosed("\\[", "\\]")) return unwrap(2, 2);
  if (enclosed("**", "**") && s.size() >= 4) return unwrap(2, 2);
  for (std::string_view cmd : kWrapperCommands) {
    if (s.compare(0, cmd.size(), cmd) != 0) continue;
    std::size_t open = cmd.size();
    while (open < s.size() && s[open] == ' ') ++open;
    if (open >= s.size() || s[open] != '{') continue;
    if (matching_brace(s, open) == s.size() - 1) return unwrap(open + 1, 1);
  }
  if (!s.empty() && s.front() == '{' && matching_brace(s, 0) == s.size() - 1) return unwrap(1, 1);
  return false;
}

std::optional<Rational> parse_decimal(const std::string& s) {
  static const std::regex kDecimal(R"(^([+-]?)(\d*)(?:\.(\d*))?$)");
  std::smatch m;
  if (!std::regex_match(s, m, kDecimal)) return std::nullopt;
  std::string whole = m[2].str();
  std::string frac = m[3].str();
  if (whole.empty() && frac.empty()) return std::nullopt;
  // cpp_int reads a leading 0 as an octal prefix.
  std::string digits = whole + frac;
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
  cpp_int num(digits.empty() ? std::string("0") : digits);
  cpp_int den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  Rational r(num, den);
  if (m[1].str() == "-") r = -r;
  return r;
}

std::optional<Rational> parse_number(std::string s) {
  // LaTeX spacing inside numbers: 1{,}000 and 1\,000.
  for (std::size_t p; (p = s.find("{,}")) != std::string::npos;) s.replace(p, 3, ",");
  for (std::size_t p; (p = s.find("\\,")) != std::string::npos;) s.erase(p, 2);
  for (std::size_t p; (p = s.find("\\!")) != std::string::npos;) s.erase(p, 2);

  static const std::regex kThousands(R"(^[+-]?\d{1,3}(,\d{3})+(\.\d+)?$)");
  if (std::regex_match(s, kThousands)) s.erase(std::remove(s.begin(), s.end(), ','), s.end());

  if (auto d = parse_decimal(s)) return d;

  static const std::regex kSlash(R"(^([+-]?[\d.]+)\s*/\s*([+-]?[\d.]+)$)");
  static const std::regex kFrac(R"(^(-?)\\[dt]?frac\s*\{\s*([+-]?[\d.]+)\s*\}\s*\{\s*([+-]?[\d.]+)\s*\}$)");
  std::smatch m;
  std::optional<Rational> num, den;
  bool negate = false;
  if (std::regex_match(s, m, kSlash)) {
    num = parse_decimal(m[1].str());
    den = parse_decimal(m[2].str());
  } else if (std::regex_match(s, m, kFrac)) {
    negate = m[1].str() == "-";
    num = parse_decimal(m[2].str());
    den = parse_decimal(m[3].str());
  }
  if (!num || !den || *den == 0) return std::nullopt;
  Rational r = *num / *den;
  return negate ? Rational(-r) : r;
}

std::string collapse_spaces(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : s) {
    if (text::is_space(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

struct Pass {
  std::string canonical;
  std::optional<Rational> numeric;
};

Pass normalize_once(std::string_view raw) {
  std::string s(text::trim(raw));
  bool changed = true;
  while (changed) {
    changed = false;
    while (!s.empty() && is_trailing_punct(s.back())) {
      s.pop_back();
      s = std::string(text::trim(s));
      changed = true;
    }
    if (strip_wrapper(s)) changed = true;
  }
  if (auto n = parse_number(s)) return {format_rational(*n), n};
  return {text::to_lower(collapse_spaces(s)), std::nullopt};
}

// Value text following position `pos`: the rest of the line (or the next
// non-empty line when this one is empty), cut at the first sentence end.
std::string take_value(std::string_view text, std::size_t pos) {
  auto skip_lead = [&](std::size_t p) {
    while (p < text.size() && (text[p] == ' ' || text[p] == '\t' || text[p] == ':' ||
                               text[p] == '*' || text[p] == '=')) {
      ++p;
    }
    return p;
  };
  pos = skip_lead(pos);
  if (text::istarts_with(text.substr(pos), "is ") || text::istarts_with(text.substr(pos), "is:")) {
    pos = skip_lead(pos + 2);
  }
  std::string_view rest = text.substr(pos);
  std::size_t eol = rest.find('\n');
  std::string_view line = rest.substr(0, eol);
  if (text::trim(line).empty() && eol != std::string_view::npos) {
    std::string_view tail = rest.substr(eol + 1);
    while (!tail.empty()) {
      std::size_t e = tail.find('\n');
      std::string_view candidate = tail.substr(0, e);
      if (!text::trim(candidate).empty()) {
        line = candidate;
        break;
      }
      if (e == std::string_view::npos) break;
      tail = tail.substr(e + 1);
    }
  }
  std::size_t cut = line.size();
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    bool at_end = i + 1 == line.size();
    bool before_space = !at_end && text::is_space(line[i + 1]);
    if ((c == '.' || c == '!' || c == '?') && before_space) {
      cut = i;
      break;
    }
    if ((c == ',' || c == ';') && before_space) {
      cut = i;
      break;
    }
  }
  std::string value(text::trim(line.substr(0, cut)));
  while (!value.empty() && value.back() == '*') value.pop_back();
  return std::string(text::trim(value));
}

// Last case-insensitive whole-phrase occurrence of `phrase`.
std::size_t rfind_phrase(std::string_view hay, std::string_view phrase) {
  std::size_t found = std::string_view::npos;
  for (std::size_t p = text::ifind(hay, phrase); p != std::string_view::npos;
       p = text::ifind(hay, phrase, p + 1)) {
    bool left_ok = p == 0 || !text::is_alnum(hay[p - 1]);
    std::size_t after = p + phrase.size();
    bool right_ok = after >= hay.size() || !text::is_alnum(hay[after]);
    if (left_ok && right_ok) found = p;
  }
  return found;
}

std::optional<CanonicalAnswer> from_value(const std::string& value) {
  if (text::trim(value).empty()) return std::nullopt;
  CanonicalAnswer a = normalize_answer(value);
  if (a.canonical.empty()) return std::nullopt;
  return a;
}

}  // namespace

CanonicalAnswer normalize_answer(std::string_view raw) {
  CanonicalAnswer out;
  out.surface = std::string(text::trim(raw));
  Pass p = normalize_once(raw);
  for (int guard = 0; guard < 16; ++guard) {
    Pass again = normalize_once(p.canonical);
    if (again.canonical == p.canonical) break;
    p = std::move(again);
  }
  out.canonical = std::move(p.canonical);
  out.numeric = std::move(p.numeric);
  return out;
}

std::optional<std::string> last_boxed(std::string_view textv) {
  std::optional<std::string> best;
  std::size_t best_pos = 0;
  for (std::string_view cmd : {std::string_view("\\boxed"), std::string_view("\\fbox")}) {
    for (std::size_t p = textv.find(cmd); p != std::string_view::npos; p = textv.find(cmd, p + 1)) {
      std::size_t open = p + cmd.size();
      while (open < textv.size() && textv[open] == ' ') ++open;
      if (open >= textv.size() || textv[open] != '{') continue;
      std::size_t close = matching_brace(textv, open);
      if (close == std::string_view::npos) continue;
      if (!best || p >= best_pos) {
        best = std::string(textv.substr(open + 1, close - open - 1));
        best_pos = p;
      }
    }
  }
  return best;
}

std::optional<CanonicalAnswer> extract_answer(std::string_view node_text) {
  if (auto boxed = last_boxed(node_text)) {
    if (auto a = from_value(*boxed)) return a;
  }
  if (std::size_t p = rfind_phrase(node_text, "final answer"); p != std::string_view::npos) {
    if (auto a = from_value(take_value(node_text, p + 12))) return a;
  }
  std::size_t answer_is = rfind_phrase(node_text, "answer is");
  std::size_t equals = rfind_phrase(node_text, "equals");
  std::size_t best = std::string_view::npos;
  std::size_t len = 0;
  if (answer_is != std::string_view::npos) {
    best = answer_is;
    len = 9;
  }
  if (equals != std::string_view::npos && (best == std::string_view::npos || equals > best)) {
    best = equals;
    len = 6;
  }
  if (best != std::string_view::npos) return from_value(take_value(node_text, best + len));
  return std::nullopt;
}

bool has_final_answer_marker(std::string_view node_text) {
  return last_boxed(node_text).has_value() || node_text.find("Final Answer") != std::string_view::npos;
}

bool answers_match(const CanonicalAnswer& a, const CanonicalAnswer& b) {
  if (a.numeric && b.numeric) return *a.numeric == *b.numeric;
  return a.canonical == b.canonical;
}

}  // namespace cotkit
