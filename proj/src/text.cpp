#include "geometer/text.hpp"

#include <algorithm>

namespace geometer::text {

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    while (i < n && is_space(s[i])) ++i;
    std::size_t start = i;
    while (i < n && !is_space(s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

bool is_word(std::string_view token) {
  return std::any_of(token.begin(), token.end(),
                     [](char c) { return is_alnum(c); });
}

std::size_t word_count(std::string_view s) {
  std::size_t count = 0;
  for (std::string_view tok : tokens(s)) {
    if (is_word(tok)) ++count;
  }
  return count;
}

std::string fold(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), fold_char);
  return out;
}

std::string normalize_token(std::string_view token) {
  std::size_t b = 0;
  std::size_t e = token.size();
  while (b < e && !is_alnum(token[b])) ++b;
  while (e > b && !is_alnum(token[e - 1])) --e;
  return fold(token.substr(b, e - b));
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_gap = false;
  for (char c : trim(s)) {
    if (is_space(c)) {
      in_gap = true;
      continue;
    }
    if (in_gap) {
      out.push_back(' ');
      in_gap = false;
    }
    out.push_back(c);
  }
  return out;
}

std::string tidy_sentence(std::string_view s) {
  std::string collapsed = collapse_whitespace(s);
  std::string out;
  out.reserve(collapsed.size());
  for (std::size_t i = 0; i < collapsed.size(); ++i) {
    char c = collapsed[i];
    if (c == ' ' && i + 1 < collapsed.size()) {
      char next = collapsed[i + 1];
      if (next == '.' || next == '!' || next == '?' || next == ',' ||
          next == ';' || next == ':' || next == ')' || next == ']') {
        continue;
      }
    }
    out.push_back(c);
  }
  return out;
}

namespace {

// Rewrites one line of Markdown into plain prose.
std::string strip_markdown_line(std::string_view line) {
  std::string_view rest = line;

  // leading blockquote / heading / list markers
  std::size_t i = 0;
  while (i < rest.size() && (rest[i] == ' ' || rest[i] == '\t')) ++i;
  std::size_t marker = i;
  while (marker < rest.size() && rest[marker] == '>') {
    ++marker;
    while (marker < rest.size() && rest[marker] == ' ') ++marker;
  }
  std::size_t h = marker;
  while (h < rest.size() && rest[h] == '#') ++h;
  if (h > marker && h < rest.size() && rest[h] == ' ') marker = h + 1;
  if (marker + 1 < rest.size() &&
      (rest[marker] == '-' || rest[marker] == '*' || rest[marker] == '+') &&
      rest[marker + 1] == ' ') {
    marker += 2;
  }
  rest = rest.substr(marker);

  std::string out;
  out.reserve(rest.size());
  for (std::size_t p = 0; p < rest.size(); ++p) {
    char c = rest[p];
    if (c == '*' || c == '_' || c == '`') continue;
    if (c == '!' && p + 1 < rest.size() && rest[p + 1] == '[') continue;
    if (c == '[') {
      std::size_t close = rest.find(']', p + 1);
      if (close != std::string_view::npos && close + 1 < rest.size() &&
          rest[close + 1] == '(') {
        std::size_t paren = rest.find(')', close + 2);
        if (paren != std::string_view::npos) {
          out.append(rest.substr(p + 1, close - p - 1));
          out.push_back(' ');
          out.push_back('(');
          out.append(rest.substr(close + 2, paren - close - 2));
          out.push_back(')');
          p = paren;
          continue;
        }
      }
      // bare "[1]"-style markers and unpaired brackets pass through
      out.push_back(c);
      continue;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string strip_markdown(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t start = 0;
  bool in_fence = false;
  while (start <= s.size()) {
    std::size_t nl = s.find('\n', start);
    std::string_view line = s.substr(
        start, nl == std::string_view::npos ? s.size() - start : nl - start);
    std::string_view trimmed = trim(line);
    if (trimmed.substr(0, 3) == "```") {
      in_fence = !in_fence;
    } else if (!in_fence) {
      out.append(strip_markdown_line(line));
      out.push_back('\n');
    } else {
      out.append(line);
      out.push_back('\n');
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return out;
}

}  // namespace geometer::text
