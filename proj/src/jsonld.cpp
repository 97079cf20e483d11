#include "geometer/jsonld.hpp"

#include "geometer/text.hpp"

namespace geometer::entity {

namespace {

std::size_t find_ci(std::string_view haystack, std::string_view needle,
                    std::size_t from) {
  if (needle.empty() || haystack.size() < needle.size()) {
    return std::string_view::npos;
  }
  for (std::size_t i = from; i + needle.size() <= haystack.size(); ++i) {
    bool match = true;
    for (std::size_t k = 0; k < needle.size(); ++k) {
      if (text::fold_char(haystack[i + k]) != text::fold_char(needle[k])) {
        match = false;
        break;
      }
    }
    if (match) return i;
  }
  return std::string_view::npos;
}

// Value of the type attribute inside a <script ...> opening tag.
std::string script_type(std::string_view tag) {
  std::size_t pos = find_ci(tag, "type", 0);
  while (pos != std::string_view::npos) {
    std::size_t eq = pos + 4;
    while (eq < tag.size() && text::is_space(tag[eq])) ++eq;
    if (eq < tag.size() && tag[eq] == '=') {
      ++eq;
      while (eq < tag.size() && text::is_space(tag[eq])) ++eq;
      if (eq < tag.size() && (tag[eq] == '"' || tag[eq] == '\'')) {
        char quote = tag[eq];
        std::size_t close = tag.find(quote, eq + 1);
        if (close != std::string_view::npos) {
          return text::fold(tag.substr(eq + 1, close - eq - 1));
        }
      } else if (eq < tag.size()) {
        // unquoted attribute value
        std::size_t end = eq;
        while (end < tag.size() && !text::is_space(tag[end]) &&
               tag[end] != '>') {
          ++end;
        }
        return text::fold(tag.substr(eq, end - eq));
      }
    }
    pos = find_ci(tag, "type", pos + 1);
  }
  return "";
}

bool is_ld_json(std::string_view type_value) {
  std::string_view value = type_value;
  if (std::size_t semi = value.find(';'); semi != std::string_view::npos) {
    value = value.substr(0, semi);
  }
  return text::trim(value) == "application/ld+json";
}

void flatten_into(nlohmann::json doc, std::vector<nlohmann::json>& out) {
  if (doc.is_array()) {
    for (auto& item : doc) flatten_into(std::move(item), out);
    return;
  }
  if (doc.is_object() && doc.contains("@graph") && doc["@graph"].is_array()) {
    for (auto& item : doc["@graph"]) flatten_into(std::move(item), out);
    return;
  }
  if (doc.is_object()) out.push_back(std::move(doc));
}

void parse_block(std::string_view body, std::size_t block_index,
                 std::size_t byte_offset, ExtractedDocuments& result) {
  nlohmann::json parsed =
      nlohmann::json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) {
    result.diagnostics.push_back(
        {block_index, byte_offset, "structured-data block is not valid JSON"});
    return;
  }
  flatten_into(std::move(parsed), result.documents);
}

}  // namespace

ExtractedDocuments extract_jsonld(std::string_view html) {
  ExtractedDocuments result;
  std::size_t cursor = 0;
  std::size_t block_index = 0;
  while (true) {
    std::size_t open = find_ci(html, "<script", cursor);
    if (open == std::string_view::npos) break;
    std::size_t tag_end = html.find('>', open);
    if (tag_end == std::string_view::npos) break;
    std::size_t close = find_ci(html, "</script", tag_end + 1);
    if (close == std::string_view::npos) break;
    std::string_view tag = html.substr(open, tag_end - open + 1);
    if (is_ld_json(script_type(tag))) {
      std::string_view body =
          html.substr(tag_end + 1, close - tag_end - 1);
      parse_block(text::trim(body), block_index, tag_end + 1, result);
      ++block_index;
    }
    cursor = close + 1;
  }
  return result;
}

ExtractedDocuments extract_raw_jsonld(std::string_view json_bytes) {
  ExtractedDocuments result;
  parse_block(text::trim(json_bytes), 0, 0, result);
  return result;
}

}  // namespace geometer::entity
