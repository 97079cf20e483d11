#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace geometer::entity {

struct ExtractionDiagnostic {
  std::size_t block_index = 0;  // position among ld+json blocks, 0-based
  std::size_t byte_offset = 0;  // offset of the block body in the page
  std::string message;
};

struct ExtractedDocuments {
  std::vector<nlohmann::json> documents;  // flattened entities, page order
  std::vector<ExtractionDiagnostic> diagnostics;
};

// Pulls every <script type="application/ld+json"> body out of the page and
// parses it. Top-level arrays and @graph containers are flattened into
// individual entities. Malformed blocks become diagnostics, never errors.
ExtractedDocuments extract_jsonld(std::string_view html);

// Same flattening for documents that are already raw JSON-LD (no HTML).
ExtractedDocuments extract_raw_jsonld(std::string_view json_bytes);

}  // namespace geometer::entity
