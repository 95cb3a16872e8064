#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace skillmap {

enum class DocumentFormat { txt, html, xml, pre_extracted };

[[nodiscard]] std::string_view to_string(DocumentFormat format) noexcept;
[[nodiscard]] std::optional<DocumentFormat> parse_document_format(std::string_view name);
// Maps a file name extension (".htm", ".xml", ...) onto a format.
[[nodiscard]] std::optional<DocumentFormat> format_from_filename(std::string_view filename);

struct RawDocument {
  std::string name;
  DocumentFormat declared_format = DocumentFormat::txt;
  std::string bytes;

  [[nodiscard]] std::size_t size_bytes() const noexcept { return bytes.size(); }
};

inline constexpr std::size_t kDefaultMaxDocumentBytes = 20u * 1024u * 1024u;
inline constexpr std::size_t kDefaultChunkSizeLimit = 120;
inline constexpr std::size_t kMinChunkSizeLimit = 8;

struct PrepConfig {
  std::size_t max_size_bytes = kDefaultMaxDocumentBytes;
  std::size_t chunk_size_limit = kDefaultChunkSizeLimit;
  std::vector<DocumentFormat> supported_formats = {DocumentFormat::txt, DocumentFormat::html,
                                                   DocumentFormat::xml,
                                                   DocumentFormat::pre_extracted};

  void validate() const;
  [[nodiscard]] bool supports(DocumentFormat format) const noexcept;
};

struct CleanText {
  std::string text;
  std::string source_name;
  std::size_t removed_artifact_count = 0;
  // Digits deleted as part of citation / footnote markers.
  std::size_t removed_digit_count = 0;
};

struct Chunk {
  std::size_t index = 0;
  std::string text;
  std::size_t token_count = 0;
};

/// Checks format support, size, UTF-8 well-formedness and (for markup) that the
/// content actually starts with a tag. Returns the document unchanged.
RawDocument validate_document(const RawDocument& doc, const PrepConfig& config);

/// Plain text for a validated document. HTML drops script/style/head and breaks
/// lines at block elements; XML joins text nodes with newlines.
std::string extract_text(const RawDocument& doc);

std::string extract_html_text(std::string_view markup);
std::string extract_xml_text(std::string_view markup);

CleanText clean_text(std::string_view raw, std::string source_name = {});

/// Greedy sentence packing into chunks of at most `chunk_size_limit`
/// whitespace tokens; over-long sentences are hard-split.
std::vector<Chunk> chunk_text(const CleanText& clean,
                              std::size_t chunk_size_limit = kDefaultChunkSizeLimit);

struct PreparedDocument {
  CleanText clean;
  std::vector<Chunk> chunks;
};

PreparedDocument prepare_document(const RawDocument& doc, const PrepConfig& config);

}  // namespace skillmap
