#include "skillmap/textprep.hpp"

#include "skillmap/error.hpp"
#include "skillmap/text_util.hpp"

#include <algorithm>
#include <array>

namespace skillmap {

std::string_view to_string(DocumentFormat format) noexcept {
  switch (format) {
    case DocumentFormat::txt: return "txt";
    case DocumentFormat::html: return "html";
    case DocumentFormat::xml: return "xml";
    case DocumentFormat::pre_extracted: return "pre_extracted";
  }
  return "txt";
}

std::optional<DocumentFormat> parse_document_format(std::string_view name) {
  const std::string n = text::to_lower(text::trim(name));
  if (n == "txt" || n == "text") return DocumentFormat::txt;
  if (n == "html" || n == "htm") return DocumentFormat::html;
  if (n == "xml") return DocumentFormat::xml;
  if (n == "pre_extracted" || n == "pre-extracted") return DocumentFormat::pre_extracted;
  return std::nullopt;
}

std::optional<DocumentFormat> format_from_filename(std::string_view filename) {
  const std::size_t dot = filename.rfind('.');
  if (dot == std::string_view::npos) return std::nullopt;
  const std::string ext = text::to_lower(filename.substr(dot + 1));
  if (ext == "txt" || ext == "text" || ext == "md") return DocumentFormat::txt;
  if (ext == "html" || ext == "htm" || ext == "xhtml") return DocumentFormat::html;
  if (ext == "xml") return DocumentFormat::xml;
  return std::nullopt;
}

void PrepConfig::validate() const {
  if (max_size_bytes == 0) throw Error(ErrorCode::ConfigError, "prep.max_size_bytes must be > 0");
  if (chunk_size_limit < kMinChunkSizeLimit) {
    throw Error(ErrorCode::ConfigError,
                "prep.chunk_size_limit must be >= " + std::to_string(kMinChunkSizeLimit));
  }
  if (supported_formats.empty()) {
    throw Error(ErrorCode::ConfigError, "prep.supported_formats must not be empty");
  }
}

bool PrepConfig::supports(DocumentFormat format) const noexcept {
  return std::find(supported_formats.begin(), supported_formats.end(), format) !=
         supported_formats.end();
}

RawDocument validate_document(const RawDocument& doc, const PrepConfig& config) {
  if (!config.supports(doc.declared_format)) {
    throw Error(ErrorCode::UnsupportedFormat,
                "format '" + std::string(to_string(doc.declared_format)) + "' is not enabled");
  }
  if (doc.size_bytes() > config.max_size_bytes) {
    throw Error(ErrorCode::OversizeDocument,
                "document is " + std::to_string(doc.size_bytes()) + " bytes, limit is " +
                    std::to_string(config.max_size_bytes));
  }
  const std::string_view body = text::strip_utf8_bom(doc.bytes);
  if (!text::is_valid_utf8(body)) {
    throw Error(ErrorCode::EncodingError, "document '" + doc.name + "' is not valid UTF-8");
  }
  if (doc.declared_format == DocumentFormat::html || doc.declared_format == DocumentFormat::xml) {
    const std::string_view t = text::trim(body);
    if (t.empty() || t.front() != '<') {
      throw Error(ErrorCode::FormatMismatch, "declared " +
                                                 std::string(to_string(doc.declared_format)) +
                                                 " but content does not start with markup");
    }
  }
  return doc;
}

std::string extract_text(const RawDocument& doc) {
  const std::string_view body = text::strip_utf8_bom(doc.bytes);
  switch (doc.declared_format) {
    case DocumentFormat::html: return extract_html_text(body);
    case DocumentFormat::xml: return extract_xml_text(body);
    case DocumentFormat::txt:
    case DocumentFormat::pre_extracted: break;
  }
  return std::string(body);
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

struct PassResult {
  std::string text;
  std::size_t artifacts = 0;
  std::size_t digits = 0;
};

// C0 controls other than tab/newline, plus DEL. CR is normalised, not removed.
bool is_stripped_control(unsigned char c) {
  return (c < 0x20 && c != '\t' && c != '\n' && c != '\r') || c == 0x7F;
}

std::string normalize_controls(std::string_view in, std::size_t& removed) {
  std::string out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    const auto c = static_cast<unsigned char>(in[i]);
    if (c == '\r') {
      out.push_back('\n');
      if (i + 1 < in.size() && in[i + 1] == '\n') ++i;
    } else if (is_stripped_control(c)) {
      ++removed;
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

// Length of a citation marker `[n]` / `[n, m, ...]` (n up to 3 digits) at `i`, else 0.
std::size_t citation_marker_length(std::string_view s, std::size_t i, std::size_t& digits) {
  if (s[i] != '[') return 0;
  std::size_t k = i + 1;
  digits = 0;
  for (;;) {
    std::size_t run = 0;
    while (k < s.size() && is_digit(s[k]) && run < 4) ++k, ++run;
    if (run == 0 || run > 3) return 0;
    digits += run;
    while (k < s.size() && (s[k] == ' ' || s[k] == '\t')) ++k;
    if (k >= s.size()) return 0;
    if (s[k] == ']') return k - i + 1;
    if (s[k] != ',') return 0;
    ++k;
    while (k < s.size() && (s[k] == ' ' || s[k] == '\t')) ++k;
  }
}

bool is_trailing_punct(char c) {
  return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?' || c == ')';
}

std::string remove_citation_markers(std::string_view in, std::size_t& artifacts,
                                    std::size_t& digits) {
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    std::size_t marker_digits = 0;
    const std::size_t len = citation_marker_length(in, i, marker_digits);
    if (len == 0) {
      out.push_back(in[i++]);
      continue;
    }
    ++artifacts;
    digits += marker_digits;
    i += len;
    // "word [3]." -> "word." rather than "word ."
    if (i >= in.size() || is_trailing_punct(in[i]) || in[i] == '\n') {
      while (!out.empty() && (out.back() == ' ' || out.back() == '\t')) out.pop_back();
    }
  }
  return out;
}

bool is_letterish(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || u >= 0x80 || c == ')' ||
         c == '"' || c == '\'';
}

// Superscript digits: U+00B2 U+00B3 U+00B9 (C2 xx) and U+2070, U+2074..U+2079 (E2 81 xx).
std::size_t superscript_digit_length(std::string_view s, std::size_t i) {
  const auto b = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  if (i + 1 < s.size() && b(i) == 0xC2 && (b(i + 1) == 0xB2 || b(i + 1) == 0xB3 || b(i + 1) == 0xB9))
    return 2;
  if (i + 2 < s.size() && b(i) == 0xE2 && b(i + 1) == 0x81 &&
      (b(i + 2) == 0xB0 || (b(i + 2) >= 0xB4 && b(i + 2) <= 0xB9)))
    return 3;
  return 0;
}

std::string remove_footnote_markers(std::string_view in, std::size_t& artifacts,
                                    std::size_t& digits) {
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    const char c = in[i];
    // "... sentence.12 Next" : 1-3 ASCII digits glued to sentence-final punctuation.
    if ((c == '.' || c == '!' || c == '?') && i > 0 && is_letterish(in[i - 1])) {
      std::size_t k = i + 1;
      while (k < in.size() && is_digit(in[k]) && k - i <= 3) ++k;
      const std::size_t run = k - i - 1;
      if (run >= 1 && run <= 3 && (k == in.size() || text::is_space(in[k]))) {
        out.push_back(c);
        ++artifacts;
        digits += run;
        i = k;
        continue;
      }
    }
    // Unicode superscript digit runs attached to a preceding non-space character.
    if (const std::size_t len = superscript_digit_length(in, i);
        len > 0 && !out.empty() && !text::is_space(out.back())) {
      std::size_t k = i;
      while (k < in.size()) {
        const std::size_t l = superscript_digit_length(in, k);
        if (l == 0) break;
        k += l;
      }
      ++artifacts;
      i = k;
      continue;
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

std::string normalize_whitespace(std::string_view in) {
  // Collapse horizontal whitespace and strip it around newlines.
  std::string lines;
  lines.reserve(in.size());
  bool pending_space = false;
  for (char c : in) {
    if (c == ' ' || c == '\t' || c == '\v' || c == '\f') {
      pending_space = true;
    } else if (c == '\n') {
      pending_space = false;
      lines.push_back('\n');
    } else {
      if (pending_space && !lines.empty() && lines.back() != '\n') lines.push_back(' ');
      pending_space = false;
      lines.push_back(c);
    }
  }
  std::string out;
  out.reserve(lines.size());
  std::size_t newline_run = 0;
  for (char c : lines) {
    if (c == '\n') {
      if (++newline_run <= 2) out.push_back('\n');
    } else {
      newline_run = 0;
      out.push_back(c);
    }
  }
  return std::string(text::trim(out));
}

PassResult clean_pass(std::string_view raw) {
  PassResult r;
  std::string s = normalize_controls(raw, r.artifacts);
  // Removing one marker can expose another ("[1[2]]"), so iterate to a fixpoint.
  for (;;) {
    const std::size_t before = r.artifacts;
    s = remove_citation_markers(s, r.artifacts, r.digits);
    if (r.artifacts == before) break;
  }
  s = remove_footnote_markers(s, r.artifacts, r.digits);
  r.text = normalize_whitespace(s);
  return r;
}

}  // namespace

CleanText clean_text(std::string_view raw, std::string source_name) {
  CleanText out;
  out.source_name = std::move(source_name);
  PassResult pass = clean_pass(raw);
  out.removed_artifact_count = pass.artifacts;
  out.removed_digit_count = pass.digits;
  // A single pass is idempotent for all practical input; the loop guarantees it.
  for (int guard = 0; guard < 8; ++guard) {
    PassResult again = clean_pass(pass.text);
    if (again.text == pass.text) break;
    out.removed_artifact_count += again.artifacts;
    out.removed_digit_count += again.digits;
    pass = std::move(again);
  }
  out.text = std::move(pass.text);
  return out;
}

namespace {

struct TokenSpan {
  std::size_t begin;
  std::size_t end;
};

bool ends_sentence(std::string_view token) {
  const char last = token.back();
  return last == '.' || last == '!' || last == '?';
}

}  // namespace

std::vector<Chunk> chunk_text(const CleanText& clean, std::size_t chunk_size_limit) {
  if (chunk_size_limit < kMinChunkSizeLimit) {
    throw Error(ErrorCode::InvalidArgument,
                "chunk_size_limit must be >= " + std::to_string(kMinChunkSizeLimit));
  }
  const std::string_view text = clean.text;
  std::vector<TokenSpan> tokens;
  for (std::string_view tok : text::split_whitespace(text)) {
    const auto begin = static_cast<std::size_t>(tok.data() - text.data());
    tokens.push_back({begin, begin + tok.size()});
  }
  if (tokens.empty()) {
    throw Error(ErrorCode::EmptyDocument,
                "document '" + clean.source_name + "' contains no tokens");
  }

  std::vector<Chunk> chunks;
  auto emit = [&](std::size_t first, std::size_t last) {  // [first, last)
    Chunk c;
    c.index = chunks.size();
    c.token_count = last - first;
    c.text = std::string(text.substr(tokens[first].begin, tokens[last - 1].end - tokens[first].begin));
    chunks.push_back(std::move(c));
  };

  std::size_t chunk_start = 0;  // first token of the chunk being filled
  std::size_t pos = 0;
  while (pos < tokens.size()) {
    std::size_t sentence_end = pos;
    while (sentence_end < tokens.size()) {
      const TokenSpan t = tokens[sentence_end++];
      if (ends_sentence(text.substr(t.begin, t.end - t.begin))) break;
    }
    const std::size_t sentence_len = sentence_end - pos;
    if ((pos - chunk_start) + sentence_len <= chunk_size_limit) {
      pos = sentence_end;
      continue;
    }
    if (pos > chunk_start) emit(chunk_start, pos);
    chunk_start = pos;
    // Hard-split a sentence that cannot fit on its own; the remainder keeps
    // filling the next chunk.
    while (sentence_end - chunk_start > chunk_size_limit) {
      emit(chunk_start, chunk_start + chunk_size_limit);
      chunk_start += chunk_size_limit;
    }
    pos = sentence_end;
  }
  if (pos > chunk_start) emit(chunk_start, pos);
  return chunks;
}

PreparedDocument prepare_document(const RawDocument& doc, const PrepConfig& config) {
  const RawDocument valid = validate_document(doc, config);
  PreparedDocument out;
  out.clean = clean_text(extract_text(valid), valid.name);
  out.chunks = chunk_text(out.clean, config.chunk_size_limit);
  return out;
}

}  // namespace skillmap
