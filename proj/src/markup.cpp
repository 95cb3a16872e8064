// Lenient HTML / XML text extraction.
//
// The tokenizer tolerates unclosed elements, stray end tags, unknown entities
// and bare '<' characters. It gives up (MalformedMarkup) only when a construct
// that must be terminated never is: a tag, comment, CDATA section or
// declaration running into end of input.

#include "skillmap/error.hpp"
#include "skillmap/text_util.hpp"
#include "skillmap/textprep.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace skillmap {
namespace {

struct NamedEntity {
  std::string_view name;
  char32_t cp;
};

constexpr std::array kEntities{
    NamedEntity{"amp", U'&'},      NamedEntity{"lt", U'<'},        NamedEntity{"gt", U'>'},
    NamedEntity{"quot", U'"'},     NamedEntity{"apos", U'\''},     NamedEntity{"nbsp", U' '},
    NamedEntity{"ndash", 0x2013},  NamedEntity{"mdash", 0x2014},   NamedEntity{"hellip", 0x2026},
    NamedEntity{"lsquo", 0x2018},  NamedEntity{"rsquo", 0x2019},   NamedEntity{"ldquo", 0x201C},
    NamedEntity{"rdquo", 0x201D},  NamedEntity{"copy", 0x00A9},    NamedEntity{"reg", 0x00AE},
    NamedEntity{"euro", 0x20AC},   NamedEntity{"pound", 0x00A3},   NamedEntity{"sect", 0x00A7},
    NamedEntity{"deg", 0x00B0},    NamedEntity{"middot", 0x00B7},  NamedEntity{"bull", 0x2022},
};

bool ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool ascii_digit(char c) { return c >= '0' && c <= '9'; }
bool hex_digit(char c) {
  return ascii_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    const std::size_t semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(s[i++]);
      continue;
    }
    const std::string_view body = s.substr(i + 1, semi - i - 1);
    bool decoded = false;
    if (body.size() >= 2 && body[0] == '#') {
      std::uint32_t cp = 0;
      bool ok = true;
      if (body[1] == 'x' || body[1] == 'X') {
        ok = body.size() > 2;
        for (std::size_t k = 2; ok && k < body.size(); ++k) {
          ok = hex_digit(body[k]) && cp <= 0x10FFFF;
          if (ok) {
            const char c = body[k];
            cp = cp * 16 + static_cast<std::uint32_t>(
                               ascii_digit(c) ? c - '0' : (c | 0x20) - 'a' + 10);
          }
        }
      } else {
        for (std::size_t k = 1; ok && k < body.size(); ++k) {
          ok = ascii_digit(body[k]) && cp <= 0x10FFFF;
          if (ok) cp = cp * 10 + static_cast<std::uint32_t>(body[k] - '0');
        }
      }
      if (ok && cp > 0 && cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF)) {
        text::append_utf8(out, static_cast<char32_t>(cp));
        decoded = true;
      }
    } else {
      for (const auto& e : kEntities) {
        if (e.name == body) {
          text::append_utf8(out, e.cp);
          decoded = true;
          break;
        }
      }
    }
    if (decoded) {
      i = semi + 1;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

enum class TokenKind { Text, Cdata, StartTag, EndTag };

struct Token {
  TokenKind kind;
  std::string_view value;  // text content or lowercased-on-demand tag name
  bool self_closing = false;
};

[[noreturn]] void malformed(std::string_view what, std::size_t pos) {
  throw Error(ErrorCode::MalformedMarkup,
              std::string(what) + " not terminated (offset " + std::to_string(pos) + ")");
}

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view s) : s_(s) {}

  bool next(Token& tok) {
    while (pos_ < s_.size()) {
      if (s_[pos_] != '<') {
        const std::size_t start = pos_;
        pos_ = s_.find('<', pos_ + 1);
        if (pos_ == std::string_view::npos) pos_ = s_.size();
        tok = {TokenKind::Text, s_.substr(start, pos_ - start)};
        return true;
      }
      const std::string_view rest = s_.substr(pos_);
      if (rest.starts_with("<!--")) {
        skip_past("-->", "comment");
        continue;
      }
      if (rest.starts_with("<![CDATA[")) {
        const std::size_t end = s_.find("]]>", pos_ + 9);
        if (end == std::string_view::npos) malformed("CDATA section", pos_);
        tok = {TokenKind::Cdata, s_.substr(pos_ + 9, end - pos_ - 9)};
        pos_ = end + 3;
        return true;
      }
      if (rest.starts_with("<!") || rest.starts_with("<?")) {
        skip_past(">", "declaration");
        continue;
      }
      if (rest.size() >= 3 && rest[1] == '/' && ascii_alpha(rest[2])) {
        const std::size_t name_start = pos_ + 2;
        std::size_t k = name_start;
        while (k < s_.size() && !text::is_space(s_[k]) && s_[k] != '>') ++k;
        const std::size_t close = s_.find('>', k);
        if (close == std::string_view::npos) malformed("end tag", pos_);
        tok = {TokenKind::EndTag, s_.substr(name_start, k - name_start)};
        pos_ = close + 1;
        return true;
      }
      if (rest.size() >= 2 && ascii_alpha(rest[1])) {
        const std::size_t name_start = pos_ + 1;
        std::size_t k = name_start;
        while (k < s_.size() && !text::is_space(s_[k]) && s_[k] != '>' && s_[k] != '/') ++k;
        const std::string_view name = s_.substr(name_start, k - name_start);
        char quote = 0;
        while (k < s_.size()) {
          const char c = s_[k];
          if (quote) {
            if (c == quote) quote = 0;
          } else if (c == '"' || c == '\'') {
            quote = c;
          } else if (c == '>') {
            break;
          }
          ++k;
        }
        if (k >= s_.size()) malformed("start tag", pos_);
        tok = {TokenKind::StartTag, name, k > name_start && s_[k - 1] == '/'};
        pos_ = k + 1;
        return true;
      }
      // A bare '<' that starts no construct is kept as text.
      tok = {TokenKind::Text, s_.substr(pos_, 1)};
      ++pos_;
      return true;
    }
    return false;
  }

  // Skips raw text up to (and including) the closing tag `</name`.
  void skip_raw_text(std::string_view name) {
    const std::string lowered = text::to_lower(s_.substr(pos_));
    const std::string needle = "</" + std::string(name);
    const std::size_t at = lowered.find(needle);
    if (at == std::string::npos) {
      pos_ = s_.size();
      return;
    }
    const std::size_t close = s_.find('>', pos_ + at);
    if (close == std::string_view::npos) malformed("end tag", pos_ + at);
    pos_ = close + 1;
  }

 private:
  void skip_past(std::string_view terminator, std::string_view what) {
    const std::size_t end = s_.find(terminator, pos_ + 2);
    if (end == std::string_view::npos) malformed(what, pos_);
    pos_ = end + terminator.size();
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

bool is_block_element(std::string_view name) {
  static constexpr std::array<std::string_view, 40> kBlocks{
      "p",      "div",     "br",      "li",       "ul",     "ol",     "h1",         "h2",
      "h3",     "h4",      "h5",      "h6",       "tr",     "table",  "section",    "article",
      "header", "footer",  "nav",     "blockquote", "pre",  "hr",     "td",         "th",
      "dd",     "dt",      "dl",      "form",     "main",   "aside",  "figure",     "figcaption",
      "address", "body",   "html",    "caption",  "thead",  "tbody",  "fieldset",   "details"};
  for (auto b : kBlocks) {
    if (b == name) return true;
  }
  return false;
}

class SegmentWriter {
 public:
  void add_text(std::string_view raw, bool decode) {
    const std::string t = decode ? decode_entities(raw) : std::string(raw);
    for (char c : t) {
      if (text::is_space(c)) {
        pending_space_ = !current_.empty();
      } else {
        if (pending_space_) current_.push_back(' ');
        pending_space_ = false;
        current_.push_back(c);
      }
    }
  }

  void boundary() {
    if (!current_.empty()) segments_.push_back(std::move(current_));
    current_.clear();
    pending_space_ = false;
  }

  std::string finish() {
    boundary();
    return text::join(segments_, "\n");
  }

 private:
  std::vector<std::string> segments_;
  std::string current_;
  bool pending_space_ = false;
};

}  // namespace

std::string extract_html_text(std::string_view markup) {
  Tokenizer tz(markup);
  SegmentWriter out;
  bool in_head = false;
  Token tok{};
  while (tz.next(tok)) {
    switch (tok.kind) {
      case TokenKind::Text:
        if (!in_head) out.add_text(tok.value, true);
        break;
      case TokenKind::Cdata:
        if (!in_head) out.add_text(tok.value, false);
        break;
      case TokenKind::StartTag: {
        const std::string name = text::to_lower(tok.value);
        if ((name == "script" || name == "style") && !tok.self_closing) {
          tz.skip_raw_text(name);
          break;
        }
        if (name == "head" && !tok.self_closing) {
          in_head = true;
          break;
        }
        if (name == "body") in_head = false;
        if (!in_head && is_block_element(name)) out.boundary();
        break;
      }
      case TokenKind::EndTag: {
        const std::string name = text::to_lower(tok.value);
        if (name == "head") {
          in_head = false;
          break;
        }
        if (!in_head && is_block_element(name)) out.boundary();
        break;
      }
    }
  }
  return out.finish();
}

std::string extract_xml_text(std::string_view markup) {
  Tokenizer tz(markup);
  std::vector<std::string> nodes;
  Token tok{};
  while (tz.next(tok)) {
    if (tok.kind != TokenKind::Text && tok.kind != TokenKind::Cdata) continue;
    const std::string decoded =
        tok.kind == TokenKind::Text ? decode_entities(tok.value) : std::string(tok.value);
    const std::string_view trimmed = text::trim(decoded);
    if (!trimmed.empty()) nodes.emplace_back(trimmed);
  }
  return text::join(nodes, "\n");
}

}  // namespace skillmap
