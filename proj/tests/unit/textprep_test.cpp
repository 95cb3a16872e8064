#include "skillmap/error.hpp"
#include "skillmap/text_util.hpp"
#include "skillmap/textprep.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace skillmap;

namespace {

RawDocument doc_of(std::string bytes, DocumentFormat f = DocumentFormat::txt) {
  return RawDocument{"doc", f, std::move(bytes)};
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no skillmap::Error thrown";
  return ErrorCode::InvalidArgument;
}

std::string words(std::size_t n, const std::string& w = "word") {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += (i ? " " : "") + w + std::to_string(i);
  return s;
}

std::vector<std::string> tokens_of(std::string_view s) {
  std::vector<std::string> out;
  for (auto t : text::split_whitespace(s)) out.emplace_back(t);
  return out;
}

std::string random_text(std::mt19937_64& rng, std::size_t len) {
  static const std::string alphabet =
      "abc XYZ 0123456789 .!?,;[]()%\n\n\t\r\x01\x07\x7f\"'\xc2\xb9\xc2\xb2";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s += alphabet[pick(rng)];
  return s;
}

}  // namespace

TEST(ValidateDocument, AcceptsSmallTextUnchanged) {
  const auto d = doc_of("hello you!");
  ASSERT_EQ(d.size_bytes(), 10u);
  const auto out = validate_document(d, PrepConfig{});
  EXPECT_EQ(out.bytes, d.bytes);
  EXPECT_EQ(out.name, d.name);
}

TEST(ValidateDocument, RejectsMarkupThatIsNotMarkup) {
  EXPECT_EQ(code_of([] { (void)validate_document(doc_of("plain words", DocumentFormat::html), {}); }),
            ErrorCode::FormatMismatch);
  EXPECT_EQ(code_of([] { (void)validate_document(doc_of("plain", DocumentFormat::xml), {}); }),
            ErrorCode::FormatMismatch);
  EXPECT_NO_THROW((void)validate_document(doc_of("  \n<p>x</p>", DocumentFormat::html), {}));
}

TEST(ValidateDocument, SizeLimitIsInclusive) {
  PrepConfig cfg;
  EXPECT_EQ(code_of([&] { (void)validate_document(doc_of(std::string(kDefaultMaxDocumentBytes + 1, 'a')), cfg); }),
            ErrorCode::OversizeDocument);
  EXPECT_NO_THROW((void)validate_document(doc_of(std::string(kDefaultMaxDocumentBytes, 'a')), cfg));
}

TEST(ValidateDocument, EncodingAndFormatSupport) {
  EXPECT_EQ(code_of([] { (void)validate_document(doc_of("bad \xff byte"), {}); }), ErrorCode::EncodingError);
  EXPECT_NO_THROW((void)validate_document(doc_of("\xEF\xBB\xBFwith bom"), {}));
  PrepConfig txt_only;
  txt_only.supported_formats = {DocumentFormat::txt};
  EXPECT_EQ(code_of([&] { (void)validate_document(doc_of("<a/>", DocumentFormat::xml), txt_only); }),
            ErrorCode::UnsupportedFormat);
}

TEST(FormatNames, ParseAndSniffFromFilename) {
  EXPECT_EQ(parse_document_format("html"), DocumentFormat::html);
  EXPECT_EQ(parse_document_format("pre_extracted"), DocumentFormat::pre_extracted);
  EXPECT_FALSE(parse_document_format("pdf").has_value());
  EXPECT_EQ(format_from_filename("a/b/page.HTM"), DocumentFormat::html);
  EXPECT_EQ(format_from_filename("x.xml"), DocumentFormat::xml);
  EXPECT_FALSE(format_from_filename("scan.pdf").has_value());
}

TEST(ExtractText, HtmlDropsScriptsAndDecodesEntities) {
  EXPECT_EQ(extract_text(doc_of("<p>A&amp;B</p><script>x</script><p>C</p>", DocumentFormat::html)), "A&B\nC");
}

TEST(ExtractText, HtmlHeadAndStyleAreDropped) {
  const auto t = extract_text(doc_of(
      "<html><head><title>T</title><style>p{}</style></head><body><h1>Head</h1>"
      "<div>one &lt;two&gt; &#233;&#x41;</div></body></html>",
      DocumentFormat::html));
  EXPECT_EQ(t, "Head\none <two> \xC3\xA9" "A");
}

TEST(ExtractText, XmlTextNodesInOrder) {
  EXPECT_EQ(extract_text(doc_of("<r><a>x</a><b>y</b></r>", DocumentFormat::xml)), "x\ny");
  EXPECT_EQ(extract_text(doc_of("<?xml version=\"1.0\"?><r><!-- c --><a><![CDATA[p<q]]></a></r>",
                                DocumentFormat::xml)),
            "p<q");
}

TEST(ExtractText, PlainFormatsAreVerbatim) {
  EXPECT_EQ(extract_text(doc_of("abc")), "abc");
  EXPECT_EQ(extract_text(doc_of("a <b> c", DocumentFormat::pre_extracted)), "a <b> c");
}

TEST(CleanText, RemovesCitationMarkerKeepsPercentages) {
  const auto c = clean_text("growth [12] rose 5%");
  EXPECT_EQ(c.text, "growth rose 5%");
  EXPECT_EQ(c.removed_artifact_count, 1u);
}

TEST(CleanText, CollapsesNewlineRuns) { EXPECT_EQ(clean_text("a\n\n\n\nb").text, "a\n\nb"); }

TEST(CleanText, EmptyIsIdentity) {
  const auto c = clean_text("");
  EXPECT_EQ(c.text, "");
  EXPECT_EQ(c.removed_artifact_count, 0u);
}

TEST(CleanText, ListMarkersAndLegalNumbers) {
  const auto c = clean_text("Shown before [1,2, 3]. Under Article 12 of the 2021 act [2021] rates hit 7.5%.");
  EXPECT_EQ(c.text, "Shown before. Under Article 12 of the 2021 act [2021] rates hit 7.5%.");
  EXPECT_EQ(c.removed_artifact_count, 1u);
  EXPECT_EQ(c.removed_digit_count, 3u);
}

TEST(CleanText, FootnoteDigitsAfterSentenceEnd) {
  const auto c = clean_text("Emissions fell.2 The next year rose.\xC2\xB9 Costs were 3.5 million.");
  EXPECT_EQ(c.text, "Emissions fell. The next year rose. Costs were 3.5 million.");
  EXPECT_EQ(c.removed_artifact_count, 2u);
}

TEST(CleanText, ControlCharactersAndSpaces) {
  const auto c = clean_text("  a\x01\x02 \t  b\r\nc\x7f  ");
  EXPECT_EQ(c.text, "a b\nc");
  EXPECT_EQ(c.removed_artifact_count, 3u);
}

TEST(CleanText, PropertiesOnRandomInput) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const std::string raw = random_text(rng, 1 + rng() % 200);
    const CleanText c = clean_text(raw);
    SCOPED_TRACE(raw);
    EXPECT_EQ(clean_text(c.text).text, c.text) << "idempotence";
    for (char ch : c.text) {
      const auto u = static_cast<unsigned char>(ch);
      EXPECT_FALSE(u <= 0x08) << "control character left";
    }
    EXPECT_EQ(c.text.find("\n\n\n"), std::string::npos);
    EXPECT_EQ(c.text, std::string(text::trim(c.text)));
    const auto digits = [](std::string_view s) {
      return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char x) { return x >= '0' && x <= '9'; }));
    };
    EXPECT_EQ(digits(c.text) + c.removed_digit_count, digits(raw)) << "digit preservation";
  }
}

TEST(ChunkText, ShortTextIsOneChunk) {
  const auto chunks = chunk_text(clean_text("one two three four five"), 120);
  ASSERT_EQ(chunks.size(), 1u);
  EXPECT_EQ(chunks[0].token_count, 5u);
  EXPECT_EQ(chunks[0].index, 0u);
}

TEST(ChunkText, SentencesThatCannotBeMergedStaySeparate) {
  const std::string text = words(80, "a") + ". " + words(80, "b") + ".";
  const auto chunks = chunk_text(clean_text(text), 120);
  ASSERT_EQ(chunks.size(), 2u);
  EXPECT_EQ(chunks[0].token_count, 80u);
  EXPECT_EQ(chunks[1].token_count, 80u);
}

TEST(ChunkText, LongSentenceIsHardSplit) {
  const auto chunks = chunk_text(clean_text(words(250)), 120);
  ASSERT_EQ(chunks.size(), 3u);
  EXPECT_EQ(chunks[0].token_count, 120u);
  EXPECT_EQ(chunks[1].token_count, 120u);
  EXPECT_EQ(chunks[2].token_count, 10u);
}

TEST(ChunkText, SmallSentencesArePacked) {
  const auto chunks = chunk_text(clean_text("a b c. d e f. g h i j."), 8);
  ASSERT_EQ(chunks.size(), 2u);
  EXPECT_EQ(chunks[0].text, "a b c. d e f.");
  EXPECT_EQ(chunks[1].text, "g h i j.");
}

TEST(ChunkText, Errors) {
  EXPECT_EQ(code_of([] { (void)chunk_text(clean_text("a b"), 7); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { (void)chunk_text(clean_text(" \n\t "), 120); }), ErrorCode::EmptyDocument);
}

TEST(ChunkText, CoverageAndLimitOnRandomText) {
  std::mt19937_64 rng(5);
  const char* pieces[] = {"alpha", "beta.", "gamma!", "delta?", "eps", "x.y", "Z.", "\n\n", "q"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string s;
    const std::size_t n = 1 + rng() % 400;
    for (std::size_t i = 0; i < n; ++i) s += std::string(pieces[rng() % 9]) + " ";
    const CleanText c = clean_text(s);
    const std::size_t limit = 8 + rng() % 60;
    const auto chunks = chunk_text(c, limit);
    std::vector<std::string> joined;
    for (std::size_t i = 0; i < chunks.size(); ++i) {
      EXPECT_EQ(chunks[i].index, i);
      EXPECT_GE(chunks[i].token_count, 1u);
      EXPECT_LE(chunks[i].token_count, limit);
      const auto t = tokens_of(chunks[i].text);
      EXPECT_EQ(t.size(), chunks[i].token_count);
      joined.insert(joined.end(), t.begin(), t.end());
    }
    EXPECT_EQ(joined, tokens_of(c.text));
  }
}

TEST(PrepareDocument, RunsTheWholeChain) {
  PrepConfig cfg;
  cfg.chunk_size_limit = 8;
  const auto p = prepare_document(
      doc_of("<html><body><p>Skills [3] matter a lot here.</p><p>Second paragraph is here too.</p></body></html>",
             DocumentFormat::html),
      cfg);
  EXPECT_EQ(p.clean.removed_artifact_count, 1u);
  ASSERT_EQ(p.chunks.size(), 2u);
  EXPECT_EQ(p.chunks[0].text, "Skills matter a lot here.");
}
