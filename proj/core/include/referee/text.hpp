#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "referee/citations.hpp"

namespace referee {

struct Prompt {
  std::string id;
  std::string text;
  std::string source_paper_id;  // the human paper it was derived from, if any
};

struct Section {
  std::string heading;
  std::string body;
};

// A parsed SP-MD document. `raw` keeps the exact input bytes;
// canonical_serialize() produces the normalized on-disk form.
struct SurveyPaper {
  std::string id;
  std::string prompt_id;  // empty when the paper is not tied to a prompt
  std::string title;
  std::string abstract;
  std::vector<Section> sections;  // body sections in source order
  std::vector<Reference> references;
  std::map<std::string, std::string> front_matter_extra;  // provenance keys etc.
  std::string raw;

  // The section whose heading equals "conclusion" case-insensitively,
  // or nullptr. The section stays part of `sections` (and of body_text()).
  const Section* conclusion() const;
  Section* conclusion();

  // All section bodies, in order, joined by blank lines.
  std::string body_text() const;
};

struct TextStats {
  std::size_t words = 0;      // alphanumeric tokens
  std::size_t sentences = 0;  // >= 1 whenever words >= 1
  std::size_t syllables = 0;  // >= words
  std::vector<std::string> tokens;
};

// Errors: MissingFrontMatter (absent/unterminated block or missing id),
// MissingTitle, MissingAbstract.
SurveyPaper parse_paper(std::string_view raw);

// LF line endings, one blank line between sections, front-matter keys in
// fixed order. parse(canonical_serialize(p)) == p structurally, and the
// output is a fixed point of parse-then-serialize.
std::string canonical_serialize(const SurveyPaper& paper);

// Whitespace-delimited count over title + abstract + section bodies + raw
// reference entries (headings and front matter do not count).
std::size_t word_count(const SurveyPaper& paper);

struct LengthCheck {
  bool ok = true;
  std::size_t actual = 0;
  std::size_t limit = 0;
};
LengthCheck validate_length(const SurveyPaper& paper, std::size_t limit = 2000);

// Splits on '.', '!' or '?' followed by whitespace or end of input. A period
// does not split after a single letter or a known abbreviation (al, fig, eq,
// vs, dr, et, ...). Fragments are trimmed; empty ones are dropped.
std::vector<std::string> segment_sentences(std::string_view text);

// Maximal runs of ASCII alphanumerics, lowercased.
std::vector<std::string> tokenize(std::string_view text);

// Maximal vowel groups (a,e,i,o,u,y), minus a trailing silent 'e', floor 1.
// Errors: EmptyWord.
std::size_t count_syllables(std::string_view word);

TextStats text_stats(std::string_view text);

std::size_t whitespace_word_count(std::string_view text);

}  // namespace referee
