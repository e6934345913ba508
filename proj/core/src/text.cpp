#include "referee/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "referee/errors.hpp"

namespace referee {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  return lines;
}

bool is_heading(std::string_view line) { return line.size() > 2 && line.substr(0, 2) == "# "; }

std::string join_body(const std::vector<std::string_view>& lines, std::size_t first,
                      std::size_t last) {
  // trim leading/trailing blank lines, keep interior ones
  while (first < last && trim(lines[first]).empty()) ++first;
  while (last > first && trim(lines[last - 1]).empty()) --last;
  std::string out;
  for (std::size_t i = first; i < last; ++i) {
    if (i > first) out.push_back('\n');
    out.append(lines[i]);
  }
  return out;
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

// Abbreviations whose trailing period does not end a sentence.
constexpr std::array<std::string_view, 16> kAbbreviations = {
    "al", "fig", "eq", "vs", "dr", "et", "cf", "eg", "ie",
    "mr", "ms", "mrs", "prof", "vol", "no", "pp"};

bool guarded_abbreviation(std::string_view text, std::size_t period_pos) {
  // token = maximal alphanumeric run ending right before the period
  std::size_t end = period_pos;
  std::size_t begin = end;
  while (begin > 0 && std::isalnum(static_cast<unsigned char>(text[begin - 1]))) --begin;
  if (begin == end) return false;  // no word before the period
  if (end - begin == 1 && std::isalpha(static_cast<unsigned char>(text[begin]))) return true;
  const std::string token = lower(text.substr(begin, end - begin));
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), token) != kAbbreviations.end();
}

}  // namespace

const Section* SurveyPaper::conclusion() const {
  for (const Section& s : sections) {
    if (lower(s.heading) == "conclusion") return &s;
  }
  return nullptr;
}

Section* SurveyPaper::conclusion() {
  return const_cast<Section*>(static_cast<const SurveyPaper*>(this)->conclusion());
}

std::string SurveyPaper::body_text() const {
  std::string out;
  for (const Section& s : sections) {
    if (!out.empty()) out.append("\n\n");
    out.append(s.body);
  }
  return out;
}

SurveyPaper parse_paper(std::string_view raw) {
  const auto lines = split_lines(raw);
  if (lines.empty() || trim(lines[0]) != "---") {
    fail(Err::MissingFrontMatter, "document must open with a '---' front-matter line");
  }

  SurveyPaper paper;
  paper.raw = std::string(raw);

  std::size_t i = 1;
  bool closed = false;
  for (; i < lines.size(); ++i) {
    std::string_view line = trim(lines[i]);
    if (line == "---") {
      closed = true;
      ++i;
      break;
    }
    if (line.empty()) continue;
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) {
      fail(Err::MissingFrontMatter, "malformed front-matter line: " + std::string(line));
    }
    const std::string key = std::string(trim(line.substr(0, colon)));
    const std::string value = std::string(trim(line.substr(colon + 1)));
    if (key == "id") {
      paper.id = value;
    } else if (key == "title") {
      paper.title = value;
    } else if (key == "prompt_id") {
      paper.prompt_id = value;
    } else {
      paper.front_matter_extra[key] = value;
    }
  }
  if (!closed) fail(Err::MissingFrontMatter, "front matter not terminated by '---'");
  if (paper.id.empty()) fail(Err::MissingFrontMatter, "front matter lacks 'id'");
  if (paper.title.empty()) fail(Err::MissingTitle, "front matter lacks 'title'");

  bool saw_abstract = false;
  int ref_index = 0;
  while (i < lines.size()) {
    if (!is_heading(lines[i])) {
      ++i;  // stray text outside any section is ignored
      continue;
    }
    const std::string heading = std::string(trim(lines[i].substr(2)));
    std::size_t body_begin = i + 1;
    std::size_t body_end = body_begin;
    while (body_end < lines.size() && !is_heading(lines[body_end])) ++body_end;
    const std::string body = join_body(lines, body_begin, body_end);
    const std::string key = lower(heading);
    if (key == "abstract" && !saw_abstract) {
      paper.abstract = body;
      saw_abstract = true;
    } else if (key == "references") {
      for (std::string_view entry : split_lines(body)) {
        entry = trim(entry);
        if (entry.empty()) continue;
        paper.references.push_back(parse_reference(entry, ref_index++));
      }
    } else {
      paper.sections.push_back({heading, body});
    }
    i = body_end;
  }

  if (!saw_abstract || trim(paper.abstract).empty()) {
    fail(Err::MissingAbstract, "document has no non-empty 'Abstract' section");
  }
  return paper;
}

std::string canonical_serialize(const SurveyPaper& paper) {
  std::string out;
  out.append("---\n");
  out.append("id: ").append(paper.id).push_back('\n');
  if (!paper.prompt_id.empty()) out.append("prompt_id: ").append(paper.prompt_id).push_back('\n');
  out.append("title: ").append(paper.title).push_back('\n');
  for (const auto& [key, value] : paper.front_matter_extra) {
    out.append(key).append(": ").append(value).push_back('\n');
  }
  out.append("---\n");

  out.append("\n# Abstract\n").append(paper.abstract).push_back('\n');
  for (const Section& s : paper.sections) {
    out.append("\n# ").append(s.heading).push_back('\n');
    out.append(s.body).push_back('\n');
  }
  if (!paper.references.empty()) {
    out.append("\n# References\n");
    for (const Reference& ref : paper.references) {
      out.append(ref.raw).push_back('\n');
    }
  }
  return out;
}

std::size_t whitespace_word_count(std::string_view text) {
  std::size_t count = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++count;
    }
  }
  return count;
}

std::size_t word_count(const SurveyPaper& paper) {
  std::size_t total = whitespace_word_count(paper.title);
  total += whitespace_word_count(paper.abstract);
  for (const Section& s : paper.sections) total += whitespace_word_count(s.body);
  for (const Reference& ref : paper.references) total += whitespace_word_count(ref.raw);
  return total;
}

LengthCheck validate_length(const SurveyPaper& paper, std::size_t limit) {
  const std::size_t actual = word_count(paper);
  return {actual <= limit, actual, limit};
}

std::vector<std::string> segment_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    const bool at_end = i + 1 == text.size();
    const bool before_space = !at_end && std::isspace(static_cast<unsigned char>(text[i + 1]));
    if (!at_end && !before_space) continue;
    if (c == '.' && guarded_abbreviation(text, i)) continue;
    std::string_view fragment = trim(text.substr(start, i + 1 - start));
    if (!fragment.empty()) sentences.emplace_back(fragment);
    start = i + 1;
  }
  if (start < text.size()) {
    std::string_view tail = trim(text.substr(start));
    if (!tail.empty()) sentences.emplace_back(tail);
  }
  return sentences;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::size_t count_syllables(std::string_view word) {
  if (word.empty()) fail(Err::EmptyWord, "cannot count syllables of an empty word");
  const std::string w = lower(word);
  std::size_t groups = 0;
  bool in_group = false;
  for (char c : w) {
    if (is_vowel(c)) {
      if (!in_group) ++groups;
      in_group = true;
    } else {
      in_group = false;
    }
  }
  // trailing silent 'e': not when the word ends in consonant + "le"
  if (groups > 1 && w.back() == 'e') {
    const std::size_t n = w.size();
    const bool consonant_le = n >= 3 && w[n - 2] == 'l' && !is_vowel(w[n - 3]);
    if (!consonant_le) --groups;
  }
  return std::max<std::size_t>(groups, 1);
}

TextStats text_stats(std::string_view text) {
  TextStats stats;
  stats.tokens = tokenize(text);
  stats.words = stats.tokens.size();
  for (const std::string& token : stats.tokens) stats.syllables += count_syllables(token);
  stats.sentences = segment_sentences(text).size();
  if (stats.words >= 1) stats.sentences = std::max<std::size_t>(stats.sentences, 1);
  return stats;
}

}  // namespace referee
