#include "referee/citations.hpp"

#include <algorithm>
#include <cctype>

namespace referee {

namespace {

bool is_alnum(unsigned char c) { return std::isalnum(c) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Strips an optional leading "[n]" marker.
std::string_view strip_index_marker(std::string_view s) {
  s = trim(s);
  if (s.empty() || s.front() != '[') return s;
  std::size_t close = s.find(']');
  if (close == std::string_view::npos) return s;
  for (std::size_t i = 1; i < close; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return s;
  }
  if (close == 1) return s;  // "[]" is not an index marker
  return trim(s.substr(close + 1));
}

std::vector<std::string> split_authors(std::string_view s) {
  std::vector<std::string> out;
  while (!s.empty()) {
    std::size_t sep = s.find("; ");
    std::string_view part = sep == std::string_view::npos ? s : s.substr(0, sep);
    part = trim(part);
    if (!part.empty()) out.emplace_back(part);
    if (sep == std::string_view::npos) break;
    s.remove_prefix(sep + 2);
  }
  return out;
}

Reference fallback_reference(std::string_view entry, int index) {
  Reference ref;
  ref.index = index;
  ref.raw = std::string(entry);
  ref.title = std::string(trim(entry));
  ref.normalized_title = normalize_title(ref.title);
  return ref;
}

}  // namespace

Reference parse_reference(std::string_view entry, int index) {
  std::string_view body = strip_index_marker(entry);

  // Locate "(<year>)." — four digits in parentheses followed by a period.
  std::size_t year_open = std::string_view::npos;
  int year = 0;
  for (std::size_t i = 0; i + 6 < body.size(); ++i) {
    if (body[i] != '(') continue;
    bool digits = true;
    for (std::size_t j = i + 1; j < i + 5; ++j) {
      if (!std::isdigit(static_cast<unsigned char>(body[j]))) {
        digits = false;
        break;
      }
    }
    if (digits && body[i + 5] == ')' && body[i + 6] == '.') {
      year_open = i;
      year = (body[i + 1] - '0') * 1000 + (body[i + 2] - '0') * 100 +
             (body[i + 3] - '0') * 10 + (body[i + 4] - '0');
      break;
    }
  }
  if (year_open == std::string_view::npos) return fallback_reference(entry, index);

  std::string_view author_part = trim(body.substr(0, year_open));
  std::string_view rest = trim(body.substr(year_open + 7));  // past "(yyyy)."
  if (author_part.empty() || rest.empty()) return fallback_reference(entry, index);

  // Title runs to the first ". "; the remainder (minus a final period) is the
  // venue. A title ending the entry ("Only title.") leaves the venue empty.
  std::string_view title;
  std::string_view venue;
  std::size_t split = rest.find(". ");
  if (split != std::string_view::npos) {
    title = trim(rest.substr(0, split));
    venue = trim(rest.substr(split + 2));
    if (!venue.empty() && venue.back() == '.') venue.remove_suffix(1);
    venue = trim(venue);
  } else {
    title = rest;
    if (!title.empty() && title.back() == '.') title.remove_suffix(1);
    title = trim(title);
  }
  if (title.empty()) return fallback_reference(entry, index);

  Reference ref;
  ref.index = index;
  ref.raw = std::string(entry);
  ref.authors = split_authors(author_part);
  ref.year = year;
  ref.title = std::string(title);
  ref.venue = std::string(venue);
  ref.normalized_title = normalize_title(ref.title);
  return ref;
}

std::string normalize_title(std::string_view title) {
  std::string out;
  out.reserve(title.size());
  bool pending_space = false;
  for (unsigned char c : title) {
    if (is_alnum(c)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_space = true;
    }
  }
  return out;
}

std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;
  std::vector<std::size_t> prev(m + 1);
  std::vector<std::size_t> cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double title_similarity(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  const std::size_t dist = levenshtein_distance(a, b);
  return 1.0 - static_cast<double>(dist) / static_cast<double>(longest);
}

std::vector<MatchedPair> match_references(const std::vector<Reference>& a,
                                          const std::vector<Reference>& b,
                                          double threshold) {
  std::vector<MatchedPair> candidates;
  candidates.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double sim = title_similarity(a[i].normalized_title, b[j].normalized_title);
      if (sim >= threshold) candidates.push_back({i, j, sim});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const MatchedPair& x, const MatchedPair& y) {
                     if (x.similarity != y.similarity) return x.similarity > y.similarity;
                     if (x.left != y.left) return x.left < y.left;
                     return x.right < y.right;
                   });
  std::vector<bool> used_a(a.size(), false);
  std::vector<bool> used_b(b.size(), false);
  std::vector<MatchedPair> matched;
  for (const MatchedPair& c : candidates) {
    if (used_a[c.left] || used_b[c.right]) continue;
    used_a[c.left] = true;
    used_b[c.right] = true;
    matched.push_back(c);
  }
  return matched;
}

OverlapResult citation_overlap(const std::vector<Reference>& paper_refs,
                               const std::vector<Reference>& original_refs) {
  OverlapResult result;
  if (paper_refs.empty() && original_refs.empty()) {
    result.jaccard = 1.0;  // two empty citation sets are identical
    return result;
  }
  const auto matched = match_references(paper_refs, original_refs);
  result.intersection_size = matched.size();
  const double unions = static_cast<double>(paper_refs.size() + original_refs.size() - matched.size());
  result.jaccard = unions > 0 ? static_cast<double>(matched.size()) / unions : 0.0;
  result.coverage = original_refs.empty()
                        ? 0.0
                        : static_cast<double>(matched.size()) / static_cast<double>(original_refs.size());
  return result;
}

}  // namespace referee
