#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace referee {

// One bibliography entry. Parsing is lenient: entries that do not follow the
// structured grammar keep the whole raw string as their title, so a Reference
// can always be constructed. `raw` is preserved verbatim in either case.
struct Reference {
  int index = 0;
  std::vector<std::string> authors;
  std::optional<int> year;
  std::string title;
  std::string venue;  // empty when the entry carries no venue
  std::string normalized_title;
  std::string raw;
};

struct OverlapResult {
  std::size_t intersection_size = 0;
  double jaccard = 0.0;
  double coverage = 0.0;
};

// Grammar: `[n] <authors> (<year>). <title>. <venue>.` with authors separated
// by `; `. Any deviation falls back to title = entry, authors empty, no year.
Reference parse_reference(std::string_view entry, int index);

// Lowercase, strip non-alphanumerics, collapse whitespace, trim. Idempotent.
std::string normalize_title(std::string_view title);

std::size_t levenshtein_distance(std::string_view a, std::string_view b);

// 1 - distance / max(len); two empty strings compare as identical (1.0).
double title_similarity(std::string_view a, std::string_view b);

struct MatchedPair {
  std::size_t left = 0;   // index into `a`
  std::size_t right = 0;  // index into `b`
  double similarity = 0.0;
};

// Greedy one-to-one matching in descending similarity order over normalized
// titles; candidates below `threshold` are never matched.
std::vector<MatchedPair> match_references(const std::vector<Reference>& a,
                                          const std::vector<Reference>& b,
                                          double threshold = 0.90);

OverlapResult citation_overlap(const std::vector<Reference>& paper_refs,
                               const std::vector<Reference>& original_refs);

}  // namespace referee
