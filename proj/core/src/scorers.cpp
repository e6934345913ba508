#include "referee/scorers.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <unordered_set>
#include <utility>

#include "referee/errors.hpp"
#include "referee/hashing.hpp"

namespace referee {
namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double mean_of(const std::map<std::string, double>& m) {
  if (m.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [name, v] : m) sum += v;
  return sum / static_cast<double>(m.size());
}

std::string title_abstract_text(const SurveyPaper& paper) {
  return paper.title + "\n\n" + paper.abstract;
}

bool has_tokens(std::string_view text) { return !tokenize(text).empty(); }

constexpr int kInterrelatednessExhaustiveLimit = 20;
constexpr int kInterrelatednessSamplePairs = 200;

// Distinct unordered index pairs for the sampled interrelatedness estimate,
// keyed only by the paper id so the same paper always yields the same pairs.
std::vector<std::pair<int, int>> sample_pairs(const std::string& paper_id, int n) {
  SplitMixRng rng = keyed_rng(0, {"interrelatedness", paper_id});
  std::set<std::pair<int, int>> chosen;
  while (chosen.size() < static_cast<std::size_t>(kInterrelatednessSamplePairs)) {
    int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    if (i == j) continue;
    chosen.emplace(std::min(i, j), std::max(i, j));
  }
  return {chosen.begin(), chosen.end()};
}

}  // namespace

CriterionScore make_criterion_score(std::string name,
                                    std::map<std::string, double> sub_scores) {
  CriterionScore score;
  score.name = std::move(name);
  score.sub_scores = std::move(sub_scores);
  score.value = mean_of(score.sub_scores);
  return score;
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim != b.dim) {
    fail(Err::DimensionMismatch, "cosine over dims " + std::to_string(a.dim) + " and " +
                                     std::to_string(b.dim));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (int i = 0; i < a.dim; ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) fail(Err::ZeroVector, "cosine with a zero vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double sim01(const EmbeddingVector& a, const EmbeddingVector& b) {
  return std::max(0.0, cosine_similarity(a, b));
}

CriterionScore score_relevance(const Providers& providers, const SurveyPaper& paper,
                               const Prompt& prompt) {
  EmbeddingVector prompt_vec = providers.embed(prompt.text);

  std::map<std::string, double> subs;
  subs["title_abstract"] = sim01(prompt_vec, providers.embed(title_abstract_text(paper)));

  if (!paper.references.empty()) {
    std::string joined;
    for (const Reference& ref : paper.references) {
      if (!joined.empty()) joined += " ";
      joined += ref.title;
    }
    if (has_tokens(joined)) {
      subs["citations"] = sim01(prompt_vec, providers.embed(joined));
    }
  }
  return make_criterion_score("relevance", std::move(subs));
}

CriterionScore score_contribution(const Providers& providers, const SurveyPaper& paper,
                                  const SurveyPaper* original) {
  EmbeddingVector abstract_vec = providers.embed(paper.abstract);
  EmbeddingVector body_vec = providers.embed(paper.body_text());

  std::map<std::string, double> subs;
  subs["abstract_alignment"] = sim01(abstract_vec, body_vec);

  if (const Section* conclusion = paper.conclusion(); conclusion != nullptr) {
    if (has_tokens(conclusion->body)) {
      subs["conclusion_alignment"] = sim01(providers.embed(conclusion->body), body_vec);
    }
  }

  if (original != nullptr) {
    subs["coverage"] = citation_overlap(paper.references, original->references).coverage;
  }
  return make_criterion_score("contribution", std::move(subs));
}

CriterionScore score_soundness(const Providers& providers, const SurveyPaper& paper) {
  const std::vector<Reference>& refs = paper.references;
  std::map<std::string, double> subs;
  if (refs.empty()) {
    subs["correctness"] = 0.0;
    subs["citation_relevance"] = 0.0;
    subs["interrelatedness"] = 0.0;
    return make_criterion_score("soundness", std::move(subs));
  }

  int n = static_cast<int>(refs.size());
  EmbeddingVector paper_vec = providers.embed(title_abstract_text(paper));

  int found = 0;
  double relevance_sum = 0.0;
  std::vector<std::optional<EmbeddingVector>> title_vecs(refs.size());
  for (int i = 0; i < n; ++i) {
    if (providers.lookup_reference(refs[i]).found()) ++found;
    if (has_tokens(refs[i].title)) {
      title_vecs[i] = providers.embed(refs[i].title);
      relevance_sum += sim01(*title_vecs[i], paper_vec);
    }
  }
  subs["correctness"] = static_cast<double>(found) / n;
  subs["citation_relevance"] = relevance_sum / n;

  double pair_sum = 0.0;
  std::size_t pair_count = 0;
  auto add_pair = [&](int i, int j) {
    pair_sum += (title_vecs[i] && title_vecs[j]) ? sim01(*title_vecs[i], *title_vecs[j]) : 0.0;
    ++pair_count;
  };
  if (n <= kInterrelatednessExhaustiveLimit) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) add_pair(i, j);
    }
  } else {
    for (const auto& [i, j] : sample_pairs(paper.id, n)) add_pair(i, j);
  }
  subs["interrelatedness"] = pair_count == 0 ? 0.0 : pair_sum / static_cast<double>(pair_count);
  return make_criterion_score("soundness", std::move(subs));
}

CriterionScore score_clarity(const SurveyPaper& paper) {
  std::string text = paper.abstract + "\n\n" + paper.body_text();
  std::vector<std::string> tokens = tokenize(text);
  if (tokens.empty()) fail(Err::EmptyBody, "clarity needs at least one word: " + paper.id);

  TextStats stats = text_stats(text);
  double words = static_cast<double>(stats.words);
  double sentences = static_cast<double>(stats.sentences);
  double syllables = static_cast<double>(stats.syllables);

  double fre = 206.835 - 1.015 * (words / sentences) - 84.6 * (syllables / words);
  double readability = std::clamp(fre, 0.0, 100.0) / 100.0;

  std::size_t complex_words = 0;
  for (const std::string& tok : tokens) {
    if (count_syllables(tok) >= 3) ++complex_words;
  }
  double fog = 0.4 * ((words / sentences) + 100.0 * (static_cast<double>(complex_words) / words));
  double sentence_structure = clamp01(1.0 - (fog - 6.0) / 12.0);

  std::size_t window = std::min<std::size_t>(tokens.size(), 1000);
  std::unordered_set<std::string> distinct(tokens.begin(),
                                           tokens.begin() + static_cast<std::ptrdiff_t>(window));
  double lexical_diversity = static_cast<double>(distinct.size()) / static_cast<double>(window);

  std::map<std::string, double> subs;
  subs["readability"] = readability;
  subs["sentence_structure"] = sentence_structure;
  subs["lexical_diversity"] = lexical_diversity;
  return make_criterion_score("clarity", std::move(subs));
}

CriterionScore score_responsibility(const Providers& providers, const SurveyPaper& paper) {
  constexpr std::size_t kChunkTokenLimit = 500;

  std::string text = paper.abstract + "\n\n" + paper.body_text();
  std::vector<std::string> sentences = segment_sentences(text);

  std::vector<std::string> chunks;
  std::string current;
  std::size_t current_tokens = 0;
  for (const std::string& sentence : sentences) {
    std::size_t n = tokenize(sentence).size();
    if (!current.empty() && current_tokens + n > kChunkTokenLimit) {
      chunks.push_back(current);
      current.clear();
      current_tokens = 0;
    }
    if (!current.empty()) current += " ";
    current += sentence;
    current_tokens += n;
  }
  if (!current.empty()) chunks.push_back(current);

  double max_toxicity = 0.0;
  for (const std::string& chunk : chunks) {
    max_toxicity = std::max(max_toxicity, providers.toxicity(chunk));
  }

  std::map<std::string, double> subs;
  subs["non_toxicity"] = 1.0 - max_toxicity;
  return make_criterion_score("responsibility", std::move(subs));
}

double aggregate_score(std::span<const CriterionScore> scores) {
  auto is_canonical = [](const std::string& name) {
    for (const char* c : kCriterionNames) {
      if (name == c) return true;
    }
    return false;
  };
  for (const CriterionScore& s : scores) {
    if (!is_canonical(s.name)) {
      fail(Err::UnknownTarget, "not a review criterion: " + s.name);
    }
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    for (std::size_t j = i + 1; j < scores.size(); ++j) {
      if (scores[i].name == scores[j].name) {
        fail(Err::DuplicateCriterion, "criterion appears twice: " + scores[i].name);
      }
    }
  }
  double sum = 0.0;
  for (const char* name : kCriterionNames) {
    const CriterionScore* found = nullptr;
    for (const CriterionScore& s : scores) {
      if (s.name == name) {
        found = &s;
        break;
      }
    }
    if (found == nullptr) {
      fail(Err::MissingCriterion, std::string("criterion missing from review: ") + name);
    }
    sum += found->value;
  }
  return sum / 5.0;
}

}  // namespace referee
