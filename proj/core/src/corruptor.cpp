#include "referee/corruptor.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "referee/errors.hpp"

namespace referee {
namespace {

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    char x = a[i], y = b[i];
    if (x >= 'A' && x <= 'Z') x = static_cast<char>(x - 'A' + 'a');
    if (y >= 'A' && y <= 'Z') y = static_cast<char>(y - 'A' + 'a');
    if (x != y) return false;
  }
  return true;
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

// `count` donor words starting at a seeded offset, wrapping around the pool.
std::string take_donor_text(const std::vector<std::string>& pool, SplitMixRng& rng,
                            std::size_t count) {
  if (pool.empty()) fail(Err::DonorPoolEmpty, "the donor pool has no prose blocks");
  std::size_t start = rng.below(pool.size());
  std::string out;
  for (std::size_t i = 0; i < count; ++i) {
    if (!out.empty()) out += " ";
    out += pool[(start + i) % pool.size()];
  }
  return out;
}

// `k` distinct values from [0,n), in ascending order.
std::vector<std::size_t> choose_distinct(SplitMixRng& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + rng.below(n - i);
    std::swap(all[i], all[j]);
  }
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

std::size_t affected_count(double intensity, std::size_t n) {
  if (n == 0) return 0;
  auto k = static_cast<std::size_t>(std::ceil(intensity * static_cast<double>(n)));
  return std::clamp<std::size_t>(k, 1, n);
}

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

// Inserts `insertion` as final words of the sentence, before its terminator.
std::string inject_before_terminator(const std::string& sentence, const std::string& insertion) {
  if (!sentence.empty() && is_terminator(sentence.back())) {
    return sentence.substr(0, sentence.size() - 1) + " " + insertion + sentence.back();
  }
  return sentence + " " + insertion;
}

const std::vector<std::string>& filler_words() {
  // Every entry counts at least three syllables, which is what drives the
  // fog index and the syllable-per-word ratio up.
  static const std::vector<std::string> fillers = {
      "notwithstanding",       "heterogeneity",      "multidimensionality",
      "disproportionately",    "institutionalization", "consequentially",
      "operationalization",    "incontrovertibly",
  };
  return fillers;
}

std::string join_sentences(const std::vector<std::string>& sentences) {
  std::string out;
  for (const std::string& s : sentences) {
    if (!out.empty()) out += " ";
    out += s;
  }
  return out;
}

}  // namespace

DonorPool DonorPool::load_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    fail(Err::IoError, "donor directory not found: " + dir.string());
  }

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    if (ext == ".md" || ext == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  DonorPool pool;
  for (const std::filesystem::path& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) fail(Err::IoError, "donor file not readable: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();

    std::istringstream lines(text);
    std::string line;
    bool first = true;
    bool in_front_matter = false;
    bool in_references = false;
    std::string paragraph;
    auto flush = [&] {
      if (!paragraph.empty()) {
        pool.blocks.push_back(paragraph);
        paragraph.clear();
      }
    };
    while (std::getline(lines, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (first && line == "---") {
        in_front_matter = true;
        first = false;
        continue;
      }
      first = false;
      if (in_front_matter) {
        if (line == "---") in_front_matter = false;
        continue;
      }
      if (line.rfind("# ", 0) == 0) {
        flush();
        in_references = iequals(line.substr(2), "References");
        continue;
      }
      std::string trimmed = line;
      while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t')) {
        trimmed.erase(trimmed.begin());
      }
      if (trimmed.empty()) {
        flush();
        continue;
      }
      if (in_references) {
        pool.reference_entries.push_back(trimmed);
      } else {
        if (!paragraph.empty()) paragraph += " ";
        paragraph += trimmed;
      }
    }
    flush();
  }
  return pool;
}

std::vector<std::string> DonorPool::words() const {
  std::vector<std::string> all;
  for (const std::string& block : blocks) {
    std::vector<std::string> ws = split_words(block);
    all.insert(all.end(), ws.begin(), ws.end());
  }
  return all;
}

std::string contrast_pair_id(const std::string& paper_id, const std::string& target,
                             std::uint64_t seed) {
  return hex64(keyed_hash(seed, {paper_id, target}));
}

Corruptor::Corruptor(const ScholarIndex* scholar, const Lexicon* lexicon, DonorPool donors)
    : scholar_(scholar), lexicon_(lexicon), donors_(std::move(donors)) {}

void Corruptor::corrupt_relevance(SurveyPaper& paper, SplitMixRng& rng) const {
  std::vector<std::string> pool = donors_.words();
  std::size_t title_words = std::max<std::size_t>(1, split_words(paper.title).size());
  std::size_t abstract_words = std::max<std::size_t>(1, split_words(paper.abstract).size());
  paper.title = take_donor_text(pool, rng, title_words);
  paper.abstract = take_donor_text(pool, rng, abstract_words);
  if (!paper.abstract.empty() && !is_terminator(paper.abstract.back())) {
    paper.abstract += ".";
  }
}

void Corruptor::corrupt_contribution(SurveyPaper& paper, SplitMixRng& rng,
                                     const SurveyPaper* original) const {
  if (original != nullptr) {
    std::vector<MatchedPair> matches = match_references(paper.references, original->references);
    std::set<std::size_t> doomed;
    for (const MatchedPair& m : matches) doomed.insert(m.left);
    std::vector<Reference> kept;
    for (std::size_t i = 0; i < paper.references.size(); ++i) {
      if (doomed.count(i) == 0) kept.push_back(paper.references[i]);
    }
    paper.references = std::move(kept);
  } else {
    paper.references.clear();
  }
  for (std::size_t i = 0; i < paper.references.size(); ++i) {
    paper.references[i].index = static_cast<int>(i);
  }

  std::vector<std::string> pool = donors_.words();
  Section* conclusion = paper.conclusion();
  std::size_t count =
      conclusion != nullptr ? std::max<std::size_t>(1, split_words(conclusion->body).size()) : 40;
  std::string body = take_donor_text(pool, rng, count);
  if (!body.empty() && !is_terminator(body.back())) body += ".";
  if (conclusion != nullptr) {
    conclusion->body = std::move(body);
  } else {
    paper.sections.push_back(Section{"Conclusion", std::move(body)});
  }
}

void Corruptor::corrupt_soundness(SurveyPaper& paper, SplitMixRng& rng,
                                  double intensity) const {
  if (scholar_ == nullptr) {
    fail(Err::FixtureMissing, "soundness corruption needs the title-search index");
  }
  std::size_t n = paper.references.size();
  if (n == 0) return;

  std::vector<std::size_t> victims = choose_distinct(rng, n, affected_count(intensity, n));
  for (std::size_t idx : victims) {
    Reference& ref = paper.references[idx];
    std::string title = ref.title.empty() ? ref.raw : ref.title;

    bool displaced = false;
    for (int round = 0; round < 64 && !displaced; ++round) {
      std::vector<std::size_t> positions;
      for (std::size_t i = 0; i < title.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(title[i]);
        if (std::isalnum(c)) positions.push_back(i);
      }
      if (positions.empty()) {
        title = "xq" + hex64(rng.next());
      } else {
        std::size_t m = std::max<std::size_t>(1, positions.size() * 3 / 10);
        for (std::size_t p : choose_distinct(rng, positions.size(), m)) {
          char replacement = static_cast<char>('a' + rng.below(26));
          if (replacement == title[positions[p]]) {
            replacement = replacement == 'z' ? 'a' : static_cast<char>(replacement + 1);
          }
          title[positions[p]] = replacement;
        }
      }
      std::string normalized = normalize_title(title);
      if (normalized.empty()) continue;
      ScholarIndex::Best best = scholar_->best_match(normalized);
      displaced = best.entry == nullptr || best.similarity < kLookupSimilarityThreshold;
    }
    if (!displaced) {
      fail(Err::ConfigError, "could not displace a reference title away from the index");
    }

    bool structured = !ref.authors.empty() || ref.year.has_value();
    std::string raw;
    if (structured) {
      raw = "[" + std::to_string(ref.index + 1) + "] ";
      for (std::size_t a = 0; a < ref.authors.size(); ++a) {
        if (a > 0) raw += "; ";
        raw += ref.authors[a];
      }
      raw += " (" + std::to_string(ref.year.value_or(2000)) + "). " + title + ".";
      if (!ref.venue.empty()) raw += " " + ref.venue + ".";
    } else {
      raw = title;
    }
    ref = parse_reference(raw, ref.index);
  }
}

void Corruptor::corrupt_clarity(SurveyPaper& paper, SplitMixRng& rng, double intensity) const {
  const std::vector<std::string>& fillers = filler_words();

  auto rewrite = [&](std::string& part) {
    std::vector<std::string> sentences = segment_sentences(part);
    if (sentences.empty()) return;

    for (std::size_t idx : choose_distinct(rng, sentences.size(),
                                           affected_count(intensity, sentences.size()))) {
      std::string insertion = fillers[rng.below(fillers.size())];
      insertion += " " + fillers[rng.below(fillers.size())];
      sentences[idx] = inject_before_terminator(sentences[idx], insertion);
    }

    std::size_t boundaries = sentences.size() - 1;
    if (boundaries > 0) {
      std::vector<std::size_t> merge_at =
          choose_distinct(rng, boundaries, affected_count(intensity, boundaries));
      std::vector<bool> merge_after(sentences.size(), false);
      for (std::size_t b : merge_at) merge_after[b] = true;

      std::vector<std::string> merged;
      std::string current;
      for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (current.empty()) {
          current = sentences[i];
        } else {
          if (!current.empty() && is_terminator(current.back())) current.pop_back();
          current += ", " + sentences[i];
        }
        if (!merge_after[i]) {
          merged.push_back(std::move(current));
          current.clear();
        }
      }
      if (!current.empty()) merged.push_back(std::move(current));
      sentences = std::move(merged);
    }
    part = join_sentences(sentences);
  };

  rewrite(paper.abstract);
  for (Section& section : paper.sections) rewrite(section.body);
}

void Corruptor::corrupt_responsibility(SurveyPaper& paper, SplitMixRng& rng,
                                       double intensity) const {
  if (lexicon_ == nullptr || lexicon_->tokens().empty()) {
    fail(Err::LexiconMissing, "responsibility corruption needs a non-empty lexicon");
  }
  const std::vector<std::string>& flagged = lexicon_->tokens();

  auto rewrite = [&](std::string& part) {
    std::vector<std::string> sentences = segment_sentences(part);
    if (sentences.empty()) return;
    for (std::size_t idx : choose_distinct(rng, sentences.size(),
                                           affected_count(intensity, sentences.size()))) {
      sentences[idx] =
          inject_before_terminator(sentences[idx], flagged[rng.below(flagged.size())]);
    }
    part = join_sentences(sentences);
  };

  rewrite(paper.abstract);
  for (Section& section : paper.sections) rewrite(section.body);
}

SurveyPaper Corruptor::corrupt(const SurveyPaper& paper, const CorruptionSpec& spec,
                               const SurveyPaper* original) const {
  bool canonical = std::any_of(std::begin(kCriterionNames), std::end(kCriterionNames),
                               [&](const char* c) { return spec.target == c; });
  if (!canonical) fail(Err::UnknownTarget, "no corruption strategy for: " + spec.target);
  if (!(spec.intensity > 0.0 && spec.intensity <= 1.0)) {
    fail(Err::ConfigError, "corruption intensity must lie in (0,1]");
  }

  SurveyPaper bad = paper;
  SplitMixRng rng = keyed_rng(spec.seed, {paper.id, spec.target});

  if (spec.target == "relevance") {
    corrupt_relevance(bad, rng);
  } else if (spec.target == "contribution") {
    corrupt_contribution(bad, rng, original);
  } else if (spec.target == "soundness") {
    corrupt_soundness(bad, rng, spec.intensity);
  } else if (spec.target == "clarity") {
    corrupt_clarity(bad, rng, spec.intensity);
  } else {
    corrupt_responsibility(bad, rng, spec.intensity);
  }

  bad.id = paper.id + "--" + spec.target;
  bad.front_matter_extra["corrupted_from"] = paper.id;
  bad.front_matter_extra["target"] = spec.target;
  bad.front_matter_extra["seed"] = std::to_string(spec.seed);
  bad.raw = canonical_serialize(bad);
  return bad;
}

std::vector<ContrastPair> make_pair_corpus(const Corruptor& corruptor,
                                           const std::vector<GoodEntry>& goods,
                                           const std::vector<std::string>& targets,
                                           std::uint64_t seed, double intensity) {
  std::vector<ContrastPair> pairs;
  pairs.reserve(goods.size() * targets.size());
  for (const GoodEntry& good : goods) {
    for (const std::string& target : targets) {
      CorruptionSpec spec;
      spec.target = target;
      spec.seed = seed;
      spec.intensity = intensity;

      ContrastPair pair;
      pair.pair_id = contrast_pair_id(good.paper.id, target, seed);
      pair.prompt = good.prompt;
      pair.good = good.paper;
      pair.bad = corruptor.corrupt(good.paper, spec, good.original);
      pair.targets = {target};
      pairs.push_back(std::move(pair));
    }
  }

  std::sort(pairs.begin(), pairs.end(),
            [](const ContrastPair& a, const ContrastPair& b) { return a.pair_id < b.pair_id; });
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    if (pairs[i].pair_id == pairs[i - 1].pair_id) {
      fail(Err::ConfigError, "pair id collision: " + pairs[i].pair_id);
    }
  }
  return pairs;
}

}  // namespace referee
