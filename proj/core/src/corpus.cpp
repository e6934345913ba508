#include "referee/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "referee/errors.hpp"

namespace referee {
namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::filesystem::path> files_with_extension(const std::filesystem::path& dir,
                                                        std::string_view ext) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) return files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<SurveyPaper> load_papers(const std::filesystem::path& dir, const char* kind) {
  std::vector<SurveyPaper> papers;
  std::set<std::string> seen;
  for (const std::filesystem::path& file : files_with_extension(dir, ".md")) {
    SurveyPaper paper = parse_paper(read_file(file));
    if (!seen.insert(paper.id).second) {
      fail(Err::ConfigError, std::string(kind) + " paper id appears twice: " + paper.id);
    }
    papers.push_back(std::move(paper));
  }
  std::sort(papers.begin(), papers.end(),
            [](const SurveyPaper& a, const SurveyPaper& b) { return a.id < b.id; });
  return papers;
}

}  // namespace

Prompt load_prompt_file(const std::filesystem::path& path) {
  json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    fail(Err::ConfigError, "prompt file is not a JSON object: " + path.string());
  }
  Prompt p;
  if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty()) {
    fail(Err::ConfigError, "prompt lacks a non-empty id: " + path.string());
  }
  if (!j.contains("text") || !j["text"].is_string() || j["text"].get<std::string>().empty()) {
    fail(Err::ConfigError, "prompt lacks non-empty text: " + path.string());
  }
  p.id = j["id"].get<std::string>();
  p.text = j["text"].get<std::string>();
  if (j.contains("source_paper_id")) {
    if (!j["source_paper_id"].is_string()) {
      fail(Err::ConfigError, "source_paper_id must be a string: " + path.string());
    }
    p.source_paper_id = j["source_paper_id"].get<std::string>();
  }
  return p;
}

const Prompt* Corpus::find_prompt(const std::string& id) const {
  for (const Prompt& p : prompts) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

const SurveyPaper* Corpus::find_good(const std::string& id) const {
  auto it = std::lower_bound(goods.begin(), goods.end(), id,
                             [](const SurveyPaper& p, const std::string& key) {
                               return p.id < key;
                             });
  if (it != goods.end() && it->id == id) return &*it;
  return nullptr;
}

Corpus load_corpus(const std::filesystem::path& root) {
  std::error_code ec;
  if (!std::filesystem::is_directory(root, ec)) {
    fail(Err::IoError, "corpus root is not a directory: " + root.string());
  }

  Corpus corpus;
  corpus.root = root;

  std::set<std::string> prompt_ids;
  for (const std::filesystem::path& file : files_with_extension(root / "prompts", ".json")) {
    Prompt p = load_prompt_file(file);
    if (!prompt_ids.insert(p.id).second) {
      fail(Err::ConfigError, "prompt id appears twice: " + p.id);
    }
    corpus.prompts.push_back(std::move(p));
  }
  std::sort(corpus.prompts.begin(), corpus.prompts.end(),
            [](const Prompt& a, const Prompt& b) { return a.id < b.id; });

  corpus.goods = load_papers(root / "good", "good");
  corpus.bads = load_papers(root / "bad", "bad");

  for (const SurveyPaper& good : corpus.goods) {
    if (good.prompt_id.empty()) {
      fail(Err::ConfigError, "good paper lacks a prompt_id: " + good.id);
    }
    if (corpus.find_prompt(good.prompt_id) == nullptr) {
      fail(Err::ConfigError, "good paper " + good.id + " names unknown prompt " + good.prompt_id);
    }
  }

  for (SurveyPaper& original : load_papers(root / "originals", "original")) {
    corpus.originals_present = true;
    corpus.originals.add(std::move(original));
  }
  return corpus;
}

std::vector<GoodEntry> good_entries(const Corpus& corpus) {
  std::vector<GoodEntry> entries;
  entries.reserve(corpus.goods.size());
  for (const SurveyPaper& good : corpus.goods) {
    GoodEntry entry;
    entry.paper = good;
    entry.prompt = *corpus.find_prompt(good.prompt_id);
    if (corpus.originals_present && !entry.prompt.source_paper_id.empty()) {
      entry.original = corpus.originals.find(entry.prompt.source_paper_id);
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<ContrastPair> collect_pairs(const Corpus& corpus) {
  std::vector<ContrastPair> pairs;
  for (const SurveyPaper& bad : corpus.bads) {
    auto provenance = bad.front_matter_extra.find("corrupted_from");
    if (provenance == bad.front_matter_extra.end()) continue;

    const SurveyPaper* good = corpus.find_good(provenance->second);
    if (good == nullptr) {
      fail(Err::ConfigError,
           "bad paper " + bad.id + " claims unknown good paper " + provenance->second);
    }

    auto target_it = bad.front_matter_extra.find("target");
    if (target_it == bad.front_matter_extra.end()) {
      fail(Err::ConfigError, "bad paper " + bad.id + " lacks a corruption target");
    }
    const std::string& target = target_it->second;
    bool canonical = std::any_of(std::begin(kCriterionNames), std::end(kCriterionNames),
                                 [&](const char* c) { return target == c; });
    if (!canonical) {
      fail(Err::ConfigError, "bad paper " + bad.id + " has unknown target " + target);
    }

    std::uint64_t seed = 0;
    auto seed_it = bad.front_matter_extra.find("seed");
    if (seed_it != bad.front_matter_extra.end()) {
      const std::string& digits = seed_it->second;
      auto [ptr, parse_ec] =
          std::from_chars(digits.data(), digits.data() + digits.size(), seed);
      if (parse_ec != std::errc() || ptr != digits.data() + digits.size()) {
        fail(Err::ConfigError, "bad paper " + bad.id + " has malformed seed " + digits);
      }
    }

    const Prompt* prompt = corpus.find_prompt(good->prompt_id);
    if (prompt == nullptr) {
      fail(Err::ConfigError, "good paper " + good->id + " names unknown prompt");
    }

    ContrastPair pair;
    pair.pair_id = contrast_pair_id(good->id, target, seed);
    pair.prompt = *prompt;
    pair.good = *good;
    pair.bad = bad;
    pair.targets = {target};
    pairs.push_back(std::move(pair));
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
