#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "referee/citations.hpp"

namespace referee {

struct EmbeddingVector {
  int dim = 0;
  std::vector<double> values;
  bool unit_norm = false;
};

struct LookupResult {
  enum class Status { Found, NotFound };
  enum class Source { fixture, remote, cache };
  Status status = Status::NotFound;
  std::string matched_title;  // non-empty iff Found
  Source source = Source::fixture;

  bool found() const { return status == Status::Found; }
};

struct RemoteEndpoint {
  std::string endpoint;     // e.g. "http://host:8080/embed"
  std::string auth_header;  // header name; value read from `auth_env`
  std::string auth_env;     // environment variable holding the secret
  std::string query_param = "query";  // scholar title-search parameter
};

enum class EmbeddingMode { fallback, remote };
enum class ToxicityMode { lexicon, remote };
enum class ScholarMode { fixture, remote };
enum class CompletionMode { disabled, remote };

struct ProviderConfig {
  EmbeddingMode embedding_mode = EmbeddingMode::fallback;
  RemoteEndpoint embedding_remote;

  ToxicityMode toxicity_mode = ToxicityMode::lexicon;
  std::string lexicon_path;
  RemoteEndpoint toxicity_remote;

  ScholarMode scholar_mode = ScholarMode::fixture;
  std::string scholar_fixture_path;
  RemoteEndpoint scholar_remote;

  CompletionMode completion_mode = CompletionMode::disabled;
  RemoteEndpoint completion_remote;

  std::string cache_dir;  // empty disables the persistent cache
  int timeout_ms = 10000;
  int retries = 2;        // retry with exponential backoff, base 500 ms, factor 2

  bool any_remote() const {
    return embedding_mode == EmbeddingMode::remote || toxicity_mode == ToxicityMode::remote ||
           scholar_mode == ScholarMode::remote || completion_mode == CompletionMode::remote;
  }
};

// Mandatory bit-exact offline embedding: signed feature hashing of the token
// bag. Per token, FNV-1a 64 of its UTF-8 bytes selects bucket (hash mod 256)
// and sign (bit 63); the accumulator is L2-normalized. Errors: EmptyText.
EmbeddingVector fallback_embed(std::string_view text);

inline constexpr int kFallbackEmbeddingDim = 256;

// Content-addressed on-disk store. Files are named by the FNV-1a 64 hash of
// the key, one subdirectory per namespace. Writes are temp-file-then-rename,
// so concurrent readers always see a complete value.
class Cache {
 public:
  explicit Cache(std::filesystem::path dir);
  std::optional<std::string> get(std::string_view ns, std::string_view key) const;
  void put(std::string_view ns, std::string_view key, std::string_view value) const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path entry_path(std::string_view ns, std::string_view key) const;
  std::filesystem::path dir_;
};

// Offline stand-in for a scholarly title-search API: a JSON object that maps
// normalized titles to metadata ({"title": display form, ...}).
class ScholarIndex {
 public:
  struct Entry {
    std::string normalized;
    std::string title;
  };

  static ScholarIndex load(const std::filesystem::path& path);  // FixtureMissing

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  struct Best {
    double similarity = 0.0;
    const Entry* entry = nullptr;
  };
  Best best_match(std::string_view normalized_title) const;

 private:
  std::vector<Entry> entries_;
};

// Plain-text list of flagged tokens, one per line, compared lowercase.
class Lexicon {
 public:
  static Lexicon load(const std::filesystem::path& path);  // LexiconMissing

  bool contains(std::string_view token) const;
  const std::vector<std::string>& tokens() const { return tokens_; }  // sorted

 private:
  std::vector<std::string> tokens_;
};

inline constexpr double kLookupSimilarityThreshold = 0.90;

// Facade over the four external capabilities. Remote calls go through the
// persistent cache; fallbacks are pure functions. Fallback is never silently
// substituted for a failing remote: configuration decides the mode.
class Providers {
 public:
  explicit Providers(ProviderConfig config);
  ~Providers();

  Providers(const Providers&) = delete;
  Providers& operator=(const Providers&) = delete;

  // Errors: EmptyText, RemoteUnavailable.
  EmbeddingVector embed(std::string_view text) const;

  // Score in [0,1]. Lexicon mode: min(1, 10 * flagged / max(1, total)).
  // Errors: LexiconMissing, RemoteUnavailable.
  double toxicity(std::string_view text) const;

  // Found iff a candidate title reaches similarity >= 0.90 against the
  // reference's normalized title. Errors: FixtureMissing, RemoteUnavailable.
  LookupResult lookup_reference(const Reference& ref) const;

  // Errors: CompletionDisabled, RemoteUnavailable.
  std::string complete(std::string_view prompt) const;

  const ProviderConfig& config() const { return config_; }
  const ScholarIndex& scholar_index() const;  // lazy; FixtureMissing
  const Lexicon& lexicon() const;             // lazy; LexiconMissing
  const Cache* cache() const { return cache_.get(); }

 private:
  LookupResult remote_lookup(const std::string& normalized_title) const;

  ProviderConfig config_;
  std::unique_ptr<Cache> cache_;

  mutable std::mutex mutex_;
  mutable std::optional<ScholarIndex> scholar_;
  mutable std::optional<Lexicon> lexicon_;
  mutable std::map<std::string, LookupResult> lookup_memo_;
};

}  // namespace referee
