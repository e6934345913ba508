#include "referee/providers.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <unistd.h>

#include <httplib.h>
#include <json.hpp>

#include "referee/errors.hpp"
#include "referee/hashing.hpp"
#include "referee/text.hpp"

namespace referee {
namespace {

using nlohmann::json;

std::string read_file_or(const std::filesystem::path& path, Err missing_code,
                         const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(missing_code, std::string(what) + " not readable: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

struct ParsedUrl {
  std::string base;  // scheme://host[:port]
  std::string path;  // leading '/', never empty
};

ParsedUrl parse_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    fail(Err::ConfigError, "endpoint is not an absolute URL: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string percent_encode(std::string_view s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    bool plain = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                 (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.' || c == '~';
    if (plain) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 0xf]);
    }
  }
  return out;
}

void apply_auth(httplib::Headers& headers, const RemoteEndpoint& ep) {
  if (ep.auth_header.empty()) return;
  const char* secret = ep.auth_env.empty() ? nullptr : std::getenv(ep.auth_env.c_str());
  if (secret == nullptr) {
    fail(Err::ConfigError,
         "auth header '" + ep.auth_header + "' configured but $" + ep.auth_env + " is not set");
  }
  headers.emplace(ep.auth_header, secret);
}

constexpr int kBackoffBaseMs = 500;

// Runs `attempt` up to retries+1 times with exponential backoff. `attempt`
// returns the response body on success and nullopt on a retryable failure.
std::string with_retries(const ProviderConfig& cfg, const std::string& what,
                         const std::function<std::optional<std::string>(std::string&)>& attempt) {
  std::string last_error = "no attempt made";
  int tries = std::max(0, cfg.retries) + 1;
  for (int i = 0; i < tries; ++i) {
    if (i > 0) {
      int delay = kBackoffBaseMs << (i - 1);
      std::this_thread::sleep_for(std::chrono::milliseconds(delay));
    }
    std::string error;
    if (auto body = attempt(error)) return *body;
    last_error = error;
  }
  fail(Err::RemoteUnavailable, what + " failed after " + std::to_string(tries) +
                                   " attempts: " + last_error);
}

std::optional<std::string> one_http_call(const RemoteEndpoint& ep, const ProviderConfig& cfg,
                                         bool is_post, const std::string& path_suffix,
                                         const std::string& body, std::string& error) {
  ParsedUrl url = parse_url(ep.endpoint);
  httplib::Client client(url.base);
  auto timeout = std::chrono::milliseconds(std::max(1, cfg.timeout_ms));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  httplib::Headers headers;
  apply_auth(headers, ep);

  std::string path = url.path + path_suffix;
  httplib::Result res = is_post ? client.Post(path, headers, body, "application/json")
                                : client.Get(path, headers);
  if (!res) {
    error = "transport error: " + httplib::to_string(res.error());
    return std::nullopt;
  }
  if (res->status != 200) {
    error = "HTTP status " + std::to_string(res->status);
    return std::nullopt;
  }
  return res->body;
}

std::string post_json(const RemoteEndpoint& ep, const ProviderConfig& cfg,
                      const std::string& what, const json& payload) {
  std::string body = payload.dump();
  return with_retries(cfg, what, [&](std::string& error) {
    return one_http_call(ep, cfg, true, "", body, error);
  });
}

std::string get_with_query(const RemoteEndpoint& ep, const ProviderConfig& cfg,
                           const std::string& what, const std::string& value) {
  std::string param = ep.query_param.empty() ? "query" : ep.query_param;
  std::string suffix = (ep.endpoint.find('?') == std::string::npos ? "?" : "&") + param + "=" +
                       percent_encode(value);
  return with_retries(cfg, what, [&](std::string& error) {
    return one_http_call(ep, cfg, false, suffix, "", error);
  });
}

json parse_provider_json(const std::string& body, const std::string& what) {
  json parsed = json::parse(body, nullptr, false);
  if (parsed.is_discarded()) {
    fail(Err::RemoteUnavailable, what + " returned malformed JSON");
  }
  return parsed;
}

std::string serialize_embedding(const EmbeddingVector& v) {
  json j;
  j["dim"] = v.dim;
  j["values"] = v.values;
  j["unit_norm"] = v.unit_norm;
  return j.dump();
}

std::optional<EmbeddingVector> deserialize_embedding(const std::string& s) {
  json j = json::parse(s, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("values") || !j["values"].is_array()) {
    return std::nullopt;
  }
  EmbeddingVector v;
  v.values = j["values"].get<std::vector<double>>();
  v.dim = static_cast<int>(v.values.size());
  v.unit_norm = j.value("unit_norm", false);
  if (v.dim == 0) return std::nullopt;
  return v;
}

}  // namespace

EmbeddingVector fallback_embed(std::string_view text) {
  std::vector<std::string> tokens = tokenize(text);
  if (tokens.empty()) fail(Err::EmptyText, "cannot embed text with no tokens");

  EmbeddingVector v;
  v.dim = kFallbackEmbeddingDim;
  v.values.assign(kFallbackEmbeddingDim, 0.0);
  for (const std::string& tok : tokens) {
    std::uint64_t h = fnv1a64(tok);
    int bucket = static_cast<int>(h % kFallbackEmbeddingDim);
    double sign = (h >> 63) == 0 ? 1.0 : -1.0;
    v.values[bucket] += sign;
  }

  double sq = 0.0;
  for (double x : v.values) sq += x * x;
  if (sq == 0.0) {
    // Signed buckets can cancel exactly (e.g. two tokens sharing a bucket
    // with opposite signs). Map such degenerate bags to the first basis
    // vector so every embedding stays unit-norm and deterministic.
    v.values[0] = 1.0;
  } else {
    double norm = std::sqrt(sq);
    for (double& x : v.values) x /= norm;
  }
  v.unit_norm = true;
  return v;
}

Cache::Cache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) fail(Err::CacheIOError, "cannot create cache directory " + dir_.string());
}

std::filesystem::path Cache::entry_path(std::string_view ns, std::string_view key) const {
  return dir_ / std::string(ns) / hex64(fnv1a64(key));
}

std::optional<std::string> Cache::get(std::string_view ns, std::string_view key) const {
  std::filesystem::path path = entry_path(ns, key);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::CacheIOError, "cache entry exists but is unreadable: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void Cache::put(std::string_view ns, std::string_view key, std::string_view value) const {
  std::filesystem::path path = entry_path(ns, key);
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) fail(Err::CacheIOError, "cannot create cache namespace " + path.parent_path().string());

  static std::atomic<std::uint64_t> counter{0};
  std::filesystem::path tmp =
      path.string() + ".tmp." + std::to_string(::getpid()) + "." +
      std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Err::CacheIOError, "cannot open cache temp file " + tmp.string());
    out.write(value.data(), static_cast<std::streamsize>(value.size()));
    if (!out) fail(Err::CacheIOError, "short write to cache temp file " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(Err::CacheIOError, "cannot publish cache entry " + path.string());
  }
}

ScholarIndex ScholarIndex::load(const std::filesystem::path& path) {
  std::string text = read_file_or(path, Err::FixtureMissing, "scholar fixture");
  json parsed = json::parse(text, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    fail(Err::FixtureMissing, "scholar fixture is not a JSON object: " + path.string());
  }
  ScholarIndex index;
  for (const auto& [key, value] : parsed.items()) {
    Entry e;
    e.normalized = normalize_title(key);
    if (e.normalized.empty()) continue;
    if (value.is_object() && value.contains("title") && value["title"].is_string()) {
      e.title = value["title"].get<std::string>();
    } else {
      e.title = key;
    }
    index.entries_.push_back(std::move(e));
  }
  std::sort(index.entries_.begin(), index.entries_.end(),
            [](const Entry& a, const Entry& b) { return a.normalized < b.normalized; });
  return index;
}

ScholarIndex::Best ScholarIndex::best_match(std::string_view normalized_title) const {
  Best best;
  for (const Entry& e : entries_) {
    double sim = title_similarity(normalized_title, e.normalized);
    if (sim > best.similarity) {
      best.similarity = sim;
      best.entry = &e;
    }
  }
  return best;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::string text = read_file_or(path, Err::LexiconMissing, "toxicity lexicon");
  Lexicon lex;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.pop_back();
    }
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    line = line.substr(start);
    if (line[0] == '#') continue;
    lex.tokens_.push_back(lowercase(line));
  }
  std::sort(lex.tokens_.begin(), lex.tokens_.end());
  lex.tokens_.erase(std::unique(lex.tokens_.begin(), lex.tokens_.end()), lex.tokens_.end());
  return lex;
}

bool Lexicon::contains(std::string_view token) const {
  std::string t = lowercase(token);
  return std::binary_search(tokens_.begin(), tokens_.end(), t);
}

Providers::Providers(ProviderConfig config) : config_(std::move(config)) {
  if (!config_.cache_dir.empty()) {
    cache_ = std::make_unique<Cache>(config_.cache_dir);
  }
}

Providers::~Providers() = default;

const ScholarIndex& Providers::scholar_index() const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (!scholar_) {
    if (config_.scholar_fixture_path.empty()) {
      fail(Err::FixtureMissing, "no scholar fixture path configured");
    }
    scholar_ = ScholarIndex::load(config_.scholar_fixture_path);
  }
  return *scholar_;
}

const Lexicon& Providers::lexicon() const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (!lexicon_) {
    if (config_.lexicon_path.empty()) {
      fail(Err::LexiconMissing, "no lexicon path configured");
    }
    lexicon_ = Lexicon::load(config_.lexicon_path);
  }
  return *lexicon_;
}

EmbeddingVector Providers::embed(std::string_view text) const {
  if (tokenize(text).empty()) fail(Err::EmptyText, "cannot embed text with no tokens");
  if (config_.embedding_mode == EmbeddingMode::fallback) {
    return fallback_embed(text);
  }

  std::string key(text);
  if (cache_) {
    if (auto hit = cache_->get("embed", key)) {
      if (auto v = deserialize_embedding(*hit)) return *v;
    }
  }

  json payload;
  payload["text"] = key;
  std::string body = post_json(config_.embedding_remote, config_, "embedding provider", payload);
  json parsed = parse_provider_json(body, "embedding provider");
  if (!parsed.is_object() || !parsed.contains("embedding") || !parsed["embedding"].is_array() ||
      parsed["embedding"].empty()) {
    fail(Err::RemoteUnavailable, "embedding provider response lacks a non-empty 'embedding' array");
  }
  EmbeddingVector v;
  v.values = parsed["embedding"].get<std::vector<double>>();
  v.dim = static_cast<int>(v.values.size());
  v.unit_norm = false;
  if (cache_) cache_->put("embed", key, serialize_embedding(v));
  return v;
}

double Providers::toxicity(std::string_view text) const {
  if (config_.toxicity_mode == ToxicityMode::lexicon) {
    const Lexicon& lex = lexicon();
    std::vector<std::string> tokens = tokenize(text);
    std::size_t flagged = 0;
    for (const std::string& tok : tokens) {
      if (lex.contains(tok)) ++flagged;
    }
    double ratio = static_cast<double>(flagged) /
                   static_cast<double>(std::max<std::size_t>(1, tokens.size()));
    return std::min(1.0, 10.0 * ratio);
  }

  std::string key(text);
  if (cache_) {
    if (auto hit = cache_->get("toxicity", key)) {
      try {
        return std::clamp(std::stod(*hit), 0.0, 1.0);
      } catch (const std::exception&) {
        // fall through to a fresh call; the entry is rewritten below
      }
    }
  }

  json payload;
  payload["text"] = key;
  std::string body = post_json(config_.toxicity_remote, config_, "toxicity provider", payload);
  json parsed = parse_provider_json(body, "toxicity provider");
  if (!parsed.is_object() || !parsed.contains("score") || !parsed["score"].is_number()) {
    fail(Err::RemoteUnavailable, "toxicity provider response lacks a numeric 'score'");
  }
  double score = std::clamp(parsed["score"].get<double>(), 0.0, 1.0);
  if (cache_) cache_->put("toxicity", key, std::to_string(score));
  return score;
}

LookupResult Providers::lookup_reference(const Reference& ref) const {
  if (ref.normalized_title.empty()) return LookupResult{};

  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = lookup_memo_.find(ref.normalized_title);
    if (it != lookup_memo_.end()) return it->second;
  }

  LookupResult result;
  if (config_.scholar_mode == ScholarMode::fixture) {
    ScholarIndex::Best best = scholar_index().best_match(ref.normalized_title);
    if (best.entry != nullptr && best.similarity >= kLookupSimilarityThreshold) {
      result.status = LookupResult::Status::Found;
      result.matched_title = best.entry->title;
    }
    result.source = LookupResult::Source::fixture;
  } else {
    result = remote_lookup(ref.normalized_title);
  }

  std::lock_guard<std::mutex> lock(mutex_);
  lookup_memo_.emplace(ref.normalized_title, result);
  return result;
}

LookupResult Providers::remote_lookup(const std::string& normalized_title) const {
  if (cache_) {
    if (auto hit = cache_->get("scholar", normalized_title)) {
      json j = json::parse(*hit, nullptr, false);
      if (j.is_object() && j.contains("found")) {
        LookupResult r;
        r.source = LookupResult::Source::cache;
        if (j["found"].get<bool>()) {
          r.status = LookupResult::Status::Found;
          r.matched_title = j.value("matched_title", std::string());
        }
        return r;
      }
    }
  }

  std::string body =
      get_with_query(config_.scholar_remote, config_, "scholar provider", normalized_title);
  json parsed = parse_provider_json(body, "scholar provider");

  // Accepted shapes: an array of candidate titles (strings or objects with a
  // "title" field), or an object holding such an array under "matches".
  const json* candidates = nullptr;
  if (parsed.is_array()) {
    candidates = &parsed;
  } else if (parsed.is_object() && parsed.contains("matches") && parsed["matches"].is_array()) {
    candidates = &parsed["matches"];
  } else {
    fail(Err::RemoteUnavailable, "scholar provider response lacks a candidate list");
  }

  LookupResult result;
  result.source = LookupResult::Source::remote;
  double best_sim = 0.0;
  for (const json& c : *candidates) {
    std::string title;
    if (c.is_string()) {
      title = c.get<std::string>();
    } else if (c.is_object() && c.contains("title") && c["title"].is_string()) {
      title = c["title"].get<std::string>();
    } else {
      continue;
    }
    double sim = title_similarity(normalized_title, normalize_title(title));
    if (sim > best_sim) {
      best_sim = sim;
      if (sim >= kLookupSimilarityThreshold) {
        result.status = LookupResult::Status::Found;
        result.matched_title = title;
      }
    }
  }

  if (cache_) {
    json entry;
    entry["found"] = result.found();
    if (result.found()) entry["matched_title"] = result.matched_title;
    cache_->put("scholar", normalized_title, entry.dump());
  }
  return result;
}

std::string Providers::complete(std::string_view prompt) const {
  if (config_.completion_mode == CompletionMode::disabled) {
    fail(Err::CompletionDisabled, "no completion provider configured");
  }

  std::string key(prompt);
  if (cache_) {
    if (auto hit = cache_->get("complete", key)) return *hit;
  }

  json payload;
  payload["prompt"] = key;
  std::string body =
      post_json(config_.completion_remote, config_, "completion provider", payload);
  json parsed = parse_provider_json(body, "completion provider");
  if (!parsed.is_object() || !parsed.contains("text") || !parsed["text"].is_string()) {
    fail(Err::RemoteUnavailable, "completion provider response lacks a 'text' string");
  }
  std::string text = parsed["text"].get<std::string>();
  if (cache_) cache_->put("complete", key, text);
  return text;
}

}  // namespace referee
