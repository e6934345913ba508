#include "referee/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "referee/errors.hpp"
#include "referee/hashing.hpp"

namespace referee {
namespace {

using nlohmann::json;

void expect_keys(const json& j, std::initializer_list<const char*> allowed,
                 const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* k) { return key == k; }) == allowed.end()) {
      fail(Err::ConfigError, "unknown key '" + key + "' in " + where);
    }
  }
}

std::string string_field(const json& j, const char* key, const std::string& where,
                         const std::string& fallback = "") {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string()) fail(Err::ConfigError, where + "." + key + " must be a string");
  return j[key].get<std::string>();
}

RemoteEndpoint endpoint_from(const json& j, const std::string& where) {
  RemoteEndpoint ep;
  ep.endpoint = string_field(j, "endpoint", where);
  ep.auth_header = string_field(j, "auth_header", where);
  ep.auth_env = string_field(j, "auth_env", where);
  ep.query_param = string_field(j, "query_param", where, "query");
  return ep;
}

const char* mode_name(EmbeddingMode m) {
  return m == EmbeddingMode::fallback ? "fallback" : "remote";
}
const char* mode_name(ToxicityMode m) {
  return m == ToxicityMode::lexicon ? "lexicon" : "remote";
}
const char* mode_name(ScholarMode m) { return m == ScholarMode::fixture ? "fixture" : "remote"; }
const char* mode_name(CompletionMode m) {
  return m == CompletionMode::disabled ? "disabled" : "remote";
}

json endpoint_json(const RemoteEndpoint& ep) {
  json j;
  j["endpoint"] = ep.endpoint;
  j["auth_header"] = ep.auth_header;
  j["auth_env"] = ep.auth_env;
  j["query_param"] = ep.query_param;
  return j;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

json manifest_object(const RunManifest& m) {
  json j;
  j["tool_version"] = m.tool_version;
  j["timestamp"] = m.timestamp;
  j["config_fingerprint"] = m.config_fingerprint;
  j["provider_modes"] = m.provider_modes;
  j["corpus_fingerprint"] = m.corpus_fingerprint;
  j["reviewer"] = m.reviewer_id;
  j["originals_present"] = m.originals_present;
  return j;
}

std::string run_timestamp(const ProviderConfig& config) {
  std::time_t t = 0;
  bool have_time = false;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
    long long seconds = 0;
    auto [ptr, ec] = std::from_chars(epoch, epoch + std::string_view(epoch).size(), seconds);
    if (ec == std::errc() && *ptr == '\0') {
      t = static_cast<std::time_t>(seconds);
      have_time = true;
    }
  }
  if (!have_time) {
    if (!config.any_remote()) return "";
    t = std::time(nullptr);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::ConfigError, "config file not readable: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();

  json j = json::parse(buf.str(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    fail(Err::ConfigError, "config file is not a JSON object: " + path.string());
  }
  expect_keys(j,
              {"embedding", "toxicity", "scholar", "completion", "cache_dir", "timeout_ms",
               "retries", "workers", "subsets", "seed", "intensity", "donors", "word_limit"},
              "config");

  RunConfig config;
  ProviderConfig& p = config.providers;

  if (j.contains("embedding")) {
    const json& e = j["embedding"];
    if (!e.is_object()) fail(Err::ConfigError, "config.embedding must be an object");
    expect_keys(e, {"mode", "endpoint", "auth_header", "auth_env"}, "config.embedding");
    std::string mode = string_field(e, "mode", "config.embedding", "fallback");
    if (mode == "fallback") {
      p.embedding_mode = EmbeddingMode::fallback;
    } else if (mode == "remote") {
      p.embedding_mode = EmbeddingMode::remote;
    } else {
      fail(Err::ConfigError, "config.embedding.mode must be fallback or remote");
    }
    p.embedding_remote = endpoint_from(e, "config.embedding");
  }

  if (j.contains("toxicity")) {
    const json& t = j["toxicity"];
    if (!t.is_object()) fail(Err::ConfigError, "config.toxicity must be an object");
    expect_keys(t, {"mode", "lexicon", "endpoint", "auth_header", "auth_env"}, "config.toxicity");
    std::string mode = string_field(t, "mode", "config.toxicity", "lexicon");
    if (mode == "lexicon") {
      p.toxicity_mode = ToxicityMode::lexicon;
    } else if (mode == "remote") {
      p.toxicity_mode = ToxicityMode::remote;
    } else {
      fail(Err::ConfigError, "config.toxicity.mode must be lexicon or remote");
    }
    p.lexicon_path = string_field(t, "lexicon", "config.toxicity");
    p.toxicity_remote = endpoint_from(t, "config.toxicity");
  }

  if (j.contains("scholar")) {
    const json& s = j["scholar"];
    if (!s.is_object()) fail(Err::ConfigError, "config.scholar must be an object");
    expect_keys(s, {"mode", "fixture", "endpoint", "auth_header", "auth_env", "query_param"},
                "config.scholar");
    std::string mode = string_field(s, "mode", "config.scholar", "fixture");
    if (mode == "fixture") {
      p.scholar_mode = ScholarMode::fixture;
    } else if (mode == "remote") {
      p.scholar_mode = ScholarMode::remote;
    } else {
      fail(Err::ConfigError, "config.scholar.mode must be fixture or remote");
    }
    p.scholar_fixture_path = string_field(s, "fixture", "config.scholar");
    p.scholar_remote = endpoint_from(s, "config.scholar");
  }

  if (j.contains("completion")) {
    const json& c = j["completion"];
    if (!c.is_object()) fail(Err::ConfigError, "config.completion must be an object");
    expect_keys(c, {"mode", "endpoint", "auth_header", "auth_env"}, "config.completion");
    std::string mode = string_field(c, "mode", "config.completion", "disabled");
    if (mode == "disabled") {
      p.completion_mode = CompletionMode::disabled;
    } else if (mode == "remote") {
      p.completion_mode = CompletionMode::remote;
    } else {
      fail(Err::ConfigError, "config.completion.mode must be disabled or remote");
    }
    p.completion_remote = endpoint_from(c, "config.completion");
  }

  p.cache_dir = string_field(j, "cache_dir", "config");

  auto int_field = [&](const char* key, long long lo, long long hi, long long fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) {
      fail(Err::ConfigError, std::string("config.") + key + " must be an integer");
    }
    long long v = j[key].get<long long>();
    if (v < lo || v > hi) {
      fail(Err::ConfigError, std::string("config.") + key + " out of range");
    }
    return v;
  };

  p.timeout_ms = static_cast<int>(int_field("timeout_ms", 1, 86400000, p.timeout_ms));
  p.retries = static_cast<int>(int_field("retries", 0, 16, p.retries));
  config.workers = static_cast<int>(int_field("workers", 0, 4096, config.workers));
  config.subsets = static_cast<std::size_t>(
      int_field("subsets", 1, 1 << 20, static_cast<long long>(config.subsets)));
  config.word_limit = static_cast<std::size_t>(
      int_field("word_limit", 1, 1 << 30, static_cast<long long>(config.word_limit)));

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
      fail(Err::ConfigError, "config.seed must be a non-negative integer");
    }
    if (j["seed"].is_number_integer() && j["seed"].get<long long>() < 0) {
      fail(Err::ConfigError, "config.seed must be a non-negative integer");
    }
    config.seed = j["seed"].get<std::uint64_t>();
  }

  if (j.contains("intensity")) {
    if (!j["intensity"].is_number()) fail(Err::ConfigError, "config.intensity must be a number");
    config.intensity = j["intensity"].get<double>();
    if (!(config.intensity > 0.0 && config.intensity <= 1.0)) {
      fail(Err::ConfigError, "config.intensity must lie in (0,1]");
    }
  }

  config.donors_dir = string_field(j, "donors", "config");
  return config;
}

std::string config_fingerprint(const ProviderConfig& config) {
  json j;
  j["embedding"] = {{"mode", mode_name(config.embedding_mode)},
                    {"remote", endpoint_json(config.embedding_remote)}};
  j["toxicity"] = {{"mode", mode_name(config.toxicity_mode)},
                   {"lexicon", config.lexicon_path},
                   {"remote", endpoint_json(config.toxicity_remote)}};
  j["scholar"] = {{"mode", mode_name(config.scholar_mode)},
                  {"fixture", config.scholar_fixture_path},
                  {"remote", endpoint_json(config.scholar_remote)}};
  j["completion"] = {{"mode", mode_name(config.completion_mode)},
                     {"remote", endpoint_json(config.completion_remote)}};
  j["cache_dir"] = config.cache_dir;
  j["timeout_ms"] = config.timeout_ms;
  j["retries"] = config.retries;
  return hex64(fnv1a64(j.dump()));
}

std::string corpus_fingerprint(const std::filesystem::path& root) {
  std::error_code ec;
  if (!std::filesystem::is_directory(root, ec)) {
    fail(Err::IoError, "cannot fingerprint missing directory: " + root.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::vector<std::string> keys;
  keys.reserve(files.size());
  for (const std::filesystem::path& f : files) {
    keys.push_back(std::filesystem::relative(f, root).generic_string());
  }
  std::vector<std::size_t> order(files.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });

  std::uint64_t h = kFnvOffsetBasis;
  for (std::size_t i : order) {
    std::ifstream in(files[i], std::ios::binary);
    if (!in) fail(Err::IoError, "cannot read " + files[i].string());
    std::ostringstream buf;
    buf << in.rdbuf();
    h = fnv1a64(keys[i], h);
    h = fnv1a64(std::string_view("\0", 1), h);
    h = fnv1a64(buf.str(), h);
    h = fnv1a64("\x1e", h);
  }
  return hex64(h);
}

RunManifest make_manifest(const ProviderConfig& config, const std::string& reviewer_id,
                          const std::string& corpus_fp, bool originals_present) {
  RunManifest m;
  m.tool_version = kToolVersion;
  m.timestamp = run_timestamp(config);
  m.config_fingerprint = config_fingerprint(config);
  m.provider_modes["embedding"] = mode_name(config.embedding_mode);
  m.provider_modes["toxicity"] = mode_name(config.toxicity_mode);
  m.provider_modes["scholar"] = mode_name(config.scholar_mode);
  m.provider_modes["completion"] = mode_name(config.completion_mode);
  m.corpus_fingerprint = corpus_fp;
  m.reviewer_id = reviewer_id;
  m.originals_present = originals_present;
  return m;
}

std::string manifest_json(const RunManifest& manifest) {
  return manifest_object(manifest).dump(2) + "\n";
}

std::string review_json(const Review& review, const LengthCheck& length,
                        const RunManifest& manifest) {
  json scores = json::array();
  for (const CriterionScore& s : review.scores) {
    json sub = json::object();
    for (const auto& [name, value] : s.sub_scores) sub[name] = value;
    scores.push_back({{"name", s.name}, {"value", s.value}, {"sub_scores", std::move(sub)}});
  }
  json j;
  j["paper_id"] = review.paper_id;
  j["reviewer"] = review.reviewer_id;
  j["scores"] = std::move(scores);
  j["overall"] = review.overall;
  j["justification"] = review.justification;
  j["length"] = {{"ok", length.ok}, {"words", length.actual}, {"limit", length.limit}};
  j["manifest"] = manifest_object(manifest);
  return j.dump(2) + "\n";
}

std::string results_json(const MetaReport& report, const RunManifest& manifest) {
  json criteria = json::array();
  for (const CriterionReport& row : report.criteria) {
    json r;
    r["criterion"] = row.criterion;
    r["n"] = row.n;
    r["contrastive_score"] = row.contrastive;
    r["mean_diff"] = row.mean_diff;
    r["median"] = row.median;
    r["q1"] = row.q1;
    r["q3"] = row.q3;
    r["p10"] = row.p10;
    r["p90"] = row.p90;
    r["stderr"] = row.stderr_value;
    r["subset_scores"] = row.subset_scores;
    r["subset_sizes"] = row.subset_sizes;
    r["targeted_contrastive"] =
        row.targeted_contrastive.has_value() ? json(*row.targeted_contrastive) : json(nullptr);
    r["targeted_n"] = row.targeted_n;
    criteria.push_back(std::move(r));
  }

  json diffs = json::array();
  for (const DiffRecord& d : report.diffs) {
    diffs.push_back({{"pair_id", d.pair_id},
                     {"criterion", d.criterion},
                     {"diff", d.diff},
                     {"overall_diff", d.overall_diff}});
  }

  json failures = json::array();
  for (const PairFailure& f : report.failures) {
    failures.push_back({{"pair_id", f.pair_id}, {"error", f.error}});
  }

  json j;
  j["reviewer"] = report.reviewer_id;
  j["n_pairs"] = report.n_pairs;
  j["n_subsets"] = report.n_subsets;
  j["n_failures"] = report.failures.size();
  j["criteria"] = std::move(criteria);
  j["text_feedback"] = {{"n_reviews", report.n_reviews},
                        {"mean_rating_consistency", report.mean_rating_consistency},
                        {"mean_respectfulness", report.mean_respectfulness}};
  j["diffs"] = std::move(diffs);
  j["failures"] = std::move(failures);
  j["manifest"] = manifest_object(manifest);
  return j.dump(2) + "\n";
}

std::string table_csv(const MetaReport& report) {
  std::string out = "criterion,n,contrastive_score,mean_diff,median,q1,q3,p10,p90,stderr\n";
  for (const CriterionReport& row : report.criteria) {
    out += row.criterion;
    out += "," + std::to_string(row.n);
    out += "," + fixed6(row.contrastive);
    out += "," + fixed6(row.mean_diff);
    out += "," + fixed6(row.median);
    out += "," + fixed6(row.q1);
    out += "," + fixed6(row.q3);
    out += "," + fixed6(row.p10);
    out += "," + fixed6(row.p90);
    out += "," + fixed6(row.stderr_value);
    out += "\n";
  }
  return out;
}

std::string render_boxplot_svg(const MetaReport& report) {
  // Fixed canvas and y domain keep every run geometrically comparable:
  // y(v) = 20 + (1 - v) * 170 maps [-1,1] onto [360,20].
  auto y_of = [](double v) { return 20.0 + (1.0 - v) * 170.0; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"400\" "
         "viewBox=\"0 0 800 400\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"400\" fill=\"white\"/>\n";
  svg += "<line class=\"axis\" x1=\"60.000\" y1=\"20.000\" x2=\"60.000\" y2=\"360.000\" "
         "stroke=\"black\"/>\n";
  for (double tick : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    std::string y = fixed3(y_of(tick));
    char label[16];
    std::snprintf(label, sizeof(label), "%.1f", tick);
    svg += "<line class=\"tick\" x1=\"55.000\" y1=\"" + y + "\" x2=\"60.000\" y2=\"" + y +
           "\" stroke=\"black\"/>\n";
    svg += "<text class=\"tick-label\" x=\"50.000\" y=\"" + fixed3(y_of(tick) + 4.0) +
           "\" text-anchor=\"end\" font-size=\"12\">" + label + "</text>\n";
  }
  svg += "<line class=\"zero\" x1=\"60.000\" y1=\"" + fixed3(y_of(0.0)) + "\" x2=\"780.000\" y2=\"" +
         fixed3(y_of(0.0)) + "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 4\"/>\n";

  double step = 720.0 / static_cast<double>(report.criteria.size());
  for (std::size_t i = 0; i < report.criteria.size(); ++i) {
    const CriterionReport& row = report.criteria[i];
    double cx = 60.0 + (static_cast<double>(i) + 0.5) * step;
    std::string cxs = fixed3(cx);

    svg += "<g id=\"box-" + row.criterion + "\">\n";
    svg += "  <line class=\"whisker\" x1=\"" + cxs + "\" y1=\"" + fixed3(y_of(row.p90)) +
           "\" x2=\"" + cxs + "\" y2=\"" + fixed3(y_of(row.p10)) + "\" stroke=\"black\"/>\n";
    for (double cap : {row.p90, row.p10}) {
      svg += "  <line class=\"cap\" x1=\"" + fixed3(cx - 10.0) + "\" y1=\"" + fixed3(y_of(cap)) +
             "\" x2=\"" + fixed3(cx + 10.0) + "\" y2=\"" + fixed3(y_of(cap)) +
             "\" stroke=\"black\"/>\n";
    }
    svg += "  <rect class=\"box\" x=\"" + fixed3(cx - 20.0) + "\" y=\"" + fixed3(y_of(row.q3)) +
           "\" width=\"40.000\" height=\"" + fixed3(y_of(row.q1) - y_of(row.q3)) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
    svg += "  <line class=\"median\" x1=\"" + fixed3(cx - 20.0) + "\" y1=\"" +
           fixed3(y_of(row.median)) + "\" x2=\"" + fixed3(cx + 20.0) + "\" y2=\"" +
           fixed3(y_of(row.median)) + "\" stroke=\"black\"/>\n";
    svg += "  <text class=\"label\" x=\"" + cxs +
           "\" y=\"380.000\" text-anchor=\"middle\" font-size=\"12\">" + row.criterion +
           "</text>\n";
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Err::IoError, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(Err::IoError, "short write to " + path.string());
}

void write_contrast_bundle(const std::filesystem::path& out_dir, const MetaReport& report,
                           const RunManifest& manifest) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  write_text_file(out_dir / "results.json", results_json(report, manifest));
  write_text_file(out_dir / "table.csv", table_csv(report));
  write_text_file(out_dir / "boxplot.svg", render_boxplot_svg(report));
  write_text_file(out_dir / "manifest.json", manifest_json(manifest));
}

}  // namespace referee
