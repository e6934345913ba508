#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "referee/contrastive.hpp"
#include "referee/corruptor.hpp"
#include "referee/providers.hpp"
#include "referee/text.hpp"

namespace referee {

inline constexpr const char* kToolVersion = "0.1.0";

// Everything a run needs beyond the reviewer choice. Loaded from a JSON
// config file, then overridden by command-line flags; secrets never appear
// here, only the names of environment variables that hold them.
struct RunConfig {
  ProviderConfig providers;
  int workers = 0;  // 0 = one per logical core
  std::size_t subsets = kDefaultSubsets;
  std::uint64_t seed = 0;
  double intensity = kDefaultCorruptionIntensity;
  std::string donors_dir;
  std::size_t word_limit = 2000;
};

// Errors: ConfigError (unreadable file, malformed JSON, unknown keys,
// wrong types, out-of-range values).
RunConfig load_run_config(const std::filesystem::path& path);

// FNV-1a 64 over the canonical JSON form of the provider configuration,
// as 16 hex digits. Two configs fingerprint equal iff they behave equal.
std::string config_fingerprint(const ProviderConfig& config);

// FNV-1a 64 over relative path and content of every regular file under
// root, in sorted path order. Errors: IoError.
std::string corpus_fingerprint(const std::filesystem::path& root);

struct RunManifest {
  std::string tool_version = kToolVersion;
  // Honest provenance: empty for fully offline runs (byte-identical outputs),
  // SOURCE_DATE_EPOCH when set, wall clock only when remote providers are in
  // play and SOURCE_DATE_EPOCH is not.
  std::string timestamp;
  std::string config_fingerprint;
  std::map<std::string, std::string> provider_modes;
  std::string corpus_fingerprint;  // empty when no corpus was involved
  std::string reviewer_id;
  bool originals_present = false;
};

RunManifest make_manifest(const ProviderConfig& config, const std::string& reviewer_id,
                          const std::string& corpus_fingerprint, bool originals_present);

std::string manifest_json(const RunManifest& manifest);

// Single review as pretty JSON: scores with sub-scores, overall,
// justification, the length check and the manifest.
std::string review_json(const Review& review, const LengthCheck& length,
                        const RunManifest& manifest);

// Full contrastive report as pretty JSON: per-criterion rows (including
// targeted scores and subset data), every diff record, failures and the
// manifest.
std::string results_json(const MetaReport& report, const RunManifest& manifest);

// Header criterion,n,contrastive_score,mean_diff,median,q1,q3,p10,p90,stderr
// and one row per criterion plus "overall", numbers rendered as %.6f.
std::string table_csv(const MetaReport& report);

// 800x400 box plot of per-pair score differences, one box per criterion
// plus "overall": box q1..q3, midline at the median, whiskers at p10/p90,
// fixed y domain [-1,1], coordinates as %.3f. The geometry is flat SVG,
// recoverable by parsing each <g id="box-...."> group.
std::string render_boxplot_svg(const MetaReport& report);

// Writes results.json, table.csv, boxplot.svg and manifest.json into
// out_dir, creating it if needed. Errors: IoError.
void write_contrast_bundle(const std::filesystem::path& out_dir, const MetaReport& report,
                           const RunManifest& manifest);

void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace referee
