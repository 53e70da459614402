#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lvc/report.hpp"
#include "lvc/types.hpp"

namespace lvc {

std::string_view mode_name(CompressionMode mode);
/// Accepts "query-attn", "query-attn-mh", "avg-pool".
CompressionMode parse_mode(std::string_view name);

// -- frame sampling ---------------------------------------------------------

struct SamplingPlan {
  std::size_t total_frames = 0;
  std::vector<std::size_t> indices;
};

/// Centre-uniform sampling: index_j = floor((j + 0.5) * total / count).
SamplingPlan sample_frame_indices(std::size_t total_frames, std::size_t count);

// -- compression jobs -------------------------------------------------------

struct CompressionJob {
  std::filesystem::path features;
  std::optional<std::filesystem::path> query;
  std::optional<std::filesystem::path> features_sidecar;
  std::filesystem::path out;
  std::size_t tokens_per_frame = 1;
  CompressionConfig config;
  unsigned threads = 1;
};

/// Output sidecar location for a given output array path (extension -> .json).
std::filesystem::path output_sidecar_path(const std::filesystem::path& out);

VideoFeatures load_features(const std::filesystem::path& path, std::size_t tokens_per_frame,
                            const std::optional<std::filesystem::path>& sidecar = std::nullopt);
QueryEmbedding load_query(const std::filesystem::path& path);

/// Loads inputs, compresses, writes the pseudo-frame array and its sidecar,
/// and returns a summary that echoes the configuration used.
Report run_compression_job(const CompressionJob& job);

// -- synthetic retrieval evaluation ------------------------------------------

struct SynthEvalParams {
  std::size_t trials = 1000;
  std::size_t frames = 64;
  std::size_t tokens_per_frame = 4;
  std::size_t dim = 64;
  std::size_t target_frames = 4;
  double noise_sigma = 0.0;
  std::uint64_t seed = 7;
  unsigned threads = 1;
};

struct SynthEvalReport {
  std::size_t trials = 0;
  std::size_t wins = 0;
  double win_rate = 0.0;
  double mean_cosine_attn = 0.0;
  double mean_cosine_avg = 0.0;
  SynthEvalParams params;

  Report to_report() const;
};

/// Plants a unit target vector once per window among random unit rows, uses
/// the target as the query, and scores how often query attention recovers it
/// better than average pooling (by cosine, majority of windows; ties lose).
SynthEvalReport run_synthetic_retrieval_eval(const SynthEvalParams& params);

// -- throughput benchmark ----------------------------------------------------

struct BenchSize {
  std::size_t frames = 0;
  std::size_t tokens_per_frame = 0;
  std::size_t dim = 0;

  std::string to_string() const;
  /// Parses "MxTxD", e.g. "64x256x4096".
  static BenchSize parse(std::string_view text);
};

struct BenchParams {
  std::vector<BenchSize> sizes;
  std::size_t target_frames = 16;
  std::size_t repetitions = 5;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct BenchResult {
  BenchSize size;
  std::vector<double> seconds;  // one per repetition, in run order
  double median_s = 0.0;
  double p95_s = 0.0;
  double rows_per_s = 0.0;
  std::string input_fnv1a;
  std::string output_fnv1a;
};

struct BenchReport {
  BenchParams params;
  std::vector<BenchResult> results;

  Report to_report() const;
};

/// Times compress on seeded random instances; one untimed warm-up per size,
/// then repetitions interleaved across sizes.
BenchReport run_throughput_bench(const BenchParams& params);

/// FNV-1a 64-bit digest of the raw bytes of `values`, as 16 hex digits.
std::string fnv1a_hex(std::span<const float> values);

}  // namespace lvc
