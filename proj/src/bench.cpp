#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>

#include "lvc/compression.hpp"
#include "lvc/error.hpp"
#include "lvc/pipeline.hpp"

namespace lvc {
namespace {

constexpr std::size_t kQueryLength = 8;

std::vector<float> gaussian_values(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<float> gauss(0.0f, 1.0f);
  std::vector<float> out(n);
  for (float& x : out) x = gauss(rng);
  return out;
}

// Nearest-rank percentile of sorted samples.
double percentile(const std::vector<double>& sorted, double pct) {
  const auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

}  // namespace

std::string fnv1a_hex(std::span<const float> values) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  const auto* bytes = reinterpret_cast<const unsigned char*>(values.data());
  for (std::size_t i = 0; i < values.size_bytes(); ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string BenchSize::to_string() const {
  return std::to_string(frames) + "x" + std::to_string(tokens_per_frame) + "x" + std::to_string(dim);
}

BenchSize BenchSize::parse(std::string_view text) {
  std::size_t parts[3] = {0, 0, 0};
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (int i = 0; i < 3; ++i) {
    auto [next, ec] = std::from_chars(p, end, parts[i]);
    if (ec != std::errc() || parts[i] == 0) break;
    p = next;
    if (i < 2) {
      if (p == end || *p != 'x') break;
      ++p;
    } else if (p == end) {
      return {parts[0], parts[1], parts[2]};
    }
  }
  throw Error(ErrorCode::InvalidConfig, "size '" + std::string(text) + "' is not of the form MxTxD");
}

BenchReport run_throughput_bench(const BenchParams& params) {
  if (params.sizes.empty()) throw Error(ErrorCode::InvalidConfig, "bench needs at least one size");
  if (params.repetitions == 0) throw Error(ErrorCode::InvalidConfig, "repetitions must be positive");

  const CompressionConfig cfg{params.target_frames, 1, CompressionMode::QueryAttention};
  const Parallelism par{params.threads};
  struct Instance {
    VideoFeatures v;
    QueryEmbedding q;
  };
  std::vector<Instance> instances;
  BenchReport report{params, {}};
  for (std::size_t s = 0; s < params.sizes.size(); ++s) {
    const BenchSize& size = params.sizes[s];
    cfg.validate(size.frames, size.dim);
    std::seed_seq seq{static_cast<std::uint32_t>(params.seed),
                      static_cast<std::uint32_t>(params.seed >> 32), static_cast<std::uint32_t>(s)};
    std::mt19937_64 rng(seq);
    const std::size_t rows = size.frames * size.tokens_per_frame;
    auto features = gaussian_values(rng, rows * size.dim);
    auto query = gaussian_values(rng, kQueryLength * size.dim);
    instances.push_back({VideoFeatures(size.frames, size.tokens_per_frame, size.dim, std::move(features)),
                         QueryEmbedding(kQueryLength, size.dim, std::move(query))});

    BenchResult result;
    result.size = size;
    result.input_fnv1a = fnv1a_hex(instances.back().v.data());
    result.output_fnv1a = fnv1a_hex(compress(instances.back().v, instances.back().q, cfg, par).data);  // warm-up
    report.results.push_back(std::move(result));
  }

  // Round-robin over sizes so slow drift in machine load hits every size alike.
  for (std::size_t r = 0; r < params.repetitions; ++r) {
    for (std::size_t s = 0; s < instances.size(); ++s) {
      const auto start = std::chrono::steady_clock::now();
      const PseudoFrames out = compress(instances[s].v, instances[s].q, cfg, par);
      const auto stop = std::chrono::steady_clock::now();
      report.results[s].seconds.push_back(std::chrono::duration<double>(stop - start).count());
    }
  }

  for (auto& result : report.results) {
    std::vector<double> sorted = result.seconds;
    std::sort(sorted.begin(), sorted.end());
    result.median_s = percentile(sorted, 50.0);
    result.p95_s = percentile(sorted, 95.0);
    result.rows_per_s = static_cast<double>(result.size.frames * result.size.tokens_per_frame) / result.median_s;
  }
  return report;
}

Report BenchReport::to_report() const {
  Report r;
  r["seed"] = params.seed;
  r["repetitions"] = params.repetitions;
  r["pseudo_frames"] = params.target_frames;
  r["threads"] = params.threads;
  r["query_length"] = kQueryLength;
  Report rows = Report::array();
  for (const auto& res : results) {
    rows.push_back({{"size", res.size.to_string()},
                    {"frames", res.size.frames},
                    {"tokens_per_frame", res.size.tokens_per_frame},
                    {"dim", res.size.dim},
                    {"rows", res.size.frames * res.size.tokens_per_frame},
                    {"median_s", res.median_s},
                    {"p95_s", res.p95_s},
                    {"rows_per_s", res.rows_per_s},
                    {"seconds", res.seconds},
                    {"input_fnv1a", res.input_fnv1a},
                    {"output_fnv1a", res.output_fnv1a}});
  }
  r["results"] = std::move(rows);
  return r;
}

}  // namespace lvc
