#include <chrono>
#include <string>

#include "lvc/compression.hpp"
#include "lvc/error.hpp"
#include "lvc/npy.hpp"
#include "lvc/pipeline.hpp"

namespace lvc {
namespace {

std::string shape_text(const std::vector<std::size_t>& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) s += (i ? ", " : "") + std::to_string(shape[i]);
  return s + ")";
}

template <typename F>
auto with_context(const std::filesystem::path& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    const std::string what = e.what();
    if (what.find(path.string()) != std::string::npos) throw;
    throw Error(e.code(), path.string() + ": " + what);
  }
}

}  // namespace

std::string_view mode_name(CompressionMode mode) {
  switch (mode) {
    case CompressionMode::QueryAttention: return "query-attn";
    case CompressionMode::QueryAttentionMultiHead: return "query-attn-mh";
    case CompressionMode::AveragePool: return "avg-pool";
  }
  return "unknown";
}

CompressionMode parse_mode(std::string_view name) {
  if (name == "query-attn") return CompressionMode::QueryAttention;
  if (name == "query-attn-mh") return CompressionMode::QueryAttentionMultiHead;
  if (name == "avg-pool") return CompressionMode::AveragePool;
  throw Error(ErrorCode::InvalidConfig, "unknown mode '" + std::string(name) + "'");
}

std::filesystem::path output_sidecar_path(const std::filesystem::path& out) {
  auto p = out;
  p.replace_extension(".json");
  return p;
}

VideoFeatures load_features(const std::filesystem::path& path, std::size_t tokens_per_frame,
                            const std::optional<std::filesystem::path>& sidecar) {
  const ArrayFile a = read_npy(path);
  return with_context(path, [&] {
    if (tokens_per_frame == 0) throw Error(ErrorCode::InvalidConfig, "tokens per frame must be positive");
    std::size_t rows = 0, dim = 0;
    if (a.shape.size() == 3) {
      if (a.shape[1] != tokens_per_frame) {
        throw Error(ErrorCode::DimensionMismatch,
                    "array has " + std::to_string(a.shape[1]) + " tokens per frame, expected " +
                        std::to_string(tokens_per_frame));
      }
      rows = a.shape[0] * a.shape[1];
      dim = a.shape[2];
    } else if (a.shape.size() == 2) {
      rows = a.shape[0];
      dim = a.shape[1];
    } else {
      throw Error(ErrorCode::UnsupportedShape,
                  "features must be (rows, dim) or (frames, tokens, dim), got " + shape_text(a.shape));
    }
    if (rows == 0 || rows % tokens_per_frame != 0) {
      throw Error(ErrorCode::DimensionMismatch, std::to_string(rows) + " rows are not a multiple of " +
                                                    std::to_string(tokens_per_frame) +
                                                    " tokens per frame");
    }
    const std::size_t frames = rows / tokens_per_frame;
    if (sidecar) {
      const Sidecar s = read_sidecar(*sidecar);
      if (s != Sidecar{frames, tokens_per_frame, dim}) {
        throw Error(ErrorCode::DimensionMismatch,
                    "sidecar " + sidecar->string() + " disagrees with array shape " + shape_text(a.shape));
      }
    }
    return VideoFeatures(frames, tokens_per_frame, dim, a.to_float32());
  });
}

QueryEmbedding load_query(const std::filesystem::path& path) {
  const ArrayFile a = read_npy(path);
  return with_context(path, [&] {
    if (a.shape.size() == 1) return QueryEmbedding(1, a.shape[0], a.to_float32());
    if (a.shape.size() == 2) return QueryEmbedding(a.shape[0], a.shape[1], a.to_float32());
    throw Error(ErrorCode::UnsupportedShape,
                "query must be (dim) or (length, dim), got " + shape_text(a.shape));
  });
}

Report run_compression_job(const CompressionJob& job) {
  const bool needs_query = job.config.mode != CompressionMode::AveragePool;
  if (needs_query && !job.query) {
    throw Error(ErrorCode::MissingQuery,
                std::string(mode_name(job.config.mode)) + " mode requires a query file");
  }
  const VideoFeatures v = load_features(job.features, job.tokens_per_frame, job.features_sidecar);
  std::optional<QueryEmbedding> q;
  if (needs_query) q = load_query(*job.query);

  const std::size_t w = with_context(job.features, [&] {
    return job.config.validate(v.frames(), v.dim());
  });
  const auto start = std::chrono::steady_clock::now();
  const PseudoFrames out = with_context(job.features, [&] {
    return run_compression(v, q, job.config, Parallelism{job.threads});
  });
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  write_npy(job.out, ArrayFile::from_float32({out.rows(), out.dim}, out.data));
  const auto sidecar = output_sidecar_path(job.out);
  write_sidecar(sidecar, {out.frames, out.tokens_per_frame, out.dim});

  Report r;
  r["features"] = job.features.string();
  r["query"] = job.query ? Report(job.query->string()) : Report(nullptr);
  r["output"] = job.out.string();
  r["output_sidecar"] = sidecar.string();
  r["input_shape"] = {v.frames(), v.tokens_per_frame(), v.dim()};
  r["output_shape"] = {out.frames, out.tokens_per_frame, out.dim};
  r["mode"] = mode_name(job.config.mode);
  r["heads"] = job.config.heads;
  r["pseudo_frames"] = job.config.target_frames;
  r["window"] = w;
  r["threads"] = job.threads;
  r["wall_time_s"] = wall;
  return r;
}

}  // namespace lvc
