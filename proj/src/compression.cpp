#include "lvc/compression.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lvc/error.hpp"
#include "lvc/parallel.hpp"

namespace lvc {
namespace {

struct Scratch {
  std::vector<double> weights;
  std::vector<double> acc;
};

// Softmax attention weights of one head over a window, written to `out`.
// Rows are `stride` floats apart; the head covers [offset, offset + len) and
// logits are divided by sqrt(scale_dim).
void head_weights(const float* q_bar, const float* window, std::size_t w, std::size_t stride,
                  std::size_t offset, std::size_t len, std::size_t scale_dim, double* out) {
  const double scale = std::sqrt(static_cast<double>(scale_dim));
  double max_logit = -INFINITY;
  for (std::size_t k = 0; k < w; ++k) {
    const float* row = window + k * stride + offset;
    double dot = 0.0;
    for (std::size_t j = 0; j < len; ++j) {
      dot += static_cast<double>(q_bar[offset + j]) * static_cast<double>(row[j]);
    }
    out[k] = dot / scale;
    max_logit = std::max(max_logit, out[k]);
  }
  double total = 0.0;
  for (std::size_t k = 0; k < w; ++k) {
    out[k] = std::exp(out[k] - max_logit);
    total += out[k];
  }
  for (std::size_t k = 0; k < w; ++k) out[k] /= total;
}

// Weighted sum of one head slice over a window, written to `out`.
void head_sum(const double* weights, const float* window, std::size_t w, std::size_t dim,
              std::size_t offset, std::size_t head_dim, double* acc, float* out) {
  std::fill(acc, acc + head_dim, 0.0);
  for (std::size_t k = 0; k < w; ++k) {
    const float* row = window + k * dim + offset;
    const double wk = weights[k];
    for (std::size_t j = 0; j < head_dim; ++j) acc[j] += wk * static_cast<double>(row[j]);
  }
  for (std::size_t j = 0; j < head_dim; ++j) out[offset + j] = static_cast<float>(acc[j]);
}

void attend_window(const float* q_bar, const float* window, std::size_t w, std::size_t dim,
                   std::size_t heads, float* out, Scratch& scratch) {
  const std::size_t head_dim = dim / heads;
  scratch.weights.resize(w);
  scratch.acc.resize(head_dim);
  for (std::size_t h = 0; h < heads; ++h) {
    const std::size_t offset = h * head_dim;
    head_weights(q_bar, window, w, dim, offset, head_dim, head_dim, scratch.weights.data());
    head_sum(scratch.weights.data(), window, w, dim, offset, head_dim, scratch.acc.data(), out);
  }
}

PseudoFrames make_output(const VideoFeatures& v, const CompressionConfig& cfg) {
  PseudoFrames out;
  out.frames = cfg.target_frames;
  out.tokens_per_frame = v.tokens_per_frame();
  out.dim = v.dim();
  out.data.resize(out.rows() * out.dim);
  return out;
}

PseudoFrames attention_compress(const VideoFeatures& v, const QueryEmbedding& q,
                                const CompressionConfig& cfg, Parallelism par) {
  const std::size_t w = cfg.validate(v.frames(), v.dim());
  if (q.dim() != v.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "query dim " + std::to_string(q.dim()) +
                                                  " differs from feature dim " +
                                                  std::to_string(v.dim()));
  }
  const SentenceQuery q_bar = mean_pool_query(q);
  PseudoFrames out = make_output(v, cfg);
  const std::size_t dim = v.dim();
  const float* src = v.data().data();
  float* dst = out.data.data();
  parallel_for(out.rows(), par.threads, [&](std::size_t begin, std::size_t end) {
    Scratch scratch;
    for (std::size_t i = begin; i < end; ++i) {
      attend_window(q_bar.data().data(), src + i * w * dim, w, dim, cfg.heads, dst + i * dim,
                    scratch);
    }
  });
  return out;
}

void check_finite(std::span<const float> values, const char* what) {
  for (float x : values) {
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFiniteInput, std::string(what) + " is not finite");
  }
}

}  // namespace

SentenceQuery mean_pool_query(const QueryEmbedding& q) {
  std::vector<double> acc(q.dim(), 0.0);
  for (std::size_t i = 0; i < q.length(); ++i) {
    const auto row = q.view().row(i);
    for (std::size_t j = 0; j < q.dim(); ++j) acc[j] += static_cast<double>(row[j]);
  }
  std::vector<float> mean(q.dim());
  const double n = static_cast<double>(q.length());
  for (std::size_t j = 0; j < q.dim(); ++j) mean[j] = static_cast<float>(acc[j] / n);
  return SentenceQuery(std::move(mean));
}

std::size_t derive_window_length(std::size_t frames, std::size_t target_frames) {
  if (frames == 0 || target_frames == 0) {
    throw Error(ErrorCode::InvalidConfig, "frame counts must be positive");
  }
  if (frames % target_frames != 0) {
    throw Error(ErrorCode::IndivisibleFrames, std::to_string(target_frames) +
                                                  " pseudo frames do not divide " +
                                                  std::to_string(frames) + " frames");
  }
  return frames / target_frames;
}

std::vector<MatrixView> slice_windows(const VideoFeatures& v, std::size_t window) {
  if (window == 0 || v.frames() % window != 0) {
    throw Error(ErrorCode::IndivisibleFrames, "window length " + std::to_string(window) +
                                                  " does not divide " +
                                                  std::to_string(v.frames()) + " frames");
  }
  const std::size_t count = v.rows() / window;
  std::vector<MatrixView> windows;
  windows.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    windows.push_back({v.data().subspan(i * window * v.dim(), window * v.dim()), window, v.dim()});
  }
  return windows;
}

std::vector<float> window_weights(std::span<const float> q_bar, const MatrixView& window,
                                  std::size_t head_dim) {
  if (q_bar.size() != window.cols || head_dim == 0 || window.rows == 0 ||
      window.data.size() != window.rows * window.cols) {
    throw Error(ErrorCode::DimensionMismatch, "query and window shapes disagree");
  }
  check_finite(q_bar, "query");
  check_finite(window.data, "window");
  std::vector<double> weights(window.rows);
  head_weights(q_bar.data(), window.data.data(), window.rows, window.cols, 0, window.cols,
               head_dim, weights.data());
  return {weights.begin(), weights.end()};
}

std::vector<float> compress_window(std::span<const float> weights, const MatrixView& window) {
  if (weights.size() != window.rows || window.data.size() != window.rows * window.cols) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(weights.size()) + " weights for " +
                                                  std::to_string(window.rows) + " window rows");
  }
  const std::vector<double> wd(weights.begin(), weights.end());
  std::vector<double> acc(window.cols);
  std::vector<float> out(window.cols);
  head_sum(wd.data(), window.data.data(), window.rows, window.cols, 0, window.cols, acc.data(),
           out.data());
  return out;
}

PseudoFrames compress(const VideoFeatures& v, const QueryEmbedding& q,
                      const CompressionConfig& cfg, Parallelism par) {
  switch (cfg.mode) {
    case CompressionMode::QueryAttention:
      return attention_compress(v, q, cfg, par);
    case CompressionMode::QueryAttentionMultiHead:
      return compress_multihead(v, q, cfg, par);
    case CompressionMode::AveragePool:
      break;
  }
  throw Error(ErrorCode::InvalidConfig, "compress needs an attention mode; use avg_pool_compress");
}

PseudoFrames compress_multihead(const VideoFeatures& v, const QueryEmbedding& q,
                                const CompressionConfig& cfg, Parallelism par) {
  CompressionConfig mh = cfg;
  mh.mode = CompressionMode::QueryAttentionMultiHead;
  return attention_compress(v, q, mh, par);
}

PseudoFrames avg_pool_compress(const VideoFeatures& v, const CompressionConfig& cfg,
                               Parallelism par) {
  CompressionConfig pool = cfg;
  pool.heads = 1;
  pool.mode = CompressionMode::AveragePool;
  const std::size_t w = pool.validate(v.frames(), v.dim());
  PseudoFrames out = make_output(v, pool);
  const std::size_t dim = v.dim();
  const float* src = v.data().data();
  float* dst = out.data.data();
  parallel_for(out.rows(), par.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> acc(dim);
    const double n = static_cast<double>(w);
    for (std::size_t i = begin; i < end; ++i) {
      std::fill(acc.begin(), acc.end(), 0.0);
      const float* window = src + i * w * dim;
      for (std::size_t k = 0; k < w; ++k) {
        for (std::size_t j = 0; j < dim; ++j) acc[j] += static_cast<double>(window[k * dim + j]);
      }
      for (std::size_t j = 0; j < dim; ++j) dst[i * dim + j] = static_cast<float>(acc[j] / n);
    }
  });
  return out;
}

PseudoFrames run_compression(const VideoFeatures& v, const std::optional<QueryEmbedding>& q,
                             const CompressionConfig& cfg, Parallelism par) {
  if (cfg.mode == CompressionMode::AveragePool) return avg_pool_compress(v, cfg, par);
  if (!q) throw Error(ErrorCode::MissingQuery, "query attention modes require a query");
  return compress(v, *q, cfg, par);
}

std::vector<WindowWeights> attention_weights(const VideoFeatures& v, const QueryEmbedding& q,
                                             const CompressionConfig& cfg) {
  const std::size_t w = cfg.validate(v.frames(), v.dim());
  if (q.dim() != v.dim()) throw Error(ErrorCode::DimensionMismatch, "query dim differs from feature dim");
  const SentenceQuery q_bar = mean_pool_query(q);
  const std::size_t head_dim = v.dim() / cfg.heads;
  const auto windows = slice_windows(v, w);
  std::vector<WindowWeights> result;
  result.reserve(windows.size());
  std::vector<double> scratch(w);
  for (std::size_t i = 0; i < windows.size(); ++i) {
    WindowWeights ww{i, cfg.heads, w, std::vector<float>(cfg.heads * w)};
    for (std::size_t h = 0; h < cfg.heads; ++h) {
      head_weights(q_bar.data().data(), windows[i].data.data(), w, v.dim(), h * head_dim,
                   head_dim, head_dim, scratch.data());
      std::copy(scratch.begin(), scratch.end(), ww.per_head.begin() + h * w);
    }
    result.push_back(std::move(ww));
  }
  return result;
}

}  // namespace lvc
