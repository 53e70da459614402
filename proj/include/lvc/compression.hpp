#pragma once

// Query-attention video compression kernel.
//
// Features are sliced into runs of w consecutive rows (w = frames / target
// frames). Each run is scored against the token-mean of the query with a
// scaled dot product, softmax-normalised, and collapsed into one output row
// by a weighted sum. All reductions accumulate in double, in ascending index
// order, so results do not depend on how windows are scheduled.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lvc/types.hpp"

namespace lvc {

/// Worker count for window-parallel execution. Output is identical for any value.
struct Parallelism {
  unsigned threads = 1;
};

SentenceQuery mean_pool_query(const QueryEmbedding& q);

std::size_t derive_window_length(std::size_t frames, std::size_t target_frames);

/// Views of consecutive w-row windows; window i covers rows [i*w, (i+1)*w).
std::vector<MatrixView> slice_windows(const VideoFeatures& v, std::size_t window);

/// softmax((q_bar . row_k) / sqrt(head_dim)) over the rows of `window`.
std::vector<float> window_weights(std::span<const float> q_bar, const MatrixView& window,
                                  std::size_t head_dim);

/// sum_k weights[k] * row_k.
std::vector<float> compress_window(std::span<const float> weights, const MatrixView& window);

PseudoFrames compress(const VideoFeatures& v, const QueryEmbedding& q,
                      const CompressionConfig& cfg, Parallelism par = {});

PseudoFrames compress_multihead(const VideoFeatures& v, const QueryEmbedding& q,
                                const CompressionConfig& cfg, Parallelism par = {});

PseudoFrames avg_pool_compress(const VideoFeatures& v, const CompressionConfig& cfg,
                               Parallelism par = {});

/// Dispatches on cfg.mode. Attention modes require a query (MissingQuery otherwise).
PseudoFrames run_compression(const VideoFeatures& v, const std::optional<QueryEmbedding>& q,
                             const CompressionConfig& cfg, Parallelism par = {});

/// Attention weights of every window and head, as used by compress.
std::vector<WindowWeights> attention_weights(const VideoFeatures& v, const QueryEmbedding& q,
                                             const CompressionConfig& cfg);

}  // namespace lvc
