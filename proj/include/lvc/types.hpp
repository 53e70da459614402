#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lvc {

/// Non-owning row-major view of a float32 matrix.
struct MatrixView {
  std::span<const float> data;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::span<const float> row(std::size_t i) const { return data.subspan(i * cols, cols); }
  float operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// Dense sampled-frame token features: frames x tokens_per_frame rows of dim
/// columns, frame-major (all tokens of frame 0, then frame 1, ...).
class VideoFeatures {
 public:
  VideoFeatures(std::size_t frames, std::size_t tokens_per_frame, std::size_t dim,
                std::vector<float> data);

  std::size_t frames() const noexcept { return frames_; }
  std::size_t tokens_per_frame() const noexcept { return tokens_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t rows() const noexcept { return frames_ * tokens_; }
  std::span<const float> data() const noexcept { return data_; }
  MatrixView view() const noexcept { return {data_, rows(), dim_}; }

 private:
  std::size_t frames_;
  std::size_t tokens_;
  std::size_t dim_;
  std::vector<float> data_;
};

/// Per-token text query features, length x dim.
class QueryEmbedding {
 public:
  QueryEmbedding(std::size_t length, std::size_t dim, std::vector<float> data);

  std::size_t length() const noexcept { return length_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const float> data() const noexcept { return data_; }
  MatrixView view() const noexcept { return {data_, length_, dim_}; }

 private:
  std::size_t length_;
  std::size_t dim_;
  std::vector<float> data_;
};

/// Token-mean of a QueryEmbedding.
class SentenceQuery {
 public:
  explicit SentenceQuery(std::vector<float> data);

  std::size_t dim() const noexcept { return data_.size(); }
  std::span<const float> data() const noexcept { return data_; }

 private:
  std::vector<float> data_;
};

enum class CompressionMode { QueryAttention, QueryAttentionMultiHead, AveragePool };

struct CompressionConfig {
  std::size_t target_frames = 1;
  std::size_t heads = 1;
  CompressionMode mode = CompressionMode::QueryAttention;

  /// Checks the config against feature shape and returns the window length.
  std::size_t validate(std::size_t frames, std::size_t dim) const;
};

/// Softmax weights of one window; per_head is heads x window row-major.
struct WindowWeights {
  std::size_t window_index = 0;
  std::size_t heads = 1;
  std::size_t window = 0;
  std::vector<float> per_head;

  std::span<const float> head(std::size_t h) const {
    return std::span<const float>(per_head).subspan(h * window, window);
  }
};

/// Compressed output, laid out exactly like target_frames real frames.
struct PseudoFrames {
  std::size_t frames = 0;
  std::size_t tokens_per_frame = 0;
  std::size_t dim = 0;
  std::vector<float> data;

  std::size_t rows() const noexcept { return frames * tokens_per_frame; }
  MatrixView view() const noexcept { return {data, rows(), dim}; }
};

}  // namespace lvc
