#include "lvc/types.hpp"

#include <cmath>
#include <string>

#include "lvc/compression.hpp"
#include "lvc/error.hpp"

namespace lvc {
namespace {

void require_finite(std::span<const float> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::NonFiniteInput,
                  std::string(what) + " element " + std::to_string(i) + " is not finite");
    }
  }
}

}  // namespace

VideoFeatures::VideoFeatures(std::size_t frames, std::size_t tokens_per_frame, std::size_t dim,
                             std::vector<float> data)
    : frames_(frames), tokens_(tokens_per_frame), dim_(dim), data_(std::move(data)) {
  if (frames_ == 0 || tokens_ == 0 || dim_ == 0) {
    throw Error(ErrorCode::DimensionMismatch, "video features need positive frames, tokens and dim");
  }
  if (data_.size() != frames_ * tokens_ * dim_) {
    throw Error(ErrorCode::DimensionMismatch,
                "video features hold " + std::to_string(data_.size()) + " values, expected " +
                    std::to_string(frames_ * tokens_ * dim_));
  }
  require_finite(data_, "video features");
}

QueryEmbedding::QueryEmbedding(std::size_t length, std::size_t dim, std::vector<float> data)
    : length_(length), dim_(dim), data_(std::move(data)) {
  if (length_ == 0) {
    throw Error(ErrorCode::EmptyQuery, "query has no tokens; use average-pool mode instead");
  }
  if (dim_ == 0 || data_.size() != length_ * dim_) {
    throw Error(ErrorCode::DimensionMismatch,
                "query holds " + std::to_string(data_.size()) + " values, expected " +
                    std::to_string(length_ * dim_));
  }
  require_finite(data_, "query");
}

SentenceQuery::SentenceQuery(std::vector<float> data) : data_(std::move(data)) {
  if (data_.empty()) throw Error(ErrorCode::DimensionMismatch, "sentence query is empty");
  require_finite(data_, "sentence query");
}

std::size_t CompressionConfig::validate(std::size_t frames, std::size_t dim) const {
  if (heads == 0) throw Error(ErrorCode::InvalidConfig, "heads must be positive");
  if (mode != CompressionMode::QueryAttentionMultiHead && heads != 1) {
    throw Error(ErrorCode::InvalidConfig,
                "heads=" + std::to_string(heads) + " requires multi-head query attention mode");
  }
  if (dim % heads != 0) {
    throw Error(ErrorCode::HeadsDontDivide,
                std::to_string(heads) + " heads do not divide dim " + std::to_string(dim));
  }
  return derive_window_length(frames, target_frames);
}

}  // namespace lvc
