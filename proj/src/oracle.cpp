#include "lvc/oracle.hpp"

#include <cmath>
#include <vector>

#include "lvc/error.hpp"

namespace lvc {

PseudoFrames oracle_compress(const VideoFeatures& v, const QueryEmbedding& q,
                             const CompressionConfig& cfg) {
  const std::size_t M = v.frames();
  const std::size_t t = v.tokens_per_frame();
  const std::size_t d = v.dim();
  const std::size_t H = cfg.mode == CompressionMode::QueryAttentionMultiHead ? cfg.heads : 1;
  if (cfg.mode == CompressionMode::AveragePool) {
    throw Error(ErrorCode::InvalidConfig, "oracle covers attention modes only");
  }
  if (H == 0 || d % H != 0) throw Error(ErrorCode::HeadsDontDivide, "heads do not divide dim");
  if (cfg.target_frames == 0 || M % cfg.target_frames != 0) {
    throw Error(ErrorCode::IndivisibleFrames, "pseudo frames do not divide frames");
  }
  if (q.dim() != d) throw Error(ErrorCode::DimensionMismatch, "query dim differs from feature dim");

  const std::size_t w = M / cfg.target_frames;
  const std::size_t n_windows = cfg.target_frames * t;
  const std::size_t dh = d / H;

  // Sentence query, kept in double.
  std::vector<double> qbar(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.length(); ++i) s += q.data()[i * d + j];
    qbar[j] = s / static_cast<double>(q.length());
  }

  PseudoFrames out;
  out.frames = cfg.target_frames;
  out.tokens_per_frame = t;
  out.dim = d;
  out.data.assign(n_windows * d, 0.0f);

  std::vector<double> logit(w), weight(w);
  for (std::size_t i = 0; i < n_windows; ++i) {
    for (std::size_t h = 0; h < H; ++h) {
      for (std::size_t k = 0; k < w; ++k) {
        double dot = 0.0;
        for (std::size_t j = h * dh; j < (h + 1) * dh; ++j) {
          dot += qbar[j] * v.data()[(i * w + k) * d + j];
        }
        logit[k] = dot / std::sqrt(static_cast<double>(dh));
      }
      double mx = logit[0];
      for (std::size_t k = 1; k < w; ++k) mx = logit[k] > mx ? logit[k] : mx;
      double z = 0.0;
      for (std::size_t k = 0; k < w; ++k) z += std::exp(logit[k] - mx);
      for (std::size_t k = 0; k < w; ++k) weight[k] = std::exp(logit[k] - mx) / z;
      for (std::size_t j = h * dh; j < (h + 1) * dh; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < w; ++k) s += weight[k] * v.data()[(i * w + k) * d + j];
        out.data[i * d + j] = static_cast<float>(s);
      }
    }
  }
  return out;
}

}  // namespace lvc
