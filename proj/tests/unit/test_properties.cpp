// Property tests over hand-rolled random generators.
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "lvc/compression.hpp"
#include "test_util.hpp"

using namespace lvc;
using lvc::testing::max_abs_diff;

namespace {

struct Case {
  VideoFeatures v;
  QueryEmbedding q;
  CompressionConfig cfg;
};

Case random_case(std::mt19937_64& rng) {
  const std::size_t frames_choices[] = {2, 4, 6, 8, 12, 16};
  const std::size_t M = frames_choices[rng() % 6];
  const std::size_t t = 1 + rng() % 5;
  const std::size_t heads = 1 + rng() % 4;
  const std::size_t d = heads * (1 + rng() % 6);
  const auto divs = lvc::testing::divisors(M);
  const std::size_t target = divs[rng() % divs.size()];
  const float scale = std::uniform_real_distribution<float>(0.1f, 4.0f)(rng);
  const auto mode = heads > 1 ? CompressionMode::QueryAttentionMultiHead : CompressionMode::QueryAttention;
  return {lvc::testing::random_features(rng, M, t, d), lvc::testing::random_query(rng, 1 + rng() % 4, d, scale),
          {target, heads, mode}};
}

}  // namespace

TEST_CASE("weights are simplex points") {
  std::mt19937_64 rng(100);
  for (int n = 0; n < 200; ++n) {
    const Case c = random_case(rng);
    for (const auto& ww : attention_weights(c.v, c.q, c.cfg)) {
      for (std::size_t h = 0; h < ww.heads; ++h) {
        double sum = 0.0;
        for (float x : ww.head(h)) {
          CHECK(x >= 0.0f);
          CHECK(x <= 1.0f);
          sum += x;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-6);
      }
    }
  }
}

TEST_CASE("permuting rows inside a window leaves output unchanged") {
  std::mt19937_64 rng(101);
  for (int n = 0; n < 200; ++n) {
    const Case c = random_case(rng);
    const std::size_t w = c.v.frames() / c.cfg.target_frames;
    const std::size_t d = c.v.dim();
    std::vector<float> shuffled(c.v.data().begin(), c.v.data().end());
    const std::size_t window = rng() % (c.v.rows() / w);
    std::vector<std::size_t> perm(w);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t k = 0; k < w; ++k) {
      std::copy_n(c.v.data().begin() + (window * w + perm[k]) * d, d, shuffled.begin() + (window * w + k) * d);
    }
    const VideoFeatures permuted(c.v.frames(), c.v.tokens_per_frame(), d, shuffled);
    CHECK(max_abs_diff(compress(c.v, c.q, c.cfg).data, compress(permuted, c.q, c.cfg).data) <= 1e-6);
  }
}

TEST_CASE("outputs stay in the per-coordinate window envelope") {
  std::mt19937_64 rng(102);
  for (int n = 0; n < 200; ++n) {
    const Case c = random_case(rng);
    const std::size_t w = c.v.frames() / c.cfg.target_frames;
    const std::size_t d = c.v.dim();
    const auto out = compress(c.v, c.q, c.cfg);
    for (std::size_t i = 0; i < out.rows(); ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        float lo = INFINITY, hi = -INFINITY;
        for (std::size_t k = 0; k < w; ++k) {
          lo = std::min(lo, c.v.data()[(i * w + k) * d + j]);
          hi = std::max(hi, c.v.data()[(i * w + k) * d + j]);
        }
        CHECK(out.data[i * d + j] >= lo - 1e-6);
        CHECK(out.data[i * d + j] <= hi + 1e-6);
      }
    }
  }
}

TEST_CASE("zero query matches average pooling for all sizes") {
  std::mt19937_64 rng(103);
  for (int n = 0; n < 100; ++n) {
    Case c = random_case(rng);
    const QueryEmbedding zero(1, c.v.dim(), std::vector<float>(c.v.dim(), 0.0f));
    CHECK(max_abs_diff(compress(c.v, zero, c.cfg).data, avg_pool_compress(c.v, c.cfg).data) <= 1e-6);
  }
}

TEST_CASE("identity when pseudo frames equal frames") {
  std::mt19937_64 rng(104);
  for (int n = 0; n < 50; ++n) {
    Case c = random_case(rng);
    c.cfg.target_frames = c.v.frames();
    const auto out = compress(c.v, c.q, c.cfg);
    CHECK(std::equal(out.data.begin(), out.data.end(), c.v.data().begin()));
  }
}

TEST_CASE("scaled query concentrates on the argmax row") {
  std::mt19937_64 rng(105);
  int checked = 0;
  while (checked < 100) {
    const std::size_t w = 2 + rng() % 15, d = 1 + rng() % 16;
    const auto rows = lvc::testing::gaussian(rng, w * d);
    auto qbar = lvc::testing::gaussian(rng, d);
    std::vector<double> logits(w);
    for (std::size_t k = 0; k < w; ++k) {
      double dot = 0.0;
      for (std::size_t j = 0; j < d; ++j) dot += double(qbar[j]) * rows[k * d + j];
      logits[k] = dot / std::sqrt(double(d));
    }
    std::vector<double> sorted = logits;
    std::sort(sorted.rbegin(), sorted.rend());
    if (sorted[0] - sorted[1] < 0.1) continue;
    ++checked;
    const std::size_t argmax = std::max_element(logits.begin(), logits.end()) - logits.begin();
    for (auto& x : qbar) x *= 1e3f;
    const MatrixView window{rows, w, d};
    const auto weights = window_weights(qbar, window, d);
    CHECK(*std::max_element(weights.begin(), weights.end()) >= 1.0 - 1e-6);
    const auto out = compress_window(weights, window);
    for (std::size_t j = 0; j < d; ++j) CHECK(std::abs(out[j] - rows[argmax * d + j]) <= 1e-3);
  }
}

TEST_CASE("one-head multi-head equals single head") {
  std::mt19937_64 rng(106);
  for (int n = 0; n < 50; ++n) {
    Case c = random_case(rng);
    const CompressionConfig single{c.cfg.target_frames, 1, CompressionMode::QueryAttention};
    const CompressionConfig mh{c.cfg.target_frames, 1, CompressionMode::QueryAttentionMultiHead};
    CHECK(max_abs_diff(compress(c.v, c.q, single).data, compress_multihead(c.v, c.q, mh).data) <= 1e-6);
  }
}
