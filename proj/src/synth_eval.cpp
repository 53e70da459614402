#include <cmath>
#include <random>

#include "lvc/compression.hpp"
#include "lvc/error.hpp"
#include "lvc/parallel.hpp"
#include "lvc/pipeline.hpp"

namespace lvc {
namespace {

struct TrialOutcome {
  bool win = false;
  double cosine_attn = 0.0;  // summed over windows
  double cosine_avg = 0.0;
};

void normalize(std::span<double> x) {
  double n = 0.0;
  for (double v : x) n += v * v;
  n = std::sqrt(n);
  for (double& v : x) v /= n;
}

double cosine(std::span<const float> a, std::span<const double> unit) {
  double dot = 0.0, norm = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    dot += static_cast<double>(a[j]) * unit[j];
    norm += static_cast<double>(a[j]) * static_cast<double>(a[j]);
  }
  return norm > 0.0 ? dot / std::sqrt(norm) : 0.0;
}

TrialOutcome run_trial(const SynthEvalParams& p, std::size_t w, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(p.seed), static_cast<std::uint32_t>(p.seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> slot(0, w - 1);

  const std::size_t d = p.dim;
  std::vector<double> target(d);
  for (double& x : target) x = gauss(rng);
  normalize(target);

  const std::size_t rows = p.frames * p.tokens_per_frame;
  const std::size_t windows = rows / w;
  std::vector<float> data(rows * d);
  std::vector<double> row(d);
  for (std::size_t r = 0; r < rows; ++r) {
    for (double& x : row) x = gauss(rng);
    normalize(row);
    std::copy(row.begin(), row.end(), data.begin() + static_cast<std::ptrdiff_t>(r * d));
  }
  for (std::size_t i = 0; i < windows; ++i) {
    const std::size_t r = i * w + slot(rng);
    for (std::size_t j = 0; j < d; ++j) row[j] = target[j] + p.noise_sigma * gauss(rng);
    normalize(row);
    std::copy(row.begin(), row.end(), data.begin() + static_cast<std::ptrdiff_t>(r * d));
  }

  const VideoFeatures v(p.frames, p.tokens_per_frame, d, std::move(data));
  const QueryEmbedding q(1, d, std::vector<float>(target.begin(), target.end()));
  const CompressionConfig cfg{p.target_frames, 1, CompressionMode::QueryAttention};
  const PseudoFrames attn = compress(v, q, cfg);
  const PseudoFrames avg = avg_pool_compress(v, cfg);

  TrialOutcome out;
  std::size_t better = 0;
  for (std::size_t i = 0; i < windows; ++i) {
    const double ca = cosine(attn.view().row(i), target);
    const double cm = cosine(avg.view().row(i), target);
    out.cosine_attn += ca;
    out.cosine_avg += cm;
    if (ca > cm) ++better;
  }
  out.win = 2 * better > windows;
  return out;
}

}  // namespace

SynthEvalReport run_synthetic_retrieval_eval(const SynthEvalParams& p) {
  if (p.trials == 0) throw Error(ErrorCode::InvalidConfig, "trials must be positive");
  if (p.tokens_per_frame == 0 || p.dim == 0) {
    throw Error(ErrorCode::InvalidConfig, "tokens per frame and dim must be positive");
  }
  if (!std::isfinite(p.noise_sigma) || p.noise_sigma < 0.0) {
    throw Error(ErrorCode::InvalidConfig, "noise sigma must be finite and non-negative");
  }
  const CompressionConfig cfg{p.target_frames, 1, CompressionMode::QueryAttention};
  const std::size_t w = cfg.validate(p.frames, p.dim);

  std::vector<TrialOutcome> outcomes(p.trials);
  parallel_for(p.trials, p.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) outcomes[t] = run_trial(p, w, t);
  });

  SynthEvalReport report;
  report.params = p;
  report.trials = p.trials;
  double sum_attn = 0.0, sum_avg = 0.0;
  for (const auto& o : outcomes) {
    report.wins += o.win ? 1 : 0;
    sum_attn += o.cosine_attn;
    sum_avg += o.cosine_avg;
  }
  const double windows = static_cast<double>(p.trials * p.target_frames * p.tokens_per_frame);
  report.win_rate = static_cast<double>(report.wins) / static_cast<double>(p.trials);
  report.mean_cosine_attn = sum_attn / windows;
  report.mean_cosine_avg = sum_avg / windows;
  return report;
}

Report SynthEvalReport::to_report() const {
  Report r;
  r["trials"] = trials;
  r["wins"] = wins;
  r["win_rate"] = win_rate;
  r["mean_cosine_attn"] = mean_cosine_attn;
  r["mean_cosine_avg"] = mean_cosine_avg;
  r["seed"] = params.seed;
  r["config"] = {{"frames", params.frames},
                 {"tokens_per_frame", params.tokens_per_frame},
                 {"dim", params.dim},
                 {"pseudo_frames", params.target_frames},
                 {"window", params.frames / params.target_frames},
                 {"noise_sigma", params.noise_sigma}};
  return r;
}

}  // namespace lvc
