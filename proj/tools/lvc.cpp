// lvc: query-attention video feature compression from the command line.
//
// Exit codes: 0 success, 1 usage error, 2 data/validation error, 3 I/O error.
// Standard output carries JSON only; diagnostics go to standard error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lvc/error.hpp"
#include "lvc/parallel.hpp"
#include "lvc/pipeline.hpp"
#include "lvc/version.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitIo = 3;

struct CompressFlags {
  std::string features;
  std::string query;
  std::string sidecar;
  std::string out;
  std::size_t tokens_per_frame = 0;
  std::size_t pseudo_frames = 0;
  std::size_t heads = 1;
  std::string mode = "query-attn";
};

struct SampleFlags {
  std::size_t total = 0;
  std::size_t frames = 0;
};

struct SynthFlags {
  lvc::SynthEvalParams params;
  std::string report;
};

struct BenchFlags {
  std::vector<std::string> sizes;
  lvc::BenchParams params;
  std::string report;
};

void emit(const lvc::Report& r) { std::cout << lvc::serialize_report(r) << '\n'; }

int cmd_compress(const CompressFlags& f, unsigned threads) {
  lvc::CompressionJob job;
  job.features = f.features;
  if (!f.query.empty()) job.query = f.query;
  if (!f.sidecar.empty()) job.features_sidecar = f.sidecar;
  job.out = f.out;
  job.tokens_per_frame = f.tokens_per_frame;
  job.config = {f.pseudo_frames, f.heads, lvc::parse_mode(f.mode)};
  job.threads = threads;
  emit(lvc::run_compression_job(job));
  return 0;
}

int cmd_sample_indices(const SampleFlags& f) {
  emit(lvc::Report(lvc::sample_frame_indices(f.total, f.frames).indices));
  return 0;
}

int cmd_synth_eval(SynthFlags f, unsigned threads) {
  f.params.threads = threads;
  const lvc::Report r = lvc::run_synthetic_retrieval_eval(f.params).to_report();
  if (!f.report.empty()) lvc::write_report(f.report, r);
  emit(r);
  return 0;
}

int cmd_bench(BenchFlags f, unsigned threads) {
  f.params.threads = threads;
  for (const auto& s : f.sizes) f.params.sizes.push_back(lvc::BenchSize::parse(s));
  const lvc::Report r = lvc::run_throughput_bench(f.params).to_report();
  if (!f.report.empty()) lvc::write_report(f.report, r);
  emit(r);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Query-attention video feature compression", "lvc"};
  app.set_version_flag("--version", std::string(lvc::kVersion));
  app.require_subcommand(1);

  CompressFlags cf;
  auto* compress = app.add_subcommand("compress", "Compress frame features into pseudo frames");
  compress->add_option("--features", cf.features, "Feature NPY, (frames*tokens, dim) or (frames, tokens, dim)")
      ->required();
  compress->add_option("--query", cf.query, "Query embedding NPY, (length, dim) or (dim); required unless --mode avg-pool");
  compress->add_option("--tokens-per-frame", cf.tokens_per_frame, "Tokens per frame")->required()
      ->check(CLI::PositiveNumber);
  compress->add_option("--pseudo-frames", cf.pseudo_frames, "Number of output pseudo frames")->required()
      ->check(CLI::PositiveNumber);
  compress->add_option("--heads", cf.heads, "Attention heads (query-attn-mh only)")
      ->capture_default_str()->check(CLI::PositiveNumber);
  compress->add_option("--mode", cf.mode, "Compression mode")
      ->capture_default_str()->check(CLI::IsMember({"query-attn", "query-attn-mh", "avg-pool"}));
  compress->add_option("--out", cf.out, "Output NPY; a .json sidecar is written next to it")->required();
  compress->add_option("--sidecar", cf.sidecar, "JSON sidecar describing the feature array, checked against it");

  SampleFlags sf;
  auto* sample = app.add_subcommand("sample-indices", "Print centre-uniform frame indices as JSON");
  sample->add_option("--total", sf.total, "Frames in the video")->required();
  sample->add_option("--frames", sf.frames, "Frames to sample")->required()->check(CLI::PositiveNumber);

  SynthFlags ef;
  auto* synth = app.add_subcommand("synth-eval", "Planted-signal retrieval: query attention vs average pooling");
  synth->add_option("--trials", ef.params.trials, "Number of trials")->capture_default_str();
  synth->add_option("--frames", ef.params.frames, "Frames per instance")->capture_default_str();
  synth->add_option("--tokens-per-frame", ef.params.tokens_per_frame, "Tokens per frame")->capture_default_str();
  synth->add_option("--dim", ef.params.dim, "Feature dimension")->capture_default_str();
  synth->add_option("--pseudo-frames", ef.params.target_frames, "Output pseudo frames")->capture_default_str();
  synth->add_option("--noise-sigma", ef.params.noise_sigma, "Noise added to the planted row")->capture_default_str();
  synth->add_option("--seed", ef.params.seed, "Random seed")->capture_default_str();
  synth->add_option("--report", ef.report, "Write the JSON report here as well");

  BenchFlags bf;
  auto* bench = app.add_subcommand("bench", "Time the compression kernel on random instances");
  bench->add_option("--sizes", bf.sizes, "Sizes as MxTxD, comma separated")->required()->delimiter(',');
  bench->add_option("--pseudo-frames", bf.params.target_frames, "Output pseudo frames")->capture_default_str();
  bench->add_option("--reps", bf.params.repetitions, "Timed repetitions per size")->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench->add_option("--seed", bf.params.seed, "Random seed")->capture_default_str();
  bench->add_option("--report", bf.report, "Write the JSON report here as well");

  app.footer("Environment: LVC_THREADS caps worker threads (positive integer).");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  unsigned threads = 1;
  try {
    threads = lvc::threads_from_env();
  } catch (const lvc::Error& e) {
    std::cerr << "lvc: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (compress->parsed()) return cmd_compress(cf, threads);
    if (sample->parsed()) return cmd_sample_indices(sf);
    if (synth->parsed()) return cmd_synth_eval(ef, threads);
    if (bench->parsed()) return cmd_bench(bf, threads);
  } catch (const lvc::Error& e) {
    std::cerr << "lvc: " << e.what() << '\n';
    return e.category() == lvc::ErrorCategory::Io ? kExitIo : kExitData;
  }
  return kExitUsage;
}
