#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "pclda/corpus.hpp"
#include "pclda/diagnostics.hpp"
#include "pclda/light.hpp"
#include "pclda/state.hpp"

namespace pclda {

enum class SamplerKind { collapsed, adlda, pclda, light_pclda, pclda_vs };

const char* to_string(SamplerKind k);
SamplerKind sampler_from_string(const std::string& name);

struct ExperimentConfig {
  std::string docword_path;
  std::string vocab_path;
  std::string corpus_snapshot_path;  // alternative to the text pair

  SamplerKind sampler = SamplerKind::pclda;
  int32_t K = 100;
  double alpha = 0.1;
  double beta = 0.01;
  int64_t iterations = 1000;
  int64_t burn_in = 0;  // recorded in the trace header; rows carry all iterations
  uint64_t seed = 1;
  int32_t workers = 1;

  // exactly one vocabulary-pruning mode; 0 = unset
  int64_t rare_word_limit = 0;
  int64_t tfidf_vmax = 0;

  double vs_pi = 0.5;  // pclda-vs only
  LightAcceptRule light_accept = LightAcceptRule::pi_d2;

  std::string trace_path;
  int64_t snapshot_every = 500;
  std::string snapshot_prefix;
  bool record_timing = true;  // off = deterministic byte-identical traces

  void validate() const;
  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& json);
  bool operator==(const ExperimentConfig&) const = default;
};

struct RunResult {
  RunTrace trace;
  TopicState state;
  Corpus corpus;
};

// Full pipeline: ingest + prune + init + sample + trace/snapshot emission.
RunResult run_experiment(const ExperimentConfig& cfg);

// Same, on an already-loaded corpus (no pruning applied).
RunResult run_experiment(const ExperimentConfig& cfg, const Corpus& corpus);

}  // namespace pclda
