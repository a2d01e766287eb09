#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pclda/corpus.hpp"
#include "pclda/scheduler.hpp"
#include "pclda/state.hpp"

namespace pclda {

/** One per-iteration diagnostics record. Optional fields stay NaN. */
struct TraceRow {
  int64_t iteration = 0;
  double wall_time = 0.0;  // seconds since run start; 0 when timing is off
  double log_likelihood = 0.0;
  double sparsity_nw = 0.0;
  double sparsity_nd = 0.0;
  double tokens_per_sec = 0.0;
  int64_t inner_loop_count = 0;
  double mh_accept_word = std::nan("");
  double mh_accept_doc = std::nan("");
  double prop_zeros = std::nan("");
};

struct RunTrace {
  std::string config_json;  // experiment configuration, round-trippable
  uint64_t corpus_hash = 0;
  std::string version;
  std::vector<TraceRow> rows;
};

// CSV with '#' header lines carrying version, corpus hash and config; one
// data row per iteration, stable column order, %.17g doubles so rewriting a
// parsed trace is byte-identical.
void write_trace(std::ostream& out, const RunTrace& trace);
void write_trace_file(const std::string& path, const RunTrace& trace);
RunTrace read_trace(std::istream& in);
RunTrace read_trace_file(const std::string& path);

// log p(w, z | alpha, beta): Dirichlet-multinomial marginal over both Theta
// and Phi, via log-gamma. Invariant under token reordering and global topic
// relabeling.
double marginal_loglik(const TopicState& s, const HyperParams& h);

// Inefficiency factor: spectral density at frequency zero over the series
// variance, from an AR fit with AIC order selection. A constant series is 1
// by convention. Throws insufficient_data below 100 points.
double iact(std::span<const double> series);

// Batch-means cross-check of the same quantity.
double iact_batch_means(std::span<const double> series);

/**
 * Exact posterior over all K^N topic configurations of a tiny corpus.
 * Configuration index is mixed radix over the flattened token order
 * (documents concatenated, positions in order), least significant first.
 */
struct EnumeratedPosterior {
  int32_t K = 0;
  int64_t n_tokens = 0;
  std::vector<double> prob;

  int64_t index_of(std::span<const int32_t> flat_z) const {
    int64_t idx = 0;
    for (size_t t = flat_z.size(); t-- > 0;) idx = idx * K + flat_z[t];
    return idx;
  }
};

// Refuses (domain_error) when K^N > 2e6.
EnumeratedPosterior enumerate_posterior(const Corpus& c, const HyperParams& h,
                                        WorkScheduler* sched = nullptr);

struct CostModel {
  double z_cost = 0.0;
  double phi_cost = 0.0;
  double ratio = 0.0;
};

// z_cost = measured sum of K_d over tokens; phi_cost = the K*V term under
// Heaps vocabulary growth V = xi * N^heaps_exp and Dirichlet-process topic
// growth K = gamma * log(1 + N/gamma).
CostModel cost_model(double n_tokens, double xi, double heaps_exp, double gamma_dp,
                     double sum_kd);

// Sum over documents of N_d * (nonzero topics in the document): the sparse
// z-phase work a sweep starting from `s` attributes (Proposition-1 metric).
int64_t expected_inner_loops(const TopicState& s);

// True when the last recorded row's inner loop counter equals the
// recomputation from the sweep-start state.
bool loop_count_audit(const RunTrace& trace, const TopicState& sweep_start_state);

struct IneffConfig {
  int64_t burn_in = 500;
  int64_t n_draws = 1000;
  int64_t sweeps_per_draw = 1;  // 0 freezes both chains
  int32_t n_top_words = 20;     // per topic, ranked by posterior-mean Phi at the shared init
  int32_t n_random_docs = 100;
  uint64_t seed = 1;
};

struct IneffSummary {
  double mean = 0.0;
  double sd = 0.0;
  int64_t n_params = 0;
};

struct IneffResult {
  // filtered: parameters with series variance > 1e-12
  IneffSummary collapsed_theta, pclda_theta, collapsed_phi, pclda_phi;
  IneffSummary collapsed_theta_all, pclda_theta_all, collapsed_phi_all, pclda_phi_all;
  double theta_ratio = 0.0;
  double phi_ratio = 0.0;
  double theta_ratio_all = 0.0;
  double phi_ratio_all = 0.0;
};

// Runs a collapsed burn-in to a shared initialization, then one collapsed and
// one PC-LDA chain from that state; Theta and Phi are redrawn from
// p(Theta, Phi | z) at every retained draw on measurement streams shared by
// both chains.
IneffResult inefficiency_experiment(const Corpus& c, const HyperParams& h,
                                    const IneffConfig& cfg, WorkScheduler& sched);

void write_inefficiency_csv(std::ostream& out, const IneffResult& r, const HyperParams& h);

}  // namespace pclda
