#include "pclda/runner.hpp"

#include <chrono>
#include <cmath>

#include <nlohmann/json.hpp>

#include "pclda/collapsed.hpp"
#include "pclda/pclda.hpp"
#include "pclda/scheduler.hpp"
#include "pclda/vselect.hpp"

namespace pclda {

namespace {
constexpr const char* kVersion = "pclda 1.0.0";
}

const char* to_string(SamplerKind k) {
  switch (k) {
    case SamplerKind::collapsed: return "collapsed";
    case SamplerKind::adlda: return "adlda";
    case SamplerKind::pclda: return "pclda";
    case SamplerKind::light_pclda: return "light-pclda";
    case SamplerKind::pclda_vs: return "pclda-vs";
  }
  return "?";
}

SamplerKind sampler_from_string(const std::string& name) {
  if (name == "collapsed") return SamplerKind::collapsed;
  if (name == "adlda") return SamplerKind::adlda;
  if (name == "pclda") return SamplerKind::pclda;
  if (name == "light-pclda") return SamplerKind::light_pclda;
  if (name == "pclda-vs") return SamplerKind::pclda_vs;
  throw value_error("unknown sampler \"" + name + "\"");
}

void ExperimentConfig::validate() const {
  if (K < 1) throw value_error("config: K must be >= 1");
  if (!(alpha > 0.0)) throw value_error("config: alpha must be > 0");
  if (!(beta > 0.0)) throw value_error("config: beta must be > 0");
  if (workers < 1) throw value_error("config: workers must be >= 1");
  if (iterations < 0) throw value_error("config: iterations must be >= 0");
  if (rare_word_limit > 0 && tfidf_vmax > 0)
    throw value_error("config: rare_word_limit and tfidf_vmax are mutually exclusive");
  if (sampler == SamplerKind::pclda_vs && (!(vs_pi > 0.0) || vs_pi > 1.0))
    throw value_error("config: vs_pi must lie in (0, 1]");
  if (snapshot_every < 0) throw value_error("config: snapshot_every must be >= 0");
}

std::string ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["docword"] = docword_path;
  j["vocab"] = vocab_path;
  j["corpus_snapshot"] = corpus_snapshot_path;
  j["sampler"] = to_string(sampler);
  j["K"] = K;
  j["alpha"] = alpha;
  j["beta"] = beta;
  j["iterations"] = iterations;
  j["burn_in"] = burn_in;
  j["seed"] = seed;
  j["workers"] = workers;
  j["rare_word_limit"] = rare_word_limit;
  j["tfidf_vmax"] = tfidf_vmax;
  j["vs_pi"] = vs_pi;
  j["light_accept"] = light_accept == LightAcceptRule::pi_d ? "pi-d" : "pi-d2";
  j["trace"] = trace_path;
  j["snapshot_every"] = snapshot_every;
  j["snapshot_prefix"] = snapshot_prefix;
  j["record_timing"] = record_timing;
  return j.dump();
}

ExperimentConfig ExperimentConfig::from_json(const std::string& json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("config json: ") + e.what());
  }
  ExperimentConfig c;
  c.docword_path = j.at("docword").get<std::string>();
  c.vocab_path = j.at("vocab").get<std::string>();
  c.corpus_snapshot_path = j.at("corpus_snapshot").get<std::string>();
  c.sampler = sampler_from_string(j.at("sampler").get<std::string>());
  c.K = j.at("K").get<int32_t>();
  c.alpha = j.at("alpha").get<double>();
  c.beta = j.at("beta").get<double>();
  c.iterations = j.at("iterations").get<int64_t>();
  c.burn_in = j.at("burn_in").get<int64_t>();
  c.seed = j.at("seed").get<uint64_t>();
  c.workers = j.at("workers").get<int32_t>();
  c.rare_word_limit = j.at("rare_word_limit").get<int64_t>();
  c.tfidf_vmax = j.at("tfidf_vmax").get<int64_t>();
  c.vs_pi = j.at("vs_pi").get<double>();
  c.light_accept =
      j.at("light_accept").get<std::string>() == "pi-d" ? LightAcceptRule::pi_d : LightAcceptRule::pi_d2;
  c.trace_path = j.at("trace").get<std::string>();
  c.snapshot_every = j.at("snapshot_every").get<int64_t>();
  c.snapshot_prefix = j.at("snapshot_prefix").get<std::string>();
  c.record_timing = j.at("record_timing").get<bool>();
  return c;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  Corpus corpus;
  if (!cfg.corpus_snapshot_path.empty()) {
    corpus = load_corpus(cfg.corpus_snapshot_path);
  } else if (!cfg.docword_path.empty()) {
    corpus = load_uci_corpus(cfg.docword_path, cfg.vocab_path);
  } else {
    throw value_error("config: no corpus given (docword/vocab pair or snapshot)");
  }
  if (cfg.rare_word_limit > 0) corpus = prune_rare_words(corpus, cfg.rare_word_limit);
  if (cfg.tfidf_vmax > 0) corpus = select_vocab_tfidf(corpus, cfg.tfidf_vmax);
  return run_experiment(cfg, corpus);
}

RunResult run_experiment(const ExperimentConfig& cfg, const Corpus& corpus) {
  cfg.validate();
  const HyperParams h{cfg.alpha, cfg.beta, cfg.K};
  const uint64_t hash = corpus_hash(corpus);
  WorkScheduler sched(cfg.workers);

  RunResult result;
  result.corpus = corpus;
  result.trace.config_json = cfg.to_json();
  result.trace.corpus_hash = hash;
  result.trace.version = kVersion;

  RngStream init_rng = make_stream(cfg.seed, StreamTag::init, 0, 0);
  TopicState& s = result.state;
  s = init_state(corpus, cfg.K, init_rng);

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  auto emit = [&](int64_t iteration, const SweepCounters& counters, double sweep_seconds,
                  double zeros) {
    TraceRow row;
    row.iteration = iteration;
    row.wall_time = cfg.record_timing ? elapsed() : 0.0;
    row.log_likelihood = marginal_loglik(s, h);
    row.sparsity_nw = sparsity_nw(s);
    row.sparsity_nd = sparsity_nd(s);
    row.tokens_per_sec = cfg.record_timing && sweep_seconds > 0.0
                             ? static_cast<double>(corpus.n_tokens) / sweep_seconds
                             : 0.0;
    switch (cfg.sampler) {
      case SamplerKind::collapsed:
      case SamplerKind::adlda:
        row.inner_loop_count = counters.conditional_evals;
        break;
      default:
        row.inner_loop_count = counters.attributed_loops;
    }
    if (cfg.sampler == SamplerKind::light_pclda) {
      row.mh_accept_word = counters.word_proposals > 0
                               ? static_cast<double>(counters.word_accepts) /
                                     static_cast<double>(counters.word_proposals)
                               : std::nan("");
      row.mh_accept_doc = counters.doc_proposals > 0
                              ? static_cast<double>(counters.doc_accepts) /
                                    static_cast<double>(counters.doc_proposals)
                              : std::nan("");
    }
    if (cfg.sampler == SamplerKind::pclda_vs) row.prop_zeros = zeros;
    result.trace.rows.push_back(row);
  };

  auto snapshot = [&](int64_t iteration, bool final) {
    if (cfg.snapshot_prefix.empty()) return;
    if (!final && (cfg.snapshot_every == 0 || iteration % cfg.snapshot_every != 0)) return;
    const std::string path =
        cfg.snapshot_prefix + (final ? "_final.state" : "_iter" + std::to_string(iteration) + ".state");
    save_state(s, hash, path);
  };

  emit(0, SweepCounters{}, 0.0, std::nan(""));

  // chain streams persist across sweeps; AD-LDA partition 0 shares the
  // sequential sampler's stream so P=1 runs are bitwise identical to it
  RngStream chain_rng = make_stream(cfg.seed, StreamTag::chain, 0, 0);
  AdldaPlan plan;
  std::vector<RngStream> partition_rngs;
  if (cfg.sampler == SamplerKind::adlda) {
    plan = make_adlda_plan(corpus, cfg.workers);
    for (int32_t p = 0; p < cfg.workers; ++p)
      partition_rngs.push_back(make_stream(cfg.seed, StreamTag::chain, 0, static_cast<uint64_t>(p)));
  }
  IndicatorMatrix indicators;
  std::vector<double> vs_pi_vec;
  if (cfg.sampler == SamplerKind::pclda_vs) {
    indicators = IndicatorMatrix(cfg.K, corpus.vocab_size(), 1);
    vs_pi_vec.assign(static_cast<size_t>(cfg.K), cfg.vs_pi);
  }

  for (int64_t it = 1; it <= cfg.iterations; ++it) {
    SweepCounters counters;
    double zeros = std::nan("");
    const double sweep_start = elapsed();
    switch (cfg.sampler) {
      case SamplerKind::collapsed:
        collapsed_sweep(s, corpus, h, chain_rng, &counters);
        break;
      case SamplerKind::adlda:
        adlda_sweep(s, corpus, h, plan, partition_rngs, &counters);
        break;
      case SamplerKind::pclda: {
        const PhiMatrix phi = sample_phi(s, h, cfg.seed, static_cast<uint64_t>(it), sched);
        const WordAliasSet was = build_word_alias_tables(phi, h, sched);
        pclda_sweep(s, corpus, was, h, sched, cfg.seed, static_cast<uint64_t>(it), &counters);
        break;
      }
      case SamplerKind::light_pclda: {
        const PhiMatrix phi = sample_phi(s, h, cfg.seed, static_cast<uint64_t>(it), sched);
        const WordAliasSet was = build_word_alias_tables(phi, h, sched);
        light_pclda_sweep(s, corpus, was, h, sched, cfg.seed, static_cast<uint64_t>(it),
                          cfg.light_accept, &counters);
        break;
      }
      case SamplerKind::pclda_vs: {
        PhiMatrix phi(cfg.K, corpus.vocab_size());
        counters.forced_indicator_rows +=
            vs_sweep(s, indicators, h, vs_pi_vec, sched, cfg.seed, static_cast<uint64_t>(it), phi);
        zeros = prop_zeros(phi);
        const WordAliasSet was = build_word_alias_tables(phi, h, sched);
        pclda_sweep(s, corpus, was, h, sched, cfg.seed, static_cast<uint64_t>(it), &counters);
        break;
      }
    }
    emit(it, counters, elapsed() - sweep_start, zeros);
    snapshot(it, false);
  }

  snapshot(cfg.iterations, true);
  if (!cfg.trace_path.empty()) write_trace_file(cfg.trace_path, result.trace);
  return result;
}

}  // namespace pclda
