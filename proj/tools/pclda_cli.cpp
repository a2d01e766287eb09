// Command-line front end: experiment runs, corpus pruning, the exact
// enumeration oracle, the inefficiency experiment and the cost model.
//
// Exit codes: 0 success, 2 usage error, 3 I/O error, 4 numeric/domain error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pclda/diagnostics.hpp"
#include "pclda/errors.hpp"
#include "pclda/runner.hpp"
#include "pclda/scheduler.hpp"

namespace {

using namespace pclda;

void add_corpus_options(CLI::App* cmd, ExperimentConfig& cfg) {
  cmd->add_option("--corpus", cfg.docword_path, "UCI docword.txt path (optionally .gz)");
  cmd->add_option("--vocab", cfg.vocab_path, "UCI vocab.txt path (optionally .gz)");
  cmd->add_option("--snapshot", cfg.corpus_snapshot_path, "binary corpus snapshot path");
  cmd->add_option("--rare-word-limit", cfg.rare_word_limit,
                  "drop word types with total frequency below this");
  cmd->add_option("--tfidf-vmax", cfg.tfidf_vmax, "keep the top v_max types by tf-idf");
}

Corpus load_pruned(const ExperimentConfig& cfg) {
  Corpus corpus;
  if (!cfg.corpus_snapshot_path.empty())
    corpus = load_corpus(cfg.corpus_snapshot_path);
  else if (!cfg.docword_path.empty())
    corpus = load_uci_corpus(cfg.docword_path, cfg.vocab_path);
  else
    throw value_error("no corpus given: use --corpus/--vocab or --snapshot");
  if (cfg.rare_word_limit > 0 && cfg.tfidf_vmax > 0)
    throw value_error("--rare-word-limit and --tfidf-vmax are mutually exclusive");
  if (cfg.rare_word_limit > 0) corpus = prune_rare_words(corpus, cfg.rare_word_limit);
  if (cfg.tfidf_vmax > 0) corpus = select_vocab_tfidf(corpus, cfg.tfidf_vmax);
  return corpus;
}

int run_main(const ExperimentConfig& cfg) {
  const RunResult result = run_experiment(cfg);
  const auto& last = result.trace.rows.back();
  std::printf("sampler=%s iterations=%lld final_loglik=%.6f sparsity_nw=%.4f sparsity_nd=%.4f\n",
              to_string(cfg.sampler), static_cast<long long>(last.iteration),
              last.log_likelihood, last.sparsity_nw, last.sparsity_nd);
  if (!cfg.trace_path.empty()) std::printf("trace written to %s\n", cfg.trace_path.c_str());
  return 0;
}

int prune_main(const ExperimentConfig& cfg, const std::string& out_path) {
  const Corpus corpus = load_pruned(cfg);
  const CorpusStats stats = corpus_stats(corpus);
  std::printf("N=%lld D=%lld V=%lld mean_doc_length=%.3f dropped_types=%lld dropped_docs=%lld\n",
              static_cast<long long>(stats.n_tokens), static_cast<long long>(stats.n_docs),
              static_cast<long long>(stats.vocab_size), stats.mean_doc_length,
              static_cast<long long>(corpus.prune_report.dropped_types),
              static_cast<long long>(corpus.prune_report.dropped_docs));
  if (!out_path.empty()) {
    save_corpus(corpus, out_path);
    std::printf("snapshot written to %s\n", out_path.c_str());
  }
  return 0;
}

int enumerate_main(const ExperimentConfig& cfg, const std::string& out_path) {
  const Corpus corpus = load_pruned(cfg);
  const HyperParams h{cfg.alpha, cfg.beta, cfg.K};
  WorkScheduler sched(cfg.workers);
  const EnumeratedPosterior post = enumerate_posterior(corpus, h, &sched);
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw io_error("cannot open " + out_path + " for writing");
    out = &file;
  }
  (*out) << "config,probability\n";
  for (size_t i = 0; i < post.prob.size(); ++i) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, post.prob[i]);
    (*out) << buf;
  }
  return 0;
}

int inefficiency_main(const ExperimentConfig& cfg, const IneffConfig& icfg,
                      const std::string& out_path) {
  const Corpus corpus = load_pruned(cfg);
  const HyperParams h{cfg.alpha, cfg.beta, cfg.K};
  WorkScheduler sched(cfg.workers);
  const IneffResult r = inefficiency_experiment(corpus, h, icfg, sched);
  if (!out_path.empty()) {
    std::ofstream file(out_path);
    if (!file) throw io_error("cannot open " + out_path + " for writing");
    write_inefficiency_csv(file, r, h);
    std::printf("table written to %s\n", out_path.c_str());
  } else {
    write_inefficiency_csv(std::cout, r, h);
  }
  return 0;
}

int cost_model_main(const std::string& tokens_list, double xi, double heaps_exp, double gamma_dp,
                    double sum_kd_per_token) {
  std::printf("tokens,z_cost,phi_cost,ratio\n");
  std::stringstream ss(tokens_list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const double n = std::strtod(item.c_str(), nullptr);
    const CostModel m = cost_model(n, xi, heaps_exp, gamma_dp, sum_kd_per_token * n);
    std::printf("%.10g,%.10g,%.10g,%.10g\n", n, m.z_cost, m.phi_cost, m.ratio);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel partially collapsed Gibbs sampling for LDA"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string light_accept = "pi-d2";
  std::string out_path;

  auto* run = app.add_subcommand("run", "run a sampler and emit a trace");
  add_corpus_options(run, cfg);
  std::string sampler_name = "pclda";
  run->add_option("--sampler", sampler_name,
                  "collapsed | adlda | pclda | light-pclda | pclda-vs");
  run->add_option("--topics,-K", cfg.K, "number of topics");
  run->add_option("--alpha", cfg.alpha, "document-topic prior");
  run->add_option("--beta", cfg.beta, "topic-word prior");
  run->add_option("--iterations", cfg.iterations, "number of sweeps");
  run->add_option("--burn-in", cfg.burn_in, "burn-in marker recorded in the header");
  run->add_option("--seed", cfg.seed, "random seed");
  run->add_option("--workers", cfg.workers, "worker threads / AD-LDA partitions");
  run->add_option("--vs-pi", cfg.vs_pi, "inclusion prior for pclda-vs");
  run->add_option("--light-accept", light_accept, "doc-proposal acceptance: pi-d2 | pi-d");
  run->add_option("--trace", cfg.trace_path, "trace CSV output path");
  run->add_option("--snapshot-every", cfg.snapshot_every, "state snapshot cadence (iterations)");
  run->add_option("--snapshot-out", cfg.snapshot_prefix, "state snapshot path prefix");
  run->add_flag("!--no-timing", cfg.record_timing, "zero the timing columns (byte-stable traces)");

  auto* prune = app.add_subcommand("prune", "prune a corpus and report statistics");
  add_corpus_options(prune, cfg);
  prune->add_option("--out", out_path, "binary corpus snapshot output");

  auto* enumerate = app.add_subcommand("enumerate", "exact posterior of a tiny corpus");
  add_corpus_options(enumerate, cfg);
  enumerate->add_option("--topics,-K", cfg.K, "number of topics");
  enumerate->add_option("--alpha", cfg.alpha, "document-topic prior");
  enumerate->add_option("--beta", cfg.beta, "topic-word prior");
  enumerate->add_option("--workers", cfg.workers, "worker threads");
  enumerate->add_option("--out", out_path, "CSV output path (default stdout)");

  IneffConfig icfg;
  auto* ineff = app.add_subcommand("inefficiency", "collapsed vs pclda inefficiency factors");
  add_corpus_options(ineff, cfg);
  ineff->add_option("--topics,-K", cfg.K, "number of topics");
  ineff->add_option("--alpha", cfg.alpha, "document-topic prior");
  ineff->add_option("--beta", cfg.beta, "topic-word prior");
  ineff->add_option("--seed", icfg.seed, "random seed");
  ineff->add_option("--workers", cfg.workers, "worker threads");
  ineff->add_option("--burn-in", icfg.burn_in, "collapsed burn-in to the shared state");
  ineff->add_option("--draws", icfg.n_draws, "retained draws per chain");
  ineff->add_option("--sweeps-per-draw", icfg.sweeps_per_draw, "sweeps between draws (0 freezes)");
  ineff->add_option("--top-words", icfg.n_top_words, "phi parameters per topic");
  ineff->add_option("--random-docs", icfg.n_random_docs, "theta documents");
  ineff->add_option("--out", out_path, "CSV output path (default stdout)");

  std::string tokens_list = "10000,1000000";
  double xi = 5.0, heaps_exp = 0.4, gamma_dp = 1.0, sum_kd_per_token = 1.0;
  auto* cost = app.add_subcommand("cost-model", "z-phase vs phi-phase cost under Heaps growth");
  cost->add_option("--tokens", tokens_list, "comma-separated corpus sizes N");
  cost->add_option("--xi", xi, "Heaps coefficient");
  cost->add_option("--heaps-exp", heaps_exp, "Heaps exponent in (0,1)");
  cost->add_option("--gamma", gamma_dp, "Dirichlet-process precision");
  cost->add_option("--sum-kd-per-token", sum_kd_per_token, "measured sum of K_d divided by N");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    cfg.sampler = sampler_from_string(sampler_name);
    cfg.light_accept = light_accept == "pi-d" ? LightAcceptRule::pi_d : LightAcceptRule::pi_d2;
    if (run->parsed()) return run_main(cfg);
    if (prune->parsed()) return prune_main(cfg, out_path);
    if (enumerate->parsed()) return enumerate_main(cfg, out_path);
    if (ineff->parsed()) return inefficiency_main(cfg, icfg, out_path);
    if (cost->parsed()) return cost_model_main(tokens_list, xi, heaps_exp, gamma_dp, sum_kd_per_token);
  } catch (const io_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const parse_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const bounds_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const value_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
  return 0;
}
