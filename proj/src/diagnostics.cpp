#include "pclda/diagnostics.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "pclda/collapsed.hpp"
#include "pclda/pclda.hpp"

namespace pclda {

namespace {

void append_double(std::string& line, double x) {
  if (std::isnan(x)) return;  // optional field: empty cell
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  line += buf;
}

}  // namespace

void write_trace(std::ostream& out, const RunTrace& trace) {
  out << "# pclda-trace v1\n";
  out << "# version=" << trace.version << "\n";
  out << "# corpus_hash=" << trace.corpus_hash << "\n";
  out << "# config=" << trace.config_json << "\n";
  out << "iteration,wall_time,log_likelihood,sparsity_nw,sparsity_nd,tokens_per_sec,"
         "inner_loop_count,mh_accept_word,mh_accept_doc,prop_zeros\n";
  for (const auto& r : trace.rows) {
    std::string line = std::to_string(r.iteration);
    line += ',';
    append_double(line, r.wall_time);
    line += ',';
    append_double(line, r.log_likelihood);
    line += ',';
    append_double(line, r.sparsity_nw);
    line += ',';
    append_double(line, r.sparsity_nd);
    line += ',';
    append_double(line, r.tokens_per_sec);
    line += ',';
    line += std::to_string(r.inner_loop_count);
    line += ',';
    append_double(line, r.mh_accept_word);
    line += ',';
    append_double(line, r.mh_accept_doc);
    line += ',';
    append_double(line, r.prop_zeros);
    line += '\n';
    out << line;
  }
}

void write_trace_file(const std::string& path, const RunTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path + " for writing");
  write_trace(out, trace);
  if (!out) throw io_error("write failed for " + path);
}

RunTrace read_trace(std::istream& in) {
  RunTrace trace;
  std::string line;
  bool saw_header_row = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (line.rfind("# version=", 0) == 0) trace.version = line.substr(eq + 1);
      else if (line.rfind("# corpus_hash=", 0) == 0)
        trace.corpus_hash = std::strtoull(line.c_str() + eq + 1, nullptr, 10);
      else if (line.rfind("# config=", 0) == 0)
        trace.config_json = line.substr(eq + 1);
      continue;
    }
    if (!saw_header_row) {
      if (line.rfind("iteration,", 0) != 0)
        throw parse_error("trace: expected the CSV header row, got \"" + line + "\"");
      saw_header_row = true;
      continue;
    }
    TraceRow r;
    std::istringstream ss(line);
    std::string field;
    auto next = [&]() {
      if (!std::getline(ss, field, ',')) throw parse_error("trace: short row \"" + line + "\"");
      return field;
    };
    auto opt_double = [](const std::string& f) {
      return f.empty() ? std::nan("") : std::strtod(f.c_str(), nullptr);
    };
    r.iteration = std::strtoll(next().c_str(), nullptr, 10);
    r.wall_time = opt_double(next());
    r.log_likelihood = opt_double(next());
    r.sparsity_nw = opt_double(next());
    r.sparsity_nd = opt_double(next());
    r.tokens_per_sec = opt_double(next());
    r.inner_loop_count = std::strtoll(next().c_str(), nullptr, 10);
    r.mh_accept_word = opt_double(next());
    r.mh_accept_doc = opt_double(next());
    std::getline(ss, field, ',');
    r.prop_zeros = opt_double(field);
    trace.rows.push_back(r);
  }
  return trace;
}

RunTrace read_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  return read_trace(in);
}

double marginal_loglik(const TopicState& s, const HyperParams& h) {
  h.validate();
  const double lg_alpha = std::lgamma(h.alpha);
  const double lg_beta = std::lgamma(h.beta);
  const double k_alpha = static_cast<double>(s.K) * h.alpha;
  const double v_beta = static_cast<double>(s.V) * h.beta;
  const double lg_k_alpha = std::lgamma(k_alpha);
  const double lg_v_beta = std::lgamma(v_beta);

  double ll = 0.0;
  for (size_t d = 0; d < s.doc_topic.size(); ++d) {
    for (const auto& e : s.doc_topic[d].entries())
      ll += std::lgamma(static_cast<double>(e.count) + h.alpha) - lg_alpha;
    ll += lg_k_alpha - std::lgamma(static_cast<double>(s.z[d].size()) + k_alpha);
  }
  if (s.V > 0) {
    for (int32_t k = 0; k < s.K; ++k) {
      const auto row = s.nw_row(k);
      for (int32_t v = 0; v < s.V; ++v)
        if (row[v] > 0) ll += std::lgamma(static_cast<double>(row[v]) + h.beta) - lg_beta;
      ll += lg_v_beta - std::lgamma(static_cast<double>(s.topic_total[k]) + v_beta);
    }
  }
  return ll;
}

namespace {

double series_mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

}  // namespace

double iact(std::span<const double> series) {
  const auto n = static_cast<int64_t>(series.size());
  if (n < 100) throw insufficient_data("iact: need at least 100 points");

  const double mean = series_mean(series);
  const int order_max = static_cast<int>(
      std::min<int64_t>(n - 1, static_cast<int64_t>(10.0 * std::log10(static_cast<double>(n)))));

  // autocovariances with 1/n normalization
  std::vector<double> c(static_cast<size_t>(order_max) + 1, 0.0);
  for (int lag = 0; lag <= order_max; ++lag) {
    double acc = 0.0;
    for (int64_t t = 0; t + lag < n; ++t)
      acc += (series[t] - mean) * (series[t + lag] - mean);
    c[lag] = acc / static_cast<double>(n);
  }
  if (!(c[0] > 0.0)) return 1.0;  // constant series

  // Levinson-Durbin with AIC order selection
  std::vector<double> phi(static_cast<size_t>(order_max) + 1, 0.0);
  std::vector<double> prev(static_cast<size_t>(order_max) + 1, 0.0);
  double sigma2 = c[0];
  double best_aic = static_cast<double>(n) * std::log(sigma2);  // order 0
  double best_spec0 = sigma2;

  for (int p = 1; p <= order_max; ++p) {
    double acc = c[p];
    for (int j = 1; j < p; ++j) acc -= prev[j] * c[p - j];
    const double reflect = acc / sigma2;
    phi[p] = reflect;
    for (int j = 1; j < p; ++j) phi[j] = prev[j] - reflect * prev[p - j];
    sigma2 *= (1.0 - reflect * reflect);
    if (!(sigma2 > 0.0)) break;
    const double aic = static_cast<double>(n) * std::log(sigma2) + 2.0 * p;
    if (aic < best_aic) {
      best_aic = aic;
      double coef_sum = 0.0;
      for (int j = 1; j <= p; ++j) coef_sum += phi[j];
      const double denom = 1.0 - coef_sum;
      best_spec0 = sigma2 / (denom * denom);
    }
    std::copy(phi.begin(), phi.begin() + p + 1, prev.begin());
  }
  return best_spec0 / c[0];
}

double iact_batch_means(std::span<const double> series) {
  const auto n = static_cast<int64_t>(series.size());
  if (n < 100) throw insufficient_data("iact_batch_means: need at least 100 points");
  const auto b = static_cast<int64_t>(std::sqrt(static_cast<double>(n)));
  const int64_t m = n / b;
  const double mean = series_mean(series.subspan(0, static_cast<size_t>(m * b)));

  double var = 0.0;
  for (int64_t t = 0; t < m * b; ++t) var += (series[t] - mean) * (series[t] - mean);
  var /= static_cast<double>(m * b);
  if (!(var > 0.0)) return 1.0;

  double bm_var = 0.0;
  for (int64_t i = 0; i < m; ++i) {
    double bm = 0.0;
    for (int64_t t = i * b; t < (i + 1) * b; ++t) bm += series[t];
    bm /= static_cast<double>(b);
    bm_var += (bm - mean) * (bm - mean);
  }
  bm_var /= static_cast<double>(m - 1);
  return static_cast<double>(b) * bm_var / var;
}

EnumeratedPosterior enumerate_posterior(const Corpus& c, const HyperParams& h,
                                        WorkScheduler* sched) {
  h.validate();
  constexpr int64_t kMaxConfigs = 2'000'000;
  const int64_t n = c.n_tokens;
  const int32_t K = h.K;

  double configs_f = 1.0;
  for (int64_t t = 0; t < n; ++t) {
    configs_f *= static_cast<double>(K);
    if (configs_f > static_cast<double>(kMaxConfigs))
      throw domain_error("enumerate_posterior: K^N = " + std::to_string(configs_f) +
                         " exceeds the bound " + std::to_string(kMaxConfigs));
  }
  const auto n_configs = static_cast<int64_t>(configs_f);

  // flatten tokens
  const auto n_docs = c.n_docs();
  std::vector<int32_t> token_doc, token_word;
  token_doc.reserve(static_cast<size_t>(n));
  token_word.reserve(static_cast<size_t>(n));
  for (int64_t d = 0; d < n_docs; ++d)
    for (int32_t v : c.docs[d]) {
      token_doc.push_back(static_cast<int32_t>(d));
      token_word.push_back(v);
    }

  // lgamma tables for integer counts plus the priors
  const auto ni = static_cast<size_t>(n);
  std::vector<double> lg_alpha(ni + 1), lg_beta(ni + 1), lg_nk(ni + 1);
  const double v_beta = static_cast<double>(c.vocab_size()) * h.beta;
  for (size_t i = 0; i <= ni; ++i) {
    lg_alpha[i] = std::lgamma(static_cast<double>(i) + h.alpha);
    lg_beta[i] = std::lgamma(static_cast<double>(i) + h.beta);
    lg_nk[i] = std::lgamma(static_cast<double>(i) + v_beta);
  }

  EnumeratedPosterior post;
  post.K = K;
  post.n_tokens = n;
  if (n == 0) {
    post.prob = {1.0};
    return post;
  }
  post.prob.assign(static_cast<size_t>(n_configs), 0.0);

  const int32_t V = c.vocab_size();
  auto eval_block = [&](int64_t begin, int64_t end) {
    std::vector<int32_t> z(ni, 0);
    std::vector<int32_t> nd(static_cast<size_t>(n_docs) * K);
    std::vector<int32_t> nw(static_cast<size_t>(K) * V);
    std::vector<int32_t> nk(static_cast<size_t>(K));
    for (int64_t idx = begin; idx < end; ++idx) {
      int64_t rest = idx;
      for (size_t t = 0; t < ni; ++t) {
        z[t] = static_cast<int32_t>(rest % K);
        rest /= K;
      }
      std::fill(nd.begin(), nd.end(), 0);
      std::fill(nw.begin(), nw.end(), 0);
      std::fill(nk.begin(), nk.end(), 0);
      for (size_t t = 0; t < ni; ++t) {
        ++nd[static_cast<size_t>(token_doc[t]) * K + z[t]];
        ++nw[static_cast<size_t>(z[t]) * V + token_word[t]];
        ++nk[static_cast<size_t>(z[t])];
      }
      double lp = 0.0;
      for (int32_t x : nd) lp += lg_alpha[static_cast<size_t>(x)];
      for (int32_t x : nw) lp += lg_beta[static_cast<size_t>(x)];
      for (int32_t x : nk) lp -= lg_nk[static_cast<size_t>(x)];
      post.prob[static_cast<size_t>(idx)] = lp;  // unnormalized log for now
    }
  };

  if (sched && sched->workers() > 1 && n_configs > 4096) {
    const int blocks = sched->workers() * 4;
    const int64_t per = (n_configs + blocks - 1) / blocks;
    sched->run(blocks, [&](int64_t b, int) {
      const int64_t begin = b * per;
      eval_block(begin, std::min(n_configs, begin + per));
    });
  } else {
    eval_block(0, n_configs);
  }

  // normalize with a max shift
  const double max_lp = *std::max_element(post.prob.begin(), post.prob.end());
  double total = 0.0;
  for (double& p : post.prob) {
    p = std::exp(p - max_lp);
    total += p;
  }
  for (double& p : post.prob) p /= total;
  return post;
}

CostModel cost_model(double n_tokens, double xi, double heaps_exp, double gamma_dp,
                     double sum_kd) {
  if (!(n_tokens > 0.0)) throw domain_error("cost_model: N must be > 0");
  if (!(xi > 0.0)) throw domain_error("cost_model: xi must be > 0");
  if (!(heaps_exp > 0.0) || !(heaps_exp < 1.0))
    throw domain_error("cost_model: Heaps exponent must lie in (0, 1)");
  if (!(gamma_dp > 0.0)) throw domain_error("cost_model: gamma must be > 0");
  if (!(sum_kd > 0.0)) throw domain_error("cost_model: sum of K_d must be > 0");

  CostModel m;
  m.z_cost = sum_kd;
  const double topics = gamma_dp * std::log1p(n_tokens / gamma_dp);
  const double vocab = xi * std::pow(n_tokens, heaps_exp);
  m.phi_cost = topics * vocab;
  m.ratio = m.phi_cost / m.z_cost;
  return m;
}

int64_t expected_inner_loops(const TopicState& s) {
  int64_t total = 0;
  for (size_t d = 0; d < s.doc_topic.size(); ++d)
    total += static_cast<int64_t>(s.z[d].size()) * s.doc_topic[d].nnz();
  return total;
}

bool loop_count_audit(const RunTrace& trace, const TopicState& sweep_start_state) {
  if (trace.rows.empty()) return false;
  return trace.rows.back().inner_loop_count == expected_inner_loops(sweep_start_state);
}

namespace {

IneffSummary summarize(std::span<const double> values) {
  IneffSummary s;
  s.n_params = static_cast<int64_t>(values.size());
  if (values.empty()) return s;
  s.mean = series_mean(values);
  double acc = 0.0;
  for (double v : values) acc += (v - s.mean) * (v - s.mean);
  s.sd = values.size() > 1 ? std::sqrt(acc / static_cast<double>(values.size() - 1)) : 0.0;
  return s;
}

double series_variance(std::span<const double> x) {
  const double mean = series_mean(x);
  double acc = 0.0;
  for (double v : x) acc += (v - mean) * (v - mean);
  return acc / static_cast<double>(x.size());
}

}  // namespace

IneffResult inefficiency_experiment(const Corpus& c, const HyperParams& h,
                                    const IneffConfig& cfg, WorkScheduler& sched) {
  h.validate();
  if (cfg.n_draws < 100) throw insufficient_data("inefficiency_experiment: need >= 100 draws");

  RngStream init_rng = make_stream(cfg.seed, StreamTag::init, 0, 0);
  TopicState shared = init_state(c, h.K, init_rng);
  {
    RngStream burn_rng = make_stream(cfg.seed, StreamTag::chain, 0, 0);
    for (int64_t it = 0; it < cfg.burn_in; ++it) collapsed_sweep(shared, c, h, burn_rng);
  }

  // parameter selection at the shared initialization point
  const int32_t top_words = std::min<int32_t>(cfg.n_top_words, shared.V);
  std::vector<std::pair<int32_t, int32_t>> phi_params;  // (k, v)
  for (int32_t k = 0; k < shared.K; ++k) {
    std::vector<int32_t> order(static_cast<size_t>(shared.V));
    std::iota(order.begin(), order.end(), 0);
    const auto row = shared.nw_row(k);
    std::stable_sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
      if (row[a] != row[b]) return row[a] > row[b];  // posterior mean ranks as the counts do
      return a < b;
    });
    for (int32_t i = 0; i < top_words; ++i) phi_params.emplace_back(k, order[static_cast<size_t>(i)]);
  }
  const auto n_docs_sel = static_cast<int32_t>(std::min<int64_t>(cfg.n_random_docs, c.n_docs()));
  std::vector<int64_t> doc_sel;
  {
    RngStream pick = make_stream(cfg.seed, StreamTag::misc, 0, 0);
    std::vector<int64_t> pool(static_cast<size_t>(c.n_docs()));
    std::iota(pool.begin(), pool.end(), 0);
    for (int32_t i = 0; i < n_docs_sel; ++i) {
      const auto j = i + static_cast<int64_t>(pick.next_below(static_cast<uint32_t>(pool.size() - i)));
      std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
      doc_sel.push_back(pool[static_cast<size_t>(i)]);
    }
  }

  const size_t n_theta = doc_sel.size() * static_cast<size_t>(h.K);
  const size_t n_phi = phi_params.size();
  const auto draws = static_cast<size_t>(cfg.n_draws);

  enum Chain { kCollapsed = 0, kPclda = 1 };
  std::vector<std::vector<double>> theta_series[2];
  std::vector<std::vector<double>> phi_series[2];
  for (int chain = 0; chain < 2; ++chain) {
    theta_series[chain].assign(n_theta, {});
    phi_series[chain].assign(n_phi, {});
    for (auto& v : theta_series[chain]) v.reserve(draws);
    for (auto& v : phi_series[chain]) v.reserve(draws);
  }

  // Theta/Phi measurement draws use streams shared by both chains, keyed only
  // by the draw index, so frozen chains yield identical measurements. Phi
  // rows sit in the upper half of the index space, away from the doc draws.
  auto measure = [&](const TopicState& s, int chain, int64_t draw) {
    for (size_t di = 0; di < doc_sel.size(); ++di) {
      RngStream rng = make_stream(cfg.seed, StreamTag::measurement,
                                  static_cast<uint64_t>(draw), static_cast<uint64_t>(di));
      const auto theta = sample_theta(s, h, doc_sel[di], rng);
      for (int32_t k = 0; k < h.K; ++k)
        theta_series[chain][di * static_cast<size_t>(h.K) + k].push_back(theta[k]);
    }
    PhiMatrix phi(s.K, s.V);
    for (int32_t k = 0; k < s.K; ++k) {
      RngStream rng = make_stream(cfg.seed, StreamTag::measurement, static_cast<uint64_t>(draw),
                                  0x80000000ULL + static_cast<uint64_t>(k));
      detail::sample_phi_row_masked(s.nw_row(k), h.beta, nullptr, rng, phi.row(k));
    }
    for (size_t pi = 0; pi < phi_params.size(); ++pi)
      phi_series[chain][pi].push_back(phi.at(phi_params[pi].first, phi_params[pi].second));
  };

  // collapsed chain
  {
    TopicState s = shared;
    RngStream chain_rng = make_stream(cfg.seed, StreamTag::chain, 1, 0);
    for (int64_t t = 0; t < cfg.n_draws; ++t) {
      for (int64_t k = 0; k < cfg.sweeps_per_draw; ++k) collapsed_sweep(s, c, h, chain_rng);
      measure(s, kCollapsed, t);
    }
  }
  // PC-LDA chain
  {
    TopicState s = shared;
    for (int64_t t = 0; t < cfg.n_draws; ++t) {
      for (int64_t k = 0; k < cfg.sweeps_per_draw; ++k) {
        const uint64_t sweep = static_cast<uint64_t>(t * std::max<int64_t>(cfg.sweeps_per_draw, 1) + k) + 1;
        const PhiMatrix phi = sample_phi(s, h, cfg.seed, sweep, sched);
        const WordAliasSet was = build_word_alias_tables(phi, h, sched);
        pclda_sweep(s, c, was, h, sched, cfg.seed, sweep);
      }
      measure(s, kPclda, t);
    }
  }

  // per-parameter inefficiency factors
  auto collect = [&](std::vector<std::vector<double>>& series, IneffSummary& filtered,
                     IneffSummary& all) {
    std::vector<double> ifs_all, ifs_filtered;
    for (const auto& x : series) {
      const double f = iact(x);
      ifs_all.push_back(f);
      if (series_variance(x) > 1e-12) ifs_filtered.push_back(f);
    }
    filtered = summarize(ifs_filtered);
    all = summarize(ifs_all);
  };

  IneffResult r;
  collect(theta_series[kCollapsed], r.collapsed_theta, r.collapsed_theta_all);
  collect(theta_series[kPclda], r.pclda_theta, r.pclda_theta_all);
  collect(phi_series[kCollapsed], r.collapsed_phi, r.collapsed_phi_all);
  collect(phi_series[kPclda], r.pclda_phi, r.pclda_phi_all);
  r.theta_ratio = r.pclda_theta.mean / r.collapsed_theta.mean;
  r.phi_ratio = r.pclda_phi.mean / r.collapsed_phi.mean;
  r.theta_ratio_all = r.pclda_theta_all.mean / r.collapsed_theta_all.mean;
  r.phi_ratio_all = r.pclda_phi_all.mean / r.collapsed_phi_all.mean;
  return r;
}

void write_inefficiency_csv(std::ostream& out, const IneffResult& r, const HyperParams& h) {
  out << "block,K,collapsed_mean,collapsed_sd,pclda_mean,pclda_sd,ratio,n_params,filtered\n";
  auto row = [&](const char* block, const IneffSummary& col, const IneffSummary& pc, double ratio,
                 bool filtered) {
    out << block << ',' << h.K << ',' << col.mean << ',' << col.sd << ',' << pc.mean << ','
        << pc.sd << ',' << ratio << ',' << col.n_params << ',' << (filtered ? 1 : 0) << '\n';
  };
  row("theta", r.collapsed_theta, r.pclda_theta, r.theta_ratio, true);
  row("phi", r.collapsed_phi, r.pclda_phi, r.phi_ratio, true);
  row("theta", r.collapsed_theta_all, r.pclda_theta_all, r.theta_ratio_all, false);
  row("phi", r.collapsed_phi_all, r.pclda_phi_all, r.phi_ratio_all, false);
}

}  // namespace pclda
