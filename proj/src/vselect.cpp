#include "pclda/vselect.hpp"

#include <cmath>

namespace pclda {

namespace {

// log Gamma(a) - log Gamma(a + n); the n == 0 case is exact cancellation,
// which keeps the empty-topic reduction to Bernoulli(pi) exact even at a = 0
double lgamma_drop(double a, double n) {
  if (n == 0.0) return 0.0;
  return std::lgamma(a) - std::lgamma(a + n);
}

// two-point probability from the summed quantities; pi in (0, 1]
double two_point_one(double s_beta, double s_n, double beta_v, double pi_k) {
  if (!(pi_k > 0.0) || pi_k > 1.0)
    throw domain_error("indicator prior pi must be in (0, 1]");
  if (pi_k == 1.0) return 1.0;
  const double lp1 = lgamma_drop(s_beta + beta_v, s_n) + std::log(pi_k);
  const double lp0 = lgamma_drop(s_beta, s_n) + std::log1p(-pi_k);
  return 1.0 / (1.0 + std::exp(lp0 - lp1));
}

}  // namespace

double indicator_one_probability(std::span<const int32_t> n_w_row,
                                 std::span<const double> beta_row,
                                 std::span<const uint8_t> I_row, int32_t v, double pi_k) {
  if (n_w_row[v] > 0) return 1.0;
  double s_beta = 0.0, s_n = 0.0;
  for (size_t j = 0; j < n_w_row.size(); ++j) {
    if (static_cast<int32_t>(j) == v || !I_row[j]) continue;
    s_beta += beta_row[j];
    s_n += static_cast<double>(n_w_row[j]);
  }
  return two_point_one(s_beta, s_n, beta_row[v], pi_k);
}

int sample_indicator(std::span<const int32_t> n_w_row, std::span<const double> beta_row,
                     std::span<uint8_t> I_row, int32_t v, double pi_k, RngStream& rng) {
  if (n_w_row[v] > 0) {
    I_row[v] = 1;
    return 1;
  }
  const double p1 = indicator_one_probability(n_w_row, beta_row, I_row, v, pi_k);
  const int draw = pi_k == 1.0 ? 1 : (rng.next_double() < p1 ? 1 : 0);
  I_row[v] = static_cast<uint8_t>(draw);
  return draw;
}

std::vector<double> sample_phi_vs(std::span<const int32_t> n_w_row,
                                  std::span<const uint8_t> I_row,
                                  std::span<const double> beta_row, RngStream& rng) {
  const size_t V = n_w_row.size();
  size_t included = 0;
  for (size_t v = 0; v < V; ++v) {
    if (n_w_row[v] > 0 && !I_row[v])
      throw state_error("sample_phi_vs: positive count with indicator 0");
    if (I_row[v]) ++included;
  }
  if (included == 0) throw state_error("sample_phi_vs: all indicators are zero");

  std::vector<double> out(V, 0.0);
  bool symmetric = true;
  for (size_t v = 1; v < V; ++v)
    if (beta_row[v] != beta_row[0]) {
      symmetric = false;
      break;
    }
  if (symmetric) {
    detail::sample_phi_row_masked(n_w_row, beta_row[0], I_row.data(), rng, out);
    return out;
  }

  // asymmetric prior: direct log-gamma draws over the included set
  double max_lg = -HUGE_VAL;
  std::vector<double> lg(V, -HUGE_VAL);
  for (size_t v = 0; v < V; ++v) {
    if (!I_row[v]) continue;
    lg[v] = sample_log_gamma(static_cast<double>(n_w_row[v]) + beta_row[v], rng);
    max_lg = std::max(max_lg, lg[v]);
  }
  if (included == 1) {
    for (size_t v = 0; v < V; ++v) out[v] = I_row[v] ? 1.0 : 0.0;
    return out;
  }
  double sum = 0.0;
  for (size_t v = 0; v < V; ++v) {
    if (!I_row[v]) continue;
    out[v] = std::exp(lg[v] - max_lg);
    sum += out[v];
  }
  for (size_t v = 0; v < V; ++v)
    if (I_row[v]) out[v] = std::max(out[v] / sum, 2.2250738585072014e-308);
  return out;
}

int64_t vs_sweep(const TopicState& s, IndicatorMatrix& ind, const HyperParams& h,
                 std::span<const double> pi, WorkScheduler& sched, uint64_t seed, uint64_t sweep,
                 PhiMatrix& phi_out) {
  h.validate();
  if (ind.K != s.K || ind.V != s.V) throw state_error("vs_sweep: indicator shape mismatch");
  if (static_cast<int32_t>(pi.size()) != s.K)
    throw state_error("vs_sweep: need one pi per topic");

  std::vector<int64_t> forced(static_cast<size_t>(s.K), 0);
  sched.run(s.K, [&](int64_t k, int) {
    const auto n_row = s.nw_row(static_cast<int32_t>(k));
    auto I_row = ind.row(static_cast<int32_t>(k));
    const double pi_k = pi[static_cast<size_t>(k)];
    if (!(pi_k > 0.0) || pi_k > 1.0) throw domain_error("vs_sweep: pi must be in (0, 1]");

    RngStream ind_rng = make_stream(seed, StreamTag::vs_indicator, sweep, static_cast<uint64_t>(k));

    // running sums over the included set; S_n is the whole row total because
    // every positive-count type is always included
    double s_beta_inc = 0.0, s_n = 0.0;
    for (int32_t v = 0; v < s.V; ++v) {
      if (n_row[v] > 0) I_row[v] = 1;  // short-circuit
      if (I_row[v]) s_beta_inc += h.beta;
      s_n += static_cast<double>(n_row[v]);
    }

    int32_t included = 0;
    int32_t last_candidate = -1;
    for (int32_t v = 0; v < s.V; ++v) {
      if (n_row[v] > 0) {
        ++included;
        continue;
      }
      last_candidate = v;
      const double s_beta_minus = s_beta_inc - (I_row[v] ? h.beta : 0.0);
      int draw;
      if (pi_k == 1.0) {
        draw = 1;
      } else {
        const double p1 = two_point_one(s_beta_minus, s_n, h.beta, pi_k);
        draw = ind_rng.next_double() < p1 ? 1 : 0;
      }
      if (draw != I_row[v]) s_beta_inc += draw ? h.beta : -h.beta;
      I_row[v] = static_cast<uint8_t>(draw);
      included += draw;
    }
    if (included == 0) {
      // empty topic whose candidates all came up zero
      I_row[last_candidate] = 1;
      ++forced[static_cast<size_t>(k)];
    }

    RngStream phi_rng = make_stream(seed, StreamTag::phi_row, sweep, static_cast<uint64_t>(k));
    detail::sample_phi_row_masked(n_row, h.beta, I_row.data(), phi_rng,
                                  phi_out.row(static_cast<int32_t>(k)));
  });

  int64_t total_forced = 0;
  for (int64_t f : forced) total_forced += f;
  return total_forced;
}

double prop_zeros(const PhiMatrix& phi) {
  const auto flat = phi.flat();
  if (flat.empty()) return 0.0;
  int64_t zeros = 0;
  for (double x : flat)
    if (x == 0.0) ++zeros;
  return static_cast<double>(zeros) / static_cast<double>(flat.size());
}

}  // namespace pclda
