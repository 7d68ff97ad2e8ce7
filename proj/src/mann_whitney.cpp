#include "foodprompt/mann_whitney.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "foodprompt/error.hpp"

namespace foodprompt {

namespace {

// Number of rank arrangements giving each U, via
// f(n1, n2, u) = f(n1 - 1, n2, u - n2) + f(n1, n2 - 1, u).
std::vector<double> u_frequencies(std::size_t n1, std::size_t n2) {
  const std::size_t max_u = n1 * n2;
  // table[i][j] is the distribution for (i, n2_so_far = j); roll over j.
  std::vector<std::vector<double>> prev(n1 + 1);
  for (std::size_t i = 0; i <= n1; ++i) prev[i].assign(max_u + 1, 0.0);
  for (std::size_t i = 0; i <= n1; ++i) prev[i][0] = 1.0;  // j = 0
  for (std::size_t j = 1; j <= n2; ++j) {
    std::vector<std::vector<double>> cur(n1 + 1, std::vector<double>(max_u + 1, 0.0));
    cur[0][0] = 1.0;
    for (std::size_t i = 1; i <= n1; ++i) {
      for (std::size_t u = 0; u <= i * j; ++u) {
        double v = prev[i][u];
        if (u >= j) v += cur[i - 1][u - j];
        cur[i][u] = v;
      }
    }
    prev = std::move(cur);
  }
  return prev[n1];
}

}  // namespace

double mann_whitney_exact_p(std::size_t n1, std::size_t n2, double u_min) {
  const auto freq = u_frequencies(n1, n2);
  const double total = std::accumulate(freq.begin(), freq.end(), 0.0);
  double tail = 0.0;
  for (std::size_t u = 0; u < freq.size() && static_cast<double>(u) <= u_min + 1e-9; ++u) tail += freq[u];
  return std::min(1.0, 2.0 * tail / total);
}

MannWhitneyResult mann_whitney_u(const std::vector<double>& sample_a, const std::vector<double>& sample_b,
                                 MannWhitneyMethod method) {
  if (sample_a.empty() || sample_b.empty()) throw Error(ErrorCode::EmptySample, "both samples need values");

  MannWhitneyResult res;
  res.n1 = sample_a.size();
  res.n2 = sample_b.size();
  const std::size_t n = res.n1 + res.n2;

  struct Obs {
    double value;
    bool from_a;
  };
  std::vector<Obs> pooled;
  pooled.reserve(n);
  for (double v : sample_a) pooled.push_back({v, true});
  for (double v : sample_b) pooled.push_back({v, false});
  std::sort(pooled.begin(), pooled.end(), [](const Obs& x, const Obs& y) { return x.value < y.value; });

  double rank_sum_a = 0.0;
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && pooled[j].value == pooled[i].value) ++j;
    const double t = static_cast<double>(j - i);
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].from_a) rank_sum_a += avg_rank;
    }
    tie_term += t * t * t - t;
    i = j;
  }

  const double n1 = static_cast<double>(res.n1);
  const double n2 = static_cast<double>(res.n2);
  const double u_a = rank_sum_a - n1 * (n1 + 1.0) / 2.0;
  const double u_b = n1 * n2 - u_a;
  res.u_statistic = std::min(u_a, u_b);
  res.tie_corrected = tie_term > 0.0;

  const double mean_u = n1 * n2 / 2.0;
  const double total = static_cast<double>(n);
  const double variance =
      total > 1.0 ? n1 * n2 / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0))) : 0.0;

  if (variance <= 0.0) {
    res.degenerate = true;
    res.z_score = 0.0;
    res.p_two_sided = 1.0;
    return res;
  }

  const double deviation = std::max(0.0, std::fabs(u_a - mean_u) - 0.5);
  const double z = deviation / std::sqrt(variance);
  res.z_score = u_a < mean_u ? -z : z;

  const bool can_exact = !res.tie_corrected;
  const bool use_exact = method == MannWhitneyMethod::Exact ||
                         (method == MannWhitneyMethod::Auto && can_exact && n <= kExactMannWhitneyLimit);
  if (use_exact) {
    if (!can_exact) throw Error(ErrorCode::InvalidArgument, "exact distribution requires tie-free samples");
    res.exact = true;
    res.p_two_sided = mann_whitney_exact_p(res.n1, res.n2, res.u_statistic);
  } else {
    res.p_two_sided = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  }
  return res;
}

}  // namespace foodprompt
