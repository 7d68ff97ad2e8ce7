#pragma once

#include <cstddef>
#include <vector>

namespace foodprompt {

struct MannWhitneyResult {
  double u_statistic = 0.0;  // min(U_A, U_B)
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double z_score = 0.0;      // continuity-corrected, signed by U_A - n1*n2/2
  double p_two_sided = 1.0;
  bool tie_corrected = false;
  bool exact = false;        // p from the exact null distribution
  bool degenerate = false;   // every value identical: p = 1 by convention
};

enum class MannWhitneyMethod { Auto, Exact, Normal };

/// Largest n1 + n2 for which Auto uses the exact distribution (tie-free only).
inline constexpr std::size_t kExactMannWhitneyLimit = 16;

/// Two-sided Mann-Whitney U test with average ranks for ties. Auto uses exact
/// enumeration for tie-free samples with n1 + n2 <= 16, otherwise the normal
/// approximation with tie-corrected variance and continuity correction.
/// Throws EmptySample; Exact with ties throws InvalidArgument.
MannWhitneyResult mann_whitney_u(const std::vector<double>& sample_a, const std::vector<double>& sample_b,
                                 MannWhitneyMethod method = MannWhitneyMethod::Auto);

/// P(U <= u) * 2, capped at 1, under the tie-free null distribution.
double mann_whitney_exact_p(std::size_t n1, std::size_t n2, double u_min);

}  // namespace foodprompt
