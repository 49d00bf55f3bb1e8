// Calibrates the default bump threshold (bump.beta_min) on the synthetic
// bump library and prints the F1 sweep summary.

#include <cstdio>
#include <map>

#include "roadsense/calibration.hpp"

int main() {
  using namespace roadsense::calibration;
  const auto cases = build_library();
  const Calibration cal = calibrate(cases);

  double pos_min = 1e9, neg_max = -1e9;
  std::map<double, std::pair<double, double>> per_gain;  // gain -> (min positive, max negative)
  for (const auto& c : cases) {
    if (!c.valid) continue;
    auto& [pmin, nmax] = per_gain.try_emplace(c.gain, 1e9, -1e9).first->second;
    if (c.has_bump) {
      pos_min = std::min(pos_min, c.beta_hat);
      pmin = std::min(pmin, c.beta_hat);
    } else {
      neg_max = std::max(neg_max, c.beta_hat);
      nmax = std::max(nmax, c.beta_hat);
    }
  }
  std::printf("library: %zu scored segments\n", cases.size());
  for (const auto& [gain, v] : per_gain) {
    std::printf("  gain %.2f  min bump beta %.3f  max background beta %.3f\n", gain, v.first, v.second);
  }
  std::printf("overall: min bump beta %.3f, max background beta %.3f\n", pos_min, neg_max);
  std::printf("best F1 %.4f for beta_min in [%.2f, %.2f]\n", cal.best_f1, cal.range_lo, cal.range_hi);
  const Score s = score(cases, cal.beta_min);
  std::printf("beta_min = %.2f  (tp %zu, fp %zu, fn %zu)\n", cal.beta_min, s.tp, s.fp, s.fn);
  return 0;
}
