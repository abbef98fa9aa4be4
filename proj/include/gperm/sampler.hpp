#pragma once

#include <vector>

#include "gperm/fenwick.hpp"
#include "gperm/model.hpp"
#include "gperm/permutation.hpp"
#include "gperm/rng.hpp"

namespace gperm {

/// ln g at the n+1 grid points j/n, precomputed once per sampling run.
/// The top value (j = n) is hardcoded to -inf: g(1) = 0 by definition and is
/// never evaluated through log_g.
class LogGGrid {
public:
    LogGGrid(const GModel& m, int n);
    double operator[](int j) const { return values_[static_cast<std::size_t>(j)]; }
    int n() const { return static_cast<int>(values_.size()) - 1; }

private:
    std::vector<double> values_;
};

/// Probability mass nu^{(n),i}_g({l}) of picking the l-th remaining card at
/// step i: [g((i-1+l-1)/n) - g((i-1+l)/n)] / g((i-1)/n), computed as a
/// difference of exp(log_g differences).
double step_mass(const GModel& m, int n, int i, int l);
double step_mass(const LogGGrid& grid, int i, int l);

/// One draw with law nu^{(n),i}_g by inverse transform on the decreasing tail
/// P(C >= l+1) = g((i-1+l)/n)/g((i-1)/n): W is uniform in (0,1) and the result
/// is the smallest l whose log-tail is <= ln(1-W), located by binary search.
/// O(log n) evaluations of log_g per call.
int sample_step(const GModel& m, int n, int i, RngStream& rng);
int sample_step(const LogGGrid& grid, int i, RngStream& rng);

/// Full card-picking loop: sigma(i) is the C^{(n),i}-th smallest remaining
/// card. Law PERM(g,n); O(n log n) total with the log g grid built once.
Permutation sample_permutation(const GModel& m, int n, RngStream& rng);

/// k-card-minimum sampler taken literally: each step draws k independent
/// uniform positions on the remaining deck and keeps the lowest.
Permutation sample_kcm_oracle(int k, int n, RngStream& rng);

/// Mallows sampler via the truncated geometric step law
/// P(C = l) = (q^{l-1} - q^l)/(1 - q^{n-(i-1)}), inverted in closed form.
/// Rejects q <= 0 and q = 1 (q = 1 is the uniform model, handled elsewhere).
Permutation sample_mallows_oracle(double q, int n, RngStream& rng);

}  // namespace gperm
