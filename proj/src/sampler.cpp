#include "gperm/sampler.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gperm {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_step_args(int n, int i, int l) {
    if (n < 1) throw std::invalid_argument("step: n must be >= 1");
    if (i < 1 || i > n) throw std::out_of_range("step: i outside [1, n]");
    if (l < 1 || l > n - (i - 1)) throw std::out_of_range("step: l outside [1, n-i+1]");
}
}  // namespace

LogGGrid::LogGGrid(const GModel& m, int n) {
    if (n < 1) throw std::invalid_argument("LogGGrid: n must be >= 1");
    values_.resize(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j < n; ++j) {
        values_[static_cast<std::size_t>(j)] = m.log_g(static_cast<double>(j) / n);
    }
    values_.back() = kNegInf;
}

double step_mass(const GModel& m, int n, int i, int l) {
    check_step_args(n, i, l);
    const double base = m.log_g(static_cast<double>(i - 1) / n);
    const double lo = m.log_g(static_cast<double>(i - 1 + l - 1) / n);
    const double hi_tail =
        (i - 1 + l == n) ? 0.0 : std::exp(m.log_g(static_cast<double>(i - 1 + l) / n) - base);
    return std::max(0.0, std::exp(lo - base) - hi_tail);
}

double step_mass(const LogGGrid& grid, int i, int l) {
    check_step_args(grid.n(), i, l);
    const double base = grid[i - 1];
    const double lo = std::exp(grid[i - 1 + l - 1] - base);
    const double hi = (i - 1 + l == grid.n()) ? 0.0 : std::exp(grid[i - 1 + l] - base);
    return std::max(0.0, lo - hi);
}

namespace {

// Smallest l in [1, R] with log_tail(l) <= lambda; log_tail is strictly
// decreasing and log_tail(R) = -inf, so the search always terminates.
template <class LogTail>
int smallest_tail_below(int R, double lambda, LogTail&& log_tail) {
    int lo = 1, hi = R;
    while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (log_tail(mid) <= lambda) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return lo;
}

}  // namespace

int sample_step(const GModel& m, int n, int i, RngStream& rng) {
    check_step_args(n, i, 1);
    const int R = n - (i - 1);
    if (R == 1) return 1;
    const double lambda = std::log1p(-rng.next_open());  // ln(1 - W), W in (0,1)
    const double base = m.log_g(static_cast<double>(i - 1) / n);
    return smallest_tail_below(R, lambda, [&](int l) {
        return (i - 1 + l == n) ? kNegInf : m.log_g(static_cast<double>(i - 1 + l) / n) - base;
    });
}

int sample_step(const LogGGrid& grid, int i, RngStream& rng) {
    check_step_args(grid.n(), i, 1);
    const int R = grid.n() - (i - 1);
    if (R == 1) return 1;
    const double lambda = std::log1p(-rng.next_open());
    const double base = grid[i - 1];
    return smallest_tail_below(R, lambda, [&](int l) { return grid[i - 1 + l] - base; });
}

Permutation sample_permutation(const GModel& m, int n, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("sample_permutation: n must be >= 1");
    const LogGGrid grid(m, n);
    FenwickDeck deck(n);
    Permutation sigma;
    sigma.sigma.resize(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        const int c = sample_step(grid, i, rng);
        sigma.sigma[static_cast<std::size_t>(i) - 1] =
            static_cast<std::int32_t>(deck.select_remove(c));
    }
    return sigma;
}

Permutation sample_kcm_oracle(int k, int n, RngStream& rng) {
    if (k < 1) throw std::invalid_argument("sample_kcm_oracle: k must be >= 1");
    if (n < 1) throw std::invalid_argument("sample_kcm_oracle: n must be >= 1");
    FenwickDeck deck(n);
    Permutation sigma;
    sigma.sigma.resize(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        const auto R = static_cast<std::uint64_t>(deck.remaining());
        std::uint64_t c = rng.next_below(R) + 1;
        for (int draw = 1; draw < k; ++draw) c = std::min(c, rng.next_below(R) + 1);
        sigma.sigma[static_cast<std::size_t>(i) - 1] =
            static_cast<std::int32_t>(deck.select_remove(static_cast<int>(c)));
    }
    return sigma;
}

namespace {

// Truncated geometric on [1, R] with ratio q in (0, 1):
// P(c = l) proportional to q^{l-1}; inverse transform in closed form.
int truncated_geometric(double q, int R, RngStream& rng) {
    if (R == 1) return 1;
    const double U = rng.next_open();
    // smallest l with (1 - q^l)/(1 - q^R) >= U
    const double c = std::ceil(std::log1p(-U * -std::expm1(static_cast<double>(R) * std::log(q))) /
                               std::log(q));
    if (!(c >= 1.0)) return 1;
    return c > static_cast<double>(R) ? R : static_cast<int>(c);
}

}  // namespace

Permutation sample_mallows_oracle(double q, int n, RngStream& rng) {
    if (!(q > 0.0) || q == 1.0) {
        throw std::invalid_argument("sample_mallows_oracle: q must be positive and != 1");
    }
    if (n < 1) throw std::invalid_argument("sample_mallows_oracle: n must be >= 1");
    FenwickDeck deck(n);
    Permutation sigma;
    sigma.sigma.resize(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        const int R = deck.remaining();
        // Ratio q > 1 mirrors to 1/q: l -> R+1-l reverses the weights.
        const int c = q < 1.0 ? truncated_geometric(q, R, rng)
                              : R + 1 - truncated_geometric(1.0 / q, R, rng);
        sigma.sigma[static_cast<std::size_t>(i) - 1] =
            static_cast<std::int32_t>(deck.select_remove(c));
    }
    return sigma;
}

}  // namespace gperm
