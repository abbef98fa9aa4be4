#include "gperm/permuton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gperm/numeric.hpp"

namespace gperm {

namespace {

// exp(log_g) stays above double range on the whole mesh when
// -log_g <= kLogCap, which also keeps u = int 1/g representable.
constexpr double kLogCap = 690.0;

double require_unit_interval(double v, const char* what) {
    if (!(v >= 0.0) || !(v <= 1.0)) throw std::domain_error(std::string(what) + ": outside [0,1]");
    return v;
}

}  // namespace

PermutonEvaluator::PermutonEvaluator(GModel m, PermutonOptions opt)
    : model_(std::move(m)), opt_(opt) {
    if (opt_.panels < 16) throw std::invalid_argument("PermutonEvaluator: panels must be >= 16");
    if (!(opt_.tail > 0.0) || opt_.tail > 1e-6) {
        throw std::invalid_argument("PermutonEvaluator: tail must be in (0, 1e-6]");
    }
    if (!(opt_.grade_ratio > 0.0) || !(opt_.grade_ratio < 1.0)) {
        throw std::invalid_argument("PermutonEvaluator: grade_ratio must be in (0,1)");
    }
    if (!model_.log_g || !model_.dlog_g) {
        throw std::invalid_argument("PermutonEvaluator: model lacks evaluators");
    }

    if (model_.name == "mallows") family_ = Family::mallows;
    else if (model_.name == "kcm") family_ = Family::kcm;
    else if (model_.name == "uniform") family_ = Family::uniform;
    closed_form_ = family_ != Family::custom;

    // Effective domain end: stop early if 1/g overflows before 1 - tail.
    x_end_ = 1.0 - opt_.tail;
    if (model_.log_g(x_end_) < -kLogCap) {
        double lo = 0.0, hi = x_end_;  // log_g(lo) >= -kLogCap > log_g(hi)
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            (model_.log_g(mid) >= -kLogCap ? lo : hi) = mid;
        }
        x_end_ = lo;
    }
    log_g_end_ = model_.log_g(x_end_);

    // Mesh: panels graded geometrically toward 1, each subdivided uniformly.
    std::vector<double> breaks{0.0};
    for (double d = opt_.grade_ratio; 1.0 - d < x_end_; d *= opt_.grade_ratio) {
        breaks.push_back(1.0 - d);
    }
    breaks.push_back(x_end_);
    const int sub = std::max(1, static_cast<int>(std::llround(
                                    static_cast<double>(opt_.panels) /
                                    static_cast<double>(breaks.size() - 1))));
    mesh_.reserve((breaks.size() - 1) * static_cast<std::size_t>(sub) + 1);
    mesh_.push_back(0.0);
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double a = breaks[p], b = breaks[p + 1];
        for (int j = 1; j <= sub; ++j) {
            mesh_.push_back(a + (b - a) * (static_cast<double>(j) / sub));
        }
        mesh_.back() = b;  // exact panel edge
    }

    // Tabulate u by cumulative panel quadrature of 1/g.
    const auto inv_g = [this](double z) { return std::exp(-model_.log_g(z)); };
    u_values_.resize(mesh_.size());
    u_values_[0] = 0.0;
    for (std::size_t j = 0; j + 1 < mesh_.size(); ++j) {
        const double du = quad::integrate(inv_g, mesh_[j], mesh_[j + 1], 1e-11, 20);
        u_values_[j + 1] = u_values_[j] + du;
        if (!(u_values_[j + 1] > u_values_[j]) || !std::isfinite(u_values_[j + 1])) {
            throw std::runtime_error(
                "PermutonEvaluator: tabulated u is not strictly increasing; "
                "model violates the decreasing-g hypotheses");
        }
    }

    if (closed_form_) {
        // The quadrature tabulation self-checks the closed-form antiderivative.
        for (std::size_t j = 1; j < mesh_.size(); ++j) {
            const double uc = u_closed(mesh_[j]);
            if (std::abs(uc - u_values_[j]) > 1e-7 * (std::abs(uc) + 1e-300)) {
                throw std::logic_error(
                    "PermutonEvaluator: closed-form u disagrees with quadrature");
            }
        }
    }

    // Node slopes 1/g, limited so the cubic pieces stay monotone.
    slopes_.resize(mesh_.size());
    for (std::size_t j = 0; j < mesh_.size(); ++j) slopes_[j] = inv_g(mesh_[j]);
    for (std::size_t j = 0; j < mesh_.size(); ++j) {
        double cap = std::numeric_limits<double>::infinity();
        if (j > 0) {
            cap = 3.0 * (u_values_[j] - u_values_[j - 1]) / (mesh_[j] - mesh_[j - 1]);
        }
        if (j + 1 < mesh_.size()) {
            cap = std::min(cap, 3.0 * (u_values_[j + 1] - u_values_[j]) /
                                    (mesh_[j + 1] - mesh_[j]));
        }
        slopes_[j] = std::min(slopes_[j], cap);
    }

    u_max_ = using_closed_form() ? u_closed(x_end_) : u_values_.back();
}

// ---------------------------------------------------------------------------
// Closed forms. With L(t) := ln|1 - e^{-t}| the Mallows antiderivative is
//   u(x) = (e^b - 1)/b * (L(b) - L(b(1-x))),
// which specializes to -ln(1-x) for the uniform model and has the elementary
// kCM counterpart ((1-x)^{1-k} - 1)/(k-1).
// ---------------------------------------------------------------------------

double PermutonEvaluator::u_closed(double x) const {
    switch (family_) {
        case Family::uniform:
            return -std::log1p(-x);
        case Family::kcm: {
            if (model_.k == 1) return -std::log1p(-x);
            const double km1 = static_cast<double>(model_.k - 1);
            return std::expm1(-km1 * std::log1p(-x)) / km1;
        }
        case Family::mallows: {
            const double b = model_.beta;
            if (b == 0.0) return -std::log1p(-x);
            const double scale = std::expm1(b) / b;  // (e^b - 1)/b > 0 both signs
            if (b > 0.0) {
                return scale * (log1mexp(b) - log1mexp(b * (1.0 - x)));
            }
            // b < 0: |1 - e^{-t}| = e^{-t} - 1 for t < 0.
            return scale * (std::log(std::expm1(-b)) - std::log(std::expm1(-b * (1.0 - x))));
        }
        case Family::custom:
            break;
    }
    throw std::logic_error("u_closed: no closed form");
}

double PermutonEvaluator::u_inv_closed(double v) const {
    switch (family_) {
        case Family::uniform:
            return -std::expm1(-v);
        case Family::kcm: {
            if (model_.k == 1) return -std::expm1(-v);
            const double km1 = static_cast<double>(model_.k - 1);
            return -std::expm1(-std::log1p(km1 * v) / km1);
        }
        case Family::mallows: {
            const double b = model_.beta;
            if (b == 0.0) return -std::expm1(-v);
            const double scale = std::expm1(b) / b;
            if (b > 0.0) {
                // ln(1 - e^{-b(1-x)}) = L(b) - v/scale =: y, then
                // b(1-x) = -ln(1 - e^y) computed as -ln(-expm1(y)).
                const double y = log1mexp(b) - v / scale;
                return 1.0 + std::log(-std::expm1(y)) / b;
            }
            // b < 0: ln(e^{-b(1-x)} - 1) = ln(e^{-b} - 1) - v/scale =: w,
            // then -b(1-x) = log1p(e^w).
            const double w = std::log(std::expm1(-b)) - v / scale;
            // Above roughly 700, log1p(e^w) == w to double precision.
            const double t = w > 700.0 ? w : std::log1p(std::exp(w));
            return 1.0 - t / -b;
        }
        case Family::custom:
            break;
    }
    throw std::logic_error("u_inv_closed: no closed form");
}

// ---------------------------------------------------------------------------
// Tabulated path: shape-preserving cubic Hermite on the (x, u) nodes with the
// exact slopes 1/g (limited at build time), inverted by bracketed bisection
// with Newton polish.
// ---------------------------------------------------------------------------

double PermutonEvaluator::u_interp(double x) const {
    const auto it = std::upper_bound(mesh_.begin(), mesh_.end(), x);
    std::size_t j = static_cast<std::size_t>(it - mesh_.begin());
    if (j == 0) return 0.0;
    if (j >= mesh_.size()) return u_values_.back();
    --j;
    const double h = mesh_[j + 1] - mesh_[j];
    const double t = (x - mesh_[j]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * u_values_[j] + (t3 - 2.0 * t2 + t) * h * slopes_[j] +
           (-2.0 * t3 + 3.0 * t2) * u_values_[j + 1] + (t3 - t2) * h * slopes_[j + 1];
}

double PermutonEvaluator::u_inv_interp(double v) const {
    const auto it = std::upper_bound(u_values_.begin(), u_values_.end(), v);
    std::size_t j = static_cast<std::size_t>(it - u_values_.begin());
    if (j == 0) return 0.0;
    if (j >= u_values_.size()) return 1.0;
    --j;
    double lo = mesh_[j], hi = mesh_[j + 1];
    double x = 0.5 * (lo + hi);
    for (int iter = 0; iter < 100; ++iter) {
        const double res = u_interp(x) - v;
        (res <= 0.0 ? lo : hi) = x;
        const double step = res * std::exp(model_.log_g(x));  // res / u'(x)
        double next = x - step;
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-13) return next;
        x = next;
    }
    return x;
}

double PermutonEvaluator::u(double x) const {
    if (!(x >= 0.0)) throw std::domain_error("u: x must be >= 0");
    if (x <= 0.0) return 0.0;
    if (x >= x_end_) return u_max_;
    return using_closed_form() ? u_closed(x) : u_interp(x);
}

double PermutonEvaluator::u_inv(double v) const {
    if (!(v >= 0.0)) throw std::domain_error("u_inv: v must be >= 0");
    if (v == 0.0) return 0.0;
    if (v >= u_max_) return 1.0;  // saturation: matches V(1, y) = 1
    const double x = using_closed_form() ? u_inv_closed(v) : u_inv_interp(v);
    return std::clamp(x, 0.0, 1.0);
}

double PermutonEvaluator::V(double x, double y) const {
    require_unit_interval(x, "V: x");
    require_unit_interval(y, "V: y");
    if (x >= 1.0 || y >= 1.0) return 1.0;
    return u_inv(u(std::min(x, x_end_)) + u(std::min(y, x_end_)));
}

double PermutonEvaluator::F(double x, double y) const { return x + y - V(x, y); }

double PermutonEvaluator::f(double x, double y) const {
    x = std::min(require_unit_interval(x, "f: x"), x_end_);
    y = std::min(require_unit_interval(y, "f: y"), x_end_);
    const double v = V(x, y);
    if (v >= x_end_) return 0.0;  // saturated: beyond the resolved tail
    const double log_ratio = 2.0 * model_.log_g(v) - model_.log_g(x) - model_.log_g(y);
    return -model_.dlog_g(v) * std::exp(log_ratio);
}

// Solves log_g(x) = target on [lo, x_end]; log_g is strictly decreasing.
double PermutonEvaluator::invert_log_g(double target, double lo) const {
    switch (family_) {
        case Family::uniform:
            return -std::expm1(target);
        case Family::kcm:
            return -std::expm1(target / model_.k);
        case Family::mallows: {
            const double b = model_.beta;
            if (b == 0.0) return -std::expm1(target);
            if (b > 0.0) {
                // ln(e^{b(1-x)} - 1) = target + ln(e^b - 1)
                const double w = target + b + log1mexp(b);
                const double t = w > 700.0 ? w : std::log1p(std::exp(w));
                return 1.0 - t / b;
            }
            // b < 0: ln(1 - e^{b(1-x)}) = target + ln(1 - e^b)
            const double y = target + log1mexp(-b);
            return 1.0 + std::log(-std::expm1(y)) / b;
        }
        case Family::custom:
            break;
    }
    double a = lo, c = x_end_;  // log_g(a) >= target >= log_g(c)
    for (int it = 0; it < 200 && c - a > 1e-15; ++it) {
        const double mid = 0.5 * (a + c);
        (model_.log_g(mid) >= target ? a : c) = mid;
    }
    return 0.5 * (a + c);
}

std::pair<double, double> PermutonEvaluator::sample_point(RngStream& rng) const {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const double x = rng.next_open() * x_end_;
        const double lambda = std::log1p(-rng.next_open()) + model_.log_g(x);
        if (lambda < log_g_end_) continue;  // saturated draw: retry
        const double vstar = std::clamp(invert_log_g(lambda, x), x, x_end_);
        const double du = u(vstar) - u(x);
        const double y = du <= 0.0 ? 0.0 : u_inv(du);
        return {x, y};
    }
    throw std::runtime_error("sample_point: persistent tail saturation");
}

// ---------------------------------------------------------------------------
// Paper closed forms for the limiting union-cdf.
// ---------------------------------------------------------------------------

namespace {

double closed_form_V_uniform(double x, double y) { return x + y - x * y; }

// (1/b) ln[(e^{b(x+1)} + e^{b(y+1)} - e^{b(x+y)} - e^b) / (e^b - 1)],
// factored against the dominant exponent so that no term overflows and the
// bracket keeps O(1) magnitude for either sign of b.
double closed_form_V_mallows(double beta, double x, double y) {
    if (beta == 0.0) return closed_form_V_uniform(x, y);
    if (std::abs(beta) < 1e-4) {
        // First-order expansion around the uniform permuton; the direct
        // formula loses too many digits to cancellation here.
        const double s = x + y - x * y;
        const double qn =
            (3.0 * (x * x + y * y) + 3.0 * (x + y) + 1.0 - 3.0 * x * y * (x + y)) / 6.0;
        const double c1 = qn - 0.5 * (s + 0.5) * (s + 0.5) - 1.0 / 24.0;
        return s + beta * c1;
    }
    if (beta > 0.0) {
        const double t = std::max(x, y);  // dominant exponent is b(t+1)
        const double a = std::exp(beta * (x - t)) + std::exp(beta * (y - t)) -
                         std::exp(beta * (x + y - t - 1.0)) - std::exp(-beta * t);
        return t + (std::log(a) - log1mexp(beta)) / beta;
    }
    const double e = std::min(x + y, 1.0);  // dominant exponent is b*e
    const double a = std::exp(beta * (x + 1.0 - e)) + std::exp(beta * (y + 1.0 - e)) -
                     std::exp(beta * (x + y - e)) - std::exp(beta * (1.0 - e));
    return e + (std::log(-a) - log1mexp(-beta)) / beta;
}

// 1 - ((1-x)^{1-k} + (1-y)^{1-k} - 1)^{1/(1-k)} via log-sum-exp.
double closed_form_V_kcm(int k, double x, double y) {
    if (k == 1) return closed_form_V_uniform(x, y);
    const double km1 = static_cast<double>(k - 1);
    const double tx = -km1 * std::log1p(-x);
    const double ty = -km1 * std::log1p(-y);
    const double m = std::max(tx, ty);
    const double ln_s = m + std::log(std::exp(tx - m) + std::exp(ty - m) - std::exp(-m));
    return -std::expm1(-ln_s / km1);
}

}  // namespace

double closed_form_V(const GModel& m, double x, double y) {
    require_unit_interval(x, "closed_form_V: x");
    require_unit_interval(y, "closed_form_V: y");
    if (x >= 1.0 || y >= 1.0) return 1.0;
    if (m.name == "uniform") return closed_form_V_uniform(x, y);
    if (m.name == "mallows") return closed_form_V_mallows(m.beta, x, y);
    if (m.name == "kcm") return closed_form_V_kcm(m.k, x, y);
    throw std::invalid_argument("closed_form_V: no closed form for model '" + m.name + "'");
}

}  // namespace gperm
