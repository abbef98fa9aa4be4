#pragma once

#include <utility>
#include <vector>

#include "gperm/model.hpp"
#include "gperm/rng.hpp"

namespace gperm {

struct PermutonOptions {
    /// Target number of tabulation nodes (>= 16).
    int panels = 32768;
    /// Requested tail cutoff delta: the mesh ends at 1 - delta. The effective
    /// cutoff may be larger when 1/g would overflow before that (steep models);
    /// see PermutonEvaluator::tail_cutoff().
    double tail = 1e-9;
    /// Geometric grading ratio of the panel widths toward the singular end.
    double grade_ratio = 0.9;
    /// Evaluate through the tabulated quadrature path even when the family has
    /// a closed-form antiderivative (the closed form then serves only as the
    /// build-time self-check instead of the other way around).
    bool force_quadrature = false;
};

/// Numerical realization of the limiting permuton mu_g of a model g:
///   u(x)   = int_0^x 1/g,          strictly increasing, -> inf at 1
///   V(x,y) = u^{-1}(u(x) + u(y))   union-cdf, V(0,y) = y, V(1,y) = 1
///   F(x,y) = x + y - V(x,y)        joint cdf, uniform marginals
///   f(x,y) = -g'(V) g(V) / (g(x) g(y))   joint density
///
/// u is tabulated by panel Gauss-Legendre quadrature of exp(-log g) on a mesh
/// graded geometrically toward 1. For the built-in families the closed-form
/// antiderivative is used for evaluation and the quadrature tabulation acts
/// as a build-time self-check; force_quadrature flips the roles. Immutable
/// after construction and safe for concurrent reads.
class PermutonEvaluator {
public:
    explicit PermutonEvaluator(GModel m, PermutonOptions opt = {});

    /// u(x). Arguments above the tail cutoff saturate at u(1 - tail_cutoff()).
    double u(double x) const;

    /// Solves u(x) = v; total on v >= 0. Levels above u(1 - tail_cutoff())
    /// map to 1, matching the continuous extension V(1, y) = 1.
    double u_inv(double v) const;

    double V(double x, double y) const;
    double F(double x, double y) const;

    /// Joint density; arguments clamp and saturate at the tail like u_inv.
    double f(double x, double y) const;

    /// One point with law mu_g (up to the tail cutoff): X uniform, then Y from
    /// the conditional cdf 1 - g(V(x,y))/g(x) by inverting log g. Saturated
    /// draws (probability of tail-cutoff order) are retried.
    std::pair<double, double> sample_point(RngStream& rng) const;

    /// Effective tail cutoff delta: evaluation domain is [0, 1 - delta].
    double tail_cutoff() const { return 1.0 - x_end_; }
    double domain_end() const { return x_end_; }
    bool using_closed_form() const { return closed_form_ && !opt_.force_quadrature; }

    const GModel& model() const { return model_; }
    const std::vector<double>& mesh() const { return mesh_; }
    const std::vector<double>& u_values() const { return u_values_; }

private:
    enum class Family { mallows, kcm, uniform, custom };

    double u_closed(double x) const;
    double u_inv_closed(double v) const;
    double u_interp(double x) const;
    double u_inv_interp(double v) const;
    double invert_log_g(double target, double lo) const;

    GModel model_;
    PermutonOptions opt_;
    Family family_ = Family::custom;
    bool closed_form_ = false;
    double x_end_ = 0.0;   // 1 - effective tail cutoff
    double u_max_ = 0.0;   // u(x_end)
    double log_g_end_ = 0.0;
    std::vector<double> mesh_;
    std::vector<double> u_values_;
    std::vector<double> slopes_;  // 1/g at the nodes, monotonicity-limited
};

/// The closed-form union-cdfs of the Mallows and kCM limiting permutons,
/// evaluated with log-sum-exp rearrangements that survive large parameters.
/// Defined for the built-in families; throws for custom models.
double closed_form_V(const GModel& m, double x, double y);

}  // namespace gperm
