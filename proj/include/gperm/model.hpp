#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gperm {

/// Evaluators accept x in [0, 1 - kDomainClamp]; callers clamp. The right
/// endpoint is singular (g(1) = 0, so 1/g and log g blow up there).
inline constexpr double kDomainClamp = 1e-12;

/// A model function g: strictly decreasing C^1 on [0,1] with g(0) = 1 and
/// g(1) = 0, held in log-space so that probability ratios g(a)/g(b) stay
/// representable for steep models (large |beta| or k). All step probabilities
/// downstream are exp of log_g differences.
struct GModel {
    std::string name;  // "mallows" | "kcm" | "uniform" | custom identifier
    double beta = 0.0;  // Mallows inverse-temperature parameter
    int k = 0;          // k-card-minimum parameter

    /// ln g(x); log_g(0) = 0, strictly decreasing, -> -inf as x -> 1.
    std::function<double(double)> log_g;
    /// g'(x)/g(x); strictly negative on [0, 1).
    std::function<double(double)> dlog_g;

    /// Scaling value gamma of the family instance (beta for Mallows, k for
    /// kCM); drives the band rescaling. Unset for models with no natural
    /// scaling parameter.
    std::optional<double> gamma;
};

/// Mallows family: g(x) = (e^{beta(1-x)} - 1)/(e^beta - 1), or 1-x at beta=0.
/// Evaluated via log1p/expm1 so large |beta| neither overflows nor cancels.
GModel make_mallows(double beta);

/// k-card-minimum family: g(x) = (1-x)^k. Rejects k < 1.
GModel make_kcm(int k);

/// Uniform model, g(x) = 1-x; every permutation equally likely.
GModel make_uniform();

/// User-supplied model from closed-form evaluators of ln g and (ln g)'.
GModel make_custom(std::string name, std::function<double(double)> log_g,
                   std::function<double(double)> dlog_g,
                   std::optional<double> gamma = std::nullopt);

struct ValidationReport {
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

/// Checks the GModel invariants on the grid {j/grid_points : j = 0..grid_points-1}
/// (clipped to [0, 1 - kDomainClamp]): g(0) = 1, strict decrease, negativity of
/// the log-derivative, divergence toward 1, and agreement of dlog_g with a
/// central finite difference of log_g away from 1. Returns the violations
/// instead of throwing; an empty list means the grid found nothing wrong.
/// Grid checks are necessary conditions only; global C^1 smoothness of a
/// custom model remains the caller's responsibility.
ValidationReport validate_model(const GModel& m, int grid_points);

}  // namespace gperm
