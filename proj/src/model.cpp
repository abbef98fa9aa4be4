#include "gperm/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gperm/numeric.hpp"

namespace gperm {

GModel make_mallows(double beta) {
    if (!std::isfinite(beta)) throw std::invalid_argument("make_mallows: beta must be finite");
    GModel m;
    m.name = "mallows";
    m.beta = beta;
    m.gamma = beta;
    if (beta == 0.0) {
        m.log_g = [](double x) { return std::log1p(-x); };
        m.dlog_g = [](double x) { return -1.0 / (1.0 - x); };
        return m;
    }
    if (beta > 0.0) {
        // ln g = ln(e^{b(1-x)} - 1) - ln(e^b - 1), both arguments positive.
        const double norm = beta + log1mexp(beta);
        m.log_g = [beta, norm](double x) {
            const double t = beta * (1.0 - x);
            return t + log1mexp(t) - norm;
        };
    } else {
        // ln g = ln(1 - e^{b(1-x)}) - ln(1 - e^b), both arguments in (0,1).
        const double norm = log1mexp(-beta);
        m.log_g = [beta, norm](double x) { return log1mexp(-beta * (1.0 - x)) - norm; };
    }
    // g'/g = -beta / (1 - e^{-beta(1-x)}) for either sign of beta.
    m.dlog_g = [beta](double x) { return -beta / -std::expm1(-beta * (1.0 - x)); };
    return m;
}

GModel make_kcm(int k) {
    if (k < 1) throw std::invalid_argument("make_kcm: k must be a positive integer");
    GModel m;
    m.name = "kcm";
    m.k = k;
    m.gamma = static_cast<double>(k);
    const double kd = static_cast<double>(k);
    m.log_g = [kd](double x) { return kd * std::log1p(-x); };
    m.dlog_g = [kd](double x) { return -kd / (1.0 - x); };
    return m;
}

GModel make_uniform() {
    GModel m;
    m.name = "uniform";
    m.gamma = 1.0;
    m.log_g = [](double x) { return std::log1p(-x); };
    m.dlog_g = [](double x) { return -1.0 / (1.0 - x); };
    return m;
}

GModel make_custom(std::string name, std::function<double(double)> log_g,
                   std::function<double(double)> dlog_g, std::optional<double> gamma) {
    if (!log_g || !dlog_g) throw std::invalid_argument("make_custom: missing evaluator");
    GModel m;
    m.name = std::move(name);
    m.log_g = std::move(log_g);
    m.dlog_g = std::move(dlog_g);
    m.gamma = gamma;
    return m;
}

namespace {
std::string at(double x) {
    std::ostringstream os;
    os << " at x=" << x;
    return os.str();
}
}  // namespace

ValidationReport validate_model(const GModel& m, int grid_points) {
    if (grid_points < 2) throw std::invalid_argument("validate_model: grid_points must be >= 2");
    if (!m.log_g || !m.dlog_g) return {{"missing log_g or dlog_g evaluator"}};

    ValidationReport report;
    auto fail = [&](const std::string& what) {
        if (report.failures.size() < 32) report.failures.push_back(what);
    };

    const double lg0 = m.log_g(0.0);
    if (!(std::abs(lg0) <= 1e-12)) fail("log_g(0) != 0 (g(0) != 1)");

    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(grid_points));
    for (int j = 0; j < grid_points; ++j) {
        const double x = static_cast<double>(j) / grid_points;
        grid.push_back(std::min(x, 1.0 - kDomainClamp));
    }

    double prev = lg0;
    for (std::size_t j = 1; j < grid.size(); ++j) {
        const double cur = m.log_g(grid[j]);
        if (!std::isfinite(cur)) fail("log_g not finite" + at(grid[j]));
        if (!(cur < prev)) fail("log_g not strictly decreasing" + at(grid[j]));
        prev = cur;
    }
    for (const double x : grid) {
        if (!(m.dlog_g(x) < 0.0)) fail("dlog_g not negative" + at(x));
    }
    if (!(m.log_g(1.0 - 1e-6) < m.log_g(0.5))) fail("log_g does not diverge toward 1");

    // dlog_g against a central finite difference, away from the singular end.
    const double h = 1e-6;
    for (const double x : grid) {
        if (x < h || x > 1.0 - 1e-3) continue;
        const double fd = (m.log_g(x + h) - m.log_g(x - h)) / (2.0 * h);
        const double d = m.dlog_g(x);
        if (std::abs(fd - d) > 1e-5 * std::max(std::abs(d), 1.0)) {
            fail("dlog_g disagrees with finite difference of log_g" + at(x));
        }
    }
    return report;
}

}  // namespace gperm
