#include "qgv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qgv {

namespace {

constexpr double kFloor = 1e-15;

// Ceiling with a 1e-12 downward nudge so exact integer quotients do not pick
// up a spurious +1 from floating-point noise.
std::int64_t ceil_budget(double q) {
    return static_cast<std::int64_t>(std::ceil(q - 1e-12));
}

}  // namespace

VerificationTarget::VerificationTarget(double epsilon_, double delta_, std::size_t dim_, double nu_)
    : epsilon(epsilon_), delta(delta_), dim(dim_), nu(nu_) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
    if (dim < 2) throw std::invalid_argument("dimension must be at least 2");
    if (!(nu > 0.0 && nu <= 1.0)) throw std::invalid_argument("nu must lie in (0,1]");
}

double kl(double x, double y) {
    if (!(y > 0.0 && y < 1.0)) throw std::invalid_argument("kl: y must lie in (0,1)");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("kl: x must lie in [0,1]");
    double d = 0.0;
    if (x > 0.0) d += x * std::log(x / y);
    if (x < 1.0) d += (1.0 - x) * std::log((1.0 - x) / (1.0 - y));
    return d;
}

KlInverseResult kl_inverse(double p_hat, double y) {
    if (!(p_hat > 0.0 && p_hat <= 1.0))
        throw std::invalid_argument("kl_inverse: p_hat must lie in (0,1]");
    if (y < 0.0) throw std::invalid_argument("kl_inverse: y must be nonnegative");

    if (p_hat == 1.0) {
        // D(1||x) = -ln x, so the inverse is exactly e^{-y}.
        const double x = std::exp(-y);
        if (x < kFloor) return {kFloor, true};
        return {x, false};
    }
    if (y == 0.0) return {p_hat, false};
    if (kl(p_hat, kFloor) <= y) return {kFloor, true};

    double lo = kFloor;  // D(p_hat||lo) > y
    double hi = p_hat;   // D(p_hat||hi) = 0 <= y
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double d = kl(p_hat, mid);
        if (std::abs(d - y) < 1e-12) return {mid, false};
        (d > y ? lo : hi) = mid;
        // The divergence is steep where x is tiny, so the bracket criterion
        // must be relative to keep |D(p_hat||x) - y| small.
        if (hi - lo < 1e-14 * hi) break;
    }
    return {0.5 * (lo + hi), false};
}

double passing_bound(const VerificationTarget& t) {
    const double bound =
        1.0 - (double(t.dim) + 1.0) / double(t.dim) * t.nu * t.epsilon;
    if (bound <= 0.0)
        throw std::invalid_argument("passing bound is nonpositive; epsilon too large");
    return bound;
}

double significance(double p_hat, std::int64_t n, const VerificationTarget& t) {
    if (n < 0) throw std::invalid_argument("significance: n must be nonnegative");
    if (n == 0) return 1.0;
    const double bound =
        1.0 - (double(t.dim) + 1.0) / double(t.dim) * t.nu * t.epsilon;
    if (p_hat <= bound) return 1.0;
    // A nonpositive bound means a gate this far from the target never passes
    // a test, so any observed pass excludes it outright.
    if (bound <= 0.0) return p_hat > 0.0 ? 0.0 : 1.0;
    return std::clamp(std::exp(-kl(p_hat, bound) * double(n)), 0.0, 1.0);
}

double infidelity_bound(double p_hat, std::int64_t n, double delta, std::size_t dim, double nu) {
    if (n < 1) throw std::invalid_argument("infidelity_bound: n must be at least 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("infidelity_bound: delta must lie in (0,1)");
    const double y = std::log(1.0 / delta) / double(n);
    const double x = kl_inverse(p_hat, y).x;
    return double(dim) / (double(dim) + 1.0) * (1.0 - x) / nu;
}

SampleBudgets plan(const VerificationTarget& t, std::optional<double> p_a_override) {
    if (p_a_override && !(*p_a_override > 0.0 && *p_a_override < 1.0))
        throw std::invalid_argument("plan: p_a_override must lie in (0,1)");
    const double pa = p_a_override ? *p_a_override : passing_bound(t);
    const double log_delta = std::log(t.delta);

    SampleBudgets b;
    b.n_general = ceil_budget(log_delta / std::log(pa));
    b.n_optimal = ceil_budget(log_delta / std::log(1.0 - t.epsilon));
    b.n_local_tight = ceil_budget(log_delta / std::log(1.0 - t.nu * t.epsilon));
    b.n_local_loose = ceil_budget(-log_delta / (t.nu * t.epsilon));
    return b;
}

}  // namespace qgv
