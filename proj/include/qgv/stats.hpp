#ifndef QGV_STATS_HPP
#define QGV_STATS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>

namespace qgv {

/// What a verification run is trying to certify: infidelity below epsilon at
/// confidence 1 - delta, for a protocol with dimension d and spectral gap nu.
struct VerificationTarget {
    double epsilon;
    double delta;
    std::size_t dim;
    double nu;

    VerificationTarget(double epsilon, double delta, std::size_t dim, double nu);
};

/// Binary Kullback-Leibler divergence D(x||y) = x ln(x/y) + (1-x) ln((1-x)/(1-y)),
/// with the convention 0 ln 0 = 0. Requires y in (0,1), x in [0,1].
double kl(double x, double y);

struct KlInverseResult {
    double x;
    bool saturated;  // y exceeded the representable range; x clamped to 1e-15
};

/// Partial inverse of the divergence: the x in (0, p_hat] with D(p_hat||x) = y.
/// D(p_hat||.) is strictly decreasing there, so the inverse is well defined
/// for y >= 0. For p_hat = 1 the closed form e^{-y} is used.
KlInverseResult kl_inverse(double p_hat, double y);

/// Upper bound on the maximal passing probability of any gate with
/// infidelity >= epsilon: 1 - ((d+1)/d) nu epsilon. Rejects targets for
/// which the bound is nonpositive.
double passing_bound(const VerificationTarget& t);

/// Chernoff significance level after n tests with passing rate p_hat:
/// exp[-D(p_hat || passing_bound) n] when p_hat exceeds the bound, else 1.
double significance(double p_hat, std::int64_t n, const VerificationTarget& t);

/// Upper bound on the true infidelity at confidence 1 - delta:
/// (d/(d+1)) (1 - D^{-1}(p_hat, ln(1/delta)/n)) / nu.
double infidelity_bound(double p_hat, std::int64_t n, double delta, std::size_t dim, double nu);

struct SampleBudgets {
    std::int64_t n_general;      // ceil(ln delta / ln p_A)
    std::int64_t n_optimal;      // ceil(ln delta / ln(1 - epsilon)), 2-design strategies
    std::int64_t n_local_tight;  // ceil(ln delta / ln(1 - nu epsilon))
    std::int64_t n_local_loose;  // ceil(ln(1/delta) / (nu epsilon))
};

/// Deterministic test budgets. p_a_override, when given, supplies the maximal
/// passing probability for the general budget; otherwise the spectral-gap
/// bound is used for it.
SampleBudgets plan(const VerificationTarget& t, std::optional<double> p_a_override = {});

}  // namespace qgv

#endif
