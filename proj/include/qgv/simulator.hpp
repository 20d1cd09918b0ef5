#ifndef QGV_SIMULATOR_HPP
#define QGV_SIMULATOR_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qgv/channels.hpp"
#include "qgv/protocol.hpp"
#include "qgv/rng.hpp"
#include "qgv/stats.hpp"

namespace qgv {

struct VerificationConfig {
    GateName gate = GateName::cnot;
    NoiseSpec noise;
    double epsilon = 0.01;
    double delta = 0.05;
    std::int64_t tests = 1000;
    std::int64_t runs = 1;
    std::uint64_t seed = 0;
    std::optional<std::int64_t> stride;     // checkpoint stride; unset = default schedule
    std::optional<double> threshold;        // accept on p_hat >= threshold instead of delta
};

struct Outcome {
    std::uint8_t state_index;  // 1-based j
    std::uint8_t test_index;   // 1-based l
    bool pass;
};

/// Outcomes of one verification run plus cumulative pass counts at the
/// checkpoint grid it was recorded against.
struct RunRecord {
    std::vector<Outcome> outcomes;
    std::vector<std::int64_t> checkpoint_passes;
};

struct CurvePoint {
    std::int64_t n;
    double pass_rate;
    double delta_bound;
    double epsilon_bound;
};

struct Curve {
    std::vector<CurvePoint> points;
};

struct CampaignResult {
    VerificationTarget target;
    std::vector<std::int64_t> checkpoints;
    std::vector<RunRecord> records;
    Curve averaged;
    Curve single_run;
    bool accepted;
    double final_pass_rate;
    double final_delta;
    double final_epsilon;
    double fitted_exponent;  // NaN when the fit window is degenerate
};

/// Analytic acceptance probability sum_j p_j sum_l p_{l|j} Tr[M_l Lambda(rho_j)];
/// the oracle the Monte Carlo engine is validated against.
double expected_pass_rate(const GateProtocol& protocol, const QuantumChannel& channel);

/// Checkpoint grid: every test up to 1000 and stride 10 beyond (default), or
/// the fixed stride when one is given; the final N is always included.
std::vector<std::int64_t> checkpoint_schedule(std::int64_t tests, std::optional<std::int64_t> stride);

/// One verification run of n tests: sample j ~ p_j, l ~ p_{l|j}, then a
/// Bernoulli pass with the exact probability Tr[M_l Lambda(rho_j)]. Draws
/// come from `rng` in the fixed order (j, l, pass).
RunRecord run_single(const GateProtocol& protocol, const QuantumChannel& channel, std::int64_t n,
                     SplitMix64& rng, const std::vector<std::int64_t>& checkpoints);

/// Runs the configured campaign: `runs` independent runs on streams derived
/// from (seed, run index), the cross-run averaged curve, and run 0 as the
/// single-run curve. Accepts when the final averaged significance is at most
/// delta (or the final pass rate reaches the configured threshold).
CampaignResult run_campaign(const VerificationConfig& cfg);

/// Least-squares slope of ln(epsilon_bound) against ln(N) over checkpoints
/// with n_min <= N <= n_max; needs two usable points.
double fit_power_law(const Curve& curve, std::int64_t n_min, std::int64_t n_max);

/// CSV rows `N,pass_rate,delta_bound,epsilon_bound` with 10 significant digits.
std::string curve_csv(const Curve& curve);

/// JSON summary with the config echo and final figures.
std::string summary_json(const VerificationConfig& cfg, const CampaignResult& result);

}  // namespace qgv

#endif
