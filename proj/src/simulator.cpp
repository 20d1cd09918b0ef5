#include "qgv/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace qgv {

namespace {

struct SamplingTables {
    std::vector<double> state_cdf;                  // over j
    std::vector<std::vector<double>> test_cdf;      // per j, over l
    std::vector<std::vector<double>> pass_prob;     // per (j, l): Tr[M Lambda(rho_j)]
};

double test_pass_probability(const ProjectiveTest& test, const DensityOperator& output) {
    // Tr[M sigma] without forming the product.
    complexd t = 0.0;
    const ComplexMatrix& m = test.operator_m;
    const ComplexMatrix& s = output.matrix();
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) t += m(r, c) * s(c, r);
    return std::clamp(t.real(), 0.0, 1.0);
}

SamplingTables build_tables(const GateProtocol& protocol, const QuantumChannel& channel) {
    if (protocol.dim != channel.dim)
        throw std::invalid_argument("protocol/channel dimension mismatch");
    SamplingTables tables;
    double cum = 0.0;
    for (std::size_t idx = 0; idx < protocol.states.size(); ++idx) {
        const DensityOperator output =
            apply(channel, DensityOperator::from_pure(protocol.states[idx].state));
        std::vector<double> cdf;
        std::vector<double> probs;
        double tc = 0.0;
        for (const ProjectiveTest& test : protocol.strategies[idx]) {
            tc += test.probability;
            cdf.push_back(tc);
            probs.push_back(test_pass_probability(test, output));
        }
        cdf.back() = 1.0;
        tables.test_cdf.push_back(std::move(cdf));
        tables.pass_prob.push_back(std::move(probs));
        cum += protocol.states[idx].probability;
        tables.state_cdf.push_back(cum);
    }
    tables.state_cdf.back() = 1.0;
    return tables;
}

std::size_t sample_cdf(SplitMix64& rng, const std::vector<double>& cdf) {
    const double u = rng.next_double();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
}

RunRecord run_with_tables(const SamplingTables& tables, std::int64_t n, SplitMix64& rng,
                          const std::vector<std::int64_t>& checkpoints) {
    RunRecord record;
    record.outcomes.reserve(n);
    record.checkpoint_passes.reserve(checkpoints.size());
    std::int64_t passes = 0;
    std::size_t next_checkpoint = 0;
    for (std::int64_t i = 1; i <= n; ++i) {
        const std::size_t j = sample_cdf(rng, tables.state_cdf);
        const std::size_t l = sample_cdf(rng, tables.test_cdf[j]);
        const bool pass = rng.next_double() < tables.pass_prob[j][l];
        record.outcomes.push_back(
            Outcome{std::uint8_t(j + 1), std::uint8_t(l + 1), pass});
        if (pass) ++passes;
        while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == i) {
            record.checkpoint_passes.push_back(passes);
            ++next_checkpoint;
        }
    }
    return record;
}

double epsilon_bound_total(double p_bar, std::int64_t n, const VerificationConfig& cfg,
                           const VerificationTarget& target) {
    // The infidelity bound is total on (0,1]; the p_bar = 0 corner takes the
    // p_hat -> 0 limit so curves never have gaps.
    if (p_bar <= 0.0)
        return double(target.dim) / (double(target.dim) + 1.0) / target.nu;
    return infidelity_bound(std::min(p_bar, 1.0), n, cfg.delta, target.dim, target.nu);
}

Curve curve_from_rates(const std::vector<std::int64_t>& checkpoints,
                       const std::vector<double>& rates, const VerificationConfig& cfg,
                       const VerificationTarget& target) {
    Curve curve;
    curve.points.reserve(checkpoints.size());
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        const std::int64_t n = checkpoints[k];
        const double p = std::clamp(rates[k], 0.0, 1.0);
        curve.points.push_back(CurvePoint{n, p, significance(p, n, target),
                                          epsilon_bound_total(p, n, cfg, target)});
    }
    return curve;
}

}  // namespace

double expected_pass_rate(const GateProtocol& protocol, const QuantumChannel& channel) {
    if (protocol.dim != channel.dim)
        throw std::invalid_argument("protocol/channel dimension mismatch");
    double rate = 0.0;
    for (std::size_t idx = 0; idx < protocol.states.size(); ++idx) {
        const DensityOperator output =
            apply(channel, DensityOperator::from_pure(protocol.states[idx].state));
        for (const ProjectiveTest& test : protocol.strategies[idx])
            rate += protocol.states[idx].probability * test.probability *
                    test_pass_probability(test, output);
    }
    return rate;
}

std::vector<std::int64_t> checkpoint_schedule(std::int64_t tests,
                                              std::optional<std::int64_t> stride) {
    if (tests < 1) throw std::invalid_argument("test count must be positive");
    std::vector<std::int64_t> out;
    if (stride) {
        if (*stride < 1) throw std::invalid_argument("stride must be at least 1");
        for (std::int64_t n = *stride; n <= tests; n += *stride) out.push_back(n);
    } else {
        // Dense early regime, stride 10 past 1000.
        for (std::int64_t n = 1; n <= std::min<std::int64_t>(tests, 1000); ++n) out.push_back(n);
        for (std::int64_t n = 1010; n <= tests; n += 10) out.push_back(n);
    }
    if (out.empty() || out.back() != tests) out.push_back(tests);
    return out;
}

RunRecord run_single(const GateProtocol& protocol, const QuantumChannel& channel, std::int64_t n,
                     SplitMix64& rng, const std::vector<std::int64_t>& checkpoints) {
    return run_with_tables(build_tables(protocol, channel), n, rng, checkpoints);
}

CampaignResult run_campaign(const VerificationConfig& cfg) {
    if (cfg.tests < 1) throw std::invalid_argument("test count must be positive");
    if (cfg.runs < 1) throw std::invalid_argument("run count must be positive");

    const GateProtocol protocol = build_protocol(cfg.gate);
    const QuantumChannel channel = noisy_gate_channel(protocol.gate, cfg.noise);
    const VerificationTarget target(cfg.epsilon, cfg.delta, protocol.dim,
                                    process_operator(protocol).spectral_gap);
    const SamplingTables tables = build_tables(protocol, channel);
    const std::vector<std::int64_t> checkpoints = checkpoint_schedule(cfg.tests, cfg.stride);

    std::vector<RunRecord> records;
    records.reserve(cfg.runs);
    std::vector<std::int64_t> total_passes(checkpoints.size(), 0);
    for (std::int64_t run = 0; run < cfg.runs; ++run) {
        SplitMix64 rng(derive_stream(cfg.seed, std::uint64_t(run)));
        records.push_back(run_with_tables(tables, cfg.tests, rng, checkpoints));
        for (std::size_t k = 0; k < checkpoints.size(); ++k)
            total_passes[k] += records.back().checkpoint_passes[k];
    }

    std::vector<double> mean_rates(checkpoints.size());
    std::vector<double> first_run_rates(checkpoints.size());
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        mean_rates[k] = double(total_passes[k]) / (double(cfg.runs) * double(checkpoints[k]));
        first_run_rates[k] =
            double(records.front().checkpoint_passes[k]) / double(checkpoints[k]);
    }

    CampaignResult result{target,
                          checkpoints,
                          std::move(records),
                          curve_from_rates(checkpoints, mean_rates, cfg, target),
                          curve_from_rates(checkpoints, first_run_rates, cfg, target),
                          false,
                          0.0,
                          0.0,
                          0.0,
                          std::numeric_limits<double>::quiet_NaN()};

    const CurvePoint& final_point = result.averaged.points.back();
    result.final_pass_rate = final_point.pass_rate;
    result.final_delta = final_point.delta_bound;
    result.final_epsilon = final_point.epsilon_bound;
    result.accepted = cfg.threshold ? (result.final_pass_rate >= *cfg.threshold)
                                    : (result.final_delta <= cfg.delta);
    try {
        result.fitted_exponent = fit_power_law(result.averaged, 10, 200);
    } catch (const std::invalid_argument&) {
        // Window not covered by the checkpoint grid; exponent stays NaN.
    }
    return result;
}

double fit_power_law(const Curve& curve, std::int64_t n_min, std::int64_t n_max) {
    std::vector<double> xs, ys;
    for (const CurvePoint& p : curve.points) {
        if (p.n < n_min || p.n > n_max || !(p.epsilon_bound > 0.0)) continue;
        xs.push_back(std::log(double(p.n)));
        ys.push_back(std::log(p.epsilon_bound));
    }
    if (xs.size() < 2 || xs.front() == xs.back())
        throw std::invalid_argument("power-law fit needs two points in the window");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= double(xs.size());
    my /= double(xs.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

std::string curve_csv(const Curve& curve) {
    std::string out = "N,pass_rate,delta_bound,epsilon_bound\n";
    char buf[160];
    for (const CurvePoint& p : curve.points) {
        std::snprintf(buf, sizeof(buf), "%lld,%.10g,%.10g,%.10g\n",
                      static_cast<long long>(p.n), p.pass_rate, p.delta_bound, p.epsilon_bound);
        out += buf;
    }
    return out;
}

std::string summary_json(const VerificationConfig& cfg, const CampaignResult& result) {
    nlohmann::json j;
    j["gate"] = gate_name_string(cfg.gate);
    j["noise"] = cfg.noise.to_string();
    j["seed"] = cfg.seed;
    j["runs"] = cfg.runs;
    j["tests"] = cfg.tests;
    j["epsilon"] = cfg.epsilon;
    j["delta"] = cfg.delta;
    if (cfg.stride)
        j["stride"] = *cfg.stride;
    else
        j["stride"] = "auto";
    if (cfg.threshold)
        j["threshold"] = *cfg.threshold;
    else
        j["threshold"] = nullptr;
    j["nu"] = result.target.nu;
    j["final_pass_rate"] = result.final_pass_rate;
    j["final_delta"] = result.final_delta;
    j["final_epsilon"] = result.final_epsilon;
    if (std::isnan(result.fitted_exponent))
        j["fitted_exponent"] = nullptr;
    else
        j["fitted_exponent"] = result.fitted_exponent;
    j["accepted"] = result.accepted;
    return j.dump(2) + "\n";
}

}  // namespace qgv
