// Command-line front end for the gate-verification toolkit.
//
// Subcommands: gap, plan, verify, fidelity, solve-angles, dump-protocol.
// Exit codes: 0 success/accepted, 1 clean not-accepted, 2 usage or
// validation error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qgv/channels.hpp"
#include "qgv/optics.hpp"
#include "qgv/protocol.hpp"
#include "qgv/simulator.hpp"
#include "qgv/stats.hpp"

namespace {

constexpr double kDegPerRad = 180.0 / 3.14159265358979323846;

int cmd_gap(const std::string& gate) {
    const qgv::GateProtocol protocol = qgv::build_protocol(qgv::parse_gate_name(gate));
    std::printf("%.9f\n", qgv::process_operator(protocol).spectral_gap);
    return 0;
}

int cmd_plan(const std::string& gate, double epsilon, double delta,
             std::optional<double> pa_override) {
    const qgv::GateProtocol protocol = qgv::build_protocol(qgv::parse_gate_name(gate));
    const double nu = qgv::process_operator(protocol).spectral_gap;
    const qgv::VerificationTarget target(epsilon, delta, protocol.dim, nu);
    const qgv::SampleBudgets budgets = qgv::plan(target, pa_override);
    std::printf("gate           %s (d=%zu, nu=%.9f)\n", gate.c_str(), protocol.dim, nu);
    std::printf("epsilon        %.6f\n", epsilon);
    std::printf("delta          %.6f\n", delta);
    std::printf("n_general      %lld\n", static_cast<long long>(budgets.n_general));
    std::printf("n_optimal      %lld\n", static_cast<long long>(budgets.n_optimal));
    std::printf("n_local_tight  %lld\n", static_cast<long long>(budgets.n_local_tight));
    std::printf("n_local_loose  %lld\n", static_cast<long long>(budgets.n_local_loose));
    return 0;
}

int cmd_fidelity(const std::string& gate, const std::string& noise_text) {
    const qgv::UnitaryGate u =
        qgv::parse_gate_name(gate) == qgv::GateName::cnot ? qgv::gate_cnot() : qgv::gate_toffoli();
    const qgv::NoiseSpec noise = qgv::NoiseSpec::parse(noise_text);
    const double favg = qgv::avg_gate_fidelity(qgv::noisy_gate_channel(u, noise), u);
    std::printf("F_avg = %.6f\n", favg);
    std::printf("eps_A = %.6f\n", 1.0 - favg);
    return 0;
}

int cmd_verify(const qgv::VerificationConfig& cfg, const std::string& out_prefix) {
    const qgv::CampaignResult result = qgv::run_campaign(cfg);

    const std::string csv_path = out_prefix + ".csv";
    const std::string json_path = out_prefix + ".json";
    std::ofstream csv(csv_path);
    csv << qgv::curve_csv(result.averaged);
    csv.close();
    std::ofstream json(json_path);
    json << qgv::summary_json(cfg, result);
    json.close();
    if (csv.fail() || json.fail())
        throw std::runtime_error("cannot write " + csv_path + " / " + json_path);

    std::printf("%s  runs=%lld tests=%lld  pass_rate=%.6f  delta=%.6g  eps_A<=%.6g  %s\n",
                qgv::gate_name_string(cfg.gate).c_str(), static_cast<long long>(cfg.runs),
                static_cast<long long>(cfg.tests), result.final_pass_rate, result.final_delta,
                result.final_epsilon, result.accepted ? "ACCEPTED" : "not accepted");
    std::printf("wrote %s and %s\n", csv_path.c_str(), json_path.c_str());
    return result.accepted ? 0 : 1;
}

int cmd_solve_angles(const std::string& target_text, const std::string& convention_name) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= target_text.size()) {
        const std::size_t comma = target_text.find(',', start);
        const std::string part = target_text.substr(start, comma - start);
        try {
            std::size_t used = 0;
            values.push_back(std::stod(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--target", "malformed amplitude '" + part + "'");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }

    std::vector<qgv::complexd> amps;
    if (values.size() == 2) {
        amps = {values[0], values[1]};
    } else if (values.size() == 4) {
        amps = {{values[0], values[1]}, {values[2], values[3]}};
    } else {
        throw CLI::ValidationError("--target", "expected re0,re1 or re0,im0,re1,im1");
    }

    // Four-decimal inputs like 0.7071 come with norm defects around 2e-5,
    // so the renormalization window must sit above that.
    double norm2 = std::norm(amps[0]) + std::norm(amps[1]);
    if (std::abs(norm2 - 1.0) > 1e-4)
        throw CLI::ValidationError("--target", "amplitudes are not normalized");
    if (std::abs(norm2 - 1.0) > 1e-12)
        std::fprintf(stderr, "warning: renormalizing target (|norm^2 - 1| = %.3g)\n",
                     std::abs(norm2 - 1.0));
    const qgv::PureState target = qgv::PureState::normalized(std::move(amps));

    qgv::optics::Convention convention;
    if (convention_name == "a") convention = qgv::optics::Convention::a;
    else if (convention_name == "b") convention = qgv::optics::Convention::b;
    else if (convention_name == "prime") convention = qgv::optics::Convention::prime;
    else throw CLI::ValidationError("--convention", "expected a, b or prime");

    const qgv::optics::WaveplatePair pair = qgv::optics::solve_angles(target, convention);
    const double fidelity =
        qgv::overlap_fidelity(qgv::optics::pair_state(pair, convention), target);
    std::printf("h = %.6f deg\n", pair.h * kDegPerRad);
    std::printf("q = %.6f deg\n", pair.q * kDegPerRad);
    std::printf("forward fidelity = %.12f\n", fidelity);
    return 0;
}

int cmd_dump_protocol(const std::string& gate) {
    std::fputs(qgv::protocol_dump(qgv::build_protocol(qgv::parse_gate_name(gate))).c_str(),
               stdout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum gate verification toolkit"};
    app.require_subcommand(1);

    std::string gate = "cnot";
    std::string noise_text = "none";
    std::string target_text;
    std::string convention = "a";
    std::string out_prefix;
    double epsilon = 0.01;
    double delta = 0.05;
    std::optional<double> pa_override;
    qgv::VerificationConfig cfg;
    std::optional<std::int64_t> stride;
    std::optional<double> threshold;

    auto* gap = app.add_subcommand("gap", "Spectral gap of the verification operator");
    gap->add_option("--gate", gate, "cnot or toffoli")->required();

    auto* plan = app.add_subcommand("plan", "Test budgets for a target (epsilon, delta)");
    plan->add_option("--gate", gate, "cnot or toffoli")->required();
    plan->add_option("--epsilon", epsilon, "infidelity threshold in (0,1)")->required();
    plan->add_option("--delta", delta, "significance level in (0,1)")->required();
    plan->add_option("--pa", pa_override, "maximal passing probability for the general budget");

    auto* verify = app.add_subcommand("verify", "Run a simulated verification campaign");
    verify->add_option("--gate", gate)->required();
    verify->add_option("--noise", noise_text, "none | depolarizing:<p> | coherent:<theta>[:<q>]");
    verify->add_option("--epsilon", epsilon)->required();
    verify->add_option("--delta", delta)->required();
    verify->add_option("--tests", cfg.tests, "tests per run")->required();
    verify->add_option("--runs", cfg.runs, "independent runs")->required();
    verify->add_option("--seed", cfg.seed, "campaign seed")->required();
    verify->add_option("--stride", stride, "checkpoint stride (default: dense schedule)");
    verify->add_option("--threshold", threshold, "accept on pass rate >= threshold");
    verify->add_option("--out", out_prefix, "output prefix for .csv/.json");

    auto* fidelity = app.add_subcommand("fidelity", "Average gate fidelity of a noisy gate");
    fidelity->add_option("--gate", gate)->required();
    fidelity->add_option("--noise", noise_text)->required();

    auto* solve = app.add_subcommand("solve-angles", "Waveplate angles for a 1-qubit target");
    solve->add_option("--target", target_text, "comma-separated amplitudes")->required();
    solve->add_option("--convention", convention, "a, b or prime");

    auto* dump = app.add_subcommand("dump-protocol", "Plain-text protocol listing");
    dump->add_option("--gate", gate)->required();

    try {
        app.parse(argc, argv);

        if (gap->parsed()) return cmd_gap(gate);
        if (plan->parsed()) {
            if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0))
                throw CLI::ValidationError("plan", "epsilon and delta must lie in (0,1)");
            return cmd_plan(gate, epsilon, delta, pa_override);
        }
        if (verify->parsed()) {
            cfg.gate = qgv::parse_gate_name(gate);
            cfg.noise = qgv::NoiseSpec::parse(noise_text);
            if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0))
                throw CLI::ValidationError("verify", "epsilon and delta must lie in (0,1)");
            if (cfg.tests < 1 || cfg.runs < 1)
                throw CLI::ValidationError("verify", "tests and runs must be positive");
            cfg.epsilon = epsilon;
            cfg.delta = delta;
            cfg.stride = stride;
            cfg.threshold = threshold;
            if (out_prefix.empty()) out_prefix = "qgv_" + gate;
            return cmd_verify(cfg, out_prefix);
        }
        if (fidelity->parsed()) return cmd_fidelity(gate, noise_text);
        if (solve->parsed()) return cmd_solve_angles(target_text, convention);
        if (dump->parsed()) return cmd_dump_protocol(gate);
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
            app.exit(e);
            return 0;
        }
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
