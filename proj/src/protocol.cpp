#include "qgv/protocol.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qgv {

namespace {

constexpr double kIdentifyTol = 1e-9;

const std::array<std::pair<PauliAxis, int>, 6> kAllEigen = {{
    {PauliAxis::Z, +1},
    {PauliAxis::Z, -1},
    {PauliAxis::X, +1},
    {PauliAxis::X, -1},
    {PauliAxis::Y, +1},
    {PauliAxis::Y, -1},
}};

std::size_t qubits_of(std::size_t dim) {
    std::size_t n = 0;
    for (std::size_t d = 1; d < dim; d *= 2) ++n;
    return n;
}

/// Kronecker product of one 2x2 factor per qubit.
ComplexMatrix place_factors(const std::vector<ComplexMatrix>& factors) {
    ComplexMatrix out{{1.0}};
    for (const auto& f : factors) out = kron(out, f);
    return out;
}

/// All outcome strings over {+1,-1}^n, in lexicographic order with +1 first.
std::vector<std::vector<int>> all_outcomes(std::size_t n) {
    std::vector<std::vector<int>> out;
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
        std::vector<int> s(n);
        for (std::size_t q = 0; q < n; ++q) s[q] = ((mask >> (n - 1 - q)) & 1) ? -1 : +1;
        out.push_back(std::move(s));
    }
    return out;
}

TestState make_state(int j, double p, const std::string& letters, const std::string& basis) {
    PureState psi{{1.0}};
    for (char c : letters) {
        PureState factor = [&] {
            switch (c) {
                case 'H': return pauli_eigenstate(PauliAxis::Z, +1);
                case 'V': return pauli_eigenstate(PauliAxis::Z, -1);
                case 'D': return pauli_eigenstate(PauliAxis::X, +1);
                case 'A': return pauli_eigenstate(PauliAxis::X, -1);
                case 'R': return pauli_eigenstate(PauliAxis::Y, +1);
                case 'L': return pauli_eigenstate(PauliAxis::Y, -1);
                default: throw std::logic_error("bad state letter");
            }
        }();
        psi = kron(psi, factor);
    }
    return TestState{j, std::move(psi), p, letters, basis};
}

/// Reduced single-qubit density matrix of `psi` at `qubit`.
ComplexMatrix reduced_single_qubit(const PureState& psi, std::size_t qubit, std::size_t n) {
    ComplexMatrix rho(2, 2);
    const std::size_t shift = n - 1 - qubit;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        for (std::size_t j = 0; j < psi.dim(); ++j) {
            // Indices must agree on every qubit except the kept one.
            if ((i & ~(std::size_t(1) << shift)) != (j & ~(std::size_t(1) << shift))) continue;
            rho((i >> shift) & 1, (j >> shift) & 1) += psi[i] * std::conj(psi[j]);
        }
    }
    return rho;
}

std::string format_probability(double p) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", p);
    return buf;
}

}  // namespace

char axis_letter(PauliAxis axis) {
    switch (axis) {
        case PauliAxis::X: return 'X';
        case PauliAxis::Y: return 'Y';
        case PauliAxis::Z: return 'Z';
    }
    throw std::logic_error("unreachable");
}

ComplexMatrix pauli_matrix(PauliAxis axis) {
    switch (axis) {
        case PauliAxis::X: return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}};
        case PauliAxis::Y: return ComplexMatrix{{0.0, complexd(0.0, -1.0)}, {complexd(0.0, 1.0), 0.0}};
        case PauliAxis::Z: return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}};
    }
    throw std::logic_error("unreachable");
}

PureState pauli_eigenstate(PauliAxis axis, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("eigenvalue sign must be +1 or -1");
    const double r = 1.0 / std::sqrt(2.0);
    switch (axis) {
        case PauliAxis::Z:
            return sign > 0 ? PureState({1.0, 0.0}) : PureState({0.0, 1.0});
        case PauliAxis::X:
            return PureState({r, sign > 0 ? r : -r});
        case PauliAxis::Y:
            return PureState({r, complexd(0.0, sign > 0 ? r : -r)});
    }
    throw std::logic_error("unreachable");
}

ComplexMatrix pauli_eigenprojector(PauliAxis axis, int sign) {
    return projector(pauli_eigenstate(axis, sign));
}

SignedPauli::SignedPauli(PauliAxis a, int s) : axis(a), sign(s) {
    if (s != 1 && s != -1) throw std::invalid_argument("Pauli sign must be +1 or -1");
}

ComplexMatrix realized_projector(const LocalRealization& real) {
    const std::size_t n = real.settings.size();
    ComplexMatrix sum(std::size_t(1) << n, std::size_t(1) << n);
    for (const auto& outcome : real.accept) {
        if (outcome.size() != n) throw std::invalid_argument("outcome string length mismatch");
        std::vector<ComplexMatrix> factors;
        factors.reserve(n);
        for (std::size_t q = 0; q < n; ++q)
            factors.push_back(pauli_eigenprojector(real.settings[q], outcome[q]));
        sum += place_factors(factors);
    }
    return sum;
}

GateName parse_gate_name(const std::string& name) {
    if (name == "cnot") return GateName::cnot;
    if (name == "toffoli") return GateName::toffoli;
    throw std::invalid_argument("unknown gate '" + name + "' (expected cnot or toffoli)");
}

std::string gate_name_string(GateName name) {
    return name == GateName::cnot ? "cnot" : "toffoli";
}

std::vector<TestState> cnot_test_states() {
    std::vector<TestState> out;
    out.reserve(12);
    int j = 1;
    const struct { const char* basis; char plus, minus; } bases[] = {
        {"Z⊗Z", 'H', 'V'},
        {"X⊗X", 'D', 'A'},
        {"Y⊗Y", 'R', 'L'},
    };
    for (const auto& b : bases)
        for (char first : {b.plus, b.minus})
            for (char second : {b.plus, b.minus})
                out.push_back(make_state(j++, 1.0 / 12.0, std::string{first, second}, b.basis));
    return out;
}

std::vector<TestState> toffoli_test_states() {
    std::vector<TestState> out;
    out.reserve(16);
    int j = 1;
    for (char a : {'H', 'V'})
        for (char b : {'H', 'V'})
            for (char c : {'D', 'A'})
                out.push_back(make_state(j++, 1.0 / 16.0, std::string{a, b, c}, "Z⊗Z⊗X"));
    for (char a : {'D', 'A'})
        for (char b : {'D', 'A'})
            for (char c : {'H', 'V'})
                out.push_back(make_state(j++, 1.0 / 16.0, std::string{a, b, c}, "X⊗X⊗Z"));
    return out;
}

ProjectiveTest product_test(const PureState& target) {
    const std::size_t n = qubits_of(target.dim());
    if ((std::size_t(1) << n) != target.dim())
        throw std::invalid_argument("target dimension is not a power of two");

    LocalRealization real;
    real.settings.resize(n);
    std::vector<int> outcome(n);
    PureState rebuilt{{1.0}};
    for (std::size_t q = 0; q < n; ++q) {
        const ComplexMatrix rho = reduced_single_qubit(target, q, n);
        bool found = false;
        for (const auto& [axis, sign] : kAllEigen) {
            const PureState e = pauli_eigenstate(axis, sign);
            complexd expect = 0.0;
            for (std::size_t r = 0; r < 2; ++r)
                for (std::size_t c = 0; c < 2; ++c) expect += std::conj(e[r]) * rho(r, c) * e[c];
            if (std::abs(expect.real() - 1.0) <= kIdentifyTol) {
                real.settings[q] = axis;
                outcome[q] = sign;
                rebuilt = kron(rebuilt, e);
                found = true;
                break;
            }
        }
        if (!found)
            throw std::invalid_argument("target is not a product of Pauli eigenstates");
    }
    if (std::abs(overlap_fidelity(rebuilt, target) - 1.0) > kIdentifyTol)
        throw std::invalid_argument("target is not a product of Pauli eigenstates");

    real.accept.push_back(std::move(outcome));
    return ProjectiveTest{projector(target), 1.0, std::move(real)};
}

std::vector<ProjectiveTest> bell_strategy(int j) {
    if (j < 9 || j > 12) throw std::invalid_argument("bell strategy expects j in 9..12");
    const int b0 = (j - 9) & 1;
    const int b1 = ((j - 9) >> 1) & 1;

    const struct { int sign; PauliAxis first, second; } settings[] = {
        {(b0 + b1) % 2 == 0 ? -1 : +1, PauliAxis::X, PauliAxis::Z},  // (-1)^{b0+b1+1}
        {b1 == 0 ? +1 : -1, PauliAxis::Y, PauliAxis::X},             // (-1)^{b1}
        {b0 == 0 ? +1 : -1, PauliAxis::Z, PauliAxis::Y},             // (-1)^{b0}
    };

    std::vector<ProjectiveTest> tests;
    for (const auto& s : settings) {
        // P^+ of sign * (P1 x P2) = (I + sign P1 x P2)/2.
        ComplexMatrix m = ComplexMatrix::identity(4);
        m += kron(pauli_matrix(s.first), pauli_matrix(s.second)) * complexd(double(s.sign), 0.0);
        m *= complexd(0.5, 0.0);

        LocalRealization real;
        real.settings = {s.first, s.second};
        for (const auto& outcome : all_outcomes(2))
            if (outcome[0] * outcome[1] == s.sign) real.accept.push_back(outcome);

        tests.push_back(ProjectiveTest{std::move(m), 1.0 / 3.0, std::move(real)});
    }
    return tests;
}

ProjectiveTest build_f(int k, SignedPauli o1, SignedPauli o2, SignedPauli o3) {
    if (k < 1 || k > 3) throw std::invalid_argument("f_k expects k in 1..3");
    const std::array<SignedPauli, 3> ops = {o1, o2, o3};
    const int s = (k == 1) ? 2 : 1;
    const int t = (k == 3) ? 2 : 3;

    // Eigenprojector of the signed operator O_i for signed outcome o: a sign
    // flip swaps the eigenspaces of the underlying Pauli.
    auto signed_proj = [&](int i, int outcome) {
        const SignedPauli& op = ops[i - 1];
        return pauli_eigenprojector(op.axis, outcome * op.sign);
    };
    auto term = [&](int outcome_k, bool others_minus) {
        std::vector<ComplexMatrix> factors(3, ComplexMatrix::identity(2));
        factors[k - 1] = signed_proj(k, outcome_k);
        if (others_minus) {
            factors[s - 1] = signed_proj(s, -1);
            factors[t - 1] = signed_proj(t, -1);
        }
        return place_factors(factors);
    };
    // M = P_k^+ (x) (I - P_s^- P_t^-) + P_k^- (x) P_s^- P_t^-
    ComplexMatrix m = term(+1, false) - term(+1, true) + term(-1, true);

    LocalRealization real;
    real.settings = {o1.axis, o2.axis, o3.axis};
    for (const auto& outcome : all_outcomes(3)) {
        const int ok = outcome[k - 1] * ops[k - 1].sign;
        const int os = outcome[s - 1] * ops[s - 1].sign;
        const int ot = outcome[t - 1] * ops[t - 1].sign;
        const bool others_minus = (os == -1 && ot == -1);
        if ((ok == +1 && !others_minus) || (ok == -1 && others_minus))
            real.accept.push_back(outcome);
    }
    return ProjectiveTest{std::move(m), 1.0, std::move(real)};
}

std::vector<ProjectiveTest> hypergraph_strategy(int j) {
    if (j < 9 || j > 16) throw std::invalid_argument("hypergraph strategy expects j in 9..16");
    const int b0 = (j - 9) & 1;
    const int b1 = ((j - 9) >> 1) & 1;
    const int b2 = ((j - 9) >> 2) & 1;
    auto sgn = [](int b) { return b == 0 ? +1 : -1; };

    std::vector<ProjectiveTest> tests;
    tests.push_back(build_f(1, {PauliAxis::X, sgn(b2)}, {PauliAxis::Z, +1}, {PauliAxis::X, +1}));
    tests.push_back(build_f(2, {PauliAxis::Z, +1}, {PauliAxis::X, sgn(b1)}, {PauliAxis::X, +1}));
    tests.push_back(build_f(3, {PauliAxis::Z, +1}, {PauliAxis::Z, +1}, {PauliAxis::Z, sgn(b0)}));
    for (auto& t : tests) t.probability = 1.0 / 3.0;
    return tests;
}

GateProtocol build_protocol(GateName name) {
    const UnitaryGate gate = (name == GateName::cnot) ? gate_cnot() : gate_toffoli();
    std::vector<TestState> states =
        (name == GateName::cnot) ? cnot_test_states() : toffoli_test_states();

    std::vector<std::vector<ProjectiveTest>> strategies;
    strategies.reserve(states.size());
    for (const auto& ts : states) {
        if (ts.index <= 8) {
            strategies.push_back({product_test(apply_matrix(gate.matrix, ts.state))});
        } else if (name == GateName::cnot) {
            strategies.push_back(bell_strategy(ts.index));
        } else {
            strategies.push_back(hypergraph_strategy(ts.index));
        }
    }
    return GateProtocol{gate, gate.dim, std::move(states), std::move(strategies)};
}

ProcessOperator process_operator(const GateProtocol& protocol) {
    const std::size_t d = protocol.dim;

    ComplexMatrix balance(d, d);
    for (const auto& ts : protocol.states)
        balance += projector(ts.state) * complexd(ts.probability, 0.0);
    if (max_abs_diff(balance, ComplexMatrix::identity(d) * complexd(1.0 / double(d), 0.0)) > 1e-12)
        throw std::invalid_argument("test-state ensemble is not balanced");

    ComplexMatrix theta(d * d, d * d);
    const ComplexMatrix& u = protocol.gate.matrix;
    const ComplexMatrix u_dag = u.adjoint();
    for (std::size_t idx = 0; idx < protocol.states.size(); ++idx) {
        const TestState& ts = protocol.states[idx];
        ComplexMatrix omega(d, d);
        for (const auto& test : protocol.strategies[idx])
            omega += test.operator_m * complexd(test.probability, 0.0);
        const ComplexMatrix pulled_back = u_dag * omega * u;
        theta += kron(pulled_back, projector(ts.state).conjugate()) *
                 complexd(double(d) * ts.probability, 0.0);
    }

    const std::vector<double> evals = hermitian_eigenvalues(theta);
    if (std::abs(evals.front() - 1.0) > 1e-9)
        throw std::runtime_error("process operator leading eigenvalue deviates from 1");
    return ProcessOperator{std::move(theta), 1.0 - evals[1]};
}

std::size_t count_settings(const GateProtocol& protocol) {
    std::size_t count = 0;
    for (const auto& strategy : protocol.strategies) count += strategy.size();
    return count;
}

std::string protocol_dump(const GateProtocol& protocol) {
    std::string out = "protocol " + gate_name_string(protocol.dim == 4 ? GateName::cnot
                                                                       : GateName::toffoli);
    out += "  d=" + std::to_string(protocol.dim);
    out += "  states=" + std::to_string(protocol.states.size());
    out += "  settings=" + std::to_string(count_settings(protocol));
    out += "\n";
    for (std::size_t idx = 0; idx < protocol.states.size(); ++idx) {
        const TestState& ts = protocol.states[idx];
        out += "j=" + std::to_string(ts.index) + "  |" + ts.label + ">  basis " + ts.basis_label +
               "  p=" + format_probability(ts.probability) + "\n";
        const auto& strategy = protocol.strategies[idx];
        for (std::size_t l = 0; l < strategy.size(); ++l) {
            const ProjectiveTest& test = strategy[l];
            out += "  test " + std::to_string(l + 1) + "/" + std::to_string(strategy.size());
            out += "  p(l|j)=" + format_probability(test.probability);
            out += "  setting ";
            for (PauliAxis axis : test.realization.settings) out += axis_letter(axis);
            out += "  accept {";
            for (std::size_t a = 0; a < test.realization.accept.size(); ++a) {
                if (a > 0) out += ",";
                for (int o : test.realization.accept[a]) out += (o > 0 ? '+' : '-');
            }
            out += "}\n";
        }
    }
    return out;
}

}  // namespace qgv
