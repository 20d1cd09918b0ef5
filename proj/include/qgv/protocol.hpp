#ifndef QGV_PROTOCOL_HPP
#define QGV_PROTOCOL_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "qgv/channels.hpp"
#include "qgv/matrix.hpp"

namespace qgv {

enum class PauliAxis { X, Y, Z };

char axis_letter(PauliAxis axis);
ComplexMatrix pauli_matrix(PauliAxis axis);

/// Eigenstate of the Pauli on `axis` with eigenvalue `sign` (+1 or -1):
/// Z -> |H>,|V>; X -> |D>,|A>; Y -> |R>,|L>.
PureState pauli_eigenstate(PauliAxis axis, int sign);

/// 2x2 eigenprojector of the Pauli on `axis` for eigenvalue `sign`.
ComplexMatrix pauli_eigenprojector(PauliAxis axis, int sign);

/// (-1)^b P with P a single-qubit Pauli. The +1 eigenstate of -P is the
/// -1 eigenstate of P.
struct SignedPauli {
    PauliAxis axis;
    int sign;

    SignedPauli(PauliAxis a, int s);
};

/// Per-qubit Pauli settings plus the set of accepted outcome strings.
/// Outcome strings list the unsigned measurement results as +1/-1 per qubit,
/// ordered (qubit 0, qubit 1, ...).
struct LocalRealization {
    std::vector<PauliAxis> settings;
    std::vector<std::vector<int>> accept;
};

/// Brute-force sum of product eigenprojectors over the accept set. This is
/// the realization-side route; test builders construct the projector
/// algebraically, and the two must agree.
ComplexMatrix realized_projector(const LocalRealization& real);

/// One pass/fail test: projector M, selection probability p_{l|j}, and the
/// local Pauli realization that implements it.
struct ProjectiveTest {
    ComplexMatrix operator_m;
    double probability;
    LocalRealization realization;
};

struct TestState {
    int index;            // 1-based j
    PureState state;
    double probability;   // p_j
    std::string label;        // e.g. "HH"
    std::string basis_label;  // e.g. "Z⊗Z"
};

/// Test-state ensemble plus the per-state strategies.
struct GateProtocol {
    UnitaryGate gate;
    std::size_t dim;
    std::vector<TestState> states;
    std::vector<std::vector<ProjectiveTest>> strategies;  // strategies[j-1]
};

/// Theta (d^2 x d^2, Hermitian) and its spectral gap.
struct ProcessOperator {
    ComplexMatrix theta;
    double spectral_gap;
};

enum class GateName { cnot, toffoli };
GateName parse_gate_name(const std::string& name);
std::string gate_name_string(GateName name);

/// The 12 CNOT test states of the Z(x)Z, X(x)X, Y(x)Y eigenbases, p_j = 1/12.
std::vector<TestState> cnot_test_states();

/// The 16 Toffoli test states of the Z(x)Z(x)X and X(x)X(x)Z eigenbases, p_j = 1/16.
std::vector<TestState> toffoli_test_states();

/// Single-setting test for a product output state: M = |target><target| with
/// the diagonalizing Pauli per qubit and one accepted outcome string.
/// Rejects states that are not products of single-qubit Pauli eigenstates.
ProjectiveTest product_test(const PureState& target);

/// Three tests verifying the Bell output CX|psi_j> for j = 9..12, each with
/// probability 1/3: projectors onto the +1 eigenspaces of
/// (-1)^{b0+b1+1} XZ, (-1)^{b1} YX and (-1)^{b0} ZY, with b1 b0 = j - 9.
std::vector<ProjectiveTest> bell_strategy(int j);

/// Cover-protocol test f_k(O1, O2, O3) on three qubits: accept when the
/// k-th result is +1 and the other two are not both -1, or the k-th result
/// is -1 and the other two are both -1. Probability is left at 1.
ProjectiveTest build_f(int k, SignedPauli o1, SignedPauli o2, SignedPauli o3);

/// Three f_k tests verifying the hypergraph output C2X|psi_j> for j = 9..16,
/// each with probability 1/3; b2 b1 b0 = j - 9.
std::vector<ProjectiveTest> hypergraph_strategy(int j);

GateProtocol build_protocol(GateName name);

/// Theta = d sum_j p_j U^{-1}(Omega_j) (x) rho_j^*; rejects unbalanced
/// ensembles. The spectral gap is 1 minus the second largest eigenvalue.
ProcessOperator process_operator(const GateProtocol& protocol);

/// Number of (test state, test) pairs: 20 for CNOT, 32 for Toffoli.
std::size_t count_settings(const GateProtocol& protocol);

/// Stable plain-text listing of states and tests, for docs and golden tests.
std::string protocol_dump(const GateProtocol& protocol);

}  // namespace qgv

#endif
