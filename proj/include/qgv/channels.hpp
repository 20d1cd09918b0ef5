#ifndef QGV_CHANNELS_HPP
#define QGV_CHANNELS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "qgv/matrix.hpp"

namespace qgv {

/// Unitary gate on n <= 3 qubits. Qubit 0 is the leftmost tensor factor and
/// the most significant bit of basis-state indices.
struct UnitaryGate {
    std::size_t dim;
    ComplexMatrix matrix;

    explicit UnitaryGate(ComplexMatrix m);
};

/// CPTP map in Kraus form: rho -> sum_k K rho K^dagger.
struct QuantumChannel {
    std::size_t dim;
    std::vector<ComplexMatrix> kraus;

    explicit QuantumChannel(std::vector<ComplexMatrix> kraus_ops);
};

enum class NoiseKind { none, depolarizing, coherent_overrotation };

/// Parametric stand-in for device noise, applied after the ideal gate.
/// Canonical text form: `none`, `depolarizing:<p>`, `coherent:<theta>[:<qubit>]`.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::none;
    double strength = 0.0;          // depolarizing probability p, or rotation angle theta
    std::size_t target_qubit = 0;   // coherent case only

    static NoiseSpec parse(const std::string& text);
    std::string to_string() const;
};

/// CNOT: 4x4 permutation swapping basis states 2 and 3 (control = qubit 0).
UnitaryGate gate_cnot();

/// Toffoli: 8x8 permutation swapping basis states 6 and 7 (controls = qubits 0, 1).
UnitaryGate gate_toffoli();

QuantumChannel unitary_channel(const UnitaryGate& u);

/// rho -> (1-p) rho + p I/d, as an exact Kraus set over the generalized
/// Pauli group; d must be a power of two.
QuantumChannel depolarizing(std::size_t dim, double p);

/// Single Kraus operator R_y(theta on the given qubit) * U.
QuantumChannel coherent_overrotation(const UnitaryGate& u, std::size_t qubit, double theta);

/// The noise model applied after the ideal gate: noise o U.
QuantumChannel noisy_gate_channel(const UnitaryGate& u, const NoiseSpec& noise);

/// after o before (apply `before` first).
QuantumChannel compose(const QuantumChannel& after, const QuantumChannel& before);

DensityOperator apply(const QuantumChannel& ch, const DensityOperator& rho);

/// (Lambda x id)(|Phi><Phi|) with |Phi> = sum_i |ii>/sqrt(d); trace one.
ComplexMatrix choi(const QuantumChannel& ch);

/// F_avg = (d F_e + 1)/(d + 1) with F_e = <Phi| choi(U^{-1} o Lambda) |Phi>.
double avg_gate_fidelity(const QuantumChannel& ch, const UnitaryGate& u);

}  // namespace qgv

#endif
