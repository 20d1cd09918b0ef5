#ifndef QGV_OPTICS_HPP
#define QGV_OPTICS_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "qgv/matrix.hpp"

namespace qgv {
namespace optics {

/// HWP/QWP axis angles in radians, stored folded into [-pi/2, pi/2); the
/// amplitude map has period pi in both angles.
struct WaveplatePair {
    double h;
    double q;

    WaveplatePair(double h_angle, double q_angle);
};

/// One waveplate pair per qubit (2 for the CNOT module, 3 for the Toffoli).
struct PrepConfig {
    std::vector<WaveplatePair> pairs;
};

/// SPCM click probabilities, indexed by detector number.
struct DetectorDistribution {
    std::vector<double> probs;
};

/// Which slot of the amplitude table a pair feeds:
///   a     -> (a0, a1) = (v, u)   (first qubit of the two-qubit module)
///   b     -> (b0, b1) = (u, v)   (second qubit of the two-qubit module)
///   prime -> (c0, c1) = (v, u)   (every qubit of the three-qubit module)
enum class Convention { a, b, prime };

/// Raw amplitude pair of one HWP+QWP: u = cos(q)cos(q-2h) + i sin(q)sin(q-2h),
/// v = sin(q)cos(q-2h) - i cos(q)sin(q-2h). Always unit norm.
std::pair<complexd, complexd> waveplate_pair_amplitudes(const WaveplatePair& p);

/// Single-qubit state prepared by one pair under the given convention.
PureState pair_state(const WaveplatePair& p, Convention convention);

/// (a0|0> + a1|1>) (x) (b0|H> + b1|V>) from two pairs.
PureState prep_two_qubit(const PrepConfig& cfg);

/// (a0'|0> + a1'|1>) (x) (b0'|0> + b1'|1>) (x) (c0'|H> + c1'|V>) from three pairs.
PureState prep_three_qubit(const PrepConfig& cfg);

/// Angles whose forward model reproduces `target` up to global phase with
/// fidelity >= 1 - 1e-9: coarse 1-degree grid, then simplex refinement.
/// Throws if refinement cannot reach the tolerance (reporting the best
/// fidelity found).
WaveplatePair solve_angles(const PureState& target, Convention convention);

/// Orthonormal single-qubit measurement basis.
struct QubitBasis {
    PureState b0;
    PureState b1;

    QubitBasis(PureState state0, PureState state1);
};

/// Click probabilities of the two-qubit measurement module: with
/// a_ij = <phi_i phi_j | Psi>, SPCMs 0..3 see |a01|^2, |a11|^2, |a00|^2, |a10|^2.
DetectorDistribution measurement_probs_2q(const PureState& state, const QubitBasis& basis0,
                                          const QubitBasis& basis1);

/// Click probabilities of the three-qubit module: with a_ijk the product-basis
/// amplitudes, SPCMs 0..7 see |a011|^2, |a111|^2, |a001|^2, |a101|^2,
/// |a010|^2, |a110|^2, |a000|^2, |a100|^2.
DetectorDistribution measurement_probs_3q(const PureState& state, const QubitBasis& basis0,
                                          const QubitBasis& basis1, const QubitBasis& basis2);

}  // namespace optics
}  // namespace qgv

#endif
