#include "qgv/optics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qgv {
namespace optics {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGridStep = kPi / 180.0;  // 1 degree
constexpr int kMaxRefinementSteps = 500;

double fold_angle(double a) {
    // The amplitude map has period pi in each angle.
    a = std::fmod(a + kPi / 2.0, kPi);
    if (a < 0.0) a += kPi;
    return a - kPi / 2.0;
}

std::pair<complexd, complexd> raw_amplitudes(double h, double q) {
    const double cq = std::cos(q);
    const double sq = std::sin(q);
    const double cd = std::cos(q - 2.0 * h);
    const double sd = std::sin(q - 2.0 * h);
    return {complexd(cq * cd, sq * sd), complexd(sq * cd, -cq * sd)};
}

std::pair<complexd, complexd> apply_convention(std::pair<complexd, complexd> uv,
                                               Convention convention) {
    if (convention == Convention::b) return uv;          // (b0, b1) = (u, v)
    return {uv.second, uv.first};                        // (v, u) for a and prime
}

double forward_fidelity(double h, double q, Convention convention, const PureState& target) {
    const auto [c0, c1] = apply_convention(raw_amplitudes(h, q), convention);
    return std::norm(std::conj(target[0]) * c0 + std::conj(target[1]) * c1);
}

struct GridPoint {
    double h, q;
};

// The grid of raw (u, v) amplitudes is target-independent; build it once.
const std::array<std::pair<complexd, complexd>, 180 * 180>& amplitude_grid() {
    static const auto grid = [] {
        auto table = std::array<std::pair<complexd, complexd>, 180 * 180>{};
        for (int ih = 0; ih < 180; ++ih)
            for (int iq = 0; iq < 180; ++iq)
                table[ih * 180 + iq] =
                    raw_amplitudes(-kPi / 2.0 + ih * kGridStep, -kPi / 2.0 + iq * kGridStep);
        return table;
    }();
    return grid;
}

GridPoint best_grid_point(const PureState& target, Convention convention) {
    const auto& grid = amplitude_grid();
    double best = -1.0;
    GridPoint best_point{0.0, 0.0};
    for (int ih = 0; ih < 180; ++ih) {
        for (int iq = 0; iq < 180; ++iq) {
            const auto [c0, c1] = apply_convention(grid[ih * 180 + iq], convention);
            const double f = std::norm(std::conj(target[0]) * c0 + std::conj(target[1]) * c1);
            if (f > best) {
                best = f;
                best_point = {-kPi / 2.0 + ih * kGridStep, -kPi / 2.0 + iq * kGridStep};
            }
        }
    }
    return best_point;
}

// Nelder-Mead on (h, q) minimizing 1 - fidelity.
struct Simplex {
    std::array<std::array<double, 2>, 3> x;
    std::array<double, 3> f;
};

WaveplatePair refine(GridPoint start, Convention convention, const PureState& target) {
    auto loss = [&](const std::array<double, 2>& p) {
        return 1.0 - forward_fidelity(p[0], p[1], convention, target);
    };

    Simplex s;
    s.x[0] = {start.h, start.q};
    s.x[1] = {start.h + kGridStep, start.q};
    s.x[2] = {start.h, start.q + kGridStep};
    for (int i = 0; i < 3; ++i) s.f[i] = loss(s.x[i]);

    for (int step = 0; step < kMaxRefinementSteps; ++step) {
        std::array<int, 3> order = {0, 1, 2};
        std::sort(order.begin(), order.end(), [&](int a, int b) { return s.f[a] < s.f[b]; });
        const int lo = order[0], mid = order[1], hi = order[2];
        if (s.f[lo] <= 1e-12) break;

        const std::array<double, 2> centroid = {(s.x[lo][0] + s.x[mid][0]) / 2.0,
                                                (s.x[lo][1] + s.x[mid][1]) / 2.0};
        auto at = [&](double t) {
            return std::array<double, 2>{centroid[0] + t * (s.x[hi][0] - centroid[0]),
                                         centroid[1] + t * (s.x[hi][1] - centroid[1])};
        };

        const auto reflected = at(-1.0);
        const double fr = loss(reflected);
        if (fr < s.f[lo]) {
            const auto expanded = at(-2.0);
            const double fe = loss(expanded);
            if (fe < fr) {
                s.x[hi] = expanded;
                s.f[hi] = fe;
            } else {
                s.x[hi] = reflected;
                s.f[hi] = fr;
            }
        } else if (fr < s.f[mid]) {
            s.x[hi] = reflected;
            s.f[hi] = fr;
        } else {
            const auto contracted = at(fr < s.f[hi] ? -0.5 : 0.5);
            const double fc = loss(contracted);
            if (fc < std::min(fr, s.f[hi])) {
                s.x[hi] = contracted;
                s.f[hi] = fc;
            } else {
                for (int i = 0; i < 3; ++i) {
                    if (i == lo) continue;
                    s.x[i] = {(s.x[i][0] + s.x[lo][0]) / 2.0, (s.x[i][1] + s.x[lo][1]) / 2.0};
                    s.f[i] = loss(s.x[i]);
                }
            }
        }
    }

    const int best = int(std::min_element(s.f.begin(), s.f.end()) - s.f.begin());
    if (s.f[best] > 1e-9)
        throw std::runtime_error("angle solver did not converge; best fidelity " +
                                 std::to_string(1.0 - s.f[best]));
    return WaveplatePair(s.x[best][0], s.x[best][1]);
}

void check_orthonormal(const QubitBasis& basis) {
    if (basis.b0.dim() != 2 || basis.b1.dim() != 2)
        throw std::invalid_argument("measurement basis must be single-qubit");
    if (std::abs(inner_product(basis.b0, basis.b1)) > 1e-10)
        throw std::invalid_argument("measurement basis is not orthonormal");
}

}  // namespace

WaveplatePair::WaveplatePair(double h_angle, double q_angle)
    : h(fold_angle(h_angle)), q(fold_angle(q_angle)) {}

std::pair<complexd, complexd> waveplate_pair_amplitudes(const WaveplatePair& p) {
    return raw_amplitudes(p.h, p.q);
}

PureState pair_state(const WaveplatePair& p, Convention convention) {
    const auto [c0, c1] = apply_convention(raw_amplitudes(p.h, p.q), convention);
    return PureState({c0, c1});
}

PureState prep_two_qubit(const PrepConfig& cfg) {
    if (cfg.pairs.size() != 2)
        throw std::invalid_argument("two-qubit module needs exactly 2 waveplate pairs");
    return kron(pair_state(cfg.pairs[0], Convention::a), pair_state(cfg.pairs[1], Convention::b));
}

PureState prep_three_qubit(const PrepConfig& cfg) {
    if (cfg.pairs.size() != 3)
        throw std::invalid_argument("three-qubit module needs exactly 3 waveplate pairs");
    PureState out = pair_state(cfg.pairs[0], Convention::prime);
    out = kron(out, pair_state(cfg.pairs[1], Convention::prime));
    return kron(out, pair_state(cfg.pairs[2], Convention::prime));
}

WaveplatePair solve_angles(const PureState& target, Convention convention) {
    if (target.dim() != 2) throw std::invalid_argument("solver expects a single-qubit target");
    return refine(best_grid_point(target, convention), convention, target);
}

QubitBasis::QubitBasis(PureState state0, PureState state1)
    : b0(std::move(state0)), b1(std::move(state1)) {
    check_orthonormal(*this);
}

DetectorDistribution measurement_probs_2q(const PureState& state, const QubitBasis& basis0,
                                          const QubitBasis& basis1) {
    if (state.dim() != 4) throw std::invalid_argument("expected a two-qubit state");
    // a[i][j] = <phi_i^(0) phi_j^(1) | Psi>
    double a2[2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const PureState& f0 = (i == 0) ? basis0.b0 : basis0.b1;
            const PureState& f1 = (j == 0) ? basis1.b0 : basis1.b1;
            a2[i][j] = std::norm(inner_product(kron(f0, f1), state));
        }
    // Detector (i, j) at the output plane sees |a_{j,(1-i)}|^2.
    DetectorDistribution dist;
    dist.probs.resize(4);
    for (int m = 0; m < 4; ++m) {
        const int i = (m >> 1) & 1;
        const int j = m & 1;
        dist.probs[m] = a2[j][1 - i];
    }
    return dist;
}

DetectorDistribution measurement_probs_3q(const PureState& state, const QubitBasis& basis0,
                                          const QubitBasis& basis1, const QubitBasis& basis2) {
    if (state.dim() != 8) throw std::invalid_argument("expected a three-qubit state");
    double a3[2][2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                const PureState& f0 = (i == 0) ? basis0.b0 : basis0.b1;
                const PureState& f1 = (j == 0) ? basis1.b0 : basis1.b1;
                const PureState& f2 = (k == 0) ? basis2.b0 : basis2.b1;
                a3[i][j][k] = std::norm(inner_product(kron(kron(f0, f1), f2), state));
            }
    // Detector (i, j, k) sees |a_{k,(1-j),(1-i)}|^2. The eight detectors
    // partition the product basis (SPCM 5 sees |a110|^2), so the
    // distribution always normalizes.
    DetectorDistribution dist;
    dist.probs.resize(8);
    for (int m = 0; m < 8; ++m) {
        const int i = (m >> 2) & 1;
        const int j = (m >> 1) & 1;
        const int k = m & 1;
        dist.probs[m] = a3[k][1 - j][1 - i];
    }
    return dist;
}

}  // namespace optics
}  // namespace qgv
