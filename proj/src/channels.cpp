#include "qgv/channels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace qgv {

namespace {

std::size_t qubit_count(std::size_t dim) {
    std::size_t n = 0;
    std::size_t d = 1;
    while (d < dim) {
        d *= 2;
        ++n;
    }
    if (d != dim) throw std::invalid_argument("dimension is not a power of two");
    return n;
}

ComplexMatrix pauli_x() { return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix pauli_y() {
    return ComplexMatrix{{0.0, complexd(0.0, -1.0)}, {complexd(0.0, 1.0), 0.0}};
}
ComplexMatrix pauli_z() { return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}; }

ComplexMatrix cptp_defect(const std::vector<ComplexMatrix>& kraus) {
    ComplexMatrix sum(kraus.front().cols(), kraus.front().cols());
    for (const auto& k : kraus) sum += k.adjoint() * k;
    return sum;
}

double parse_double(const std::string& s) {
    double value = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw std::invalid_argument("malformed number in noise spec: '" + s + "'");
    return value;
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

UnitaryGate::UnitaryGate(ComplexMatrix m) : dim(m.rows()), matrix(std::move(m)) {
    if (matrix.rows() != matrix.cols()) throw std::invalid_argument("gate matrix must be square");
    if (!matrix.is_unitary(1e-12)) throw std::invalid_argument("gate matrix is not unitary");
}

QuantumChannel::QuantumChannel(std::vector<ComplexMatrix> kraus_ops)
    : dim(kraus_ops.empty() ? 0 : kraus_ops.front().rows()), kraus(std::move(kraus_ops)) {
    if (kraus.empty()) throw std::invalid_argument("channel needs at least one Kraus operator");
    for (const auto& k : kraus)
        if (k.rows() != dim || k.cols() != dim)
            throw std::invalid_argument("Kraus operators must be square with equal dimension");
    if (max_abs_diff(cptp_defect(kraus), ComplexMatrix::identity(dim)) > 1e-12)
        throw std::invalid_argument("Kraus set is not trace preserving");
}

NoiseSpec NoiseSpec::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = text.find(':', start);
        parts.push_back(text.substr(start, colon - start));
        if (colon == std::string::npos) break;
        start = colon + 1;
    }

    NoiseSpec spec;
    if (parts[0] == "none") {
        if (parts.size() > 1) throw std::invalid_argument("'none' takes no parameters");
        return spec;
    }
    if (parts[0] == "depolarizing") {
        if (parts.size() != 2) throw std::invalid_argument("expected depolarizing:<p>");
        spec.kind = NoiseKind::depolarizing;
        spec.strength = parse_double(parts[1]);
        if (spec.strength < 0.0 || spec.strength > 1.0)
            throw std::invalid_argument("depolarizing probability must lie in [0,1]");
        return spec;
    }
    if (parts[0] == "coherent") {
        if (parts.size() != 2 && parts.size() != 3)
            throw std::invalid_argument("expected coherent:<theta>[:<qubit>]");
        spec.kind = NoiseKind::coherent_overrotation;
        spec.strength = parse_double(parts[1]);
        if (spec.strength < -M_PI || spec.strength > M_PI)
            throw std::invalid_argument("rotation angle must lie in [-pi, pi]");
        if (parts.size() == 3) {
            const double q = parse_double(parts[2]);
            if (q < 0.0 || q != std::floor(q))
                throw std::invalid_argument("qubit index must be a nonnegative integer");
            spec.target_qubit = static_cast<std::size_t>(q);
        }
        return spec;
    }
    throw std::invalid_argument("unknown noise kind '" + parts[0] + "'");
}

std::string NoiseSpec::to_string() const {
    switch (kind) {
        case NoiseKind::none:
            return "none";
        case NoiseKind::depolarizing:
            return "depolarizing:" + format_double(strength);
        case NoiseKind::coherent_overrotation:
            return "coherent:" + format_double(strength) + ":" + std::to_string(target_qubit);
    }
    throw std::logic_error("unreachable");
}

UnitaryGate gate_cnot() {
    ComplexMatrix m = ComplexMatrix::identity(4);
    m(2, 2) = m(3, 3) = 0.0;
    m(2, 3) = m(3, 2) = 1.0;
    return UnitaryGate(std::move(m));
}

UnitaryGate gate_toffoli() {
    ComplexMatrix m = ComplexMatrix::identity(8);
    m(6, 6) = m(7, 7) = 0.0;
    m(6, 7) = m(7, 6) = 1.0;
    return UnitaryGate(std::move(m));
}

QuantumChannel unitary_channel(const UnitaryGate& u) {
    return QuantumChannel({u.matrix});
}

QuantumChannel depolarizing(std::size_t dim, double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("depolarizing probability must lie in [0,1]");
    const std::size_t n = qubit_count(dim);
    const double d2 = double(dim) * double(dim);
    // rho -> (1-p') rho + p'/(d^2-1) sum_{P != I} P rho P^dagger realizes the
    // affine map exactly when p' = p (d^2-1)/d^2.
    const double p_prime = p * (d2 - 1.0) / d2;

    std::vector<ComplexMatrix> kraus;
    kraus.push_back(ComplexMatrix::identity(dim) * complexd(std::sqrt(1.0 - p_prime), 0.0));
    if (p_prime > 0.0) {
        const double w = std::sqrt(p_prime / (d2 - 1.0));
        const ComplexMatrix singles[4] = {ComplexMatrix::identity(2), pauli_x(), pauli_y(),
                                          pauli_z()};
        const std::size_t count = std::size_t(1) << (2 * n);
        for (std::size_t code = 1; code < count; ++code) {
            ComplexMatrix op = ComplexMatrix::identity(1);
            for (std::size_t q = 0; q < n; ++q)
                op = kron(op, singles[(code >> (2 * (n - 1 - q))) & 3]);
            kraus.push_back(op * complexd(w, 0.0));
        }
    }
    return QuantumChannel(std::move(kraus));
}

QuantumChannel coherent_overrotation(const UnitaryGate& u, std::size_t qubit, double theta) {
    const std::size_t n = qubit_count(u.dim);
    if (qubit >= n) throw std::invalid_argument("overrotation qubit index out of range");
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const ComplexMatrix ry{{c, -s}, {s, c}};
    ComplexMatrix full = ComplexMatrix::identity(1);
    for (std::size_t q = 0; q < n; ++q)
        full = kron(full, q == qubit ? ry : ComplexMatrix::identity(2));
    return QuantumChannel({full * u.matrix});
}

QuantumChannel noisy_gate_channel(const UnitaryGate& u, const NoiseSpec& noise) {
    switch (noise.kind) {
        case NoiseKind::none:
            return unitary_channel(u);
        case NoiseKind::depolarizing:
            return compose(depolarizing(u.dim, noise.strength), unitary_channel(u));
        case NoiseKind::coherent_overrotation:
            return coherent_overrotation(u, noise.target_qubit, noise.strength);
    }
    throw std::logic_error("unreachable");
}

QuantumChannel compose(const QuantumChannel& after, const QuantumChannel& before) {
    if (after.dim != before.dim) throw std::invalid_argument("channel dimension mismatch");
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(after.kraus.size() * before.kraus.size());
    for (const auto& a : after.kraus)
        for (const auto& b : before.kraus) kraus.push_back(a * b);
    return QuantumChannel(std::move(kraus));
}

DensityOperator apply(const QuantumChannel& ch, const DensityOperator& rho) {
    if (ch.dim != rho.dim()) throw std::invalid_argument("channel/state dimension mismatch");
    ComplexMatrix out(ch.dim, ch.dim);
    for (const auto& k : ch.kraus) out += k * rho.matrix() * k.adjoint();
    return DensityOperator(std::move(out));
}

ComplexMatrix choi(const QuantumChannel& ch) {
    const std::size_t d = ch.dim;
    std::vector<complexd> phi(d * d, complexd(0.0, 0.0));
    const double w = 1.0 / std::sqrt(double(d));
    for (std::size_t i = 0; i < d; ++i) phi[i * d + i] = w;

    ComplexMatrix out(d * d, d * d);
    const ComplexMatrix id = ComplexMatrix::identity(d);
    for (const auto& k : ch.kraus) {
        // (K (x) I)|Phi> is not normalized for non-unitary Kraus operators.
        const std::vector<complexd> column = matvec(kron(k, id), phi);
        for (std::size_t r = 0; r < d * d; ++r)
            for (std::size_t c = 0; c < d * d; ++c)
                out(r, c) += column[r] * std::conj(column[c]);
    }
    return out;
}

double avg_gate_fidelity(const QuantumChannel& ch, const UnitaryGate& u) {
    if (ch.dim != u.dim) throw std::invalid_argument("channel/gate dimension mismatch");
    const QuantumChannel undo = compose(unitary_channel(UnitaryGate(u.matrix.adjoint())), ch);
    const ComplexMatrix c = choi(undo);
    const std::size_t d = u.dim;
    // <Phi| C |Phi> with |Phi> = sum_i |ii>/sqrt(d).
    complexd f = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) f += c(i * d + i, j * d + j);
    const double entanglement_fidelity = f.real() / double(d);
    const double favg = (double(d) * entanglement_fidelity + 1.0) / (double(d) + 1.0);
    return std::clamp(favg, 0.0, 1.0);
}

}  // namespace qgv
