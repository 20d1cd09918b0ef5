#include "qgv/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qgv {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, complexd(0.0, 0.0)) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("matrix dimensions must be positive");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<complexd>> rows) {
    rows_ = rows.size();
    if (rows_ == 0) throw std::invalid_argument("matrix dimensions must be positive");
    cols_ = rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) throw std::invalid_argument("ragged initializer rows");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix out = *this;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(r, c) = std::conj(out(r, c));
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
}

complexd ComplexMatrix::trace() const {
    if (rows_ != cols_) throw std::invalid_argument("trace of non-square matrix");
    complexd t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

bool ComplexMatrix::is_hermitian(double tol) const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = r; c < cols_; ++c)
            if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
    return true;
}

bool ComplexMatrix::is_unitary(double tol) const {
    if (rows_ != cols_) return false;
    return max_abs_diff(adjoint() * (*this), identity(rows_)) <= tol;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("matrix shape mismatch in addition");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("matrix shape mismatch in subtraction");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(complexd scalar) {
    for (auto& x : data_) x *= scalar;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch in product");
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const complexd ark = a(r, k);
            if (ark == complexd(0.0, 0.0)) continue;
            for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) += ark * b(k, c);
        }
    }
    return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix shape mismatch in comparison");
    double worst = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            worst = std::max(worst, std::abs(a(r, c) - b(r, c)));
    return worst;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar)
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const complexd w = a(ar, ac);
            if (w == complexd(0.0, 0.0)) continue;
            for (std::size_t br = 0; br < b.rows(); ++br)
                for (std::size_t bc = 0; bc < b.cols(); ++bc)
                    out(ar * b.rows() + br, ac * b.cols() + bc) = w * b(br, bc);
        }
    return out;
}

PureState::PureState(std::vector<complexd> amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.empty()) throw std::invalid_argument("state dimension must be positive");
    double norm2 = 0.0;
    for (const auto& a : amps_) norm2 += std::norm(a);
    if (std::abs(norm2 - 1.0) > 1e-12)
        throw std::invalid_argument("state vector not normalized: |norm^2 - 1| = " +
                                    std::to_string(std::abs(norm2 - 1.0)));
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw std::invalid_argument("basis index out of range");
    std::vector<complexd> amps(dim, complexd(0.0, 0.0));
    amps[index] = 1.0;
    return PureState(std::move(amps));
}

PureState PureState::normalized(std::vector<complexd> amplitudes) {
    double norm2 = 0.0;
    for (const auto& a : amplitudes) norm2 += std::norm(a);
    if (norm2 <= 0.0) throw std::invalid_argument("cannot normalize the zero vector");
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& a : amplitudes) a *= inv;
    return PureState(std::move(amplitudes));
}

complexd inner_product(const PureState& a, const PureState& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("state dimension mismatch");
    complexd s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double overlap_fidelity(const PureState& a, const PureState& b) {
    return std::norm(inner_product(a, b));
}

PureState kron(const PureState& a, const PureState& b) {
    std::vector<complexd> amps(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) amps[i * b.dim() + j] = a[i] * b[j];
    return PureState(std::move(amps));
}

std::vector<complexd> matvec(const ComplexMatrix& a, const std::vector<complexd>& v) {
    if (a.cols() != v.size()) throw std::invalid_argument("matrix/vector dimension mismatch");
    std::vector<complexd> out(a.rows(), complexd(0.0, 0.0));
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out[r] += a(r, c) * v[c];
    return out;
}

PureState apply_matrix(const ComplexMatrix& a, const PureState& psi) {
    if (a.rows() != a.cols()) throw std::invalid_argument("matrix/state dimension mismatch");
    return PureState(matvec(a, psi.amplitudes()));
}

ComplexMatrix projector(const PureState& psi) {
    ComplexMatrix out(psi.dim(), psi.dim());
    for (std::size_t r = 0; r < psi.dim(); ++r)
        for (std::size_t c = 0; c < psi.dim(); ++c) out(r, c) = psi[r] * std::conj(psi[c]);
    return out;
}

DensityOperator::DensityOperator(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("density operator must be square");
    if (!m_.is_hermitian(1e-12)) throw std::invalid_argument("density operator must be Hermitian");
    if (std::abs(m_.trace() - complexd(1.0, 0.0)) > 1e-12)
        throw std::invalid_argument("density operator must have unit trace");
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
    return DensityOperator(projector(psi));
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
    return DensityOperator(ComplexMatrix::identity(dim) * complexd(1.0 / double(dim), 0.0));
}

namespace {

// Cyclic Jacobi for a real symmetric matrix, with eigenvector accumulation.
// Stops when the off-diagonal Frobenius norm drops below 1e-14 (at most 100
// sweeps). The quantum operators handled here have norms of order one, so an
// absolute threshold is adequate.
void jacobi_symmetric(std::vector<double>& a, std::size_t n, std::vector<double>& v) {
    v.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * a[p * n + q] * a[p * n + q];
        if (std::sqrt(off) <= 1e-14) return;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p];
                    const double vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
}

}  // namespace

EigenSystem hermitian_eigensystem(const ComplexMatrix& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("eigensolver needs a square matrix");
    if (!h.is_hermitian(1e-12)) throw std::invalid_argument("eigensolver needs a Hermitian matrix");

    // Real symmetric embedding [[Re, -Im], [Im, Re]]: same spectrum, each
    // eigenvalue doubled; a real eigenvector (x; y) maps back to x + iy.
    const std::size_t n = h.rows();
    const std::size_t m = 2 * n;
    std::vector<double> a(m * m, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const double re = h(r, c).real();
            const double im = h(r, c).imag();
            a[r * m + c] = re;
            a[(r + n) * m + (c + n)] = re;
            a[r * m + (c + n)] = -im;
            a[(r + n) * m + c] = im;
        }
    }

    std::vector<double> v;
    jacobi_symmetric(a, m, v);

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a[i * m + i] > a[j * m + j]; });

    EigenSystem sys;
    sys.values.reserve(n);
    sys.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t col = order[2 * k];  // duplicated pairs are adjacent after sorting
        sys.values.push_back(a[col * m + col]);
        double norm2 = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const complexd entry(v[r * m + col], v[(r + n) * m + col]);
            sys.vectors(r, k) = entry;
            norm2 += std::norm(entry);
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t r = 0; r < n; ++r) sys.vectors(r, k) *= inv;
    }
    return sys;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
    return hermitian_eigensystem(h).values;
}

}  // namespace qgv
