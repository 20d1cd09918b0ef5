#ifndef QGV_MATRIX_HPP
#define QGV_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace qgv {

using complexd = std::complex<double>;

/// Dense row-major complex matrix. All operators in this toolkit (gates,
/// projectors, verification operators, Choi matrices) live in dimensions
/// <= 64, so everything is stored densely and copied by value.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::initializer_list<std::initializer_list<complexd>> rows);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    complexd& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const complexd& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    ComplexMatrix adjoint() const;
    ComplexMatrix conjugate() const;
    ComplexMatrix transpose() const;
    complexd trace() const;

    bool is_hermitian(double tol = 1e-12) const;
    bool is_unitary(double tol = 1e-12) const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(complexd scalar);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(complexd s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, complexd s) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<complexd> data_;
};

/// Largest entrywise |a - b|; the matrices must have equal shape.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Normalized state vector over a 2^n-dimensional space.
class PureState {
public:
    explicit PureState(std::vector<complexd> amplitudes);

    static PureState basis(std::size_t dim, std::size_t index);
    /// Rescales to unit norm; rejects the zero vector.
    static PureState normalized(std::vector<complexd> amplitudes);

    std::size_t dim() const { return amps_.size(); }
    const std::vector<complexd>& amplitudes() const { return amps_; }
    const complexd& operator[](std::size_t i) const { return amps_[i]; }

private:
    std::vector<complexd> amps_;
};

complexd inner_product(const PureState& a, const PureState& b);

/// |<a|b>|^2; dimensions must match.
double overlap_fidelity(const PureState& a, const PureState& b);

PureState kron(const PureState& a, const PureState& b);

/// Raw matrix-vector product (no normalization).
std::vector<complexd> matvec(const ComplexMatrix& a, const std::vector<complexd>& v);

/// Matrix-vector product A|psi> for norm-preserving A; A must be square of
/// the state's dimension.
PureState apply_matrix(const ComplexMatrix& a, const PureState& psi);

/// Rank-1 projector |psi><psi|.
ComplexMatrix projector(const PureState& psi);

/// Hermitian unit-trace operator (mixed or pure quantum state).
class DensityOperator {
public:
    explicit DensityOperator(ComplexMatrix m);
    static DensityOperator from_pure(const PureState& psi);
    static DensityOperator maximally_mixed(std::size_t dim);

    std::size_t dim() const { return m_.rows(); }
    const ComplexMatrix& matrix() const { return m_; }

private:
    ComplexMatrix m_;
};

/// Eigenvalues of a Hermitian matrix, sorted descending. Rejects matrices
/// whose Hermiticity defect exceeds 1e-12. Cyclic Jacobi on the real
/// symmetric embedding; intended for dimensions <= 64.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h);

struct EigenSystem {
    std::vector<double> values;   // descending
    ComplexMatrix vectors;        // column k is the eigenvector of values[k]
};

EigenSystem hermitian_eigensystem(const ComplexMatrix& h);

}  // namespace qgv

#endif
