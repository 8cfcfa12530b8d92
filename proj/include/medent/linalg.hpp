// linalg.hpp - dense complex linear algebra: matrices, Kronecker products,
// Hermitian eigendecomposition, partial traces and Schmidt decomposition

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "medent/random.hpp"

namespace medent {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;

/// Largest row or column count any operation will allocate.
inline constexpr std::size_t kMaxDimension = 4096;

/// Dense row-major complex matrix. Entries are finite once constructed from
/// data; element writes through operator() are for builders and are checked
/// again when the matrix is wrapped in a HermitianOperator.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);
    static ComplexMatrix diagonal(std::span<const double> values);
    /// |v><w|
    static ComplexMatrix outer(std::span<const cplx> v, std::span<const cplx> w);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    cplx operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    std::span<const cplx> entries() const noexcept { return data_; }

    bool all_finite() const noexcept;
    bool is_real() const noexcept;

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;
    cplx trace() const;
    double frobenius_norm() const;
    /// max_ij |A_ij - B_ij|
    double max_abs_diff(const ComplexMatrix& other) const;

    ComplexVector column(std::size_t j) const;
    ComplexVector apply(std::span<const cplx> v) const;

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(cplx s);

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, cplx s);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product; throws ResourceLimitError beyond kMaxDimension.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
/// Left-to-right Kronecker product of all factors.
ComplexMatrix kron(std::initializer_list<ComplexMatrix> factors);

/// a*b - b*a
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

// ---------------------------------------------------------------- vectors

double norm(std::span<const cplx> v);
cplx inner(std::span<const cplx> bra, std::span<const cplx> ket);
ComplexVector normalized(std::span<const cplx> v);
ComplexVector kron(std::span<const cplx> a, std::span<const cplx> b);

// ---------------------------------------------------------------- Pauli

/// sigma^0 = 1, sigma^1 = x, sigma^2 = y, sigma^3 = z; sigma^3|0> = +|0>.
const ComplexMatrix& pauli(int index);

// ---------------------------------------------------------------- Hermitian

/// Square matrix with max|M_ij - conj(M_ji)| <= 1e-12 * ||M||_F.
class HermitianOperator {
public:
    explicit HermitianOperator(ComplexMatrix m);

    std::size_t dim() const noexcept { return m_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return m_; }
    cplx operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    /// <v|H|v> / <v|v>
    double expectation(std::span<const cplx> v) const;

private:
    ComplexMatrix m_;
};

/// Random Hermitian matrix with independent standard normal real and
/// imaginary parts above the diagonal.
HermitianOperator random_hermitian(std::size_t n, Rng& rng);

struct EighOptions {
    /// Sweeps stop once the off-diagonal Frobenius norm is below this times ||H||_F.
    double convergence_rel_tol = 1e-13;
    int max_sweeps = 100;
    /// Eigenvalues share a group when within this times max(1, spectral range).
    double degeneracy_rel_tol = 1e-9;
};

/// Half-open index range [begin, end) of eigenvalues forming one level.
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const noexcept { return end - begin; }
    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct EigenDecomposition {
    std::vector<double> eigenvalues;          // non-decreasing
    ComplexMatrix eigenvectors;               // column k pairs with eigenvalues[k]
    std::vector<IndexRange> degeneracy_groups;
    double degeneracy_tolerance = 0.0;

    std::size_t dim() const noexcept { return eigenvalues.size(); }
    ComplexVector vector(std::size_t k) const { return eigenvectors.column(k); }
    const IndexRange& group_of(std::size_t k) const;
    const IndexRange& ground_level() const { return degeneracy_groups.front(); }
    bool is_degenerate(std::size_t k) const { return group_of(k).size() > 1; }
};

/// Groups sorted eigenvalues into levels: each group spans at most `tol`.
std::vector<IndexRange> group_levels(std::span<const double> sorted, double tol);

/// Cyclic Jacobi eigendecomposition. Exactly decoupled blocks (by the
/// zero pattern of H) are diagonalized independently and purely real blocks
/// use real rotations; eigenvectors therefore never mix decoupled sectors.
/// Each eigenvector's largest-magnitude component is made real-positive.
EigenDecomposition eigh(const HermitianOperator& h, const EighOptions& options = {});

// ---------------------------------------------------------------- states

/// Hermitian, unit trace, positive semidefinite within 1e-10.
class DensityMatrix {
public:
    /// Checks all invariants; the PSD check costs one eigendecomposition.
    explicit DensityMatrix(ComplexMatrix m);

    /// |psi><psi| for a unit vector (norm within 1e-8).
    static DensityMatrix pure(std::span<const cplx> psi);
    /// sum_k w_k |psi_k><psi_k|, weights non-negative summing to one.
    static DensityMatrix mixture(std::span<const ComplexVector> states, std::span<const double> weights);
    static DensityMatrix maximally_mixed(std::size_t dim);

    std::size_t dim() const noexcept { return op_.dim(); }
    const HermitianOperator& op() const noexcept { return op_; }
    const ComplexMatrix& matrix() const noexcept { return op_.matrix(); }

private:
    struct Trusted {};
    DensityMatrix(ComplexMatrix m, Trusted);
    HermitianOperator op_;
    friend DensityMatrix partial_trace(const DensityMatrix&, std::span<const std::size_t>,
                                       std::span<const std::size_t>);
    friend DensityMatrix reduce_pure_state(std::span<const cplx>, std::span<const std::size_t>,
                                           std::span<const std::size_t>);
    friend DensityMatrix reduce_uniform_mixture(std::span<const ComplexVector>, std::span<const std::size_t>,
                                                std::span<const std::size_t>);
};

/// Reduced state on the subsystems listed in `keep` (kept in original order).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> dims,
                                   std::initializer_list<std::size_t> keep) {
    return partial_trace(rho, std::span(dims.begin(), dims.size()), std::span(keep.begin(), keep.size()));
}

/// Tr_rest |psi><psi| without forming the full projector.
DensityMatrix reduce_pure_state(std::span<const cplx> psi, std::span<const std::size_t> dims,
                                std::span<const std::size_t> keep);

/// Uniform mixture of the given orthonormal states, reduced to `keep`.
DensityMatrix reduce_uniform_mixture(std::span<const ComplexVector> states, std::span<const std::size_t> dims,
                                     std::span<const std::size_t> keep);

/// Tr(rho^2)
double purity(const DensityMatrix& rho);

/// Singular values, non-increasing, each accurate to ~eps * ||M||.
std::vector<double> singular_values(const ComplexMatrix& m);

struct SchmidtDecomposition {
    std::vector<double> coefficients;   // sqrt(lambda_j), non-increasing, all > kSchmidtFloor
    std::vector<ComplexVector> left;    // orthonormal, dimension dL
    std::vector<ComplexVector> right;   // orthonormal, dimension dR

    std::size_t rank(double tol) const;
};

/// Coefficients at or below this are treated as exact zeros and dropped.
inline constexpr double kSchmidtFloor = 1e-12;

/// Schmidt form of a unit vector on dL x dR (left index slowest).
SchmidtDecomposition schmidt(std::span<const cplx> psi, std::size_t dim_left, std::size_t dim_right);

/// Reorders tensor factors: output factor k is input factor order[k].
ComplexMatrix permute_subsystems(const ComplexMatrix& m, std::span<const std::size_t> dims,
                                 std::span<const std::size_t> order);
ComplexVector permute_subsystems(std::span<const cplx> v, std::span<const std::size_t> dims,
                                 std::span<const std::size_t> order);

} // namespace medent
