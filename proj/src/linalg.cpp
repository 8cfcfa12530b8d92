#include "medent/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <type_traits>

#include "medent/errors.hpp"

namespace medent {

namespace {

void check_dimension(std::size_t rows, std::size_t cols, const char* what) {
    if (rows > kMaxDimension || cols > kMaxDimension) {
        std::ostringstream os;
        os << what << ": requested " << rows << "x" << cols << " exceeds maximum dimension " << kMaxDimension;
        throw ResourceLimitError(os.str());
    }
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

} // namespace

// ---------------------------------------------------------------- ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    check_dimension(rows, cols, "ComplexMatrix");
    data_.assign(rows * cols, cplx{});
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    check_dimension(rows, cols, "ComplexMatrix");
    if (data_.size() != rows * cols) throw DimensionError("ComplexMatrix: entry count does not match rows*cols");
    if (!all_finite()) throw PreconditionError("ComplexMatrix: non-finite entry");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<cplx> entries;
    entries.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw DimensionError("ComplexMatrix::from_rows: ragged rows");
        entries.insert(entries.end(), row.begin(), row.end());
    }
    return ComplexMatrix(r, c, std::move(entries));
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> v, std::span<const cplx> w) {
    ComplexMatrix m(v.size(), w.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < w.size(); ++j) m(i, j) = v[i] * std::conj(w[j]);
    return m;
}

bool ComplexMatrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), finite);
}

bool ComplexMatrix::is_real() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](cplx z) { return z.imag() == 0.0; });
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix m = *this;
    for (auto& z : m.data_) z = std::conj(z);
    return m;
}

cplx ComplexMatrix::trace() const {
    if (!is_square()) throw DimensionError("trace: matrix is not square");
    cplx t{};
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (cplx z : data_) s += std::norm(z);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("max_abs_diff: shape mismatch");
    double d = 0.0;
    for (std::size_t k = 0; k < data_.size(); ++k) d = std::max(d, std::abs(data_[k] - other.data_[k]));
    return d;
}

ComplexVector ComplexMatrix::column(std::size_t j) const {
    ComplexVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

ComplexVector ComplexMatrix::apply(std::span<const cplx> v) const {
    if (v.size() != cols_) throw DimensionError("apply: vector length does not match columns");
    ComplexVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        cplx s{};
        const cplx* row = &data_[i * cols_];
        for (std::size_t j = 0; j < cols_; ++j) s += row[j] * v[j];
        out[i] = s;
    }
    return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionError("operator+: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionError("operator-: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("operator*: inner dimensions differ");
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t rows = a.rows() * b.rows();
    const std::size_t cols = a.cols() * b.cols();
    check_dimension(rows, cols, "kron");
    ComplexMatrix out(rows, cols);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

ComplexMatrix kron(std::initializer_list<ComplexMatrix> factors) {
    if (factors.size() == 0) throw DimensionError("kron: no factors");
    auto it = factors.begin();
    ComplexMatrix out = *it++;
    for (; it != factors.end(); ++it) out = kron(out, *it);
    return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

// ---------------------------------------------------------------- vectors

double norm(std::span<const cplx> v) {
    double s = 0.0;
    for (cplx z : v) s += std::norm(z);
    return std::sqrt(s);
}

cplx inner(std::span<const cplx> bra, std::span<const cplx> ket) {
    if (bra.size() != ket.size()) throw DimensionError("inner: length mismatch");
    cplx s{};
    for (std::size_t i = 0; i < bra.size(); ++i) s += std::conj(bra[i]) * ket[i];
    return s;
}

ComplexVector normalized(std::span<const cplx> v) {
    const double n = norm(v);
    if (n == 0.0) throw PreconditionError("normalized: zero vector");
    ComplexVector out(v.begin(), v.end());
    for (auto& z : out) z /= n;
    return out;
}

ComplexVector kron(std::span<const cplx> a, std::span<const cplx> b) {
    ComplexVector out;
    out.reserve(a.size() * b.size());
    for (cplx x : a)
        for (cplx y : b) out.push_back(x * y);
    return out;
}

const ComplexMatrix& pauli(int index) {
    static const ComplexMatrix sigma[4] = {
        ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, 1.0}}),
        ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}),
        ComplexMatrix::from_rows({{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}}),
        ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}}),
    };
    if (index < 0 || index > 3) throw PreconditionError("pauli: index must be 0..3");
    return sigma[index];
}

// ---------------------------------------------------------------- Hermitian

HermitianOperator::HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
    if (!m_.is_square() || m_.rows() == 0) throw DimensionError("HermitianOperator: matrix must be square and non-empty");
    if (!m_.all_finite()) throw PreconditionError("HermitianOperator: non-finite entry");
    const double tol = 1e-12 * m_.frobenius_norm();
    const std::size_t n = m_.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            if (std::abs(m_(i, j) - std::conj(m_(j, i))) > tol)
                throw PreconditionError("HermitianOperator: matrix is not Hermitian");
}

double HermitianOperator::expectation(std::span<const cplx> v) const {
    const ComplexVector hv = m_.apply(v);
    return inner(v, hv).real() / inner(v, v).real();
}

HermitianOperator random_hermitian(std::size_t n, Rng& rng) {
    std::normal_distribution<double> gauss;
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = gauss(rng);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            m(i, j) = cplx(re, im);
            m(j, i) = cplx(re, -im);
        }
    }
    return HermitianOperator(std::move(m));
}

const IndexRange& EigenDecomposition::group_of(std::size_t k) const {
    for (const auto& g : degeneracy_groups)
        if (k >= g.begin && k < g.end) return g;
    throw PreconditionError("EigenDecomposition::group_of: index out of range");
}

std::vector<IndexRange> group_levels(std::span<const double> sorted, double tol) {
    std::vector<IndexRange> groups;
    std::size_t start = 0;
    for (std::size_t k = 1; k <= sorted.size(); ++k) {
        if (k == sorted.size() || sorted[k] - sorted[start] > tol) {
            groups.push_back({start, k});
            start = k;
        }
    }
    return groups;
}

// ---------------------------------------------------------------- Jacobi

namespace {

template <typename T>
T conj_of(T x) {
    if constexpr (std::is_same_v<T, double>) return x;
    else return std::conj(x);
}

/// In-place cyclic Jacobi on an n x n Hermitian block (row-major `a`).
/// On return the diagonal of `a` holds eigenvalues and the columns of `v`
/// the eigenvectors. `threshold` is the absolute off-diagonal norm target.
template <typename T>
void jacobi_block(std::vector<T>& a, std::vector<T>& v, std::size_t n, double threshold, int max_sweeps) {
    v.assign(n * n, T{});
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = T(1.0);
    if (n == 1) return;

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += std::norm(a[p * n + q]);
        return std::sqrt(2.0 * s);
    };

    // One sweep past the threshold: convergence is quadratic by then, so the
    // extra sweep brings eigenvectors down to round-off at little cost.
    bool polishing = false;
    for (int sweep = 0;; ++sweep) {
        if (polishing) return;
        if (off_norm() <= threshold) polishing = true;
        else if (sweep == max_sweeps) {
            std::ostringstream os;
            os << "eigh: Jacobi iteration did not converge after " << max_sweeps << " sweeps (off-diagonal norm "
               << off_norm() << ")";
            throw NumericalError(os.str());
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const T apq = a[p * n + q];
                const double r = std::abs(apq);
                if (r == 0.0) continue;
                const double app = std::real(a[p * n + p]);
                const double aqq = std::real(a[q * n + q]);
                // Negligible against both diagonal entries: drop it.
                if (sweep > 3 && std::abs(app) + 100.0 * r == std::abs(app) &&
                    std::abs(aqq) + 100.0 * r == std::abs(aqq)) {
                    a[p * n + q] = T{};
                    a[q * n + p] = T{};
                    continue;
                }
                const T phase = apq / r;
                const double theta = (aqq - app) / (2.0 * r);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const T s_phase = s * phase;                 // s e^{i phi}
                const T s_phase_c = s * conj_of(phase);      // s e^{-i phi}

                // A <- A U, then A <- U^dagger A, with
                // U = [[c, s e^{i phi}], [-s e^{-i phi}, c]] on (p, q).
                for (std::size_t k = 0; k < n; ++k) {
                    const T akp = a[k * n + p];
                    const T akq = a[k * n + q];
                    a[k * n + p] = c * akp - s_phase_c * akq;
                    a[k * n + q] = s_phase * akp + c * akq;
                }
                T* row_p = &a[p * n];
                T* row_q = &a[q * n];
                for (std::size_t k = 0; k < n; ++k) {
                    const T bpk = row_p[k];
                    const T bqk = row_q[k];
                    row_p[k] = c * bpk - s_phase * bqk;
                    row_q[k] = s_phase_c * bpk + c * bqk;
                }
                row_p[p] = app - t * r;
                row_q[q] = aqq + t * r;
                row_p[q] = T{};
                row_q[p] = T{};
                for (std::size_t k = 0; k < n; ++k) {
                    const T vkp = v[k * n + p];
                    const T vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s_phase_c * vkq;
                    v[k * n + q] = s_phase * vkp + c * vkq;
                }
            }
        }
    }
}

/// Connected components of the graph with an edge wherever h_ij != 0.
std::vector<std::vector<std::size_t>> decoupled_blocks(const ComplexMatrix& h) {
    const std::size_t n = h.rows();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (h(i, j) != cplx{}) {
                const std::size_t a = find(i), b = find(j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<std::size_t> slot(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = find(i);
        if (slot[root] == n) {
            slot[root] = blocks.size();
            blocks.emplace_back();
        }
        blocks[slot[root]].push_back(i);
    }
    return blocks;
}

struct Eigenpair {
    double value;
    ComplexVector vector;
};

template <typename T>
void solve_block(const ComplexMatrix& h, const std::vector<std::size_t>& idx, double threshold, int max_sweeps,
                 std::vector<Eigenpair>& out) {
    const std::size_t m = idx.size();
    std::vector<T> a(m * m), v;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if constexpr (std::is_same_v<T, double>) a[i * m + j] = h(idx[i], idx[j]).real();
            else a[i * m + j] = h(idx[i], idx[j]);
        }
    jacobi_block(a, v, m, threshold, max_sweeps);
    for (std::size_t k = 0; k < m; ++k) {
        Eigenpair e{std::real(a[k * m + k]), ComplexVector(h.rows())};
        for (std::size_t i = 0; i < m; ++i) e.vector[idx[i]] = v[i * m + k];
        out.push_back(std::move(e));
    }
}

void fix_phase(ComplexVector& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
    const double mag = std::abs(v[best]);
    if (mag == 0.0) return;
    const cplx rot = std::conj(v[best]) / mag;
    for (auto& z : v) z *= rot;
    v[best] = mag;
}

} // namespace

EigenDecomposition eigh(const HermitianOperator& h, const EighOptions& options) {
    const ComplexMatrix& m = h.matrix();
    const std::size_t n = h.dim();
    const double hnorm = m.frobenius_norm();
    const auto blocks = decoupled_blocks(m);
    const double threshold = options.convergence_rel_tol * hnorm / std::sqrt(static_cast<double>(blocks.size()));

    std::vector<Eigenpair> pairs;
    pairs.reserve(n);
    for (const auto& block : blocks) {
        bool real = true;
        for (std::size_t i : block)
            for (std::size_t j : block) real = real && m(i, j).imag() == 0.0;
        if (real) solve_block<double>(m, block, threshold, options.max_sweeps, pairs);
        else solve_block<cplx>(m, block, threshold, options.max_sweeps, pairs);
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const Eigenpair& x, const Eigenpair& y) { return x.value < y.value; });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        fix_phase(pairs[k].vector);
        out.eigenvalues[k] = pairs[k].value;
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = pairs[k].vector[i];
    }
    const double range = out.eigenvalues.back() - out.eigenvalues.front();
    out.degeneracy_tolerance = options.degeneracy_rel_tol * std::max(1.0, range);
    out.degeneracy_groups = group_levels(out.eigenvalues, out.degeneracy_tolerance);
    return out;
}

// ---------------------------------------------------------------- states

namespace {

ComplexMatrix checked_density(ComplexMatrix m) {
    const cplx tr = m.trace();
    if (std::abs(tr - 1.0) > 1e-10) throw PreconditionError("DensityMatrix: trace differs from 1");
    return m;
}

/// Splits a flat index over `dims` into (kept index, traced index).
struct IndexSplit {
    std::size_t kept_dim = 1;
    std::size_t traced_dim = 1;
    std::vector<std::size_t> kept;
    std::vector<std::size_t> traced;
};

IndexSplit split_indices(std::span<const std::size_t> dims, std::span<const std::size_t> keep) {
    if (dims.empty()) throw DimensionError("partial trace: no subsystems");
    if (keep.empty()) throw PreconditionError("partial trace: keep set is empty");
    std::vector<bool> kept_flag(dims.size(), false);
    for (std::size_t k : keep) {
        if (k >= dims.size()) throw DimensionError("partial trace: keep index out of range");
        if (kept_flag[k]) throw PreconditionError("partial trace: duplicate keep index");
        kept_flag[k] = true;
    }
    IndexSplit s;
    std::size_t total = 1;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (dims[i] == 0) throw DimensionError("partial trace: zero subsystem dimension");
        total *= dims[i];
        (kept_flag[i] ? s.kept_dim : s.traced_dim) *= dims[i];
    }
    s.kept.resize(total);
    s.traced.resize(total);
    std::vector<std::size_t> digits(dims.size(), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t ki = 0, ti = 0;
        for (std::size_t i = 0; i < dims.size(); ++i) {
            if (kept_flag[i]) ki = ki * dims[i] + digits[i];
            else ti = ti * dims[i] + digits[i];
        }
        s.kept[flat] = ki;
        s.traced[flat] = ti;
        for (std::size_t i = dims.size(); i-- > 0;) {
            if (++digits[i] < dims[i]) break;
            digits[i] = 0;
        }
    }
    return s;
}

void add_reduced(ComplexMatrix& out, const IndexSplit& s, std::span<const cplx> psi, double weight) {
    ComplexMatrix m(s.kept_dim, s.traced_dim);
    for (std::size_t flat = 0; flat < psi.size(); ++flat) m(s.kept[flat], s.traced[flat]) = psi[flat];
    for (std::size_t i = 0; i < s.kept_dim; ++i)
        for (std::size_t j = 0; j < s.kept_dim; ++j) {
            cplx acc{};
            for (std::size_t t = 0; t < s.traced_dim; ++t) acc += m(i, t) * std::conj(m(j, t));
            out(i, j) += weight * acc;
        }
}

} // namespace

DensityMatrix::DensityMatrix(ComplexMatrix m) : op_(checked_density(std::move(m))) {
    const auto decomp = eigh(op_);
    if (decomp.eigenvalues.front() < -1e-10) throw PreconditionError("DensityMatrix: matrix is not positive semidefinite");
}

DensityMatrix::DensityMatrix(ComplexMatrix m, Trusted) : op_(std::move(m)) {}

DensityMatrix DensityMatrix::pure(std::span<const cplx> psi) {
    if (std::abs(norm(psi) - 1.0) > 1e-8) throw PreconditionError("DensityMatrix::pure: state is not normalized");
    return DensityMatrix(ComplexMatrix::outer(psi, psi), Trusted{});
}

DensityMatrix DensityMatrix::mixture(std::span<const ComplexVector> states, std::span<const double> weights) {
    if (states.empty() || states.size() != weights.size())
        throw PreconditionError("DensityMatrix::mixture: need one weight per state");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw PreconditionError("DensityMatrix::mixture: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-10) throw PreconditionError("DensityMatrix::mixture: weights do not sum to 1");
    const std::size_t d = states.front().size();
    ComplexMatrix m(d, d);
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (states[k].size() != d) throw DimensionError("DensityMatrix::mixture: state dimensions differ");
        if (std::abs(norm(states[k]) - 1.0) > 1e-8) throw PreconditionError("DensityMatrix::mixture: state not normalized");
        m += weights[k] * ComplexMatrix::outer(states[k], states[k]);
    }
    return DensityMatrix(std::move(m), Trusted{});
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    return DensityMatrix(ComplexMatrix::identity(dim) * cplx(1.0 / static_cast<double>(dim)), Trusted{});
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
    const IndexSplit s = split_indices(dims, keep);
    if (s.kept.size() != rho.dim()) throw DimensionError("partial_trace: subsystem dimensions do not multiply to rho.dim");
    // index_of[k][t] = flat index
    std::vector<std::size_t> index_of(s.kept_dim * s.traced_dim);
    for (std::size_t flat = 0; flat < s.kept.size(); ++flat) index_of[s.kept[flat] * s.traced_dim + s.traced[flat]] = flat;
    ComplexMatrix out(s.kept_dim, s.kept_dim);
    const ComplexMatrix& m = rho.matrix();
    for (std::size_t i = 0; i < s.kept_dim; ++i)
        for (std::size_t j = 0; j < s.kept_dim; ++j) {
            cplx acc{};
            for (std::size_t t = 0; t < s.traced_dim; ++t)
                acc += m(index_of[i * s.traced_dim + t], index_of[j * s.traced_dim + t]);
            out(i, j) = acc;
        }
    return DensityMatrix(std::move(out), DensityMatrix::Trusted{});
}

DensityMatrix reduce_pure_state(std::span<const cplx> psi, std::span<const std::size_t> dims,
                                std::span<const std::size_t> keep) {
    const IndexSplit s = split_indices(dims, keep);
    if (s.kept.size() != psi.size()) throw DimensionError("reduce_pure_state: subsystem dimensions do not match state");
    if (std::abs(norm(psi) - 1.0) > 1e-8) throw PreconditionError("reduce_pure_state: state is not normalized");
    ComplexMatrix out(s.kept_dim, s.kept_dim);
    add_reduced(out, s, psi, 1.0);
    return DensityMatrix(std::move(out), DensityMatrix::Trusted{});
}

DensityMatrix reduce_uniform_mixture(std::span<const ComplexVector> states, std::span<const std::size_t> dims,
                                     std::span<const std::size_t> keep) {
    if (states.empty()) throw PreconditionError("reduce_uniform_mixture: no states");
    if (states.size() == 1) return reduce_pure_state(states.front(), dims, keep);
    const double w = 1.0 / static_cast<double>(states.size());
    const IndexSplit s = split_indices(dims, keep);
    ComplexMatrix out(s.kept_dim, s.kept_dim);
    for (const auto& psi : states) {
        if (psi.size() != s.kept.size()) throw DimensionError("reduce_uniform_mixture: state dimension mismatch");
        if (std::abs(norm(psi) - 1.0) > 1e-8) throw PreconditionError("reduce_uniform_mixture: state not normalized");
        add_reduced(out, s, psi, w);
    }
    return DensityMatrix(std::move(out), DensityMatrix::Trusted{});
}

double purity(const DensityMatrix& rho) {
    double s = 0.0;
    for (cplx z : rho.matrix().entries()) s += std::norm(z);
    return s;
}

std::vector<double> singular_values(const ComplexMatrix& m) {
    // Right singular vectors from M^dagger M, then sigma_j = ||M w_j||: the
    // norms are accurate to ~eps*||M|| even for tiny sigma_j.
    const ComplexMatrix gram = m.adjoint() * m;
    ComplexMatrix sym = gram;
    for (std::size_t i = 0; i < sym.rows(); ++i)
        for (std::size_t j = i + 1; j < sym.cols(); ++j) {
            const cplx avg = 0.5 * (sym(i, j) + std::conj(sym(j, i)));
            sym(i, j) = avg;
            sym(j, i) = std::conj(avg);
        }
    const auto dec = eigh(HermitianOperator(sym));
    std::vector<double> out;
    for (std::size_t k = 0; k < dec.dim(); ++k) out.push_back(norm(m.apply(dec.vector(k))));
    std::sort(out.begin(), out.end(), std::greater<>());
    out.resize(std::min(m.rows(), m.cols()));
    return out;
}

std::size_t SchmidtDecomposition::rank(double tol) const {
    return static_cast<std::size_t>(
        std::count_if(coefficients.begin(), coefficients.end(), [tol](double c) { return c >= tol; }));
}

SchmidtDecomposition schmidt(std::span<const cplx> psi, std::size_t dim_left, std::size_t dim_right) {
    if (psi.size() != dim_left * dim_right) throw DimensionError("schmidt: vector length is not dL*dR");
    if (std::abs(norm(psi) - 1.0) > 1e-8) throw PreconditionError("schmidt: state is not normalized");
    ComplexMatrix m(dim_left, dim_right, std::vector<cplx>(psi.begin(), psi.end()));
    ComplexMatrix gram = m * m.adjoint();
    for (std::size_t i = 0; i < gram.rows(); ++i) {
        gram(i, i) = gram(i, i).real();
        for (std::size_t j = i + 1; j < gram.cols(); ++j) gram(j, i) = std::conj(gram(i, j));
    }
    const auto dec = eigh(HermitianOperator(gram));
    const ComplexMatrix rows = dec.eigenvectors.adjoint() * m;   // row k = <u_k| M

    struct Term {
        double coefficient;
        std::size_t index;
    };
    std::vector<Term> terms;
    for (std::size_t k = 0; k < dim_left; ++k) {
        double s = 0.0;
        for (std::size_t b = 0; b < dim_right; ++b) s += std::norm(rows(k, b));
        terms.push_back({std::sqrt(s), k});
    }
    std::stable_sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.coefficient > y.coefficient; });

    SchmidtDecomposition out;
    for (const Term& t : terms) {
        if (t.coefficient <= kSchmidtFloor) break;
        out.coefficients.push_back(t.coefficient);
        out.left.push_back(dec.vector(t.index));
        ComplexVector r(dim_right);
        for (std::size_t b = 0; b < dim_right; ++b) r[b] = rows(t.index, b) / t.coefficient;
        out.right.push_back(std::move(r));
    }
    return out;
}

namespace {

/// Maps each flat index to its image under the factor permutation.
std::vector<std::size_t> permutation_map(std::span<const std::size_t> dims, std::span<const std::size_t> order) {
    const std::size_t k = dims.size();
    if (order.size() != k) throw DimensionError("permute_subsystems: order length differs from dims");
    std::vector<bool> seen(k, false);
    for (std::size_t o : order) {
        if (o >= k || seen[o]) throw PreconditionError("permute_subsystems: order is not a permutation");
        seen[o] = true;
    }
    std::size_t total = 1;
    for (std::size_t d : dims) total *= d;
    std::vector<std::size_t> map(total);
    std::vector<std::size_t> digits(k, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t image = 0;
        for (std::size_t pos = 0; pos < k; ++pos) image = image * dims[order[pos]] + digits[order[pos]];
        map[flat] = image;
        for (std::size_t i = k; i-- > 0;) {
            if (++digits[i] < dims[i]) break;
            digits[i] = 0;
        }
    }
    return map;
}

} // namespace

ComplexMatrix permute_subsystems(const ComplexMatrix& m, std::span<const std::size_t> dims,
                                 std::span<const std::size_t> order) {
    const auto map = permutation_map(dims, order);
    if (map.size() != m.rows() || !m.is_square()) throw DimensionError("permute_subsystems: matrix shape mismatch");
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < map.size(); ++i)
        for (std::size_t j = 0; j < map.size(); ++j) out(map[i], map[j]) = m(i, j);
    return out;
}

ComplexVector permute_subsystems(std::span<const cplx> v, std::span<const std::size_t> dims,
                                 std::span<const std::size_t> order) {
    const auto map = permutation_map(dims, order);
    if (map.size() != v.size()) throw DimensionError("permute_subsystems: vector length mismatch");
    ComplexVector out(v.size());
    for (std::size_t i = 0; i < map.size(); ++i) out[map[i]] = v[i];
    return out;
}

} // namespace medent
