#include "medent/entanglement.hpp"

#include <algorithm>
#include <cmath>

#include "medent/errors.hpp"

namespace medent {

namespace {

const ComplexMatrix& spin_flip() {
    static const ComplexMatrix yy = kron(pauli(2), pauli(2));
    return yy;
}

} // namespace

ConcurrenceResult concurrence(const DensityMatrix& rho) {
    if (rho.dim() != 4) throw DimensionError("concurrence: density matrix must be 4x4");
    const auto dec = eigh(rho.op());

    std::vector<std::size_t> support;
    for (std::size_t k = 0; k < 4; ++k)
        if (dec.eigenvalues[k] > kConcurrenceRankFloor) support.push_back(k);

    ConcurrenceResult out;
    if (support.empty()) return out;

    ComplexMatrix w(4, support.size());
    for (std::size_t col = 0; col < support.size(); ++col) {
        const double amp = std::sqrt(dec.eigenvalues[support[col]]);
        for (std::size_t i = 0; i < 4; ++i) w(i, col) = amp * dec.eigenvectors(i, support[col]);
    }
    const ComplexMatrix tau = w.transpose() * spin_flip() * w;
    const std::vector<double> sv = singular_values(tau);
    for (std::size_t i = 0; i < sv.size(); ++i) out.tilde_lambdas[i] = sv[i];

    const auto& l = out.tilde_lambdas;
    out.value = std::clamp(l[0] - l[1] - l[2] - l[3], 0.0, 1.0);
    return out;
}

GroundState ground_state(const EigenDecomposition& decomposition, std::span<const std::size_t> dims,
                         std::span<const std::size_t> keep) {
    const IndexRange level = decomposition.ground_level();
    GroundState g;
    g.energy = decomposition.eigenvalues.front();
    g.gap = decomposition.dim() > 1 ? decomposition.eigenvalues[1] - decomposition.eigenvalues[0] : 0.0;
    g.multiplicity = level.size();
    g.degenerate = level.size() > 1;
    for (std::size_t k = level.begin; k < level.end; ++k) g.vectors.push_back(decomposition.vector(k));
    g.reduced = reduce_uniform_mixture(g.vectors, dims, keep);
    return g;
}

GroundState ground_state(const HermitianOperator& h, std::span<const std::size_t> dims,
                         std::span<const std::size_t> keep, const EighOptions& options) {
    return ground_state(eigh(h, options), dims, keep);
}

ConcurrenceResult ac_concurrence(const GroundState& ground) {
    ConcurrenceResult r = concurrence(*ground.reduced);
    r.degenerate_ground = ground.degenerate;
    return r;
}

ConcurrenceResult ground_state_ac_concurrence(const HermitianOperator& h, const TripartiteDims& dims,
                                              const EighOptions& options) {
    if (dims.a != 2 || dims.c != 2) throw DimensionError("ground_state_ac_concurrence: A and C must be qubits");
    if (dims.total() != h.dim()) throw DimensionError("ground_state_ac_concurrence: dims do not match the Hamiltonian");
    const auto d = dims.as_array();
    const std::array<std::size_t, 2> keep{0, 2};
    return ac_concurrence(ground_state(h, d, keep, options));
}

} // namespace medent
