#include "medent/perturbation.hpp"

#include <algorithm>
#include <cmath>

#include "medent/errors.hpp"
#include "medent/qubits.hpp"

namespace medent::perturbation {

namespace {

void fix_phase(ComplexVector& v, const ComplexVector& reference) {
    const cplx ov = inner(reference, v);
    if (std::abs(ov) < 1e-12) return;
    const cplx phase = std::conj(ov) / std::abs(ov);
    for (auto& z : v) z *= phase;
}

} // namespace

DegeneratePT degenerate_pt2(const HermitianOperator& h0, const HermitianOperator& v,
                            std::span<const std::size_t> subspace, const ComplexVector* reference,
                            const DegeneratePTOptions& options) {
    const std::size_t n = h0.dim();
    if (v.dim() != n) throw DimensionError("degenerate_pt2: h0 and v differ in dimension");
    if (reference && reference->size() != n) throw DimensionError("degenerate_pt2: reference has the wrong length");
    if (subspace.empty()) throw PreconditionError("degenerate_pt2: empty subspace");

    const auto dec = eigh(h0, options.eigh);
    const auto& e = dec.eigenvalues;
    std::vector<bool> inside(n, false);
    for (std::size_t k : subspace) {
        if (k >= n) throw PreconditionError("degenerate_pt2: subspace index out of range");
        if (inside[k]) throw PreconditionError("degenerate_pt2: repeated subspace index");
        inside[k] = true;
    }

    const double scale = std::max(1.0, e.back() - e.front());
    double e0 = 0.0;
    for (std::size_t k : subspace) e0 += e[k];
    e0 /= static_cast<double>(subspace.size());
    for (std::size_t k : subspace)
        if (std::abs(e[k] - e0) > options.degeneracy_rel_tol * scale)
            throw PreconditionError("degenerate_pt2: subspace levels are not degenerate");

    const std::size_t m = subspace.size();
    std::vector<ComplexVector> basis;
    std::vector<ComplexVector> v_basis;
    for (std::size_t k : subspace) {
        basis.push_back(dec.vector(k));
        v_basis.push_back(v.matrix().apply(basis.back()));
    }

    // outside levels with their couplings to the subspace
    std::vector<std::size_t> outside;
    for (std::size_t k = 0; k < n; ++k) {
        if (inside[k]) continue;
        if (std::abs(e[k] - e0) < options.resonance_rel_tol * scale)
            throw NumericalError("degenerate_pt2: outside level resonant with the subspace");
        outside.push_back(k);
    }
    ComplexMatrix coupling(outside.size(), m); // <k|v|i>
    std::vector<ComplexVector> outside_vectors;
    for (std::size_t r = 0; r < outside.size(); ++r) {
        outside_vectors.push_back(dec.vector(outside[r]));
        for (std::size_t i = 0; i < m; ++i) coupling(r, i) = inner(outside_vectors[r], v_basis[i]);
    }

    ComplexMatrix heff(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            cplx w2 = 0.0;
            for (std::size_t r = 0; r < outside.size(); ++r)
                w2 += std::conj(coupling(r, i)) * coupling(r, j) / (e0 - e[outside[r]]);
            heff(i, j) = inner(basis[i], v_basis[j]) + w2;
        }
    for (std::size_t i = 0; i < m; ++i) {
        heff(i, i) = heff(i, i).real();
        for (std::size_t j = i + 1; j < m; ++j) {
            const cplx avg = 0.5 * (heff(i, j) + std::conj(heff(j, i)));
            heff(i, j) = avg;
            heff(j, i) = std::conj(avg);
        }
    }

    DegeneratePT out;
    out.unperturbed_energy = e0;
    out.effective_hamiltonian = heff;
    const auto inner_dec = eigh(HermitianOperator(heff), options.eigh);
    for (std::size_t s = 0; s < m; ++s) {
        out.energies.push_back(e0 + inner_dec.eigenvalues[s]);
        ComplexVector psi0(n);
        for (std::size_t i = 0; i < m; ++i) {
            const cplx u = inner_dec.eigenvectors(i, s);
            for (std::size_t x = 0; x < n; ++x) psi0[x] += u * basis[i][x];
        }
        if (reference) fix_phase(psi0, *reference);

        ComplexVector psi1(n);
        for (std::size_t r = 0; r < outside.size(); ++r) {
            cplx amp = 0.0;
            for (std::size_t i = 0; i < m; ++i) amp += coupling(r, i) * inner(basis[i], psi0);
            amp /= (e0 - e[outside[r]]);
            for (std::size_t x = 0; x < n; ++x) psi1[x] += amp * outside_vectors[r][x];
        }
        out.zeroth_order.push_back(std::move(psi0));
        out.first_order.push_back(std::move(psi1));
    }
    return out;
}

PerturbativeGroundState ising_pt_ground_state(double lam, double delta) {
    if (!std::isfinite(lam)) throw PreconditionError("ising_pt_ground_state: lam must be finite");
    if (!std::isfinite(delta) || delta < 0.0)
        throw PreconditionError("ising_pt_ground_state: delta must be finite and non-negative");

    const qubits::IsingParams base{.j_coupling = 1.0, .delta = 0.0, .lam = lam};
    const auto spectrum = qubits::analytic_ising_spectrum(qubits::ising_local_field(base));
    const HermitianOperator h0 = qubits::build_ising(base);

    PerturbativeGroundState out;
    out.g1 = spectrum.g1();
    out.g2 = spectrum.g2();
    if (delta > kPerturbativeDeltaLimit)
        out.warning = "delta above " + std::to_string(kPerturbativeDeltaLimit) + " is outside the perturbative regime";

    if (delta == 0.0) {
        out.degenerate = true;
        out.order = 0;
        out.energy = spectrum.pairs[1].energy;
        out.normalization = std::sqrt(2.0);
        out.amplitudes = ComplexVector(8);
        for (std::size_t x = 0; x < 8; ++x) out.amplitudes[x] = (out.g1[x] + out.g2[x]) / out.normalization;
        return out;
    }

    qubits::IsingParams full = base;
    full.delta = delta;
    const HermitianOperator v(qubits::build_ising(full).matrix() - h0.matrix());

    ComplexVector reference(8);
    for (std::size_t x = 0; x < 8; ++x) reference[x] = out.g1[x] + out.g2[x];
    const std::array<std::size_t, 2> level{0, 1};
    const auto pt = degenerate_pt2(h0, v, level, &reference);

    // rephase g2 so that psi0 = (g1 + g2)/sqrt(2) exactly
    const ComplexVector& psi0 = pt.zeroth_order.front();
    const cplx x1 = inner(out.g1, psi0), x2 = inner(out.g2, psi0);
    if (std::abs(x1) > 1e-12 && std::abs(x2) > 1e-12) {
        const cplx rot = (x2 / std::abs(x2)) / (x1 / std::abs(x1));
        for (auto& z : out.g2) z *= rot;
    }
    if (std::abs(x1) < 1e-12) throw NumericalError("ising_pt_ground_state: zeroth-order state misses g1");

    // first-order correction per unit delta, scaled so g1 has unit coefficient
    ComplexVector correction = pt.first_order.front();
    for (auto& z : correction) z /= x1 * delta;

    std::array<ComplexVector, 4> directions;
    {
        qubits::ProductEigenpair p;
        for (int j = 0; j < 4; ++j) {
            p.a = j < 2 ? 0 : 1;
            p.c = j < 2 ? 1 : 0;
            p.beta = spectrum.pairs[2 + static_cast<std::size_t>(j % 2)].beta;
            directions[static_cast<std::size_t>(j)] = p.state();
        }
    }
    for (std::size_t j = 0; j < 4; ++j) out.constants[j] = inner(directions[j], correction);

    ComplexVector state(8);
    for (std::size_t x = 0; x < 8; ++x) {
        state[x] = out.g1[x] + out.g2[x];
        for (std::size_t j = 0; j < 4; ++j) state[x] += delta * out.constants[j] * directions[j][x];
    }
    out.normalization = norm(state);
    for (auto& z : state) z /= out.normalization;
    out.amplitudes = std::move(state);
    out.energy = pt.energies.front();
    out.order = 2;
    return out;
}

} // namespace medent::perturbation
