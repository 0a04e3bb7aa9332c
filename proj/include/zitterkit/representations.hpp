#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eig.hpp"
#include "matrix.hpp"
#include "momentum.hpp"
#include "spin.hpp"

namespace zitterkit {

enum class RepKind {
    Dirac,
    FeshbachVillars,
    GeneralizedFV,
    DiracLikePhoton,
    FoldyWouthuysen,
};

inline const char* to_string(RepKind k) {
    switch (k) {
    case RepKind::Dirac: return "dirac";
    case RepKind::FeshbachVillars: return "feshbach-villars";
    case RepKind::GeneralizedFV: return "gfv";
    case RepKind::DiracLikePhoton: return "photon";
    case RepKind::FoldyWouthuysen: return "foldy-wouthuysen";
    }
    return "?";
}

/// Tagged description of a representation instance. Fixes the matrix
/// dimension, the metric, and which Hamiltonian gets built.
struct RepSpec {
    RepKind kind = RepKind::Dirac;
    double mass = 1.0;
    double spin = 0.5;
    double gfv_n = 1.0; // GeneralizedFV only

    static RepSpec dirac(double mass) {
        RepSpec r{RepKind::Dirac, mass, 0.5, 0.0};
        r.validate();
        return r;
    }

    static RepSpec feshbach_villars(double mass) {
        RepSpec r{RepKind::FeshbachVillars, mass, 0.0, 0.0};
        r.validate();
        return r;
    }

    static RepSpec generalized_fv(double mass, double spin, double n) {
        RepSpec r{RepKind::GeneralizedFV, mass, spin, n};
        r.validate();
        return r;
    }

    static RepSpec photon() {
        RepSpec r{RepKind::DiracLikePhoton, 0.0, 1.0, 0.0};
        r.validate();
        return r;
    }

    static RepSpec foldy_wouthuysen(double mass, double spin) {
        RepSpec r{RepKind::FoldyWouthuysen, mass, spin, 0.0};
        r.validate();
        return r;
    }

    /// Component count of one spin block.
    std::size_t spin_block() const {
        return static_cast<std::size_t>(std::lround(2.0 * spin)) + 1;
    }

    std::size_t dim() const {
        switch (kind) {
        case RepKind::Dirac: return 4;
        case RepKind::FeshbachVillars: return 2;
        case RepKind::GeneralizedFV: return 2 * spin_block();
        case RepKind::DiracLikePhoton: return 6;
        case RepKind::FoldyWouthuysen: return 2 * spin_block();
        }
        return 0;
    }

    void validate() const {
        if (!std::isfinite(mass) || mass < 0.0)
            throw std::invalid_argument("RepSpec: mass must be finite and >= 0");
        const double two_s = 2.0 * spin;
        if (spin < 0.0 || std::abs(two_s - std::round(two_s)) > 1e-12)
            throw std::invalid_argument("RepSpec: spin must be a non-negative half-integer");
        switch (kind) {
        case RepKind::Dirac:
            if (std::abs(spin - 0.5) > 1e-12)
                throw std::invalid_argument("RepSpec: the Dirac representation has spin 1/2");
            break;
        case RepKind::FeshbachVillars:
            if (!(mass > 0.0))
                throw std::invalid_argument(
                    "RepSpec: Feshbach-Villars requires mass > 0; use gfv for massless particles");
            if (spin != 0.0)
                throw std::invalid_argument("RepSpec: Feshbach-Villars describes spin 0");
            break;
        case RepKind::GeneralizedFV:
            if (!std::isfinite(gfv_n) || gfv_n == 0.0)
                throw std::invalid_argument("RepSpec: N must be nonzero");
            break;
        case RepKind::DiracLikePhoton:
            if (mass != 0.0)
                throw std::invalid_argument("RepSpec: the photon is massless");
            if (std::abs(spin - 1.0) > 1e-12)
                throw std::invalid_argument("RepSpec: the photon has spin 1");
            break;
        case RepKind::FoldyWouthuysen:
            break;
        }
    }
};

/// epsilon = sqrt(m^2 + p^2)
inline double energy(const RepSpec& rep, const Momentum& p) {
    return std::sqrt(rep.mass * rep.mass + p.norm_sq());
}

/// Positive/negative total-energy label with eigenvalue +-sqrt(m^2 + p^2).
struct EnergyBranch {
    int sign = +1;
    double value = 0.0;

    static EnergyBranch positive(const RepSpec& rep, const Momentum& p) {
        return {+1, energy(rep, p)};
    }
    static EnergyBranch negative(const RepSpec& rep, const Momentum& p) {
        return {-1, -energy(rep, p)};
    }
};

inline void validate_momentum(const RepSpec& rep, const Momentum& p) {
    if (!p.is_finite())
        throw std::invalid_argument("Momentum: components must be finite");
    if (rep.mass == 0.0 && !(p.norm() > 0.0))
        throw std::invalid_argument("Momentum: a massless state needs |p| > 0");
}

namespace detail {

/// 2x2 core of the GFV Hamiltonian; the spin structure enters only through
/// a Kronecker factor I_{2s+1}.
inline ComplexMatrix gfv_core(double mass, double n, const Momentum& p) {
    const double w = p.norm_sq() + mass * mass;
    return pauli(3) * ((w + n * n) / (2.0 * n)) +
           pauli(2) * cplx{0.0, 1.0} * ((w - n * n) / (2.0 * n));
}

} // namespace detail

inline ComplexMatrix hamiltonian(const RepSpec& rep, const Momentum& p) {
    rep.validate();
    validate_momentum(rep, p);
    switch (rep.kind) {
    case RepKind::Dirac:
        return dirac_beta() * rep.mass + dirac_alpha(1) * p.px + dirac_alpha(2) * p.py +
               dirac_alpha(3) * p.pz;
    case RepKind::FeshbachVillars:
        return pauli(3) * rep.mass +
               (pauli(3) + pauli(2) * cplx{0.0, 1.0}) * (p.norm_sq() / (2.0 * rep.mass));
    case RepKind::GeneralizedFV:
        return kron(detail::gfv_core(rep.mass, rep.gfv_n, p),
                    ComplexMatrix::identity(rep.spin_block()));
    case RepKind::DiracLikePhoton:
        return photon_alpha(1) * p.px + photon_alpha(2) * p.py + photon_alpha(3) * p.pz;
    case RepKind::FoldyWouthuysen:
        return kron(pauli(3), ComplexMatrix::identity(rep.spin_block())) * energy(rep, p);
    }
    throw std::invalid_argument("hamiltonian: unknown representation");
}

/// Component i of the velocity operator, realized as dH/dp_i. For every
/// catalogued Hamiltonian this agrees with i[H, r_i].
inline std::array<ComplexMatrix, 3> velocity_operator(const RepSpec& rep, const Momentum& p) {
    rep.validate();
    validate_momentum(rep, p);
    switch (rep.kind) {
    case RepKind::Dirac:
        return {dirac_alpha(1), dirac_alpha(2), dirac_alpha(3)};
    case RepKind::FeshbachVillars: {
        const ComplexMatrix a = pauli(3) + pauli(2) * cplx{0.0, 1.0};
        const double s = 1.0 / rep.mass;
        return {a * (p.px * s), a * (p.py * s), a * (p.pz * s)};
    }
    case RepKind::GeneralizedFV: {
        const ComplexMatrix a = kron(pauli(3) + pauli(2) * cplx{0.0, 1.0},
                                     ComplexMatrix::identity(rep.spin_block()));
        const double s = 1.0 / rep.gfv_n;
        return {a * (p.px * s), a * (p.py * s), a * (p.pz * s)};
    }
    case RepKind::DiracLikePhoton:
        return {photon_alpha(1), photon_alpha(2), photon_alpha(3)};
    case RepKind::FoldyWouthuysen: {
        const ComplexMatrix b = kron(pauli(3), ComplexMatrix::identity(rep.spin_block()));
        const double s = 1.0 / energy(rep, p);
        return {b * (p.px * s), b * (p.py * s), b * (p.pz * s)};
    }
    }
    throw std::invalid_argument("velocity_operator: unknown representation");
}

inline Metric rep_metric(const RepSpec& rep) {
    rep.validate();
    switch (rep.kind) {
    case RepKind::FeshbachVillars:
    case RepKind::GeneralizedFV:
        return Metric::rho3_blocks(rep.spin_block());
    default:
        return Metric::identity(rep.dim());
    }
}

/// 3x3 projector I - p_hat p_hat^T. Idempotent, rank 2.
inline ComplexMatrix transversality_projector(const Momentum& p) {
    const double pn2 = p.norm_sq();
    if (!(pn2 > 0.0))
        throw std::invalid_argument("transversality_projector: momentum must be nonzero");
    const double c[3] = {p.px, p.py, p.pz};
    ComplexMatrix t = ComplexMatrix::identity(3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            t(i, j) -= c[i] * c[j] / pn2;
    return t;
}

/// 6x6 variant acting blockwise on (phi, chi).
inline ComplexMatrix photon_transversality_projector(const Momentum& p) {
    return kron(ComplexMatrix::identity(2), transversality_projector(p));
}

/// i[H, v_i]. The construction is cross-checked against the algebraic form
/// 2i(p_i - v_i H), which for the photon holds on the transversal subspace.
inline std::array<ComplexMatrix, 3> acceleration_operator(const RepSpec& rep, const Momentum& p) {
    const ComplexMatrix h = hamiltonian(rep, p);
    const auto v = velocity_operator(rep, p);
    const ComplexMatrix ident = ComplexMatrix::identity(rep.dim());
    const bool transversal_only = rep.kind == RepKind::DiracLikePhoton;
    const ComplexMatrix proj =
        transversal_only ? photon_transversality_projector(p) : ident;

    std::array<ComplexMatrix, 3> acc{ComplexMatrix(rep.dim()), ComplexMatrix(rep.dim()),
                                     ComplexMatrix(rep.dim())};
    for (int i = 0; i < 3; ++i) {
        const auto& vi = v[static_cast<std::size_t>(i)];
        acc[static_cast<std::size_t>(i)] = commutator(h, vi) * cplx{0.0, 1.0};

        ComplexMatrix mismatch = anticommutator(vi, h) - ident * (2.0 * p[i + 1]);
        if (transversal_only)
            mismatch = proj * mismatch * proj;
        const double scale = std::max(1.0, h.max_abs());
        if (mismatch.max_abs() > 1e-9 * scale)
            throw NumericalError("acceleration_operator: {v, H} = 2p identity violated",
                                 mismatch.max_abs());
    }
    return acc;
}

// ---- energy-branch structure ----------------------------------------------

/// Spectral projectors onto the positive/negative energy subspaces.
/// Built from left/right eigenvector pairs, so they are correct (if
/// oblique) for the pseudo-Hermitian representations too. Null modes of the
/// photon Hamiltonian belong to neither projector.
inline std::pair<ComplexMatrix, ComplexMatrix> branch_projectors(const RepSpec& rep,
                                                                 const Momentum& p) {
    const EigDecomposition eig = eig_decompose(hamiltonian(rep, p));
    double scale = 1.0;
    for (const cplx& l : eig.values)
        scale = std::max(scale, std::abs(l));
    const double cut = null_mode_rel_tol * scale;
    ComplexMatrix plus = spectral_apply(eig, [cut](cplx lam) {
        return lam.real() > cut ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
    });
    ComplexMatrix minus = spectral_apply(eig, [cut](cplx lam) {
        return lam.real() < -cut ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
    });
    return {std::move(plus), std::move(minus)};
}

/// Canonical orthonormal basis of one energy branch: the pivoted column
/// basis of its spectral projector. Deterministic, phase-fixed.
inline std::vector<ComplexVector> branch_basis(const RepSpec& rep, const Momentum& p, int sign) {
    if (sign != +1 && sign != -1)
        throw std::invalid_argument("branch_basis: sign must be +1 or -1");
    const auto [plus, minus] = branch_projectors(rep, p);
    const ComplexMatrix& proj = (sign > 0) ? plus : minus;

    // rank of a projector = trace
    const double rank_f = proj.trace().real();
    const auto rank = static_cast<std::size_t>(std::lround(rank_f));
    if (rank == 0)
        throw NumericalError("branch_basis: branch subspace is empty");

    const auto basis = detail::pivoted_column_basis(detail::to_eigen(proj), rank);
    std::vector<ComplexVector> out;
    out.reserve(rank);
    for (const auto& b : basis) {
        ComplexVector v(static_cast<std::size_t>(b.size()));
        for (Eigen::Index i = 0; i < b.size(); ++i)
            v[static_cast<std::size_t>(i)] = b(i);
        out.push_back(std::move(v));
    }
    return out;
}

inline ComplexVector branch_vector(const RepSpec& rep, const Momentum& p, int sign) {
    return branch_basis(rep, p, sign).front();
}

} // namespace zitterkit
