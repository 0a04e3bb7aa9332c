#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "matrix.hpp"
#include "momentum.hpp"
#include "representations.hpp"
#include "spin.hpp"

namespace zitterkit {

/// A representation-changing operator together with its exact closed-form
/// inverse and the metric of its (pseudo)unitarity statement. `domain`
/// is the projector onto the subspace where the transform's contracts
/// hold: the identity everywhere except for the photon, whose operator is
/// unitary only transversally.
struct TransformOp {
    RepSpec source;
    RepSpec target;
    Momentum p;
    ComplexMatrix u;
    ComplexMatrix u_inverse;
    Metric metric = Metric::identity(0);
    ComplexMatrix domain;

    /// || domain (g u^dag g u - I) domain ||_max
    double pseudounitarity_residual() const {
        const ComplexMatrix dev =
            pseudo_adjoint(u, metric) * u - ComplexMatrix::identity(u.dim());
        return (domain * dev * domain).max_abs();
    }

    /// || domain (u u_inv - I) domain ||_max
    double inverse_residual() const {
        const ComplexMatrix dev = u * u_inverse - ComplexMatrix::identity(u.dim());
        return (domain * dev * domain).max_abs();
    }
};

/// Exact transform diagonalizing the massless Dirac Hamiltonian:
/// U = (p + gamma . p) / (sqrt(2) p), unitary, U (alpha . p) U^dag = beta p.
inline TransformOp fw_massless_dirac(const Momentum& p) {
    const double pn = p.norm();
    if (!(pn > 0.0))
        throw std::invalid_argument("fw_massless_dirac: momentum must be nonzero");

    const ComplexMatrix gp =
        dirac_gamma(1) * p.px + dirac_gamma(2) * p.py + dirac_gamma(3) * p.pz;
    const ComplexMatrix ident = ComplexMatrix::identity(4);
    const double s = 1.0 / (std::sqrt(2.0) * pn);

    TransformOp t;
    t.source = RepSpec::dirac(0.0);
    t.target = RepSpec::foldy_wouthuysen(0.0, 0.5);
    t.p = p;
    t.u = (ident * pn + gp) * s;
    t.u_inverse = (ident * pn - gp) * s; // gamma . p is anti-Hermitian, so this is U^dag
    t.metric = Metric::identity(4);
    t.domain = ident;
    return t;
}

/// Six-component analogue for the photon: U = (p + beta alpha . p) / (sqrt(2) p).
/// Inverse and unitarity hold on the transversal subspace; longitudinal
/// residuals are reported through `domain`, not asserted.
inline TransformOp fw_photon(const Momentum& p) {
    const double pn = p.norm();
    if (!(pn > 0.0))
        throw std::invalid_argument("fw_photon: momentum must be nonzero");

    const ComplexMatrix beta = photon_beta();
    const ComplexMatrix bap =
        beta * (photon_alpha(1) * p.px + photon_alpha(2) * p.py + photon_alpha(3) * p.pz);
    const ComplexMatrix ident = ComplexMatrix::identity(6);
    const double s = 1.0 / (std::sqrt(2.0) * pn);

    TransformOp t;
    t.source = RepSpec::photon();
    t.target = RepSpec::foldy_wouthuysen(0.0, 1.0);
    t.p = p;
    t.u = (ident * pn + bap) * s;
    t.u_inverse = (ident * pn - bap) * s;
    t.metric = Metric::identity(6);
    t.domain = photon_transversality_projector(p);
    return t;
}

/// The exact GFV -> FW operator
///   U = (eps + N + rho1 (eps - N)) / (2 sqrt(eps N)),  eps = sqrt(m^2 + p^2),
/// extended by I_{2s+1}. It is rho3-pseudounitary and its inverse is the
/// printed closed form with the rho1 sign flipped. N must be positive for
/// sqrt(eps N) to stay real.
inline TransformOp gfv_to_fw(double mass, double n, const Momentum& p, double spin) {
    if (!(n > 0.0))
        throw std::invalid_argument("gfv_to_fw: N must be positive");
    const RepSpec source = RepSpec::generalized_fv(mass, spin, n);
    validate_momentum(source, p);

    const double eps = energy(source, p);
    const double denom = 2.0 * std::sqrt(eps * n);
    const ComplexMatrix ident2 = ComplexMatrix::identity(2);
    const ComplexMatrix core_fwd = (ident2 * (eps + n) + pauli(1) * (eps - n)) * (1.0 / denom);
    const ComplexMatrix core_inv = (ident2 * (eps + n) - pauli(1) * (eps - n)) * (1.0 / denom);
    const ComplexMatrix block = ComplexMatrix::identity(source.spin_block());

    TransformOp t;
    t.source = source;
    t.target = RepSpec::foldy_wouthuysen(mass, spin);
    t.p = p;
    t.u = kron(core_fwd, block);
    t.u_inverse = kron(core_inv, block);
    t.metric = Metric::rho3_blocks(source.spin_block());
    t.domain = ComplexMatrix::identity(source.dim());
    return t;
}

/// U a U^{-1}, with the closed-form inverse (equal to the pseudo-adjoint
/// when the metric is indefinite).
inline ComplexMatrix apply_similarity(const TransformOp& t, const ComplexMatrix& a) {
    if (a.dim() != t.u.dim())
        throw std::invalid_argument("apply_similarity: dimension mismatch");
    return t.u * a * t.u_inverse;
}

/// Image of a pure-branch source state under the transform. The positive
/// branch lands in the upper spin block, the negative branch in the lower
/// one; mixed-branch input is rejected.
inline ComplexVector fw_wavefunction(const TransformOp& t, const ComplexVector& source_state,
                                     int branch_sign) {
    if (branch_sign != +1 && branch_sign != -1)
        throw std::invalid_argument("fw_wavefunction: branch sign must be +1 or -1");
    if (source_state.size() != t.u.dim())
        throw std::invalid_argument("fw_wavefunction: dimension mismatch");

    ComplexVector image = t.u * source_state;
    const std::size_t half = image.size() / 2;

    double expected = 0.0, spurious = 0.0;
    for (std::size_t i = 0; i < image.size(); ++i) {
        const bool upper = i < half;
        const double m = std::abs(image[i]);
        if ((branch_sign > 0) == upper)
            expected = std::max(expected, m);
        else
            spurious = std::max(spurious, m);
    }
    if (spurious > 1e-8 * std::max(expected, 1e-300))
        throw std::invalid_argument(
            "fw_wavefunction: source state is not a pure branch state for the requested sign");
    return image;
}

} // namespace zitterkit
