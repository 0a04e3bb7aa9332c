#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "matrix.hpp"
#include "momentum.hpp"

namespace zitterkit {

/// The 2x2 Pauli matrices rho_1, rho_2, rho_3 (1-based index).
inline ComplexMatrix pauli(int i) {
    const cplx o{1.0, 0.0}, im{0.0, 1.0};
    switch (i) {
    case 1: return {{0.0, o}, {o, 0.0}};
    case 2: return {{0.0, -im}, {im, 0.0}};
    case 3: return {{o, 0.0}, {0.0, -o}};
    default: throw std::invalid_argument("pauli: index must be 1, 2 or 3");
    }
}

/// The 3x3 spin-1 matrices, (S_i)_{jk} = -i e_{ijk}.
inline ComplexMatrix spin1(int i) {
    if (i < 1 || i > 3)
        throw std::invalid_argument("spin1: index must be 1, 2 or 3");
    ComplexMatrix s(3);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            // e_{ijk} with 1-based i
            const int a = i - 1;
            int eps = 0;
            if (a != j && a != k && j != k)
                eps = ((j - a + 3) % 3 == 1) ? 1 : -1;
            s(static_cast<std::size_t>(j), static_cast<std::size_t>(k)) =
                cplx{0.0, -1.0} * static_cast<double>(eps);
        }
    return s;
}

// ---- Dirac representation -------------------------------------------------

inline ComplexMatrix dirac_beta() { return kron(pauli(3), ComplexMatrix::identity(2)); }

inline ComplexMatrix dirac_alpha(int i) { return kron(pauli(1), pauli(i)); }

inline ComplexMatrix dirac_gamma(int i) { return dirac_beta() * dirac_alpha(i); }

/// Sigma_i = diag(sigma_i, sigma_i); polarization operator on 4 components.
inline ComplexMatrix dirac_sigma(int i) { return kron(ComplexMatrix::identity(2), pauli(i)); }

struct DiracMatrices {
    std::array<ComplexMatrix, 3> alpha;
    ComplexMatrix beta;
    std::array<ComplexMatrix, 3> gamma;
};

inline DiracMatrices dirac_matrices() {
    return DiracMatrices{{dirac_alpha(1), dirac_alpha(2), dirac_alpha(3)},
                         dirac_beta(),
                         {dirac_gamma(1), dirac_gamma(2), dirac_gamma(3)}};
}

// ---- six-component photon matrices ----------------------------------------

inline ComplexMatrix photon_alpha(int i) { return kron(pauli(1), spin1(i)); }

inline ComplexMatrix photon_beta() { return kron(pauli(3), ComplexMatrix::identity(3)); }

inline ComplexMatrix photon_sigma(int i) { return kron(ComplexMatrix::identity(2), spin1(i)); }

// ---- general spin ----------------------------------------------------------

/// Angular-momentum matrices for arbitrary half-integer spin s, built from
/// the standard ladder form: S3 = diag(s, s-1, ..., -s),
/// (S+)_{m+1,m} = sqrt(s(s+1) - m(m+1)). For s = 1/2 this reproduces
/// pauli(i)/2 exactly. Note the s = 1 triple is unitarily equivalent to,
/// but not identical with, spin1(i); spin1() stays the canonical choice
/// wherever the photon matrices are assembled.
inline std::array<ComplexMatrix, 3> spin_matrices(double s) {
    const double two_s = 2.0 * s;
    if (s < 0.0 || std::abs(two_s - std::round(two_s)) > 1e-12)
        throw std::invalid_argument("spin_matrices: spin must be a non-negative half-integer");
    const std::size_t n = static_cast<std::size_t>(std::lround(two_s)) + 1;

    ComplexMatrix s3(n), splus(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double m = s - static_cast<double>(k);
        s3(k, k) = m;
        if (k > 0)
            splus(k - 1, k) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
    }
    const ComplexMatrix sminus = splus.adjoint();
    return {(splus + sminus) * 0.5, (splus - sminus) * cplx{0.0, -0.5}, s3};
}

// ---- identity checks -------------------------------------------------------

/// Residuals for the three defining spin-matrix identities:
///   [S_i, S_j] = i e_{ijk} S_k
///   S_i S_j S_k + S_k S_j S_i = d_{ij} S_k + d_{jk} S_i
///   S^2 = 2 I
/// The last one singles out spin 1; scaled Pauli matrices pass the first
/// two and fail it.
struct SpinPropertyReport {
    double commutation_residual = 0.0;
    double triple_product_residual = 0.0;
    double square_residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;

    double max_residual() const {
        return std::max({commutation_residual, triple_product_residual, square_residual});
    }

    std::string worst_identity() const {
        if (commutation_residual >= triple_product_residual &&
            commutation_residual >= square_residual)
            return "commutation [S_i,S_j] = i e_ijk S_k";
        if (triple_product_residual >= square_residual)
            return "triple product S_i S_j S_k + S_k S_j S_i = d_ij S_k + d_jk S_i";
        return "square S^2 = 2 I";
    }
};

inline SpinPropertyReport check_spin_properties(const std::array<ComplexMatrix, 3>& s,
                                                double tol = default_tolerance) {
    const std::size_t n = s[0].dim();
    if (s[1].dim() != n || s[2].dim() != n)
        throw std::invalid_argument("check_spin_properties: matrices must share a dimension");

    const auto eps = [](int i, int j, int k) -> double {
        if (i == j || j == k || i == k)
            return 0.0;
        return ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;
    };

    SpinPropertyReport rep;
    rep.tolerance = tol;

    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            ComplexMatrix rhs(n);
            for (int k = 0; k < 3; ++k)
                rhs += s[static_cast<std::size_t>(k)] * cplx{0.0, eps(i, j, k)};
            rep.commutation_residual = std::max(
                rep.commutation_residual,
                max_abs_diff(commutator(s[static_cast<std::size_t>(i)],
                                        s[static_cast<std::size_t>(j)]),
                             rhs));
        }

    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                const auto& si = s[static_cast<std::size_t>(i)];
                const auto& sj = s[static_cast<std::size_t>(j)];
                const auto& sk = s[static_cast<std::size_t>(k)];
                ComplexMatrix rhs(n);
                if (i == j)
                    rhs += sk;
                if (j == k)
                    rhs += si;
                rep.triple_product_residual = std::max(
                    rep.triple_product_residual,
                    max_abs_diff(si * sj * sk + sk * sj * si, rhs));
            }

    const ComplexMatrix sq = s[0] * s[0] + s[1] * s[1] + s[2] * s[2];
    rep.square_residual = max_abs_diff(sq, ComplexMatrix::identity(n) * 2.0);

    rep.passed = rep.max_residual() <= tol;
    return rep;
}

/// (S . p) / |p|. Undefined at zero momentum.
inline ComplexMatrix helicity_matrix(const std::array<ComplexMatrix, 3>& s, const Momentum& p) {
    const double pn = p.norm();
    if (!(pn > 0.0))
        throw std::invalid_argument("helicity_matrix: momentum must be nonzero");
    return (s[0] * p.px + s[1] * p.py + s[2] * p.pz) * (1.0 / pn);
}

} // namespace zitterkit
