#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "matrix.hpp"

namespace zitterkit {

namespace detail {

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& a) {
    Eigen::MatrixXcd m(a.dim(), a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
    return m;
}

inline ComplexMatrix from_eigen(const Eigen::MatrixXcd& m) {
    ComplexMatrix a(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
    return a;
}

inline double condition_estimate(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    const double smax = svd.singularValues()(0);
    if (smin <= 0.0)
        return std::numeric_limits<double>::infinity();
    return smax / smin;
}

/// Rotate the global phase so the largest-magnitude component is real
/// positive. Ties within 1e-12 resolve to the lowest index.
inline void phase_fix(Eigen::VectorXcd& v) {
    Eigen::Index pick = 0;
    double best = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double m = std::abs(v(i));
        if (m > best + 1e-12) {
            best = m;
            pick = i;
        }
    }
    if (best > 0.0)
        v *= std::conj(v(pick)) / best;
}

/// Orthonormal basis of the column space of p, extracted by pivoted
/// modified Gram-Schmidt. Pivot order (largest remaining norm, lowest index
/// on ties) makes the basis canonical given p.
inline std::vector<Eigen::VectorXcd> pivoted_column_basis(const Eigen::MatrixXcd& p,
                                                          std::size_t rank) {
    std::vector<Eigen::VectorXcd> cols;
    cols.reserve(static_cast<std::size_t>(p.cols()));
    for (Eigen::Index j = 0; j < p.cols(); ++j)
        cols.push_back(p.col(j));

    std::vector<Eigen::VectorXcd> basis;
    double first_pivot = 0.0;
    for (std::size_t step = 0; step < rank; ++step) {
        std::size_t pick = 0;
        double best = -1.0;
        for (std::size_t j = 0; j < cols.size(); ++j) {
            const double n = cols[j].norm();
            if (n > best + 1e-14) {
                best = n;
                pick = j;
            }
        }
        if (step == 0)
            first_pivot = best;
        if (best <= 1e-10 * std::max(1.0, first_pivot))
            throw NumericalError("pivoted_column_basis: rank deficiency, matrix appears defective",
                                 first_pivot > 0.0 ? first_pivot / std::max(best, 1e-300) : 0.0);
        Eigen::VectorXcd q = cols[pick] / best;
        phase_fix(q);
        for (auto& c : cols)
            c -= q * (q.adjoint() * c)(0, 0);
        basis.push_back(std::move(q));
    }
    return basis;
}

} // namespace detail

/// Result of a full (right-) eigendecomposition: a * vectors = vectors * diag(values).
/// Eigenpairs are sorted by descending real part, ties by descending imaginary
/// part. Within each degenerate eigenspace the returned vectors form a
/// canonical orthonormal basis built from the spectral projector.
struct EigDecomposition {
    std::vector<cplx> values;
    ComplexMatrix vectors;
    ComplexMatrix vectors_inverse;
    double vector_condition = 0.0;
};

inline EigDecomposition eig_decompose(const ComplexMatrix& a, double condition_limit = 1e12) {
    if (!a.is_finite())
        throw std::invalid_argument("eig_decompose: matrix has non-finite entries");
    const std::size_t n = a.dim();
    const Eigen::MatrixXcd m = detail::to_eigen(a);

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eig_decompose: eigensolver did not converge");

    const double raw_cond = detail::condition_estimate(solver.eigenvectors());
    if (!(raw_cond < condition_limit))
        throw NumericalError("eig_decompose: eigenvector matrix condition above threshold, "
                             "matrix appears defective",
                             raw_cond);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    const auto& lam = solver.eigenvalues();
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        const cplx li = lam(static_cast<Eigen::Index>(i));
        const cplx lj = lam(static_cast<Eigen::Index>(j));
        if (li.real() != lj.real())
            return li.real() > lj.real();
        return li.imag() > lj.imag();
    });

    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        scale = std::max(scale, std::abs(lam(static_cast<Eigen::Index>(i))));
    const double cluster_tol = 1e-9 * scale;

    const Eigen::MatrixXcd& v0 = solver.eigenvectors();
    const Eigen::MatrixXcd v0_inv = v0.inverse();

    EigDecomposition out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n);

    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && std::abs(lam(static_cast<Eigen::Index>(order[end])) -
                                   lam(static_cast<Eigen::Index>(order[end - 1]))) <= cluster_tol)
            ++end;

        // Spectral projector of the cluster; its column space is the
        // eigenspace even when the raw eigenvector basis is oblique.
        Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n),
                                                       static_cast<Eigen::Index>(n));
        for (std::size_t k = start; k < end; ++k) {
            const auto idx = static_cast<Eigen::Index>(order[k]);
            proj += v0.col(idx) * v0_inv.row(idx);
        }
        const auto basis = detail::pivoted_column_basis(proj, end - start);

        for (std::size_t k = start; k < end; ++k) {
            out.values[k] = lam(static_cast<Eigen::Index>(order[k]));
            for (std::size_t i = 0; i < n; ++i)
                out.vectors(i, k) = basis[k - start](static_cast<Eigen::Index>(i));
        }
        start = end;
    }

    const Eigen::MatrixXcd v = detail::to_eigen(out.vectors);
    out.vector_condition = detail::condition_estimate(v);
    if (!(out.vector_condition < condition_limit))
        throw NumericalError("eig_decompose: canonical eigenvector matrix ill-conditioned",
                             out.vector_condition);
    out.vectors_inverse = detail::from_eigen(v.inverse());
    return out;
}

/// vectors * diag(fn(values)) * vectors^{-1}
inline ComplexMatrix spectral_apply(const EigDecomposition& eig,
                                    const std::function<cplx(cplx)>& fn) {
    const std::size_t n = eig.values.size();
    ComplexMatrix scaled(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx f = fn(eig.values[i]);
        for (std::size_t r = 0; r < n; ++r)
            scaled(r, i) = eig.vectors(r, i) * f;
    }
    return scaled * eig.vectors_inverse;
}

namespace detail {

/// Scaling-and-squaring with a diagonal Pade approximant. Used when the
/// eigenbasis is too ill-conditioned for the spectral route.
inline ComplexMatrix mat_exp_pade(const ComplexMatrix& m) {
    const std::size_t n = m.dim();

    double norm = 0.0; // max absolute row sum
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            row += std::abs(m(i, j));
        norm = std::max(norm, row);
    }

    int squarings = 0;
    double scaled = norm;
    while (scaled > 0.5 && squarings < 64) {
        scaled *= 0.5;
        ++squarings;
    }
    if (scaled > 0.5)
        throw NumericalError("mat_exp: norm too large to scale", norm);

    ComplexMatrix x = m * (1.0 / std::pow(2.0, squarings));

    // [6/6] Pade: exp(x) ~ q(-x)^{-1} q(x), q(x) = sum b_k x^k
    static constexpr double b[7] = {1.0, 0.5, 3.0 / 28.0, 1.0 / 84.0,
                                    1.0 / 1008.0, 1.0 / 20160.0, 1.0 / 665280.0};
    const ComplexMatrix ident = ComplexMatrix::identity(n);
    ComplexMatrix x2 = x * x;
    ComplexMatrix x4 = x2 * x2;
    ComplexMatrix x6 = x4 * x2;
    ComplexMatrix even = ident * b[0] + x2 * b[2] + x4 * b[4] + x6 * b[6];
    ComplexMatrix odd = (ident * b[1] + x2 * b[3] + x4 * b[5]) * x;

    const Eigen::MatrixXcd numer = to_eigen(even + odd);
    const Eigen::MatrixXcd denom = to_eigen(even - odd);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(denom);
    ComplexMatrix r = from_eigen(lu.solve(numer));

    for (int s = 0; s < squarings; ++s)
        r = r * r;
    if (!r.is_finite())
        throw NumericalError("mat_exp: scaling-and-squaring produced non-finite entries", norm);
    return r;
}

} // namespace detail

/// exp(scale * a). Spectral route when the eigenbasis is well conditioned
/// (condition < 1e6), scaling-and-squaring otherwise.
inline ComplexMatrix mat_exp(const ComplexMatrix& a, cplx scale) {
    if (!a.is_finite())
        throw std::invalid_argument("mat_exp: matrix has non-finite entries");
    try {
        const EigDecomposition eig = eig_decompose(a, 1e6);
        return spectral_apply(eig, [scale](cplx lam) { return std::exp(scale * lam); });
    } catch (const NumericalError&) {
        return detail::mat_exp_pade(a * scale);
    }
}

/// Numeric inverse. Kept as a cross-check against closed-form inverses.
inline ComplexMatrix inverse(const ComplexMatrix& a) {
    const Eigen::MatrixXcd m = detail::to_eigen(a);
    const double cond = detail::condition_estimate(m);
    if (!(cond < 1e14))
        throw NumericalError("inverse: matrix is singular to working precision", cond);
    return detail::from_eigen(m.inverse());
}

/// Relative threshold below which an eigenvalue counts as a null mode.
inline constexpr double null_mode_rel_tol = 1e-9;

/// Inverse on the physical subspace: null modes (|lambda| below the relative
/// threshold) are excluded instead of inverted.
inline ComplexMatrix physical_inverse(const EigDecomposition& eig) {
    double scale = 1.0;
    for (const cplx& l : eig.values)
        scale = std::max(scale, std::abs(l));
    const double cut = null_mode_rel_tol * scale;
    return spectral_apply(eig, [cut](cplx lam) {
        return std::abs(lam) > cut ? 1.0 / lam : cplx{0.0, 0.0};
    });
}

inline ComplexMatrix physical_inverse(const ComplexMatrix& h) {
    return physical_inverse(eig_decompose(h));
}

/// Projector onto the non-null part of the spectrum.
inline ComplexMatrix physical_projector(const EigDecomposition& eig) {
    double scale = 1.0;
    for (const cplx& l : eig.values)
        scale = std::max(scale, std::abs(l));
    const double cut = null_mode_rel_tol * scale;
    return spectral_apply(eig, [cut](cplx lam) {
        return std::abs(lam) > cut ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
    });
}

} // namespace zitterkit
