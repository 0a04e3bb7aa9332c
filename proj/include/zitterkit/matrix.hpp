#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace zitterkit {

using cplx = std::complex<double>;

/// Default max-entry tolerance for matrix equality checks.
inline constexpr double default_tolerance = 1e-10;

/// Thrown when a numerical routine fails (non-convergent series,
/// ill-conditioned eigenbasis, indefinite-norm state, ...).
/// Carries a condition estimate where one is available.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, double condition_estimate = 0.0)
        : std::runtime_error(what), condition_estimate_(condition_estimate) {}

    double condition_estimate() const noexcept { return condition_estimate_; }

private:
    double condition_estimate_;
};

/// Square dense complex matrix with value semantics. Row-major storage.
/// All operators here act on a handful of rows (dim <= ~12), so everything
/// is written for clarity rather than throughput.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    explicit ComplexMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, cplx{0.0, 0.0}) {}

    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
        dim_ = rows.size();
        a_.assign(dim_ * dim_, cplx{0.0, 0.0});
        std::size_t r = 0;
        for (const auto& row : rows) {
            if (row.size() != dim_)
                throw std::invalid_argument("ComplexMatrix: initializer rows must be square");
            std::size_t c = 0;
            for (const auto& v : row)
                a_[r * dim_ + c++] = v;
            ++r;
        }
    }

    static ComplexMatrix zero(std::size_t dim) { return ComplexMatrix(dim); }

    static ComplexMatrix identity(std::size_t dim) {
        ComplexMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i)
            m(i, i) = 1.0;
        return m;
    }

    std::size_t dim() const noexcept { return dim_; }

    cplx& operator()(std::size_t r, std::size_t c) { return a_[r * dim_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return a_[r * dim_ + c]; }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_dim(o);
        for (std::size_t i = 0; i < a_.size(); ++i)
            a_[i] += o.a_[i];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_dim(o);
        for (std::size_t i = 0; i < a_.size(); ++i)
            a_[i] -= o.a_[i];
        return *this;
    }

    ComplexMatrix& operator*=(cplx s) {
        for (auto& v : a_)
            v *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= cplx{s, 0.0}; }
    friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= cplx{s, 0.0}; }

    friend ComplexMatrix operator-(const ComplexMatrix& a) {
        ComplexMatrix r(a.dim_);
        for (std::size_t i = 0; i < a.a_.size(); ++i)
            r.a_[i] = -a.a_[i];
        return r;
    }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        a.require_same_dim(b);
        const std::size_t n = a.dim_;
        ComplexMatrix r(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx{0.0, 0.0})
                    continue;
                for (std::size_t j = 0; j < n; ++j)
                    r(i, j) += aik * b(k, j);
            }
        return r;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix r(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix r(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                r(j, i) = (*this)(i, j);
        return r;
    }

    ComplexMatrix conjugate() const {
        ComplexMatrix r(dim_);
        for (std::size_t i = 0; i < a_.size(); ++i)
            r.a_[i] = std::conj(a_[i]);
        return r;
    }

    cplx trace() const {
        cplx t{0.0, 0.0};
        for (std::size_t i = 0; i < dim_; ++i)
            t += (*this)(i, i);
        return t;
    }

    /// Max-entry absolute value. The norm used by every equality check.
    double max_abs() const {
        double m = 0.0;
        for (const auto& v : a_)
            m = std::max(m, std::abs(v));
        return m;
    }

    bool is_finite() const {
        for (const auto& v : a_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                return false;
        return true;
    }

private:
    void require_same_dim(const ComplexMatrix& o) const {
        if (dim_ != o.dim_)
            throw std::invalid_argument("ComplexMatrix: dimension mismatch (" +
                                        std::to_string(dim_) + " vs " + std::to_string(o.dim_) + ")");
    }

    std::size_t dim_ = 0;
    std::vector<cplx> a_;
};

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    return (a - b).max_abs();
}

inline bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b,
                         double tol = default_tolerance) {
    return max_abs_diff(a, b) <= tol;
}

/// ab - ba
inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("commutator: dimension mismatch");
    return a * b - b * a;
}

/// ab + ba
inline ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("anticommutator: dimension mismatch");
    return a * b + b * a;
}

/// Kronecker product; dims multiply.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t na = a.dim(), nb = b.dim();
    ComplexMatrix r(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{0.0, 0.0})
                continue;
            for (std::size_t k = 0; k < nb; ++k)
                for (std::size_t l = 0; l < nb; ++l)
                    r(i * nb + k, j * nb + l) = aij * b(k, l);
        }
    return r;
}

/// Diagonal +/-1 metric for pseudo-Hermitian structure. Metric^2 = identity.
class Metric {
public:
    explicit Metric(std::vector<int> diagonal) : diag_(std::move(diagonal)) {
        for (int s : diag_)
            if (s != 1 && s != -1)
                throw std::invalid_argument("Metric: diagonal entries must be +1 or -1");
    }

    static Metric identity(std::size_t dim) { return Metric(std::vector<int>(dim, 1)); }

    /// diag(+1 x block, -1 x block): the rho3 (x) I_block metric.
    static Metric rho3_blocks(std::size_t block) {
        std::vector<int> d(2 * block, 1);
        for (std::size_t i = block; i < 2 * block; ++i)
            d[i] = -1;
        return Metric(std::move(d));
    }

    std::size_t dim() const noexcept { return diag_.size(); }
    int sign(std::size_t i) const { return diag_.at(i); }

    bool is_identity() const {
        for (int s : diag_)
            if (s != 1)
                return false;
        return true;
    }

    ComplexMatrix to_matrix() const {
        ComplexMatrix m(dim());
        for (std::size_t i = 0; i < dim(); ++i)
            m(i, i) = static_cast<double>(diag_[i]);
        return m;
    }

    /// g a g, evaluated by sign flips.
    ComplexMatrix sandwich(const ComplexMatrix& a) const {
        if (a.dim() != dim())
            throw std::invalid_argument("Metric: dimension mismatch");
        ComplexMatrix r(a.dim());
        for (std::size_t i = 0; i < dim(); ++i)
            for (std::size_t j = 0; j < dim(); ++j)
                r(i, j) = static_cast<double>(diag_[i] * diag_[j]) * a(i, j);
        return r;
    }

private:
    std::vector<int> diag_;
};

/// g a^dag g
inline ComplexMatrix pseudo_adjoint(const ComplexMatrix& a, const Metric& g) {
    if (a.dim() != g.dim())
        throw std::invalid_argument("pseudo_adjoint: dimension mismatch");
    return g.sandwich(a.adjoint());
}

/// true iff || g u^dag g u - I ||_max <= tol
inline bool is_pseudo_unitary(const ComplexMatrix& u, const Metric& g,
                              double tol = default_tolerance) {
    if (u.dim() != g.dim())
        throw std::invalid_argument("is_pseudo_unitary: dimension mismatch");
    if (tol <= 0.0)
        throw std::invalid_argument("is_pseudo_unitary: tolerance must be positive");
    const ComplexMatrix lhs = pseudo_adjoint(u, g) * u;
    return max_abs_diff(lhs, ComplexMatrix::identity(u.dim())) <= tol;
}

// ---- spinor helpers ------------------------------------------------------

using ComplexVector = std::vector<cplx>;

inline ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& x) {
    if (a.dim() != x.size())
        throw std::invalid_argument("mat-vec: dimension mismatch");
    ComplexVector y(a.dim(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            y[i] += a(i, j) * x[j];
    return y;
}

/// Conjugated inner product <x, y>.
inline cplx vdot(const ComplexVector& x, const ComplexVector& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("vdot: dimension mismatch");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < x.size(); ++i)
        s += std::conj(x[i]) * y[i];
    return s;
}

inline double vnorm(const ComplexVector& x) { return std::sqrt(std::abs(vdot(x, x))); }

/// Rotate the global phase so the largest-magnitude component is real
/// positive (ties within 1e-12 resolve to the lowest index).
inline void fix_phase(ComplexVector& x) {
    std::size_t pick = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double m = std::abs(x[i]);
        if (m > best + 1e-12) {
            best = m;
            pick = i;
        }
    }
    if (best > 0.0) {
        const cplx rot = std::conj(x[pick]) / best;
        for (auto& v : x)
            v *= rot;
    }
}

/// <x, g y> under a +/-1 metric. Real for Hermitian arguments of interest.
inline cplx metric_dot(const ComplexVector& x, const Metric& g, const ComplexVector& y) {
    if (x.size() != g.dim() || y.size() != g.dim())
        throw std::invalid_argument("metric_dot: dimension mismatch");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < x.size(); ++i)
        s += std::conj(x[i]) * static_cast<double>(g.sign(i)) * y[i];
    return s;
}

} // namespace zitterkit
