#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "eig.hpp"
#include "matrix.hpp"
#include "momentum.hpp"
#include "representations.hpp"

namespace zitterkit {

/// Angular frequency of the oscillatory term, 2 sqrt(m^2 + p^2).
inline double zitter_frequency(const RepSpec& rep, const Momentum& p) {
    rep.validate();
    validate_momentum(rep, p);
    return 2.0 * energy(rep, p);
}

/// Heisenberg-picture evolution of one velocity component at a fixed
/// momentum eigenvalue. The Hamiltonian is diagonalized once; closed-form
/// v(t) and displacement Delta r(t) are then spectral functions of it.
///
/// All 1/H and exp(-2iHt) factors right-multiply the bracket
/// [v(0) - p H^{-1}]; 1/H is taken on the physical subspace, which
/// excludes the longitudinal null modes of the photon Hamiltonian.
class HeisenbergEvolution {
public:
    HeisenbergEvolution(const RepSpec& rep, const Momentum& p, int axis)
        : rep_(rep), p_(p), axis_(axis) {
        if (axis < 1 || axis > 3)
            throw std::invalid_argument("HeisenbergEvolution: axis must be 1, 2 or 3");
        h_ = hamiltonian(rep, p);
        v0_ = velocity_operator(rep, p)[static_cast<std::size_t>(axis - 1)];
        eig_ = eig_decompose(h_);

        double scale = 0.0;
        for (const cplx& l : eig_.values)
            scale = std::max(scale, std::abs(l));
        if (!(scale > 0.0))
            throw NumericalError("HeisenbergEvolution: Hamiltonian is singular");

        h_inverse_ = physical_inverse(eig_);
        const double p_axis = p[axis];
        drift_ = h_inverse_ * p_axis;           // p H^{-1}
        bracket_ = v0_ - drift_;                // v(0) - p H^{-1}
        amplitude_ = bracket_ * cplx{0.0, 0.5} * h_inverse_;
    }

    const RepSpec& rep() const { return rep_; }
    const Momentum& momentum() const { return p_; }
    int axis() const { return axis_; }
    const ComplexMatrix& hamiltonian_matrix() const { return h_; }
    const ComplexMatrix& initial_velocity() const { return v0_; }
    const ComplexMatrix& drift() const { return drift_; }

    /// Coefficient of the oscillatory displacement term,
    /// (i / 2H) [v(0) - p/H]. The zero matrix exactly when the bracket is.
    const ComplexMatrix& amplitude() const { return amplitude_; }

    double frequency() const { return 2.0 * energy(rep_, p_); }

    /// [v(0) - p H^{-1}] exp(-2iHt) + p H^{-1}
    ComplexMatrix velocity_closed(double t) const {
        if (t == 0.0)
            return v0_;
        return bracket_ * phase_matrix(t) + drift_;
    }

    /// exp(+iHt) v(0) exp(-iHt); the independent Heisenberg oracle.
    ComplexMatrix velocity_numeric(double t) const {
        if (t == 0.0)
            return v0_;
        return mat_exp(h_, cplx{0.0, t}) * v0_ * mat_exp(h_, cplx{0.0, -t});
    }

    /// p H^{-1} t + [v(0) - p H^{-1}] (i / 2H)(exp(-2iHt) - 1)
    ComplexMatrix displacement_closed(double t) const {
        if (t == 0.0)
            return ComplexMatrix::zero(h_.dim());
        double scale = 1.0;
        for (const cplx& l : eig_.values)
            scale = std::max(scale, std::abs(l));
        const double cut = null_mode_rel_tol * scale;
        const ComplexMatrix osc = spectral_apply(eig_, [t, cut](cplx lam) {
            if (std::abs(lam) <= cut)
                return cplx{0.0, 0.0};
            return cplx{0.0, 0.5} / lam * (std::exp(cplx{0.0, -2.0 * t} * lam) - 1.0);
        });
        return drift_ * t + bracket_ * osc;
    }

private:
    ComplexMatrix phase_matrix(double t) const {
        return spectral_apply(eig_, [t](cplx lam) { return std::exp(cplx{0.0, -2.0 * t} * lam); });
    }

    RepSpec rep_;
    Momentum p_;
    int axis_;
    ComplexMatrix h_, v0_, h_inverse_, drift_, bracket_, amplitude_;
    EigDecomposition eig_;
};

inline ComplexMatrix evolve_velocity_closed(const RepSpec& rep, const Momentum& p, int axis,
                                            double t) {
    return HeisenbergEvolution(rep, p, axis).velocity_closed(t);
}

inline ComplexMatrix evolve_velocity_numeric(const RepSpec& rep, const Momentum& p, int axis,
                                             double t) {
    return HeisenbergEvolution(rep, p, axis).velocity_numeric(t);
}

inline ComplexMatrix evolve_displacement_closed(const RepSpec& rep, const Momentum& p, int axis,
                                                double t) {
    return HeisenbergEvolution(rep, p, axis).displacement_closed(t);
}

inline ComplexMatrix zitter_amplitude(const RepSpec& rep, const Momentum& p, int axis) {
    return HeisenbergEvolution(rep, p, axis).amplitude();
}

/// Uniform grid of `steps` samples covering `periods` trembling periods,
/// endpoint excluded so spectral bins align with the oscillation.
inline std::vector<double> default_time_grid(const RepSpec& rep, const Momentum& p,
                                             double periods = 4.0, std::size_t steps = 512) {
    if (!(periods > 0.0) || steps == 0)
        throw std::invalid_argument("default_time_grid: need positive periods and steps");
    const double horizon = periods * 2.0 * std::numbers::pi / zitter_frequency(rep, p);
    std::vector<double> t(steps);
    for (std::size_t j = 0; j < steps; ++j)
        t[j] = horizon * static_cast<double>(j) / static_cast<double>(steps);
    return t;
}

/// Sampled operator evolution along one axis.
struct OperatorTrajectory {
    RepSpec rep;
    Momentum p;
    int axis = 3;
    std::vector<double> times;
    std::vector<ComplexMatrix> v_samples;
    std::vector<ComplexMatrix> dr_samples;
};

inline OperatorTrajectory sample_operator_trajectory(const RepSpec& rep, const Momentum& p,
                                                     int axis, const std::vector<double>& times) {
    if (times.empty() || times.front() != 0.0)
        throw std::invalid_argument("sample_operator_trajectory: time grid must start at 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("sample_operator_trajectory: times must increase strictly");

    const HeisenbergEvolution evo(rep, p, axis);
    OperatorTrajectory traj{rep, p, axis, times, {}, {}};
    traj.v_samples.reserve(times.size());
    traj.dr_samples.reserve(times.size());
    for (double t : times) {
        traj.v_samples.push_back(evo.velocity_closed(t));
        traj.dr_samples.push_back(evo.displacement_closed(t));
    }
    return traj;
}

} // namespace zitterkit
