#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dynamics.hpp"
#include "matrix.hpp"
#include "momentum.hpp"
#include "representations.hpp"

namespace zitterkit {

/// Complex weights of the positive/negative energy branch in a packet.
struct BranchMix {
    cplx plus{1.0, 0.0};
    cplx minus{0.0, 0.0};
};

struct GridSample {
    Momentum p;
    double weight = 0.0;
};

/// Weighted momentum samples; weights are the squared-amplitude envelope
/// and sum to 1.
struct MomentumGrid {
    std::vector<GridSample> samples;

    void validate() const {
        if (samples.empty())
            throw std::invalid_argument("MomentumGrid: no samples");
        double sum = 0.0;
        for (const auto& s : samples) {
            if (!(s.weight >= 0.0))
                throw std::invalid_argument("MomentumGrid: weights must be nonnegative");
            sum += s.weight;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("MomentumGrid: weights must sum to 1");
    }
};

struct PacketOptions {
    int grid_axis = 3;      // axis along which the 1-D grid spreads
    bool full_grid = false; // 3-D product grid (n_samples per axis)
    double support_sigmas = 4.0;
    /// For mixed packets the negative-branch partner is taken from
    /// P_- v_axis u_+ when that coupling is nonzero, so the interference
    /// term shows up in the chosen velocity component. The canonical
    /// spin-aligned branch pair can have a vanishing velocity cross
    /// element (massless spin-1/2 along the momentum axis is the standard
    /// case), which would hide the oscillation entirely. 0 disables.
    int couple_axis = 1;
};

/// Momentum-grid ensemble of spinor amplitudes with branch mixing.
/// `signed_norm` is the metric norm sum_k w_k psi_k^dag g psi_k; for the
/// pseudo-Hermitian representations negative-branch content contributes
/// negatively and the value is recorded as is.
struct PacketState {
    RepSpec rep;
    MomentumGrid grid;
    std::vector<ComplexVector> amplitudes;
    BranchMix mix;
    Metric metric = Metric::identity(0);
    double signed_norm = 0.0;
};

/// Threshold under which a signed norm counts as indefinite.
inline constexpr double indefinite_norm_tol = 1e-12;

inline PacketState make_gaussian_packet(const RepSpec& rep, const Momentum& center, double sigma,
                                        BranchMix mix, std::size_t n_samples,
                                        PacketOptions options = {}) {
    rep.validate();
    if (!(sigma > 0.0))
        throw std::invalid_argument("make_gaussian_packet: sigma must be positive");
    if (n_samples < 1)
        throw std::invalid_argument("make_gaussian_packet: need at least one sample");
    if (options.grid_axis < 1 || options.grid_axis > 3)
        throw std::invalid_argument("make_gaussian_packet: grid axis must be 1, 2 or 3");

    const double mix_norm = std::sqrt(std::norm(mix.plus) + std::norm(mix.minus));
    if (!(mix_norm > 0.0))
        throw std::invalid_argument("make_gaussian_packet: branch mix must be nonzero");
    const cplx lp = mix.plus / mix_norm;
    const cplx lm = mix.minus / mix_norm;

    const double reach = options.support_sigmas * sigma;
    if (rep.mass == 0.0 && !(center.norm() > reach))
        throw std::invalid_argument(
            "make_gaussian_packet: massless support must exclude p = 0 (need |center| > " +
            std::to_string(options.support_sigmas) + " sigma)");

    std::vector<double> offsets(n_samples, 0.0);
    if (n_samples > 1)
        for (std::size_t j = 0; j < n_samples; ++j)
            offsets[j] = -reach + 2.0 * reach * static_cast<double>(j) /
                                      static_cast<double>(n_samples - 1);

    PacketState state;
    state.rep = rep;
    state.mix = BranchMix{lp, lm};
    state.metric = rep_metric(rep);

    const auto gauss = [sigma](double d) { return std::exp(-d * d / (2.0 * sigma * sigma)); };

    if (options.full_grid) {
        for (double dx : offsets)
            for (double dy : offsets)
                for (double dz : offsets) {
                    Momentum p{center.px + dx, center.py + dy, center.pz + dz};
                    state.grid.samples.push_back({p, gauss(dx) * gauss(dy) * gauss(dz)});
                }
    } else {
        for (double d : offsets)
            state.grid.samples.push_back({center.shifted(options.grid_axis, d), gauss(d)});
    }

    double wsum = 0.0;
    for (const auto& s : state.grid.samples)
        wsum += s.weight;
    for (auto& s : state.grid.samples)
        s.weight /= wsum;

    const bool photon = rep.kind == RepKind::DiracLikePhoton;
    const bool mixed = lp != cplx{0.0, 0.0} && lm != cplx{0.0, 0.0};
    state.amplitudes.reserve(state.grid.samples.size());
    for (const auto& s : state.grid.samples) {
        validate_momentum(rep, s.p);
        ComplexVector psi(rep.dim(), cplx{0.0, 0.0});
        ComplexVector up;
        if (lp != cplx{0.0, 0.0}) {
            up = branch_vector(rep, s.p, +1);
            for (std::size_t i = 0; i < psi.size(); ++i)
                psi[i] += lp * up[i];
        }
        if (lm != cplx{0.0, 0.0}) {
            ComplexVector um;
            if (mixed && options.couple_axis >= 1 && options.couple_axis <= 3) {
                const auto v = velocity_operator(rep, s.p);
                const ComplexMatrix pm = branch_projectors(rep, s.p).second;
                ComplexVector cand =
                    pm * (v[static_cast<std::size_t>(options.couple_axis - 1)] * up);
                const double cn = vnorm(cand);
                if (cn > 1e-8) {
                    for (auto& c : cand)
                        c *= 1.0 / cn;
                    fix_phase(cand);
                    um = std::move(cand);
                }
            }
            if (um.empty())
                um = branch_vector(rep, s.p, -1);
            for (std::size_t i = 0; i < psi.size(); ++i)
                psi[i] += lm * um[i];
        }
        if (photon) {
            psi = photon_transversality_projector(s.p) * psi;
            if (!(vnorm(psi) > 1e-12))
                throw NumericalError("make_gaussian_packet: photon sample is purely longitudinal");
        }
        state.amplitudes.push_back(std::move(psi));
    }

    double signed_norm = 0.0;
    for (std::size_t k = 0; k < state.amplitudes.size(); ++k)
        signed_norm += state.grid.samples[k].weight *
                       metric_dot(state.amplitudes[k], state.metric, state.amplitudes[k]).real();

    if (std::abs(signed_norm) >= indefinite_norm_tol) {
        const double scale = 1.0 / std::sqrt(std::abs(signed_norm));
        for (auto& psi : state.amplitudes)
            for (auto& a : psi)
                a *= scale;
        signed_norm = 0.0;
        for (std::size_t k = 0; k < state.amplitudes.size(); ++k)
            signed_norm +=
                state.grid.samples[k].weight *
                metric_dot(state.amplitudes[k], state.metric, state.amplitudes[k]).real();
    }
    state.signed_norm = signed_norm;
    return state;
}

/// Metric-weighted Rayleigh quotient of a per-momentum operator family:
///   sum_k w_k psi_k^dag g Op(p_k, t) psi_k / sum_k w_k psi_k^dag g psi_k.
/// OpFamily is callable as (const Momentum&, double t) -> ComplexMatrix.
template <class OpFamily>
cplx expectation(const PacketState& state, OpFamily&& op, double t) {
    state.grid.validate();
    if (std::abs(state.signed_norm) < indefinite_norm_tol)
        throw NumericalError("expectation: indefinite-norm state (signed norm ~ 0)",
                             std::abs(state.signed_norm));

    cplx num{0.0, 0.0};
    double den = 0.0;
    const ComplexMatrix g = state.metric.to_matrix();
    for (std::size_t k = 0; k < state.grid.samples.size(); ++k) {
        const auto& s = state.grid.samples[k];
        const auto& psi = state.amplitudes[k];
        const ComplexMatrix o = op(s.p, t);
        num += s.weight * vdot(psi, g * (o * psi));
        den += s.weight * metric_dot(psi, state.metric, psi).real();
    }
    if (std::abs(den) < indefinite_norm_tol)
        throw NumericalError("expectation: indefinite-norm state (signed norm ~ 0)", std::abs(den));
    return num / den;
}

/// Observable trajectory of a packet: <v>(t) and <Delta r>(t) along one axis.
struct PacketTrajectory {
    int axis = 3;
    std::vector<double> times;
    std::vector<cplx> velocity;
    std::vector<cplx> displacement;
    double signed_norm = 0.0;
};

inline PacketTrajectory packet_trajectory(const PacketState& state, int axis,
                                          const std::vector<double>& times) {
    state.grid.validate();
    if (axis < 1 || axis > 3)
        throw std::invalid_argument("packet_trajectory: axis must be 1, 2 or 3");
    if (times.empty())
        throw std::invalid_argument("packet_trajectory: empty time grid");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("packet_trajectory: times must increase strictly");
    if (std::abs(state.signed_norm) < indefinite_norm_tol)
        throw NumericalError("packet_trajectory: indefinite-norm state (signed norm ~ 0)",
                             std::abs(state.signed_norm));

    PacketTrajectory traj;
    traj.axis = axis;
    traj.times = times;
    traj.velocity.assign(times.size(), cplx{0.0, 0.0});
    traj.displacement.assign(times.size(), cplx{0.0, 0.0});

    double den = 0.0;
    const ComplexMatrix g = state.metric.to_matrix();
    // Samples form the outer loop so each momentum is diagonalized once;
    // accumulation order over samples is fixed for reproducibility.
    for (std::size_t k = 0; k < state.grid.samples.size(); ++k) {
        const auto& s = state.grid.samples[k];
        const auto& psi = state.amplitudes[k];
        const HeisenbergEvolution evo(state.rep, s.p, axis);
        const ComplexVector gpsi = g * psi;
        for (std::size_t j = 0; j < times.size(); ++j) {
            traj.velocity[j] += s.weight * vdot(gpsi, evo.velocity_closed(times[j]) * psi);
            traj.displacement[j] += s.weight * vdot(gpsi, evo.displacement_closed(times[j]) * psi);
        }
        den += s.weight * metric_dot(psi, state.metric, psi).real();
    }
    for (std::size_t j = 0; j < times.size(); ++j) {
        traj.velocity[j] /= den;
        traj.displacement[j] /= den;
    }
    traj.signed_norm = state.signed_norm;
    return traj;
}

/// Max residual over axes of the Hamilton check dH/dp_i ~ v_i evaluated by
/// central differences.
inline double group_velocity_check(const RepSpec& rep, const Momentum& p, double h) {
    rep.validate();
    validate_momentum(rep, p);
    if (!(h > 0.0))
        throw std::invalid_argument("group_velocity_check: step must be positive");
    const double scale = std::max(1.0, p.norm());
    if (h < 16.0 * std::numeric_limits<double>::epsilon() * scale)
        throw std::invalid_argument("group_velocity_check: step underflow");

    const auto v = velocity_operator(rep, p);
    double residual = 0.0;
    for (int axis = 1; axis <= 3; ++axis) {
        const ComplexMatrix hp = hamiltonian(rep, p.shifted(axis, +h));
        const ComplexMatrix hm = hamiltonian(rep, p.shifted(axis, -h));
        const ComplexMatrix fd = (hp - hm) * (1.0 / (2.0 * h));
        residual = std::max(residual, max_abs_diff(fd, v[static_cast<std::size_t>(axis - 1)]));
    }
    return residual;
}

} // namespace zitterkit
