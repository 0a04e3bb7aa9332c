#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace zitterkit {

/// Momentum eigenvalue (natural units hbar = c = 1). At a fixed eigenvalue
/// every free-particle operator in this library becomes a finite matrix.
struct Momentum {
    double px = 0.0;
    double py = 0.0;
    double pz = 0.0;

    /// 1-based axis access, matching the operator-component convention.
    double operator[](int axis) const {
        switch (axis) {
        case 1: return px;
        case 2: return py;
        case 3: return pz;
        default: throw std::invalid_argument("Momentum: axis must be 1, 2 or 3");
        }
    }

    double norm_sq() const { return px * px + py * py + pz * pz; }
    double norm() const { return std::sqrt(norm_sq()); }

    bool is_finite() const {
        return std::isfinite(px) && std::isfinite(py) && std::isfinite(pz);
    }

    Momentum shifted(int axis, double delta) const {
        Momentum q = *this;
        switch (axis) {
        case 1: q.px += delta; break;
        case 2: q.py += delta; break;
        case 3: q.pz += delta; break;
        default: throw std::invalid_argument("Momentum: axis must be 1, 2 or 3");
        }
        return q;
    }
};

} // namespace zitterkit
