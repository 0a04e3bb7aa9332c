#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace zitterkit {

/// In-order DFT of x. Radix-2 Cooley-Tukey for power-of-two lengths,
/// direct evaluation otherwise. Sizes here are a few hundred samples, so
/// the quadratic fallback stays cheap.
inline std::vector<std::complex<double>> fourier_transform(std::vector<std::complex<double>> x) {
    const std::size_t n = x.size();
    if (n == 0)
        throw std::invalid_argument("fourier_transform: empty input");

    const bool pow2 = (n & (n - 1)) == 0;
    if (!pow2) {
        std::vector<std::complex<double>> out(n);
        for (std::size_t k = 0; k < n; ++k) {
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t j = 0; j < n; ++j) {
                const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) *
                                   static_cast<double>(j) / static_cast<double>(n);
                acc += x[j] * std::complex<double>{std::cos(ang), std::sin(ang)};
            }
            out[k] = acc;
        }
        return out;
    }

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen{std::cos(ang), std::sin(ang)};
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w{1.0, 0.0};
            for (std::size_t j = 0; j < len / 2; ++j) {
                const auto u = x[i + j];
                const auto v = x[i + j + len / 2] * w;
                x[i + j] = u + v;
                x[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    return x;
}

struct SpectralPeak {
    double omega = 0.0;     // angular frequency of the dominant bin
    double amplitude = 0.0; // 2 |X_k| / n, the oscillation amplitude estimate
    std::size_t bin = 0;
    double bin_width = 0.0; // angular frequency per bin
};

/// Dominant nonzero frequency of a uniformly sampled real signal. The mean
/// is removed first; bins k = 1 .. n/2 are searched.
inline SpectralPeak dominant_frequency(const std::vector<double>& samples, double dt) {
    const std::size_t n = samples.size();
    if (n < 4)
        throw std::invalid_argument("dominant_frequency: need at least 4 samples");
    if (!(dt > 0.0))
        throw std::invalid_argument("dominant_frequency: dt must be positive");

    double mean = 0.0;
    for (double s : samples)
        mean += s;
    mean /= static_cast<double>(n);

    std::vector<std::complex<double>> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = samples[i] - mean;
    const auto spectrum = fourier_transform(std::move(x));

    SpectralPeak peak;
    peak.bin_width = 2.0 * std::numbers::pi / (dt * static_cast<double>(n));
    double best = -1.0;
    for (std::size_t k = 1; k <= n / 2; ++k) {
        const double mag = std::abs(spectrum[k]);
        if (mag > best) {
            best = mag;
            peak.bin = k;
        }
    }
    peak.omega = peak.bin_width * static_cast<double>(peak.bin);
    peak.amplitude = 2.0 * best / static_cast<double>(n);
    return peak;
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
};

/// Least-squares line through (t, y).
inline LinearFit linear_fit(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size() || t.size() < 2)
        throw std::invalid_argument("linear_fit: need matching series with >= 2 points");
    const auto n = static_cast<double>(t.size());
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sy += y[i];
        stt += t[i] * t[i];
        sty += t[i] * y[i];
    }
    const double det = n * stt - st * st;
    if (det == 0.0)
        throw std::invalid_argument("linear_fit: degenerate abscissa");

    LinearFit fit;
    fit.slope = (n * sty - st * sy) / det;
    fit.intercept = (sy * stt - st * sty) / det;
    for (std::size_t i = 0; i < t.size(); ++i)
        fit.max_residual =
            std::max(fit.max_residual, std::abs(y[i] - fit.slope * t[i] - fit.intercept));
    return fit;
}

} // namespace zitterkit
