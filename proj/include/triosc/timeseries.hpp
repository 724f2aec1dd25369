// timeseries.hpp — Sampled observables: windowed synchronization indicator,
// Gaussian smoothing, simple spectral peak estimation.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "triosc/errors.hpp"

namespace triosc {

struct TimeSeries {
    std::vector<double> times;
    std::vector<double> values;

    void validate() const {
        if (times.size() != values.size()) throw Error("TimeSeries: size mismatch");
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (!std::isfinite(values[i]) || !std::isfinite(times[i]))
                throw Error("TimeSeries: non-finite entry");
            if (i > 0 && !(times[i] > times[i - 1]))
                throw Error("TimeSeries: times must be strictly increasing");
        }
    }
};

namespace detail {

struct Window {
    std::size_t first, last; // inclusive sample range
};

inline Window find_window(const TimeSeries& s, double t, double dt) {
    const double eps = 1e-9 * std::max(1.0, std::abs(t) + dt);
    if (s.times.empty() || s.times.front() > t + eps || s.times.back() < t + dt - eps)
        throw WindowError("sync_indicator: series does not cover the window");
    auto lo = std::lower_bound(s.times.begin(), s.times.end(), t - eps);
    auto hi = std::upper_bound(s.times.begin(), s.times.end(), t + dt + eps);
    Window w{static_cast<std::size_t>(lo - s.times.begin()),
             static_cast<std::size_t>(hi - s.times.begin() - 1)};
    if (w.last < w.first + 31) throw WindowError("sync_indicator: fewer than 32 samples in window");
    return w;
}

inline double trapezoid(const std::vector<double>& t, const std::vector<double>& f,
                        std::size_t a, std::size_t b) {
    double acc = 0.0;
    for (std::size_t i = a; i < b; ++i)
        acc += 0.5 * (f[i] + f[i + 1]) * (t[i + 1] - t[i]);
    return acc;
}

} // namespace detail

// Windowed Pearson-type synchronization indicator over [t, t + dt]:
//   C = Int (h - hbar)(g - gbar) / sqrt(Int (h - hbar)^2 Int (g - gbar)^2)
// with trapezoidal quadrature on the shared sample grid. Degenerate windows
// (vanishing variance) yield an empty optional.
inline std::optional<double> sync_indicator(const TimeSeries& h, const TimeSeries& g,
                                            double t, double dt) {
    h.validate();
    g.validate();
    const detail::Window wh = detail::find_window(h, t, dt);
    const detail::Window wg = detail::find_window(g, t, dt);
    if (wh.first != wg.first || wh.last != wg.last)
        throw WindowError("sync_indicator: series grids differ inside the window");
    for (std::size_t i = wh.first; i <= wh.last; ++i)
        if (std::abs(h.times[i] - g.times[i]) > 1e-12 * std::max(1.0, std::abs(h.times[i])))
            throw WindowError("sync_indicator: series grids differ inside the window");

    const double span = h.times[wh.last] - h.times[wh.first];
    const double hbar = detail::trapezoid(h.times, h.values, wh.first, wh.last) / span;
    const double gbar = detail::trapezoid(g.times, g.values, wh.first, wh.last) / span;

    std::vector<double> hh(wh.last - wh.first + 1), gg(hh.size()), hg(hh.size());
    for (std::size_t i = 0; i < hh.size(); ++i) {
        const double dh = h.values[wh.first + i] - hbar;
        const double dg = g.values[wh.first + i] - gbar;
        hh[i] = dh * dh;
        gg[i] = dg * dg;
        hg[i] = dh * dg;
    }
    std::vector<double> tw(h.times.begin() + static_cast<long>(wh.first),
                           h.times.begin() + static_cast<long>(wh.last) + 1);
    const double var_h = detail::trapezoid(tw, hh, 0, tw.size() - 1);
    const double var_g = detail::trapezoid(tw, gg, 0, tw.size() - 1);
    if (var_h < 1e-15 || var_g < 1e-15) return std::nullopt;
    return detail::trapezoid(tw, hg, 0, tw.size() - 1) / std::sqrt(var_h * var_g);
}

// Convolution with a normalized Gaussian kernel of the given width (standard
// deviation, same units as time), reflective padding at the ends. Requires a
// uniform grid; constants pass through unchanged.
inline TimeSeries gaussian_smooth(const TimeSeries& s, double width) {
    s.validate();
    if (!(width > 0.0)) throw Error("gaussian_smooth: width must be > 0");
    const std::size_t n = s.times.size();
    if (n < 2) return s;
    const double dt = s.times[1] - s.times[0];
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(s.times[i] - s.times[i - 1] - dt) > 1e-9 * dt)
            throw Error("gaussian_smooth: non-uniform time grid");

    const long radius = std::max<long>(1, static_cast<long>(std::ceil(4.0 * width / dt)));
    std::vector<double> kern(static_cast<std::size_t>(radius) + 1);
    double norm = 0.0;
    for (long k = -radius; k <= radius; ++k)
        norm += std::exp(-(k * dt) * (k * dt) / (2.0 * width * width));
    for (long k = 0; k <= radius; ++k)
        kern[static_cast<std::size_t>(k)] =
            std::exp(-(k * dt) * (k * dt) / (2.0 * width * width)) / norm;

    TimeSeries out;
    out.times = s.times;
    out.values.resize(n);
    const long nn = static_cast<long>(n);
    auto reflect = [nn](long i) {
        while (i < 0 || i >= nn) {
            if (i < 0) i = -i - 1;
            if (i >= nn) i = 2 * nn - i - 1;
        }
        return static_cast<std::size_t>(i);
    };
    for (long i = 0; i < nn; ++i) {
        double acc = kern[0] * s.values[static_cast<std::size_t>(i)];
        for (long k = 1; k <= radius; ++k)
            acc += kern[static_cast<std::size_t>(k)] *
                   (s.values[reflect(i - k)] + s.values[reflect(i + k)]);
        out.values[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

struct SpectralPeak {
    double omega{0.0};
    double magnitude{0.0};
};

// Mean-subtracted discrete spectrum |sum (x - xbar) e^{-i w t} dt| scanned over
// an angular-frequency grid; local maxima above rel_threshold * global max are
// returned sorted by magnitude, with parabolic peak refinement.
inline std::vector<SpectralPeak> spectral_peaks(const TimeSeries& s, double omega_min,
                                                double omega_max, int n_grid,
                                                double rel_threshold) {
    s.validate();
    if (s.times.size() < 4 || !(omega_max > omega_min) || n_grid < 8)
        throw Error("spectral_peaks: bad arguments");
    const std::size_t n = s.times.size();
    double mean = 0.0;
    for (double v : s.values) mean += v;
    mean /= static_cast<double>(n);

    std::vector<double> mag(static_cast<std::size_t>(n_grid));
    const double dw = (omega_max - omega_min) / (n_grid - 1);
    for (int k = 0; k < n_grid; ++k) {
        const double w = omega_min + k * dw;
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = s.values[i] - mean;
            re += x * std::cos(w * s.times[i]);
            im -= x * std::sin(w * s.times[i]);
        }
        mag[static_cast<std::size_t>(k)] = std::hypot(re, im);
    }

    double gmax = 0.0;
    for (double m : mag) gmax = std::max(gmax, m);
    std::vector<SpectralPeak> peaks;
    for (int k = 1; k + 1 < n_grid; ++k) {
        const double m = mag[static_cast<std::size_t>(k)];
        if (m < rel_threshold * gmax) continue;
        if (m <= mag[static_cast<std::size_t>(k - 1)] || m <= mag[static_cast<std::size_t>(k + 1)])
            continue;
        // parabolic refinement around the grid maximum
        const double ym = mag[static_cast<std::size_t>(k - 1)];
        const double yp = mag[static_cast<std::size_t>(k + 1)];
        const double denom = ym - 2.0 * m + yp;
        const double shift = std::abs(denom) > 1e-300 ? 0.5 * (ym - yp) / denom : 0.0;
        peaks.push_back({omega_min + (k + shift) * dw, m});
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const SpectralPeak& a, const SpectralPeak& b) { return a.magnitude > b.magnitude; });
    return peaks;
}

inline double dominant_frequency(const TimeSeries& s, double omega_min, double omega_max,
                                 int n_grid = 4096) {
    const auto peaks = spectral_peaks(s, omega_min, omega_max, n_grid, 0.0);
    if (peaks.empty()) throw Error("dominant_frequency: no spectral peak found");
    return peaks.front().omega;
}

} // namespace triosc
