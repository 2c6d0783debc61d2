#ifndef VFE_SPECTRAL_HPP
#define VFE_SPECTRAL_HPP

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "vfe/errors.hpp"

namespace vfe {

using cplx = std::complex<double>;

namespace spectral {

constexpr std::size_t min_samples = 16;

namespace detail {

// Process-wide FFTW plan cache, one forward/backward plan pair per length.
// Plans are created once under a mutex (FFTW planning is not thread-safe)
// with FFTW_ESTIMATE so planning is deterministic, then executed through the
// new-array interface, which is re-entrant.  FFTW_UNALIGNED lets the plans
// run on whatever buffers callers hand us.
class FftCache {
  public:
    static FftCache& instance() {
        static FftCache cache;
        return cache;
    }

    void forward(std::size_t n, const cplx* in, cplx* out) {
        fftw_execute_dft(entry(n).fwd,
                         reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                         reinterpret_cast<fftw_complex*>(out));
    }

    // Unnormalized inverse; callers divide by n.
    void backward(std::size_t n, const cplx* in, cplx* out) {
        fftw_execute_dft(entry(n).bwd,
                         reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                         reinterpret_cast<fftw_complex*>(out));
    }

  private:
    struct Entry {
        fftw_plan fwd = nullptr;
        fftw_plan bwd = nullptr;
        std::vector<cplx> scratch_in, scratch_out;
    };

    Entry& entry(std::size_t n) {
        std::lock_guard<std::mutex> lock(mu_);
        Entry& e = cache_[n];
        if (!e.fwd) {
            e.scratch_in.resize(n);
            e.scratch_out.resize(n);
            auto* a = reinterpret_cast<fftw_complex*>(e.scratch_in.data());
            auto* b = reinterpret_cast<fftw_complex*>(e.scratch_out.data());
            e.fwd = fftw_plan_dft_1d(static_cast<int>(n), a, b, FFTW_FORWARD,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
            e.bwd = fftw_plan_dft_1d(static_cast<int>(n), a, b, FFTW_BACKWARD,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
        }
        return e;
    }

    std::mutex mu_;
    std::unordered_map<std::size_t, Entry> cache_;
};

inline void check_size(std::size_t n, const char* op) {
    if (n < min_samples)
        throw UsageError(std::string(op) + ": need at least 16 samples, got " +
                         std::to_string(n));
}

// Signed integer mode index for slot j of an n-point transform:
// 0,1,...,n/2-1, -n/2, ..., -1.
inline double mode_index(std::size_t j, std::size_t n) {
    return (j < (n + 1) / 2) ? static_cast<double>(j)
                             : static_cast<double>(j) - static_cast<double>(n);
}

} // namespace detail

// d^order/ds^order of a periodic complex field sampled uniformly on a period
// of length L.  Spectral accuracy for resolved fields.
inline std::vector<cplx> derivative(std::span<const cplx> f, double length, int order) {
    detail::check_size(f.size(), "periodic_derivative");
    if (order != 1 && order != 2)
        throw UsageError("periodic_derivative: order must be 1 or 2");
    if (!(length > 0.0))
        throw UsageError("periodic_derivative: length must be positive");
    const std::size_t n = f.size();
    std::vector<cplx> hat(n), out(n);
    auto& fft = detail::FftCache::instance();
    fft.forward(n, f.data(), hat.data());
    const double k1 = 2.0 * 3.14159265358979323846 / length;
    for (std::size_t j = 0; j < n; ++j) {
        double k = k1 * detail::mode_index(j, n);
        hat[j] *= (order == 1) ? cplx(0.0, k) : cplx(-k * k, 0.0);
    }
    fft.backward(n, hat.data(), out.data());
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& z : out) z *= inv;
    return out;
}

// Real-field version.  The Nyquist mode is zeroed for odd derivatives (its
// contribution i*k*X_{N/2} has no real-valued counterpart).
inline std::vector<double> derivative(std::span<const double> f, double length, int order) {
    detail::check_size(f.size(), "periodic_derivative");
    if (order != 1 && order != 2)
        throw UsageError("periodic_derivative: order must be 1 or 2");
    if (!(length > 0.0))
        throw UsageError("periodic_derivative: length must be positive");
    const std::size_t n = f.size();
    std::vector<cplx> buf(n), hat(n);
    for (std::size_t j = 0; j < n; ++j) buf[j] = cplx(f[j], 0.0);
    auto& fft = detail::FftCache::instance();
    fft.forward(n, buf.data(), hat.data());
    const double k1 = 2.0 * 3.14159265358979323846 / length;
    for (std::size_t j = 0; j < n; ++j) {
        double k = k1 * detail::mode_index(j, n);
        if (order == 1) {
            bool nyquist = (n % 2 == 0) && (j == n / 2);
            hat[j] *= nyquist ? cplx(0.0, 0.0) : cplx(0.0, k);
        } else {
            hat[j] *= -k * k;
        }
    }
    fft.backward(n, hat.data(), buf.data());
    std::vector<double> out(n);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = buf[j].real() * inv;
    return out;
}

// Trigonometric interpolation of a real periodic field onto m uniform samples
// over the same period (zero-padded spectrum; for n even the Nyquist
// coefficient is split across +-n/2 so the interpolant stays real and has the
// minimal-oscillation derivative).  Exact for band-limited input; smooth
// fields keep spectral accuracy, which matters wherever the result feeds
// further differentiation: piecewise-polynomial interpolation would leave
// curvature kinks that high-order spectral derivatives amplify by k^2 or k^3.
inline std::vector<double> resample(std::span<const double> f, std::size_t m) {
    detail::check_size(f.size(), "periodic_resample");
    detail::check_size(m, "periodic_resample");
    const std::size_t n = f.size();
    std::vector<cplx> buf(n), hat(n);
    for (std::size_t j = 0; j < n; ++j) buf[j] = cplx(f[j], 0.0);
    auto& fft = detail::FftCache::instance();
    fft.forward(n, buf.data(), hat.data());

    std::vector<cplx> pad(m, cplx(0.0, 0.0));
    const std::size_t half = n / 2; // modes 0..half-1 positive, half.. negative
    for (std::size_t j = 0; j < n; ++j) {
        double k = detail::mode_index(j, n);
        if (n % 2 == 0 && j == half) continue; // handled below
        std::size_t slot = (k >= 0.0) ? static_cast<std::size_t>(k)
                                      : m - static_cast<std::size_t>(-k);
        if (std::abs(k) * 2.0 < static_cast<double>(m) || m == n) pad[slot] = hat[j];
    }
    if (n % 2 == 0 && n <= m) {
        cplx ny = hat[half];
        if (m == n) {
            pad[half] = ny;
        } else {
            pad[half] += 0.5 * ny;
            pad[m - half] += 0.5 * ny;
        }
    }

    std::vector<cplx> dense(m);
    fft.backward(m, pad.data(), dense.data());
    std::vector<double> out(m);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < m; ++j) out[j] = dense[j].real() * inv;
    return out;
}

// Derivative of a quasi-periodic field F(s+L) = e^{i seam} F(s), sampled at
// s_j = j L/N with the seam (phase jump) located between samples base-1 and
// base.  Internally differentiates the periodic field e^{-i seam s/L} F
// (s measured from the base sample) with wavenumbers shifted by seam/L, so a
// pure wave e^{i b s} with seam = bL is differentiated exactly even for
// non-integer frequency b.
inline std::vector<cplx> derivative_quasi_periodic(std::span<const cplx> f, double length,
                                                   int order, double seam,
                                                   std::size_t base = 0) {
    detail::check_size(f.size(), "derivative_quasi_periodic");
    if (order != 1 && order != 2)
        throw UsageError("derivative_quasi_periodic: order must be 1 or 2");
    if (!(length > 0.0))
        throw UsageError("derivative_quasi_periodic: length must be positive");
    const std::size_t n = f.size();
    if (base >= n) throw UsageError("derivative_quasi_periodic: base index out of range");
    const double two_pi = 2.0 * 3.14159265358979323846;
    const double dtheta = seam / static_cast<double>(n); // seam * ds / L
    std::vector<cplx> buf(n), hat(n);
    auto twist_arg = [&](std::size_t j) {
        return dtheta * static_cast<double>((j + n - base) % n);
    };
    for (std::size_t j = 0; j < n; ++j) buf[j] = f[j] * std::polar(1.0, -twist_arg(j));
    auto& fft = detail::FftCache::instance();
    fft.forward(n, buf.data(), hat.data());
    for (std::size_t j = 0; j < n; ++j) {
        double k = (two_pi * detail::mode_index(j, n) + seam) / length;
        hat[j] *= (order == 1) ? cplx(0.0, k) : cplx(-k * k, 0.0);
    }
    fft.backward(n, hat.data(), buf.data());
    std::vector<cplx> out(n);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j)
        out[j] = buf[j] * std::polar(1.0, twist_arg(j)) * inv;
    return out;
}

struct CumulativeIntegral {
    std::vector<double> values; // values[j] = integral from s_base to s_j (cyclic, forward)
    double total = 0.0;         // full-loop integral
};

// Trapezoid antiderivative of a periodic field, anchored so values[base] = 0.
// The full-loop trapezoid sum on a uniform periodic grid equals dx * sum(f)
// and is spectrally accurate; pointwise values are O(dx^2).
inline CumulativeIntegral cumulative_trapezoid(std::span<const double> f, double dx,
                                               std::size_t base = 0) {
    const std::size_t n = f.size();
    if (n < 2) throw UsageError("cumulative_trapezoid: need at least 2 samples");
    if (base >= n) throw UsageError("cumulative_trapezoid: base index out of range");
    CumulativeIntegral out;
    out.values.assign(n, 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = (base + i) % n;
        std::size_t j1 = (base + i + 1) % n;
        acc += 0.5 * dx * (f[j] + f[j1]);
        if (j1 != base) out.values[j1] = acc;
    }
    out.total = acc;
    return out;
}

inline double loop_trapezoid(std::span<const double> f, double dx) {
    double s = 0.0;
    for (double x : f) s += x;
    return s * dx;
}

} // namespace spectral
} // namespace vfe

#endif
