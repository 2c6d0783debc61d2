#ifndef VFE_HASIMOTO_HPP
#define VFE_HASIMOTO_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vfe/dynamics.hpp"
#include "vfe/errors.hpp"
#include "vfe/filament.hpp"
#include "vfe/spectral.hpp"

namespace vfe {

// The complex field psi = kappa * e^{i integral of tau}.  Because the loop
// integral of tau is generally not a multiple of 2*pi, psi is quasi-periodic:
// crossing the seam at base_index multiplies it by e^{i total_torsion}.
struct HasimotoField {
    std::vector<cplx> psi;
    double total_torsion = 0.0;    // seam phase, loop integral of tau
    double gauge_accumulator = 0.0; // integral of A over [0,t]; 0 at construction
    std::size_t base_index = 0;
    std::size_t size() const { return psi.size(); }
};

// psi_i = kappa_i * exp(i * cumulative trapezoid of tau from base_index).
inline HasimotoField hasimoto_transform(std::span<const double> kappa,
                                        std::span<const double> tau, double ds,
                                        std::size_t base_index = 0) {
    const std::size_t n = kappa.size();
    if (tau.size() != n) throw UsageError("hasimoto_transform: kappa/tau size mismatch");
    if (base_index >= n) throw UsageError("hasimoto_transform: base index out of range");
    if (!(ds > 0.0)) throw UsageError("hasimoto_transform: ds must be positive");
    for (std::size_t i = 0; i < n; ++i)
        if (!(kappa[i] > 0.0))
            throw UsageError("hasimoto_transform: kappa must be positive (sample " +
                             std::to_string(i) + ")");
    auto phase = spectral::cumulative_trapezoid(tau, ds, base_index);
    HasimotoField out;
    out.psi.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.psi[i] = kappa[i] * std::polar(1.0, phase.values[i]);
    out.total_torsion = phase.total;
    out.base_index = base_index;
    return out;
}

// A(t) = (kappa_ss/kappa - tau^2 + kappa^2/2) at the base sample, with the
// second derivative spectral.
inline double gauge_phase(std::span<const double> kappa, std::span<const double> tau,
                          double ds, std::size_t base_index = 0) {
    const std::size_t n = kappa.size();
    if (tau.size() != n) throw UsageError("gauge_phase: kappa/tau size mismatch");
    if (base_index >= n) throw UsageError("gauge_phase: base index out of range");
    if (!(kappa[base_index] > 0.0)) throw UsageError("gauge_phase: kappa must be positive at base");
    double L = ds * static_cast<double>(n);
    std::vector<double> kss = spectral::derivative(kappa, L, 2);
    double k = kappa[base_index], t = tau[base_index];
    return kss[base_index] / k - t * t + 0.5 * k * k;
}

struct CorrectedSeries {
    std::vector<std::vector<cplx>> psi; // Psi_k per time level
    std::vector<double> gauge;          // integral of A over [0, t_k], trapezoid
};

// Psi_k = exp(i * integral of A over [0, t_k]) * psi_k (trapezoid in t).
inline CorrectedSeries corrected_field(std::span<const HasimotoField> history,
                                       std::span<const double> A_series, double dt) {
    const std::size_t m = history.size();
    if (A_series.size() != m)
        throw UsageError("corrected_field: history and A series have different lengths");
    if (m == 0) throw UsageError("corrected_field: empty history");
    if (!(dt > 0.0) && m > 1) throw UsageError("corrected_field: dt must be positive");
    const std::size_t n = history[0].size();
    CorrectedSeries out;
    out.psi.resize(m);
    out.gauge.resize(m);
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        if (history[k].size() != n)
            throw UsageError("corrected_field: time levels have different sample counts");
        if (k > 0) acc += 0.5 * dt * (A_series[k - 1] + A_series[k]);
        out.gauge[k] = acc;
        cplx phase = std::polar(1.0, acc);
        out.psi[k].resize(n);
        for (std::size_t j = 0; j < n; ++j) out.psi[k][j] = phase * history[k].psi[j];
    }
    return out;
}

// Relative L2 residual of -i Psi_t = Psi_ss + |Psi|^2 Psi / 2 per interior
// time level: centered differences in t, quasi-periodic spectral second
// derivative in s (seam phase `seam` at sample `base`).  Entry r[k]
// corresponds to time level k+1 of the input series.
inline std::vector<double> nls_residual(std::span<const std::vector<cplx>> Psi, double dt,
                                        double ds, double seam, std::size_t base = 0) {
    const std::size_t m = Psi.size();
    if (m < 3) throw UsageError("nls_residual: need at least 3 time levels for centered d/dt");
    if (!(dt > 0.0) || !(ds > 0.0)) throw UsageError("nls_residual: dt and ds must be positive");
    const std::size_t n = Psi[0].size();
    for (const auto& level : Psi)
        if (level.size() != n) throw UsageError("nls_residual: time levels differ in size");
    const double L = ds * static_cast<double>(n);
    std::vector<double> out(m - 2);
    for (std::size_t k = 1; k + 1 < m; ++k) {
        std::vector<cplx> dss =
            spectral::derivative_quasi_periodic(std::span<const cplx>(Psi[k]), L, 2, seam, base);
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            cplx dt_c = (Psi[k + 1][j] - Psi[k - 1][j]) / (2.0 * dt);
            cplx val = Psi[k][j];
            cplx R = cplx(0.0, -1.0) * dt_c - dss[j] - 0.5 * std::norm(val) * val;
            num += std::norm(R);
            den += std::norm(val);
        }
        out[k - 1] = std::sqrt(num / den);
    }
    return out;
}

struct CertificationLevel {
    std::size_t n = 0;
    double dt = 0.0;
    double seam = 0.0;              // Theta at t=0
    double max_residual = 0.0;      // max over interior time levels
    std::vector<double> residuals;
};

struct CertificationReport {
    CertificationLevel coarse, fine;
    double order = 0.0;     // log2(coarse/fine max residual)
    double threshold = 1.8;
    bool pass = false;
};

namespace detail {

inline CertificationLevel certification_level(const ClosedFilament& f, double T_end, double dt,
                                              const DynamicsOptions& opts) {
    auto steps = static_cast<std::size_t>(std::llround(T_end / dt));
    if (steps < 2) throw UsageError("certify_nls: need at least 2 steps (3 time levels)");
    const double dt_eff = T_end / static_cast<double>(steps);
    const double ds = f.ds();
    const std::size_t n = f.N();

    FlowState st = make_flow_state(f, opts);
    std::vector<HasimotoField> hist;
    std::vector<double> A;
    hist.reserve(steps + 1);
    A.reserve(steps + 1);
    for (std::size_t k = 0;; ++k) {
        hist.push_back(hasimoto_transform(st.frame.kappa, st.frame.tau, ds, 0));
        A.push_back(gauge_phase(st.frame.kappa, st.frame.tau, ds, 0));
        if (k == steps) break;
        st = step_extrinsic(st, dt_eff, opts);
    }

    // The seam phase Theta_k = loop integral of tau drifts by O(ds^2) over
    // the run.  The residual's quasi-periodic derivative needs one fixed
    // seam, so every level is aligned to Theta_0 by the smooth twist
    // e^{i (Theta_0 - Theta_k) s / L} — a modification of the same order as
    // the discretization error being measured.  Without it the seam mismatch
    // injects O(Theta_k - Theta_0) jumps that the k^2 multiplier amplifies.
    const double seam0 = hist[0].total_torsion;
    for (std::size_t k = 0; k < hist.size(); ++k) {
        double mismatch = seam0 - hist[k].total_torsion;
        for (std::size_t j = 0; j < n; ++j)
            hist[k].psi[j] *=
                std::polar(1.0, mismatch * static_cast<double>(j) / static_cast<double>(n));
    }

    CorrectedSeries corrected = corrected_field(hist, A, dt_eff);
    CertificationLevel lvl;
    lvl.n = n;
    lvl.dt = dt_eff;
    lvl.seam = seam0;
    lvl.residuals = nls_residual(corrected.psi, dt_eff, ds, seam0, 0);
    for (double r : lvl.residuals) lvl.max_residual = std::max(lvl.max_residual, r);
    return lvl;
}

} // namespace detail

// Runs the extrinsic flow, builds psi / A / Psi per step, and evaluates the
// NLS residual at the given resolution and at (2N, dt/4).  PASS iff the
// residual decays with empirical order >= 1.8 (theoretical order 2; the
// margin absorbs seam and quadrature noise).
inline CertificationReport certify_nls(const ClosedFilament& initial, double T_end, double dt,
                                       const DynamicsOptions& opts = {}) {
    CertificationReport rep;
    rep.coarse = detail::certification_level(initial, T_end, dt, opts);
    rep.fine = detail::certification_level(refine(initial, 2), T_end, dt / 4.0, opts);
    rep.order = std::log2(rep.coarse.max_residual / rep.fine.max_residual);
    rep.pass = rep.order >= rep.threshold;
    return rep;
}

} // namespace vfe

#endif
