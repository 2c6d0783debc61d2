#ifndef VFE_RUN_HPP
#define VFE_RUN_HPP

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "vfe/config.hpp"
#include "vfe/dynamics.hpp"
#include "vfe/errors.hpp"
#include "vfe/generators.hpp"
#include "vfe/hasimoto.hpp"
#include "vfe/timeseries.hpp"

namespace vfe {

struct RunResult {
    int exit_code = 0; // 0 ok, 2 certification failed
    TimeSeries series;
    std::string summary;
    bool certify_requested = false;
    CertificationReport cert;
};

// Worker-thread budget.  Only the two certification resolutions ever run
// concurrently; everything else is sequential so results are byte-identical
// for any setting.
inline unsigned thread_budget() {
    const char* env = std::getenv("VFE_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == nullptr || *end != '\0' || v < 1)
        throw UsageError(std::string("VFE_THREADS must be a positive integer, got '") + env + "'");
    return static_cast<unsigned>(v);
}

inline CertificationReport run_certification(const ClosedFilament& initial, double T_end,
                                             double dt, const DynamicsOptions& opts,
                                             unsigned threads) {
    CertificationReport rep;
    if (threads >= 2) {
        std::exception_ptr ec, ef;
        std::thread tc([&] {
            try {
                rep.coarse = detail::certification_level(initial, T_end, dt, opts);
            } catch (...) {
                ec = std::current_exception();
            }
        });
        std::thread tf([&] {
            try {
                rep.fine = detail::certification_level(refine(initial, 2), T_end, dt / 4.0, opts);
            } catch (...) {
                ef = std::current_exception();
            }
        });
        tc.join();
        tf.join();
        if (ec) std::rethrow_exception(ec);
        if (ef) std::rethrow_exception(ef);
    } else {
        rep.coarse = detail::certification_level(initial, T_end, dt, opts);
        rep.fine = detail::certification_level(refine(initial, 2), T_end, dt / 4.0, opts);
    }
    rep.order = std::log2(rep.coarse.max_residual / rep.fine.max_residual);
    rep.pass = rep.order >= rep.threshold;
    return rep;
}

namespace detail {

inline std::string g17(double x) {
    std::string s;
    append_g17(s, x);
    return s;
}

inline const char* kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::Euclidean: return "euclidean";
        case ModelKind::Spherical: return "spherical";
        case ModelKind::Hyperbolic: return "hyperbolic";
    }
    return "?";
}

} // namespace detail

inline RunResult run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const SpaceForm M = space_form_of(cfg);
    const unsigned threads = thread_budget();

    ClosedFilament f0 = generate_initial(cfg.generator, cfg.params, M, cfg.N);
    const double ds = f0.ds();
    const std::size_t n = f0.N();

    auto steps = static_cast<std::size_t>(std::llround(cfg.T_end / cfg.dt));
    if (steps < 1) steps = 1;
    const double dt = cfg.T_end / static_cast<double>(steps);
    const double bound = cfg.cfl_c * ds * ds;
    if (dt > bound)
        throw UsageError("time step " + detail::g17(dt) + " exceeds the dispersive stability bound " +
                         detail::g17(bound) + " (= " + detail::g17(cfg.cfl_c) + " * ds^2 with ds = " +
                         detail::g17(ds) + "); reduce dt or the resolution N");

    DynamicsOptions opts;
    opts.cfl_c = cfg.cfl_c;
    opts.tol_manifold = cfg.tol_manifold;
    opts.tol_drift_rel = cfg.tol_drift;
    opts.kappa_min = cfg.kappa_min;
    opts.reproject_every = cfg.reproject_every;

    const std::size_t every =
        cfg.output_every > 0 ? cfg.output_every : std::max<std::size_t>(1, steps / 50);

    FlowState st = make_flow_state(f0, opts);
    std::vector<double> A(steps + 1, 0.0);
    std::vector<HasimotoField> stored_psi;
    std::vector<std::size_t> stored_k;
    TimeSeries series;

    double kap_min = 0.0, kap_max = 0.0, max_constraint_final = 0.0;
    for (std::size_t k = 0;; ++k) {
        A[k] = gauge_phase(st.frame.kappa, st.frame.tau, ds, cfg.base_index);
        const bool keep = (k % every == 0) || k == steps;
        if (keep) {
            HasimotoField h = hasimoto_transform(st.frame.kappa, st.frame.tau, ds, cfg.base_index);
            TimeSeriesBlock b;
            b.t = st.t;
            b.s.resize(n);
            b.kappa.assign(st.frame.kappa.begin(), st.frame.kappa.end());
            b.tau.assign(st.frame.tau.begin(), st.frame.tau.end());
            b.psi_re.resize(n);
            b.psi_im.resize(n);
            b.constraint_res.resize(n);
            for (std::size_t j = 0; j < n; ++j) {
                b.s[j] = ds * static_cast<double>(j);
                b.psi_re[j] = h.psi[j].real();
                b.psi_im[j] = h.psi[j].imag();
                b.constraint_res[j] = M.constraint_residual(st.filament.points[j]);
            }
            b.A = A[k];
            b.arc_drift = st.drift_rel;
            series.blocks.push_back(std::move(b));
            stored_psi.push_back(std::move(h));
            stored_k.push_back(k);
        }
        if (k == steps) {
            kap_min = *std::min_element(st.frame.kappa.begin(), st.frame.kappa.end());
            kap_max = *std::max_element(st.frame.kappa.begin(), st.frame.kappa.end());
            for (std::size_t j = 0; j < n; ++j)
                max_constraint_final =
                    std::max(max_constraint_final, M.constraint_residual(st.filament.points[j]));
            break;
        }
        st = step_extrinsic(st, dt, opts);
    }

    // Gauge accumulator over the full step sequence (trapezoid in t), then
    // the stored blocks are phase-corrected and seam-aligned exactly as in
    // the certification path so the residual column is meaningful.
    std::vector<double> gauge(steps + 1, 0.0);
    for (std::size_t k = 1; k <= steps; ++k)
        gauge[k] = gauge[k - 1] + 0.5 * (A[k - 1] + A[k]) * dt;

    const double seam0 = stored_psi.front().total_torsion;
    const std::size_t nb = stored_psi.size();
    std::vector<std::vector<cplx>> Psi(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        const double mismatch = seam0 - stored_psi[b].total_torsion;
        const double g = gauge[stored_k[b]];
        series.blocks[b].gauge = g;
        Psi[b].resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t off = (j + n - cfg.base_index) % n;
            double tw = mismatch * static_cast<double>(off) / static_cast<double>(n) + g;
            Psi[b][j] = stored_psi[b].psi[j] * std::polar(1.0, tw);
        }
    }

    // Residual diagnostic at the stored cadence: centered difference in t
    // between neighboring stored blocks (possibly non-uniform at the tail).
    double max_resid = 0.0;
    const double L = ds * static_cast<double>(n);
    for (std::size_t b = 1; b + 1 < nb; ++b) {
        std::vector<cplx> dss = spectral::derivative_quasi_periodic(
            std::span<const cplx>(Psi[b]), L, 2, seam0, cfg.base_index);
        const double span_t = series.blocks[b + 1].t - series.blocks[b - 1].t;
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            cplx dt_c = (Psi[b + 1][j] - Psi[b - 1][j]) / span_t;
            cplx val = Psi[b][j];
            cplx R = cplx(0.0, -1.0) * dt_c - dss[j] - 0.5 * std::norm(val) * val;
            num += std::norm(R);
            den += std::norm(val);
        }
        series.blocks[b].nls_residual = std::sqrt(num / den);
        max_resid = std::max(max_resid, series.blocks[b].nls_residual);
    }

    RunResult out;
    out.certify_requested = cfg.certify;
    if (cfg.certify) {
        out.cert = run_certification(f0, cfg.T_end, dt, opts, threads);
        out.exit_code = out.cert.pass ? 0 : 2;
    }
    out.series = std::move(series);

    std::string s;
    s += "run: generator=" + cfg.generator + " kind=" + detail::kind_name(cfg.kind) +
         " K0=" + detail::g17(M.K0) + " N=" + std::to_string(n) + "\n";
    s += "time: steps=" + std::to_string(steps) + " dt=" + detail::g17(dt) +
         " T_end=" + detail::g17(cfg.T_end) + " ds=" + detail::g17(ds) + "\n";
    s += "curve: length=" + detail::g17(f0.length) + " seam=" + detail::g17(seam0) +
         " base_index=" + std::to_string(cfg.base_index) + "\n";
    s += "final: t=" + detail::g17(st.t) + " arc_drift_rel=" + detail::g17(st.drift_rel) +
         " max_constraint=" + detail::g17(max_constraint_final) + " kappa_min=" +
         detail::g17(kap_min) + " kappa_max=" + detail::g17(kap_max) + "\n";
    s += "gauge: A0=" + detail::g17(A[0]) + " integral=" + detail::g17(gauge[steps]) + "\n";
    s += "residual: max_over_stored_blocks=" + detail::g17(max_resid) +
         " blocks=" + std::to_string(nb) + "\n";
    if (cfg.certify) {
        s += std::string("certify: ") + (out.cert.pass ? "PASS" : "FAIL") +
             " order=" + detail::g17(out.cert.order) +
             " coarse_max=" + detail::g17(out.cert.coarse.max_residual) +
             " fine_max=" + detail::g17(out.cert.fine.max_residual) + "\n";
    } else {
        s += "certify: not requested\n";
    }
    s += "exit=" + std::to_string(out.exit_code) + "\n";
    out.summary = std::move(s);
    return out;
}

inline RunResult run_to_files(const ExperimentConfig& cfg) {
    RunResult r = run_experiment(cfg);
    write_text_file(cfg.csv_path, to_csv(r.series));
    write_text_file(cfg.summary_path, r.summary);
    return r;
}

} // namespace vfe

#endif
