#ifndef VFE_ACCEPTANCE_HPP
#define VFE_ACCEPTANCE_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <utility>
#include <vector>

#include "vfe/config.hpp"
#include "vfe/dynamics.hpp"
#include "vfe/filament.hpp"
#include "vfe/frames.hpp"
#include "vfe/generators.hpp"
#include "vfe/hasimoto.hpp"
#include "vfe/holonomy.hpp"
#include "vfe/run.hpp"
#include "vfe/space_form.hpp"

namespace vfe::acceptance {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline std::string fmt(double x) {
    char b[40];
    std::snprintf(b, sizeof(b), "%.6g", x);
    return b;
}

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

template <typename Body>
CheckResult guarded(std::string name, double budget_s, Body&& body) {
    Stopwatch sw;
    CheckResult r;
    r.name = std::move(name);
    try {
        std::pair<bool, std::string> got = body();
        r.pass = got.first;
        r.detail = std::move(got.second);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    double el = sw.seconds();
    r.detail += " [" + fmt(el) + "s]";
    if (el >= budget_s) {
        r.pass = false;
        r.detail += " OVER " + fmt(budget_s) + "s BUDGET";
    }
    return r;
}

// Second-order centered-difference covariant derivative: an independent
// discretization used to check fields the spectral machinery produced.
inline std::vector<TangentVector> fd_covariant(const SpaceForm& M,
                                               const std::vector<TangentVector>& X, double ds) {
    const std::size_t n = X.size();
    std::vector<TangentVector> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec d = (X[(i + 1) % n].v - X[(i + n - 1) % n].v) * (1.0 / (2.0 * ds));
        if (M.flat())
            out[i] = TangentVector{X[i].base, d};
        else
            out[i] = project_to_tangent(M, AmbientPoint{X[i].base}, d);
    }
    return out;
}

// Worst residual of the three Frenet formulas D T = kN, D N = -kT + tB,
// D B = -tN, with the derivative above.
inline double frenet_formula_residual(const SpaceForm& M, const FrenetField& fr, double ds) {
    auto dT = fd_covariant(M, fr.T, ds);
    auto dN = fd_covariant(M, fr.N, ds);
    auto dB = fd_covariant(M, fr.B, ds);
    double worst = 0.0;
    for (std::size_t i = 0; i < fr.size(); ++i) {
        TangentVector r1{fr.T[i].base, dT[i].v - fr.kappa[i] * fr.N[i].v};
        TangentVector r2{fr.T[i].base, dN[i].v + fr.kappa[i] * fr.T[i].v - fr.tau[i] * fr.B[i].v};
        TangentVector r3{fr.T[i].base, dB[i].v + fr.tau[i] * fr.N[i].v};
        worst = std::max({worst, norm(M, r1), norm(M, r2), norm(M, r3)});
    }
    return worst;
}

inline Vec cross3(const Vec& u, const Vec& v) {
    return Vec(u.c[1] * v.c[2] - u.c[2] * v.c[1], u.c[2] * v.c[0] - u.c[0] * v.c[2],
               u.c[0] * v.c[1] - u.c[1] * v.c[0]);
}

// Closed-form curvature and torsion of the coiled loop
//   t -> ((A + r cos(q t)) cos(p t), (A + r cos(q t)) sin(p t), r sin(q t))
// via the parametric formulas kappa = |g' x g''| / |g'|^3 and
// tau = det(g', g'', g''') / |g' x g''|^2.
struct CoilOracle {
    double A, r;
    double p, q;

    Vec position(double t) const {
        double w = A + r * std::cos(q * t);
        return Vec(w * std::cos(p * t), w * std::sin(p * t), r * std::sin(q * t));
    }

    void kappa_tau(double t, double& kappa, double& tau) const {
        double cw = std::cos(q * t), sw = std::sin(q * t);
        double C = std::cos(p * t), S = std::sin(p * t);
        double rho = A + r * cw;
        double d1rho = -r * q * sw;
        double d2rho = -r * q * q * cw;
        double d3rho = r * q * q * q * sw;

        Vec g1(d1rho * C - rho * p * S, d1rho * S + rho * p * C, r * q * cw);
        Vec g2(d2rho * C - 2.0 * d1rho * p * S - rho * p * p * C,
               d2rho * S + 2.0 * d1rho * p * C - rho * p * p * S, -r * q * q * sw);
        Vec g3(d3rho * C - 3.0 * d2rho * p * S - 3.0 * d1rho * p * p * C + rho * p * p * p * S,
               d3rho * S + 3.0 * d2rho * p * C - 3.0 * d1rho * p * p * S - rho * p * p * p * C,
               -r * q * q * q * cw);

        Vec cr = cross3(g1, g2);
        double n1 = norm_coords(g1), nc = norm_coords(cr);
        kappa = nc / (n1 * n1 * n1);
        tau = det3(g1, g2, g3) / (nc * nc);
    }
};

// Recovers the coil parameter of every sample of a generated coiled loop
// from atan2 of the first two coordinates, lifted monotonically.
inline std::vector<double> coil_parameters(const CoilOracle& oracle,
                                           const std::vector<Vec>& pts) {
    std::vector<double> t(pts.size());
    double prev = -1e300;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double phi = std::atan2(pts[i].c[1], pts[i].c[0]);
        if (i == 0) {
            prev = phi;
        } else {
            while (phi + 1e-12 < prev) phi += 2.0 * 3.14159265358979323846;
            prev = phi;
        }
        t[i] = phi / oracle.p;
        if (dist_coords(oracle.position(t[i]), pts[i]) > 1e-8)
            throw NumericalError("coil parameter recovery failed at sample " + std::to_string(i));
    }
    return t;
}

} // namespace detail

// --- criterion 1 -----------------------------------------------------------
// Parallel transport around a small geodesic square measures the sectional
// curvature: the estimate matches K0 within 2% at h = 1e-2 and the error
// shrinks ~4x at h = 5e-3; the flat model gives zero to rounding.
inline CheckResult criterion_curvature_identity() {
    return detail::guarded("criterion 1: holonomy recovers the model curvature", 5.0, [] {
        bool ok = true;
        std::string d;
        for (double K0 : {1.0, -1.0}) {
            SpaceForm M = SpaceForm::with_curvature(K0);
            AmbientPoint p{Vec(M.radius, 0.0, 0.0, 0.0)};
            TangentVector e1{p.x, Vec(0.0, 1.0, 0.0, 0.0)};
            TangentVector e2{p.x, Vec(0.0, 0.0, 1.0, 0.0)};
            double k1 = verify::holonomy_curvature_estimate(M, p, e1, e2, 1e-2);
            double k2 = verify::holonomy_curvature_estimate(M, p, e1, e2, 5e-3);
            double err1 = std::abs(k1 - K0), err2 = std::abs(k2 - K0);
            double ratio = err1 / err2;
            bool good = err1 <= 0.02 && ratio >= 3.2 && ratio <= 4.8;
            ok = ok && good;
            d += "K0=" + detail::fmt(K0) + " est=" + detail::fmt(k1) + " err=" +
                 detail::fmt(err1) + " ratio=" + detail::fmt(ratio) + "; ";
        }
        SpaceForm E = SpaceForm::euclidean();
        AmbientPoint p{Vec(0.1, -0.2, 0.3)};
        TangentVector e1{p.x, Vec(1.0, 0.0, 0.0)};
        TangentVector e2{p.x, Vec(0.0, 1.0, 0.0)};
        double k0 = verify::holonomy_curvature_estimate(E, p, e1, e2, 1e-2);
        ok = ok && std::abs(k0) < 1e-12;
        d += "K0=0 |est|=" + detail::fmt(std::abs(k0));
        return std::pair{ok, d};
    });
}

// --- criterion 2 -----------------------------------------------------------
// Frenet data against closed forms: unit circle (kappa=1, tau=0), spherical
// circle of geodesic radius 0.6 (kappa=cot 0.6), and second-order decay of
// the Frenet-formula residuals under N-doubling on a coiled loop.
inline CheckResult criterion_frenet_oracles() {
    return detail::guarded("criterion 2: curvature/torsion oracles and formula residuals", 10.0, [] {
        bool ok = true;
        std::string d;
        SpaceForm E = SpaceForm::euclidean();

        GeneratorParams gp;
        gp.radius = 1.0;
        auto fr = frenet(generate_initial("circle", gp, E, 256));
        double ek = 0.0, et = 0.0;
        for (std::size_t i = 0; i < fr.size(); ++i) {
            ek = std::max(ek, std::abs(fr.kappa[i] - 1.0));
            et = std::max(et, std::abs(fr.tau[i]));
        }
        ok = ok && ek <= 1e-6 && et <= 1e-6;
        d += "circle: |kappa-1|=" + detail::fmt(ek) + " |tau|=" + detail::fmt(et) + "; ";

        SpaceForm S = SpaceForm::with_curvature(1.0);
        GeneratorParams gs;
        gs.radius = 0.6;
        auto frs = frenet(generate_initial("circle", gs, S, 256));
        double want = 1.0 / std::tan(0.6);
        double eks = 0.0;
        for (double k : frs.kappa) eks = std::max(eks, std::abs(k - want));
        ok = ok && eks <= 1e-5;
        d += "spherical circle: |kappa-cot(0.6)|=" + detail::fmt(eks) + "; ";

        // Coiled loop, p=2, q=5, radii 3 / 0.5.  The first resolution sits in
        // the asymptotic regime (below ~N=512 the spectral tail of the coil
        // still dominates and the ratio is not yet 4).
        GeneratorParams gt;
        auto fa = generate_initial("torus_knot", gt, E, 1024);
        auto fb = generate_initial("torus_knot", gt, E, 2048);
        double ra = detail::frenet_formula_residual(E, frenet(fa), fa.ds());
        double rb = detail::frenet_formula_residual(E, frenet(fb), fb.ds());
        double ratio = ra / rb;
        ok = ok && ratio >= 3.0 && ratio <= 5.0;
        d += "formula residual " + detail::fmt(ra) + " -> " + detail::fmt(rb) +
             " ratio=" + detail::fmt(ratio);
        return std::pair{ok, d};
    });
}

// --- criterion 3 -----------------------------------------------------------
// A unit circle moves rigidly along its binormal with speed kappa = 1:
// after T = 0.1 the center has moved 0.1, the radius is unchanged, and the
// arclength (mean chord) has not drifted.
inline CheckResult criterion_circle_translation() {
    return detail::guarded("criterion 3: circle translates rigidly under the flow", 30.0, [] {
        SpaceForm E = SpaceForm::euclidean();
        GeneratorParams gp;
        gp.radius = 1.0;
        ClosedFilament f = generate_initial("circle", gp, E, 256);
        DynamicsOptions opts;
        FlowState st = make_flow_state(f, opts);

        auto centroid = [](const ClosedFilament& c) {
            Vec m = Vec::zero(3);
            for (const Vec& p : c.points) m += p;
            return m * (1.0 / static_cast<double>(c.N()));
        };
        Vec c0 = centroid(st.filament);
        const double dt = 1e-4;
        for (int k = 0; k < 1000; ++k) st = step_extrinsic(st, dt, opts);
        Vec c1 = centroid(st.filament);

        double disp = dist_coords(c1, c0);
        double rad_err = 0.0;
        for (const Vec& p : st.filament.points)
            rad_err = std::max(rad_err, std::abs(dist_coords(p, c1) - 1.0));
        bool ok = std::abs(disp - 0.1) < 1e-5 && rad_err < 1e-6 && st.drift_rel < 1e-6;
        std::string d = "disp=" + detail::fmt(disp) + " radius_err=" + detail::fmt(rad_err) +
                        " drift_rel=" + detail::fmt(st.drift_rel);
        return std::pair{ok, d};
    });
}

// --- criterion 4 -----------------------------------------------------------
// The curve flow and the curvature/torsion system evolved side by side agree
// at second order on perturbed circles in all three models, and the
// curvature/torsion stepper's output does not depend on K0 at all (bitwise).
inline CheckResult criterion_cross_validation() {
    return detail::guarded("criterion 4: curve flow vs curvature/torsion system", 120.0, [] {
        bool ok = true;
        std::string d;
        DynamicsOptions opts;
        // The default drift guard (1e-5 relative) is calibrated for circles;
        // perturbed circles accumulate the expected O(ds^2 * t) spacing bias,
        // which is part of what the order measurement below quantifies.
        opts.tol_drift_rel = 1e-4;
        struct Case {
            const char* label;
            double K0;
        } cases[] = {{"euclidean", 0.0}, {"spherical", 1.0}, {"hyperbolic", -1.0}};
        GeneratorParams gp;
        gp.radius = 1.0;
        ClosedFilament last;
        for (const Case& c : cases) {
            SpaceForm M = c.K0 == 0.0 ? SpaceForm::euclidean() : SpaceForm::with_curvature(c.K0);
            ClosedFilament f = generate_initial("perturbed_circle", gp, M, 128);
            // dt respects the dispersive bound 0.25*ds^2 on the refined
            // (2N, dt/4) level of the tightest model (spherical, shortest L).
            CrossValidationReport rep = cross_validate(f, 0.05, 2.5e-4, opts);
            bool good = rep.order_kappa >= 2.0 && rep.order_tau >= 2.0;
            ok = ok && good;
            d += std::string(c.label) + ": order_k=" + detail::fmt(rep.order_kappa) +
                 " order_t=" + detail::fmt(rep.order_tau) + "; ";
            last = f;
        }

        FrenetField fr = frenet(last);
        IntrinsicState s0 = make_intrinsic_state(last, fr, 0.0);
        IntrinsicState s5 = make_intrinsic_state(last, fr, 5.0);
        for (int k = 0; k < 20; ++k) {
            s0 = step_intrinsic(s0, 5e-4, opts);
            s5 = step_intrinsic(s5, 5e-4, opts);
        }
        bool bitwise =
            std::memcmp(s0.kappa.data(), s5.kappa.data(), s0.kappa.size() * sizeof(double)) == 0 &&
            std::memcmp(s0.tau.data(), s5.tau.data(), s0.tau.size() * sizeof(double)) == 0;
        ok = ok && bitwise;
        d += std::string("K0 bitwise-independent=") + (bitwise ? "yes" : "NO");
        return std::pair{ok, d};
    });
}

// --- criterion 5 -----------------------------------------------------------
// The focusing cubic NLS residual: exactly on a plane wave, at order >= 1.8
// for the full pipeline on perturbed circles in all three models, and
// invariant under moving the base sample (a constant phase plus seam shift).
inline CheckResult criterion_nls_certification() {
    return detail::guarded("criterion 5: NLS residual certification", 180.0, [] {
        bool ok = true;
        std::string d;

        const std::size_t n = 256;
        const double L = 2.0 * 3.14159265358979323846;
        const double amp = 1.3, b = 0.6, dtv = 1e-4;
        const double omega = -b * b + 0.5 * amp * amp;
        std::vector<std::vector<cplx>> wave(5, std::vector<cplx>(n));
        for (std::size_t k = 0; k < wave.size(); ++k)
            for (std::size_t j = 0; j < n; ++j) {
                double s = L * static_cast<double>(j) / static_cast<double>(n);
                wave[k][j] = std::polar(amp, b * s + omega * dtv * static_cast<double>(k));
            }
        auto wres = nls_residual(wave, dtv, L / static_cast<double>(n), b * L, 0);
        double wmax = *std::max_element(wres.begin(), wres.end());
        ok = ok && wmax < 1e-8;
        d += "plane_wave=" + detail::fmt(wmax) + "; ";

        DynamicsOptions opts;
        opts.tol_drift_rel = 1e-4; // see criterion 4
        GeneratorParams gp;
        gp.radius = 1.0;
        struct Case {
            const char* label;
            double K0;
        } cases[] = {{"euclidean", 0.0}, {"spherical", 1.0}, {"hyperbolic", -1.0}};
        ClosedFilament sphere_case;
        for (const Case& c : cases) {
            SpaceForm M = c.K0 == 0.0 ? SpaceForm::euclidean() : SpaceForm::with_curvature(c.K0);
            ClosedFilament f = generate_initial("perturbed_circle", gp, M, 64);
            if (c.K0 > 0.0) sphere_case = f;
            CertificationReport rep = certify_nls(f, 0.05, 5e-4, opts);
            ok = ok && rep.pass;
            d += std::string(c.label) + " order=" + detail::fmt(rep.order) + "; ";
        }

        // Base-point invariance: rebuild the corrected series in the
        // convention of base sample 37 (constant phase e^{-i rho_37}, seam
        // jump relocated) and compare residuals.
        {
            const std::size_t nn = sphere_case.N();
            const double ds = sphere_case.ds();
            const double dt = 5e-4;
            const std::size_t steps = 12, base = 37;
            FlowState st = make_flow_state(sphere_case, opts);
            std::vector<HasimotoField> hist;
            std::vector<double> A;
            std::vector<double> tau0 = st.frame.tau;
            for (std::size_t k = 0;; ++k) {
                hist.push_back(hasimoto_transform(st.frame.kappa, st.frame.tau, ds, 0));
                A.push_back(gauge_phase(st.frame.kappa, st.frame.tau, ds, 0));
                if (k == steps) break;
                st = step_extrinsic(st, dt, opts);
            }
            const double seam0 = hist[0].total_torsion;
            for (auto& h : hist) {
                double mismatch = seam0 - h.total_torsion;
                for (std::size_t j = 0; j < nn; ++j)
                    h.psi[j] *= std::polar(
                        1.0, mismatch * static_cast<double>(j) / static_cast<double>(nn));
            }
            CorrectedSeries corr = corrected_field(hist, A, dt);
            auto r0 = nls_residual(corr.psi, dt, ds, seam0, 0);

            double rho_b = spectral::cumulative_trapezoid(tau0, ds, 0).values[base];
            std::vector<std::vector<cplx>> rebased = corr.psi;
            for (auto& level : rebased)
                for (std::size_t j = 0; j < nn; ++j)
                    level[j] *= std::polar(1.0, -rho_b + (j < base ? seam0 : 0.0));
            auto rb = nls_residual(rebased, dt, ds, seam0, base);
            double diff = 0.0;
            for (std::size_t i = 0; i < r0.size(); ++i)
                diff = std::max(diff, std::abs(r0[i] - rb[i]));
            ok = ok && diff < 1e-12;
            d += "base_shift_residual_diff=" + detail::fmt(diff);
        }
        return std::pair{ok, d};
    });
}

// --- criterion 6 -----------------------------------------------------------
// Connection coefficients of the three frames: the Frenet frame reproduces
// the analytic +-kappa, +-tau entries at second order, the parallel frame's
// coefficient vanishes at second order, the rank-2 frame coefficient matches
// (1/sqrt2)[[0,-psi],[conj psi,0]] with psi built independently, and J has
// N+iB as a (-i)-eigenvector to rounding in every model.
inline CheckResult criterion_frames() {
    return detail::guarded("criterion 6: frame connection coefficients", 20.0, [] {
        bool ok = true;
        std::string d;
        SpaceForm E = SpaceForm::euclidean();
        GeneratorParams gt;
        detail::CoilOracle oracle{gt.major_radius, gt.minor_radius, static_cast<double>(gt.p),
                                  static_cast<double>(gt.q)};

        auto level = [&](std::size_t n, double& o3_err, double& par_err, double& u2_diag,
                         double& u2_off) {
            ClosedFilament f = generate_initial("torus_knot", gt, E, n);
            FrenetField fr = frenet(f);
            double ds = f.ds();
            auto params = detail::coil_parameters(oracle, f.points);

            RealConnectionCoefficient co = frenet_frame_coefficient(E, fr, ds);
            o3_err = 0.0;
            for (std::size_t i = 0; i < fr.size(); ++i) {
                double ka, ta;
                oracle.kappa_tau(params[i], ka, ta);
                double errs[] = {std::abs(co.entry(i, 1, 0) - ka), std::abs(co.entry(i, 0, 1) + ka),
                                 std::abs(co.entry(i, 2, 1) - ta), std::abs(co.entry(i, 1, 2) + ta),
                                 std::abs(co.entry(i, 0, 0)),      std::abs(co.entry(i, 1, 1)),
                                 std::abs(co.entry(i, 2, 2)),      std::abs(co.entry(i, 0, 2)),
                                 std::abs(co.entry(i, 2, 0))};
                o3_err = std::max(o3_err, *std::max_element(std::begin(errs), std::end(errs)));
            }

            auto rho = parallel_phase(fr.tau, ds, 0);
            double theta = spectral::loop_trapezoid(fr.tau, ds);
            ConnectionCoefficient par =
                ehresmann_coefficient(complex_line_frame(E, fr, f.length, rho, theta));
            par_err = 0.0;
            for (std::size_t i = 0; i < fr.size(); ++i)
                par_err = std::max(par_err, std::abs(par.entry(i, 0, 0)));

            ConnectionCoefficient u2 = hasimoto_frame_coefficient(E, fr, ds, 0);
            HasimotoField h = hasimoto_transform(fr.kappa, fr.tau, ds, 0);
            const double is2 = 1.0 / std::sqrt(2.0);
            u2_diag = 0.0;
            u2_off = 0.0;
            for (std::size_t i = 0; i < fr.size(); ++i) {
                u2_diag = std::max(
                    {u2_diag, std::abs(u2.entry(i, 0, 0)), std::abs(u2.entry(i, 1, 1))});
                u2_off = std::max({u2_off, std::abs(u2.entry(i, 0, 1) + h.psi[i] * is2),
                                   std::abs(u2.entry(i, 1, 0) - std::conj(h.psi[i]) * is2)});
            }
        };

        double o3a, para, dga, offa, o3b, parb, dgb, offb;
        level(1024, o3a, para, dga, offa);
        level(2048, o3b, parb, dgb, offb);
        double r_o3 = o3a / o3b, r_par = para / parb, r_dg = dga / dgb;
        ok = ok && r_o3 >= 3.0 && r_o3 <= 5.0 && o3b < 1e-3;
        ok = ok && r_par >= 3.0 && r_par <= 5.0;
        ok = ok && r_dg >= 3.0 && r_dg <= 5.0;
        // The off-diagonal entries share every ingredient with psi; once the
        // curve is spectrally resolved they agree far below the second-order
        // terms measured above (observed ~5e-8 and ~3e-10 here).
        ok = ok && offa < 1e-6 && offb < 1e-6;
        d += "o3 ratio=" + detail::fmt(r_o3) + " parallel ratio=" + detail::fmt(r_par) +
             " u2 diag ratio=" + detail::fmt(r_dg) + " u2 offdiag=" + detail::fmt(offa) + "/" +
             detail::fmt(offb) + "; ";

        GeneratorParams gc;
        gc.radius = 0.6;
        double j_flat = check_J_eigenvector(E, frenet(generate_initial("torus_knot", gt, E, 256)));
        double j_sph = check_J_eigenvector(
            SpaceForm::with_curvature(1.0),
            frenet(generate_initial("circle", gc, SpaceForm::with_curvature(1.0), 64)));
        double j_hyp = check_J_eigenvector(
            SpaceForm::with_curvature(-1.0),
            frenet(generate_initial("hyperbolic_circle", gc, SpaceForm::with_curvature(-1.0), 64)));
        ok = ok && j_flat < 1e-12 && j_sph < 1e-12 && j_hyp < 1e-12;
        d += "J defect=" + detail::fmt(j_flat) + "/" + detail::fmt(j_sph) + "/" +
             detail::fmt(j_hyp);
        return std::pair{ok, d};
    });
}

// --- criterion 7 -----------------------------------------------------------
// Identical runs produce byte-identical CSV and summary files, the thread
// budget does not change any byte, and the CSV round-trips bit-exactly.
inline CheckResult criterion_determinism() {
    return detail::guarded("criterion 7: determinism and CSV round-trip", 10.0, [] {
        ExperimentConfig cfg;
        cfg.kind = ModelKind::Euclidean;
        cfg.K0 = 0.0;
        cfg.generator = "perturbed_circle";
        cfg.params.radius = 1.0;
        cfg.N = 64;
        cfg.dt = 1e-3;
        cfg.T_end = 0.02;
        cfg.certify = true;
        cfg.tol_drift = 1e-4; // see criterion 4

        const char* prev = std::getenv("VFE_THREADS");
        std::string saved = prev ? prev : "";

        auto run_with = [&](const char* threads, const char* tag) {
            setenv("VFE_THREADS", threads, 1);
            cfg.csv_path = std::string("/tmp/vfe_acceptance_") + tag + ".csv";
            cfg.summary_path = std::string("/tmp/vfe_acceptance_") + tag + ".txt";
            run_to_files(cfg);
            return std::pair{read_text_file(cfg.csv_path), read_text_file(cfg.summary_path)};
        };
        auto [csv_a, sum_a] = run_with("1", "a");
        auto [csv_b, sum_b] = run_with("1", "b");
        auto [csv_c, sum_c] = run_with("4", "c");
        if (prev)
            setenv("VFE_THREADS", saved.c_str(), 1);
        else
            unsetenv("VFE_THREADS");

        bool rerun_same = csv_a == csv_b && sum_a == sum_b;
        bool threads_same = csv_a == csv_c && sum_a == sum_c;
        TimeSeries ts = from_csv(csv_a);
        bool round_trip = to_csv(ts) == csv_a;
        bool ok = rerun_same && threads_same && round_trip;
        std::string d = std::string("rerun_identical=") + (rerun_same ? "yes" : "NO") +
                        " threads_identical=" + (threads_same ? "yes" : "NO") +
                        " csv_round_trip=" + (round_trip ? "yes" : "NO") +
                        " bytes=" + std::to_string(csv_a.size());
        return std::pair{ok, d};
    });
}

inline std::vector<CheckResult> run_suite(const std::string& suite) {
    if (suite == "geometry") return {criterion_curvature_identity()};
    if (suite == "frenet") return {criterion_frenet_oracles()};
    if (suite == "dynamics") return {criterion_circle_translation(), criterion_cross_validation()};
    if (suite == "hasimoto") return {criterion_nls_certification()};
    if (suite == "frames") return {criterion_frames()};
    if (suite == "all")
        return {criterion_curvature_identity(), criterion_frenet_oracles(),
                criterion_circle_translation(), criterion_cross_validation(),
                criterion_nls_certification(), criterion_frames(), criterion_determinism()};
    throw UsageError("unknown suite '" + suite +
                     "'; valid suites: geometry, frenet, dynamics, hasimoto, frames, all");
}

} // namespace vfe::acceptance

#endif
