#ifndef VFE_FILAMENT_HPP
#define VFE_FILAMENT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "vfe/errors.hpp"
#include "vfe/space_form.hpp"
#include "vfe/spectral.hpp"
#include "vfe/vec.hpp"

namespace vfe {

// Closed curve in a space form, sampled at N points with (to tolerance)
// equal geodesic chords between consecutive samples.  `length` is the
// arclength of the smooth loop through the samples; ds() = length/N is the
// grid spacing used by all spectral operators.  Note the chord between
// consecutive samples is ds - kappa^2 ds^3/24 + O(ds^5), shorter than ds
// itself: "uniform" always means uniform relative to the mean chord.
struct ClosedFilament {
    SpaceForm M;
    std::vector<Vec> points;
    double length = 0.0;

    std::size_t N() const { return points.size(); }
    double ds() const { return length / static_cast<double>(points.size()); }
    AmbientPoint point(std::size_t i) const { return AmbientPoint{points[i]}; }
};

struct ChordStats {
    double mean = 0.0;
    double max_abs_dev = 0.0; // max |chord - mean|
};

inline ChordStats chord_stats(const SpaceForm& M, std::span<const Vec> pts) {
    const std::size_t n = pts.size();
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i)
        c[i] = geodesic_distance(M, pts[i], pts[(i + 1) % n]);
    ChordStats st;
    st.mean = std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(n);
    for (double x : c) st.max_abs_dev = std::max(st.max_abs_dev, std::abs(x - st.mean));
    return st;
}

struct FilamentChecks {
    double tol_manifold = 1e-9;       // relative constraint residual per point
    double tol_uniform_rel = 1e-6;    // max |chord - mean chord| / mean chord
    bool check_self_intersection = true;
};

// Validates the ClosedFilament invariants, throwing GeometryError/UsageError
// with a diagnostic.  Self-intersection detection is a sample-proximity
// heuristic (non-neighbor samples closer than 5% of the mean chord); exact
// segment-segment tests are out of scope.
inline void validate_filament(const ClosedFilament& f, const FilamentChecks& opts = {}) {
    const std::size_t n = f.N();
    if (n < spectral::min_samples)
        throw UsageError("filament: need at least 16 samples, got " + std::to_string(n));
    if (!(f.length > 0.0)) throw GeometryError("filament: nonpositive length");
    for (std::size_t i = 0; i < n; ++i) {
        if (f.points[i].dim != f.M.ambient_dim())
            throw UsageError("filament: point dimension mismatch at sample " + std::to_string(i));
        if (f.M.kind == ModelKind::Hyperbolic && f.points[i][0] <= 0.0)
            throw GeometryError("filament: point on wrong hyperboloid sheet at sample " +
                                std::to_string(i));
        if (f.M.constraint_residual(f.points[i]) > opts.tol_manifold)
            throw GeometryError("filament: point off the model surface at sample " +
                                std::to_string(i) + " (residual " +
                                std::to_string(f.M.constraint_residual(f.points[i])) + ")");
    }
    ChordStats st = chord_stats(f.M, f.points);
    if (!(st.mean > 0.0)) throw GeometryError("filament: degenerate (zero mean chord)");
    if (st.max_abs_dev > opts.tol_uniform_rel * st.mean)
        throw GeometryError("filament: nonuniform spacing (max chord deviation " +
                            std::to_string(st.max_abs_dev / st.mean) +
                            " of the mean chord, tolerance " +
                            std::to_string(opts.tol_uniform_rel) + ")");
    if (opts.check_self_intersection) {
        const double close = 0.05 * st.mean;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 2; j < n; ++j) {
                if (i == 0 && j == n - 1) continue; // cyclic neighbors
                if (geodesic_distance(f.M, f.points[i], f.points[j]) < close)
                    throw GeometryError(
                        "filament: self-intersecting or degenerate input (samples " +
                        std::to_string(i) + " and " + std::to_string(j) +
                        " nearly coincide)");
            }
        }
    }
}

namespace detail {

// Periodic cubic spline interpolation of one scalar component over knots
// t_0=0 < t_1 < ... < t_{n-1} < T.  Moment (second-derivative) form; the
// cyclic tridiagonal system is solved with the Sherman-Morrison correction.
class PeriodicSpline {
  public:
    PeriodicSpline() = default;

    PeriodicSpline(std::vector<double> knots, std::vector<double> values, double period)
        : t_(std::move(knots)), y_(std::move(values)), period_(period) {
        const std::size_t n = t_.size();
        std::vector<double> h(n), rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
            double t1 = (i + 1 < n) ? t_[i + 1] : t_[0] + period_;
            h[i] = t1 - t_[i];
            if (!(h[i] > 0.0)) throw GeometryError("spline: knots not strictly increasing");
        }
        std::vector<double> diag(n), sub(n), sup(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t im = (i + n - 1) % n;
            sub[i] = h[im] / 6.0;
            diag[i] = (h[im] + h[i]) / 3.0;
            sup[i] = h[i] / 6.0;
            double dnext = (y_[(i + 1) % n] - y_[i]) / h[i];
            double dprev = (y_[i] - y_[im]) / h[im];
            rhs[i] = dnext - dprev;
        }
        m_ = solve_cyclic(sub, diag, sup, rhs);
        h_ = std::move(h);
    }

    double period() const { return period_; }
    const std::vector<double>& knots() const { return t_; }

    double eval(double t) const {
        auto [i, u] = locate(t);
        double h = h_[i];
        double A = (h - u) / h, B = u / h;
        double y1 = y_[(i + 1) % y_.size()];
        return A * y_[i] + B * y1 +
               ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[(i + 1) % m_.size()]) *
                   (h * h) / 6.0;
    }

    double deriv(double t) const {
        auto [i, u] = locate(t);
        double h = h_[i];
        double A = (h - u) / h, B = u / h;
        double y1 = y_[(i + 1) % y_.size()];
        return (y1 - y_[i]) / h +
               (-(3.0 * A * A - 1.0) * m_[i] + (3.0 * B * B - 1.0) * m_[(i + 1) % m_.size()]) *
                   h / 6.0;
    }

  private:
    // interval index and offset u = t - t_i, with t reduced mod the period
    std::pair<std::size_t, double> locate(double t) const {
        double u = std::fmod(t, period_);
        if (u < 0.0) u += period_;
        auto it = std::upper_bound(t_.begin(), t_.end(), u);
        std::size_t i = (it == t_.begin()) ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
        return {i, u - t_[i]};
    }

    static std::vector<double> solve_cyclic(const std::vector<double>& a, // sub
                                            const std::vector<double>& b, // diag
                                            const std::vector<double>& c, // sup
                                            const std::vector<double>& r) {
        const std::size_t n = b.size();
        // Sherman-Morrison: write the cyclic matrix as tridiagonal + u v^T.
        const double alpha = a[0];     // corner (0, n-1)
        const double beta = c[n - 1];  // corner (n-1, 0)
        const double gamma = -b[0];
        std::vector<double> bb(b);
        bb[0] = b[0] - gamma;
        bb[n - 1] = b[n - 1] - alpha * beta / gamma;
        auto tri_solve = [&](const std::vector<double>& rhs) {
            std::vector<double> cp(n), x(n);
            cp[0] = c[0] / bb[0];
            x[0] = rhs[0] / bb[0];
            for (std::size_t i = 1; i < n; ++i) {
                double m = bb[i] - a[i] * cp[i - 1];
                cp[i] = c[i] / m;
                x[i] = (rhs[i] - a[i] * x[i - 1]) / m;
            }
            for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
            return x;
        };
        std::vector<double> u(n, 0.0);
        u[0] = gamma;
        u[n - 1] = beta;
        std::vector<double> x = tri_solve(r);
        std::vector<double> z = tri_solve(u);
        double fact = (x[0] + alpha * x[n - 1] / gamma) /
                      (1.0 + z[0] + alpha * z[n - 1] / gamma);
        for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
        return x;
    }

    std::vector<double> t_, y_, h_, m_;
    double period_ = 0.0;
};

// Componentwise periodic spline through ambient points, parameterized by
// cumulative geodesic chord length.
class CurveSpline {
  public:
    CurveSpline(const SpaceForm& M, std::span<const Vec> pts) : M_(M), dim_(M.ambient_dim()) {
        const std::size_t n = pts.size();
        std::vector<double> knots(n);
        knots[0] = 0.0;
        for (std::size_t i = 1; i < n; ++i)
            knots[i] = knots[i - 1] + geodesic_distance(M, pts[i - 1], pts[i]);
        period_ = knots[n - 1] + geodesic_distance(M, pts[n - 1], pts[0]);
        std::vector<double> comp(n);
        for (int a = 0; a < dim_; ++a) {
            for (std::size_t i = 0; i < n; ++i) comp[i] = pts[i][a];
            comps_[a] = PeriodicSpline(knots, comp, period_);
        }
    }

    double period() const { return period_; }
    const std::vector<double>& knots() const { return comps_[0].knots(); }

    Vec eval(double t) const {
        Vec p = Vec::zero(dim_);
        for (int a = 0; a < dim_; ++a) p[a] = comps_[a].eval(t);
        return p;
    }

    // Model speed: Minkowski norm of the parameter derivative for the
    // hyperbolic model, Euclidean norm otherwise.  The spline stays within
    // O(h^4) of the surface, where the tangent pairing is positive.
    double speed(double t) const {
        Vec d = Vec::zero(dim_);
        for (int a = 0; a < dim_; ++a) d[a] = comps_[a].deriv(t);
        return std::sqrt(std::max(0.0, M_.form(d, d)));
    }

    // Arclength of [0, t] by composite 7-point Gauss-Legendre between knots.
    double arclength(double t) const {
        prepare_table();
        double u = std::fmod(t, period_);
        if (u < 0.0) u += period_;
        double full_loops = std::floor((t - u) / period_ + 0.5);
        auto& kn = knots();
        auto it = std::upper_bound(kn.begin(), kn.end(), u);
        std::size_t i = (it == kn.begin()) ? 0 : static_cast<std::size_t>(it - kn.begin()) - 1;
        return full_loops * total_length_ + prefix_[i] + quad(kn[i], u);
    }

    double total_length() const {
        prepare_table();
        return total_length_;
    }

    // Invert arclength by bisection: parameter t with arclength(t) = target.
    double parameter_at_arclength(double target) const {
        prepare_table();
        double loops = std::floor(target / total_length_);
        double rem = target - loops * total_length_;
        auto& kn = knots();
        auto it = std::upper_bound(prefix_.begin(), prefix_.end(), rem);
        std::size_t i = (it == prefix_.begin()) ? 0 : static_cast<std::size_t>(it - prefix_.begin()) - 1;
        if (i >= kn.size()) i = kn.size() - 1;
        double lo = kn[i];
        double hi = (i + 1 < kn.size()) ? kn[i + 1] : period_;
        double want = rem - prefix_[i];
        for (int iter = 0; iter < 64 && (hi - lo) > 1e-15 * period_; ++iter) {
            double mid = 0.5 * (lo + hi);
            (quad(kn[i], mid) < want ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi) + loops * period_;
    }

  private:
    void prepare_table() const {
        if (!prefix_.empty()) return;
        auto& kn = knots();
        const std::size_t n = kn.size();
        prefix_.resize(n);
        prefix_[0] = 0.0;
        for (std::size_t i = 1; i < n; ++i)
            prefix_[i] = prefix_[i - 1] + quad(kn[i - 1], kn[i]);
        total_length_ = prefix_[n - 1] + quad(kn[n - 1], period_);
    }

    double quad(double a, double b) const {
        // 7-point Gauss-Legendre nodes/weights on [-1,1]
        static const double xg[7] = {-0.9491079123427585, -0.7415311855993945,
                                     -0.4058451513773972, 0.0,
                                     0.4058451513773972,  0.7415311855993945,
                                     0.9491079123427585};
        static const double wg[7] = {0.1294849661688697, 0.2797053914892766,
                                     0.3818300505051189, 0.4179591836734694,
                                     0.3818300505051189, 0.2797053914892766,
                                     0.1294849661688697};
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double s = 0.0;
        for (int g = 0; g < 7; ++g) s += wg[g] * speed(mid + half * xg[g]);
        return s * half;
    }

    SpaceForm M_;
    int dim_;
    std::array<PeriodicSpline, 4> comps_;
    double period_ = 0.0;
    mutable std::vector<double> prefix_;
    mutable double total_length_ = 0.0;
};

} // namespace detail

// Resamples the curve through `pts` at `target_n` points with equal geodesic
// chords.  Interpolant: periodic cubic spline in chord-length
// parameterization; arclength by Gauss-Legendre quadrature; inversion by
// bisection; a few chord-equalization sweeps flatten the residual chord
// variation to ~1e-9 relative.  Points are retracted onto the model.
inline ClosedFilament resample_to(const SpaceForm& M, std::span<const Vec> pts,
                                  std::size_t target_n, const FilamentChecks& checks = {}) {
    if (pts.size() < 4) throw UsageError("resample: need at least 4 input samples");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::size_t j = (i + 1) % pts.size();
        if (geodesic_distance(M, pts[i], pts[j]) <= 0.0)
            throw GeometryError("resample: degenerate input (coincident consecutive samples " +
                                std::to_string(i) + ", " + std::to_string(j) + ")");
    }
    detail::CurveSpline spline(M, pts);
    const double L = spline.total_length();
    const std::size_t n = target_n;

    std::vector<double> sigma(n); // arclength targets
    for (std::size_t j = 0; j < n; ++j)
        sigma[j] = L * static_cast<double>(j) / static_cast<double>(n);

    std::vector<Vec> out(n);
    std::vector<double> t(n), chord(n), dsig(n);
    for (int sweep = 0; sweep < 10; ++sweep) {
        for (std::size_t j = 0; j < n; ++j) {
            t[j] = spline.parameter_at_arclength(sigma[j]);
            out[j] = retract(M, spline.eval(t[j])).x;
        }
        double mean = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            chord[j] = geodesic_distance(M, out[j], out[(j + 1) % n]);
            mean += chord[j];
        }
        mean /= static_cast<double>(n);
        double dev = 0.0;
        for (std::size_t j = 0; j < n; ++j) dev = std::max(dev, std::abs(chord[j] - mean));
        if (dev <= 1e-9 * mean) break;
        // Rescale each arclength increment by mean/chord and renormalize.
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double cur = (j + 1 < n ? sigma[j + 1] : L) - sigma[j];
            dsig[j] = cur * (mean / chord[j]);
            total += dsig[j];
        }
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            sigma[j] = acc;
            acc += dsig[j] * (L / total);
        }
    }

    ClosedFilament f{M, std::move(out), L};
    validate_filament(f, checks);
    return f;
}

// Same-N equal-chord resampling (the usual entry point).
inline ClosedFilament resample_arclength(const SpaceForm& M, std::span<const Vec> pts,
                                         const FilamentChecks& checks = {}) {
    return resample_to(M, pts, pts.size(), checks);
}

inline ClosedFilament resample_arclength(const ClosedFilament& f,
                                         const FilamentChecks& checks = {}) {
    return resample_to(f.M, f.points, f.N(), checks);
}

// Refined copy for convergence studies: same smooth curve, factor x samples.
// The input is densified by trigonometric interpolation (the samples are a
// smooth periodic function of index) before the equal-chord resample, so the
// refined points sit on the underlying curve to spectral accuracy.  Splining
// the original samples directly would leave C^2 kinks of size (L/N)^4 that
// third-derivative spectra amplify above the discretization error the
// refinement is supposed to measure.
inline ClosedFilament refine(const ClosedFilament& f, std::size_t factor,
                             const FilamentChecks& checks = {}) {
    if (factor == 0) throw UsageError("refine: factor must be >= 1");
    const std::size_t n = f.N();
    const std::size_t target = n * factor;
    const std::size_t dense = std::max<std::size_t>(8 * target, 512);
    const int dim = f.M.ambient_dim();

    std::vector<double> coord(n);
    std::vector<std::vector<double>> dense_coord(static_cast<std::size_t>(dim));
    for (int d = 0; d < dim; ++d) {
        for (std::size_t j = 0; j < n; ++j) coord[j] = f.points[j][d];
        dense_coord[static_cast<std::size_t>(d)] =
            spectral::resample(std::span<const double>(coord), dense);
    }
    std::vector<Vec> dense_pts(dense);
    for (std::size_t j = 0; j < dense; ++j) {
        Vec p = Vec::zero(dim);
        for (int d = 0; d < dim; ++d) p[d] = dense_coord[static_cast<std::size_t>(d)][j];
        dense_pts[j] = retract(f.M, p).x;
    }
    return resample_to(f.M, dense_pts, target, checks);
}

// Frenet data along a closed filament.
struct FrenetField {
    std::vector<TangentVector> T, N, B;
    std::vector<double> kappa, tau;
    std::size_t size() const { return kappa.size(); }
};

// Builds the Frenet frame and curvature/torsion by spectral differentiation:
//   T = normalized ds-derivative of the points,
//   kappa = |D/ds T|,  N = (D/ds T)/kappa orthonormalized against T,
//   B = T x N,         tau = <D/ds N, B>.
// Fails loudly when curvature is unresolvable: kappa < kappa_min anywhere
// means N (the direction of the curve's second-fundamental-form trace) is
// numerically undefined there.
inline FrenetField frenet(const ClosedFilament& f, double kappa_min = -1.0) {
    const std::size_t n = f.N();
    if (n < spectral::min_samples)
        throw UsageError("frenet: need at least 16 samples");
    if (kappa_min < 0.0) kappa_min = 1e-6 / f.length;
    const double ds = f.ds();
    const int dim = f.M.ambient_dim();

    FrenetField out;
    out.T.resize(n);
    // d(points)/ds, projected: raw tangent before normalization
    {
        std::vector<double> comp(n);
        std::vector<std::vector<double>> d(dim);
        for (int a = 0; a < dim; ++a) {
            for (std::size_t i = 0; i < n; ++i) comp[i] = f.points[i][a];
            d[a] = spectral::derivative(std::span<const double>(comp), f.length, 1);
        }
        for (std::size_t i = 0; i < n; ++i) {
            Vec w = Vec::zero(dim);
            for (int a = 0; a < dim; ++a) w[a] = d[a][i];
            TangentVector raw = project_to_tangent(f.M, f.point(i), w);
            double sp = norm(f.M, raw);
            if (!(sp > 0.0))
                throw GeometryError("frenet: vanishing tangent at sample " + std::to_string(i));
            out.T[i] = TangentVector{raw.base, (1.0 / sp) * raw.v};
        }
    }

    std::vector<TangentVector> DT = covariant_derivative(f.M, out.T, ds);
    out.kappa.resize(n);
    out.N.resize(n);
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < n; ++i) {
        // remove any residual T component before taking the norm (exact
        // Gram-Schmidt keeps N orthogonal to T at every sample)
        double a = metric(f.M, DT[i], out.T[i]);
        TangentVector perp{DT[i].base, DT[i].v - a * out.T[i].v};
        double k = norm(f.M, perp);
        out.kappa[i] = k;
        if (k < kappa_min) {
            bad.push_back(i);
            out.N[i] = TangentVector{perp.base, Vec::zero(dim)};
        } else {
            out.N[i] = TangentVector{perp.base, (1.0 / k) * perp.v};
        }
    }
    if (!bad.empty()) {
        std::string msg = "frenet: curvature below kappa_min=" + std::to_string(kappa_min) +
                          " at sample(s)";
        std::size_t show = std::min<std::size_t>(bad.size(), 8);
        for (std::size_t i = 0; i < show; ++i) msg += " " + std::to_string(bad[i]);
        if (bad.size() > show) msg += " ... (" + std::to_string(bad.size()) + " total)";
        throw FrenetUndefinedError(msg);
    }

    out.B.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.B[i] = cross(f.M, out.T[i], out.N[i]);

    std::vector<TangentVector> DN = covariant_derivative(f.M, out.N, ds);
    out.tau.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.tau[i] = metric(f.M, DN[i], out.B[i]);
    return out;
}

// First/second spectral derivative of a periodic scalar field on the
// filament grid (thin wrapper so callers need not track L explicitly).
inline std::vector<double> periodic_derivative(std::span<const double> field, double ds,
                                               int order) {
    return spectral::derivative(field, ds * static_cast<double>(field.size()), order);
}

inline std::vector<cplx> periodic_derivative(std::span<const cplx> field, double ds, int order) {
    return spectral::derivative(field, ds * static_cast<double>(field.size()), order);
}

} // namespace vfe

#endif
