#ifndef VFE_GENERATORS_HPP
#define VFE_GENERATORS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "vfe/errors.hpp"
#include "vfe/filament.hpp"
#include "vfe/space_form.hpp"

namespace vfe {

struct GeneratorParams {
    double radius = 1.0;        // geodesic radius of the circle family
    int mode = 3;               // radial perturbation mode m
    double amplitude = -1.0;    // absolute amplitude; < 0 selects the generator default
                                // (0.05*radius for perturbed_circle, 0 for hopf_circle)
    int p = 2, q = 5;           // winding numbers (torus_knot, hopf_circle)
    double major_radius = 3.0;  // torus_knot
    double minor_radius = 0.5;  // torus_knot
    double theta0 = 0.78539816339744831; // hopf_circle latitude (pi/4)
};

namespace detail {

struct AnalyticCurve {
    std::function<Vec(double)> pos; // parameter u in [0, 2*pi)
    std::function<Vec(double)> vel; // d pos / du
};

constexpr double two_pi = 6.2831853071795864769;

// Equal-chord sampling of an analytic curve: arclength table by composite
// Gauss-Legendre, inversion by safeguarded Newton, then chord-equalization
// sweeps on the exact curve positions.  Output points carry no interpolation
// error; only the O(ds^2) equal-chord parameterization bias remains.
class ArclengthSampler {
  public:
    ArclengthSampler(const SpaceForm& M, AnalyticCurve curve, std::size_t panels)
        : M_(M), curve_(std::move(curve)), panels_(panels) {
        prefix_.resize(panels_ + 1);
        prefix_[0] = 0.0;
        const double h = two_pi / static_cast<double>(panels_);
        for (std::size_t i = 0; i < panels_; ++i)
            prefix_[i + 1] = prefix_[i] + quad(h * static_cast<double>(i),
                                               h * static_cast<double>(i + 1));
    }

    double total_length() const { return prefix_.back(); }

    double speed(double u) const {
        Vec v = curve_.vel(u);
        return std::sqrt(std::max(0.0, M_.form(v, v)));
    }

    // parameter u with arclength(u) = sigma
    double invert(double sigma) const {
        const double h = two_pi / static_cast<double>(panels_);
        auto it = std::upper_bound(prefix_.begin(), prefix_.end(), sigma);
        std::size_t i = (it == prefix_.begin()) ? 0 : static_cast<std::size_t>(it - prefix_.begin()) - 1;
        if (i >= panels_) i = panels_ - 1;
        const double a0 = h * static_cast<double>(i);
        const double want = sigma - prefix_[i];
        double lo = a0, hi = a0 + h;
        double t = 0.5 * (lo + hi);
        for (int iter = 0; iter < 60; ++iter) {
            double g = quad(a0, t) - want;
            if (std::abs(g) < 1e-15 * total_length()) break;
            (g < 0.0 ? lo : hi) = t;
            double sp = speed(t);
            double tn = (sp > 0.0) ? t - g / sp : 0.5 * (lo + hi);
            t = (tn > lo && tn < hi) ? tn : 0.5 * (lo + hi);
        }
        return t;
    }

  private:
    double quad(double a, double b) const {
        static const double xg[10] = {
            -0.9739065285171717, -0.8650633666889845, -0.6794095682990244,
            -0.4333953941292472, -0.1488743389816312, 0.1488743389816312,
            0.4333953941292472,  0.6794095682990244,  0.8650633666889845,
            0.9739065285171717};
        static const double wg[10] = {
            0.0666713443086881, 0.1494513491505806, 0.2190863625159820,
            0.2692667193099963, 0.2955242247147529, 0.2955242247147529,
            0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
            0.0666713443086881};
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double s = 0.0;
        for (int g = 0; g < 10; ++g) s += wg[g] * speed(mid + half * xg[g]);
        return s * half;
    }

    SpaceForm M_;
    AnalyticCurve curve_;
    std::size_t panels_;
    std::vector<double> prefix_;
};

inline ClosedFilament sample_equal_chord(const SpaceForm& M, const AnalyticCurve& curve,
                                         std::size_t n) {
    ArclengthSampler sampler(M, curve, std::max<std::size_t>(256, 4 * n));
    const double L = sampler.total_length();
    std::vector<double> sigma(n), dsig(n), chord(n);
    for (std::size_t j = 0; j < n; ++j)
        sigma[j] = L * static_cast<double>(j) / static_cast<double>(n);
    std::vector<Vec> pts(n);
    for (int sweep = 0; sweep < 12; ++sweep) {
        for (std::size_t j = 0; j < n; ++j)
            pts[j] = retract(M, curve.pos(sampler.invert(sigma[j]))).x;
        double mean = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            chord[j] = geodesic_distance(M, pts[j], pts[(j + 1) % n]);
            mean += chord[j];
        }
        mean /= static_cast<double>(n);
        double dev = 0.0;
        for (std::size_t j = 0; j < n; ++j) dev = std::max(dev, std::abs(chord[j] - mean));
        if (dev <= 1e-12 * mean) break;
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
    ClosedFilament f{M, std::move(pts), L};
    validate_filament(f);
    return f;
}

// Uniform-speed curves: equal parameter spacing is already equal-chord
// (by the symmetry of the orbit), so sample directly with exact length.
inline ClosedFilament sample_uniform(const SpaceForm& M, const AnalyticCurve& curve,
                                     std::size_t n, double exact_length) {
    std::vector<Vec> pts(n);
    for (std::size_t j = 0; j < n; ++j)
        pts[j] = retract(M, curve.pos(two_pi * static_cast<double>(j) / static_cast<double>(n))).x;
    ClosedFilament f{M, std::move(pts), exact_length};
    validate_filament(f);
    return f;
}

// Geodesic circle of radius rho0 in a totally geodesic 2-plane, as a
// function of the (possibly u-dependent) radius — shared by the circle and
// perturbed_circle generators on all three models.
inline AnalyticCurve circle_curve(const SpaceForm& M, std::function<double(double)> rho,
                                  std::function<double(double)> drho) {
    switch (M.kind) {
        case ModelKind::Euclidean:
            return AnalyticCurve{
                [rho](double u) {
                    double g = rho(u);
                    return Vec(g * std::cos(u), g * std::sin(u), 0.0);
                },
                [rho, drho](double u) {
                    double g = rho(u), gp = drho(u);
                    return Vec(gp * std::cos(u) - g * std::sin(u),
                               gp * std::sin(u) + g * std::cos(u), 0.0);
                }};
        case ModelKind::Spherical: {
            double R = M.radius;
            return AnalyticCurve{
                [rho, R](double u) {
                    double a = rho(u) / R;
                    return Vec(R * std::cos(a), R * std::sin(a) * std::cos(u),
                               R * std::sin(a) * std::sin(u), 0.0);
                },
                [rho, drho, R](double u) {
                    double a = rho(u) / R, ap = drho(u) / R;
                    double sa = std::sin(a), ca = std::cos(a);
                    return Vec(-R * ap * sa, R * (ap * ca * std::cos(u) - sa * std::sin(u)),
                               R * (ap * ca * std::sin(u) + sa * std::cos(u)), 0.0);
                }};
        }
        default: {
            double R = M.radius;
            return AnalyticCurve{
                [rho, R](double u) {
                    double a = rho(u) / R;
                    return Vec(R * std::cosh(a), R * std::sinh(a) * std::cos(u),
                               R * std::sinh(a) * std::sin(u), 0.0);
                },
                [rho, drho, R](double u) {
                    double a = rho(u) / R, ap = drho(u) / R;
                    double sa = std::sinh(a), ca = std::cosh(a);
                    return Vec(R * ap * sa, R * (ap * ca * std::cos(u) - sa * std::sin(u)),
                               R * (ap * ca * std::sin(u) + sa * std::cos(u)), 0.0);
                }};
        }
    }
}

inline void require_radius(const SpaceForm& M, double rho0, double amplitude) {
    if (!(rho0 > 0.0)) throw UsageError("generator: radius must be positive");
    double hi = rho0 + std::abs(amplitude);
    if (M.kind == ModelKind::Spherical && hi >= 3.14159265358979323846 * M.radius)
        throw UsageError("generator: radius too large for the sphere (reaches the antipode)");
    if (!(rho0 - std::abs(amplitude) > 0.0))
        throw UsageError("generator: perturbation amplitude exceeds the radius");
}

} // namespace detail

// Named initial conditions.  All generators return a filament passing the
// standing checks (on-model, equal chords, kappa above threshold).
//   circle            any model; geodesic circle of radius `radius`
//   perturbed_circle  any model; radius(u) = radius + amplitude*cos(mode*u)
//                     (default amplitude 0.05*radius)
//   torus_knot        Euclidean; (p,q) curve on a torus of radii
//                     major_radius/minor_radius
//   hopf_circle       Spherical; (p,q) orbit on the Clifford torus at
//                     latitude theta0, optionally perturbed in theta by
//                     amplitude*cos(mode*u); kappa and tau are constant for
//                     the unperturbed orbit
//   hyperbolic_circle Hyperbolic; alias of circle restricted to that model
inline ClosedFilament generate_initial(const std::string& name, const GeneratorParams& params,
                                       const SpaceForm& M, std::size_t n) {
    if (n < spectral::min_samples)
        throw UsageError("generate_initial: need at least 16 samples");

    ClosedFilament f;
    if (name == "circle" || name == "hyperbolic_circle") {
        if (name == "hyperbolic_circle" && M.kind != ModelKind::Hyperbolic)
            throw UsageError("generate_initial: hyperbolic_circle requires the Hyperbolic model");
        detail::require_radius(M, params.radius, 0.0);
        double rho0 = params.radius;
        auto curve = detail::circle_curve(
            M, [rho0](double) { return rho0; }, [](double) { return 0.0; });
        double L;
        switch (M.kind) {
            case ModelKind::Euclidean: L = detail::two_pi * rho0; break;
            case ModelKind::Spherical: L = detail::two_pi * M.radius * std::sin(rho0 / M.radius); break;
            default: L = detail::two_pi * M.radius * std::sinh(rho0 / M.radius); break;
        }
        f = detail::sample_uniform(M, curve, n, L);
    } else if (name == "perturbed_circle") {
        double eps = params.amplitude < 0.0 ? 0.05 * params.radius : params.amplitude;
        detail::require_radius(M, params.radius, eps);
        double rho0 = params.radius;
        int m = params.mode;
        auto curve = detail::circle_curve(
            M, [rho0, eps, m](double u) { return rho0 + eps * std::cos(m * u); },
            [eps, m](double u) { return -eps * m * std::sin(m * u); });
        f = detail::sample_equal_chord(M, curve, n);
    } else if (name == "torus_knot") {
        if (M.kind != ModelKind::Euclidean)
            throw UsageError("generate_initial: torus_knot requires the Euclidean model");
        int p = params.p, q = params.q;
        double Rmaj = params.major_radius, r = params.minor_radius;
        if (p <= 0 || q <= 0 || std::gcd(p, q) != 1)
            throw UsageError("generate_initial: torus_knot winding numbers must be positive and coprime");
        if (!(Rmaj > r && r > 0.0))
            throw UsageError("generate_initial: torus_knot needs major_radius > minor_radius > 0");
        detail::AnalyticCurve curve{
            [=](double u) {
                double w = Rmaj + r * std::cos(q * u);
                return Vec(w * std::cos(p * u), w * std::sin(p * u), r * std::sin(q * u));
            },
            [=](double u) {
                double w = Rmaj + r * std::cos(q * u);
                double wp = -r * q * std::sin(q * u);
                return Vec(wp * std::cos(p * u) - p * w * std::sin(p * u),
                           wp * std::sin(p * u) + p * w * std::cos(p * u),
                           r * q * std::cos(q * u));
            }};
        f = detail::sample_equal_chord(M, curve, n);
    } else if (name == "hopf_circle") {
        if (M.kind != ModelKind::Spherical)
            throw UsageError("generate_initial: hopf_circle requires the Spherical model");
        int p = params.p, q = params.q, m = params.mode;
        if (p <= 0 || q <= 0 || p == q)
            throw UsageError("generate_initial: hopf_circle needs positive winding numbers p != q "
                             "(equal windings give a geodesic with kappa = 0)");
        double th0 = params.theta0;
        double eps = params.amplitude < 0.0 ? 0.0 : params.amplitude;
        if (!(th0 - std::abs(eps) > 0.0) || !(th0 + std::abs(eps) < 1.5707963267948966))
            throw UsageError("generate_initial: hopf_circle latitude must stay inside (0, pi/2)");
        double R = M.radius;
        auto theta = [th0, eps, m](double u) { return th0 + eps * std::cos(m * u); };
        auto dtheta = [eps, m](double u) { return -eps * m * std::sin(m * u); };
        detail::AnalyticCurve curve{
            [=](double u) {
                double th = theta(u);
                return Vec(R * std::cos(th) * std::cos(p * u), R * std::cos(th) * std::sin(p * u),
                           R * std::sin(th) * std::cos(q * u), R * std::sin(th) * std::sin(q * u));
            },
            [=](double u) {
                double th = theta(u), dth = dtheta(u);
                double c = std::cos(th), s = std::sin(th);
                return Vec(R * (-dth * s * std::cos(p * u) - p * c * std::sin(p * u)),
                           R * (-dth * s * std::sin(p * u) + p * c * std::cos(p * u)),
                           R * (dth * c * std::cos(q * u) - q * s * std::sin(q * u)),
                           R * (dth * c * std::sin(q * u) + q * s * std::cos(q * u)));
            }};
        if (eps == 0.0) {
            double c = std::cos(th0), s = std::sin(th0);
            double L = detail::two_pi * R * std::sqrt(p * p * c * c + q * q * s * s);
            f = detail::sample_uniform(M, curve, n, L);
        } else {
            f = detail::sample_equal_chord(M, curve, n);
        }
    } else {
        throw UsageError("generate_initial: unknown generator '" + name +
                         "' (valid: circle, perturbed_circle, torus_knot, hopf_circle, "
                         "hyperbolic_circle)");
    }

    frenet(f); // enforces kappa > kappa_min; FrenetUndefined propagates
    return f;
}

} // namespace vfe

#endif
