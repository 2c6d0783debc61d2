#ifndef VFE_HOLONOMY_HPP
#define VFE_HOLONOMY_HPP

#include <cmath>

#include "vfe/errors.hpp"
#include "vfe/space_form.hpp"

namespace vfe::verify {

// Closed-form geodesics and parallel transport on the model spaces.  These
// deliberately avoid the spectral/retraction machinery so they can serve as
// an independent check of the curvature tensor: transporting a vector around
// a small geodesic square of side h rotates it by K*h^2 + O(h^3).

inline AmbientPoint geodesic_point(const SpaceForm& M, const AmbientPoint& p,
                                   const TangentVector& dir, double dist) {
    detail::require_same_base(TangentVector{p.x, dir.v}, dir, "geodesic_point");
    switch (M.kind) {
        case ModelKind::Euclidean:
            return {p.x + dir.v * dist};
        case ModelKind::Spherical: {
            double a = dist / M.radius;
            return {p.x * std::cos(a) + dir.v * (M.radius * std::sin(a))};
        }
        case ModelKind::Hyperbolic: {
            double a = dist / M.radius;
            return {p.x * std::cosh(a) + dir.v * (M.radius * std::sinh(a))};
        }
    }
    throw GeometryError("geodesic_point: bad model kind");
}

// Unit tangent of the geodesic t -> exp_p(t dir) at parameter value dist.
inline TangentVector geodesic_tangent(const SpaceForm& M, const AmbientPoint& p,
                                      const TangentVector& dir, double dist) {
    AmbientPoint q = geodesic_point(M, p, dir, dist);
    switch (M.kind) {
        case ModelKind::Euclidean:
            return {q.x, dir.v};
        case ModelKind::Spherical: {
            double a = dist / M.radius;
            return {q.x, p.x * (-std::sin(a) / M.radius) + dir.v * std::cos(a)};
        }
        case ModelKind::Hyperbolic: {
            double a = dist / M.radius;
            return {q.x, p.x * (std::sinh(a) / M.radius) + dir.v * std::cosh(a)};
        }
    }
    throw GeometryError("geodesic_tangent: bad model kind");
}

// Parallel transport of w from p to exp_p(dist * dir) along that geodesic:
// the component along the geodesic follows the tangent, the orthogonal
// complement is carried unchanged in ambient coordinates.
inline TangentVector transport_along_geodesic(const SpaceForm& M, const AmbientPoint& p,
                                              const TangentVector& dir, double dist,
                                              const TangentVector& w) {
    detail::require_same_base(TangentVector{p.x, w.v}, w, "transport_along_geodesic");
    if (M.kind == ModelKind::Euclidean)
        return {geodesic_point(M, p, dir, dist).x, w.v};
    double a = M.form(w.v, dir.v); // dir is unit
    Vec perp = w.v - dir.v * a;
    TangentVector gt = geodesic_tangent(M, p, dir, dist);
    return {gt.base, gt.v * a + perp};
}

// Unit initial direction of the geodesic from x to y, and the distance.
inline TangentVector log_direction(const SpaceForm& M, const AmbientPoint& x,
                                   const AmbientPoint& y, double& dist) {
    dist = geodesic_distance(M, x.x, y.x);
    if (!(dist > 0.0)) throw UsageError("log_direction: coincident points");
    switch (M.kind) {
        case ModelKind::Euclidean:
            return {x.x, (y.x - x.x) * (1.0 / dist)};
        case ModelKind::Spherical: {
            double a = dist / M.radius;
            return {x.x, (y.x - x.x * std::cos(a)) * (1.0 / (M.radius * std::sin(a)))};
        }
        case ModelKind::Hyperbolic: {
            double a = dist / M.radius;
            return {x.x, (y.x - x.x * std::cosh(a)) * (1.0 / (M.radius * std::sinh(a)))};
        }
    }
    throw GeometryError("log_direction: bad model kind");
}

// Transport a copy of e1 around the geodesic square spanned by e1, e2 with
// side h, then measure the rotation angle against the starting frame.  The
// estimate phi / h^2 converges to the sectional curvature at second order.
inline double holonomy_curvature_estimate(const SpaceForm& M, const AmbientPoint& p,
                                          const TangentVector& e1_in,
                                          const TangentVector& e2_in, double h) {
    if (!(h > 0.0)) throw UsageError("holonomy_curvature_estimate: h must be positive");
    // Orthonormalize the input pair at p.
    TangentVector e1 = e1_in, e2 = e2_in;
    e1.v = e1.v * (1.0 / std::sqrt(metric(M, e1, e1)));
    e2.v = e2.v - e1.v * metric(M, e2, e1);
    e2.v = e2.v * (1.0 / std::sqrt(metric(M, e2, e2)));

    AmbientPoint x = p;
    TangentVector E1 = e1, E2 = e2, w = e1;
    for (int leg = 0; leg < 4; ++leg) {
        TangentVector dir = (leg % 2 == 0) ? E1 : E2;
        if (leg >= 2) dir.v = -dir.v;
        AmbientPoint next = geodesic_point(M, x, dir, h);
        E1 = transport_along_geodesic(M, x, dir, h, E1);
        E2 = transport_along_geodesic(M, x, dir, h, E2);
        w = transport_along_geodesic(M, x, dir, h, w);
        E1.base = next.x;
        E2.base = next.x;
        w.base = next.x;
        x = next;
    }
    // The square does not close exactly; walk the short closing geodesic.
    double gap = (M.kind == ModelKind::Euclidean)
                     ? dist_coords(x.x, p.x)
                     : geodesic_distance(M, x.x, p.x);
    if (gap > 1e-16 * M.radius && gap > 0.0) {
        double d;
        TangentVector dir = log_direction(M, x, p, d);
        w = transport_along_geodesic(M, x, dir, d, w);
    }
    // Re-project onto the tangent plane at p and read off the angle.
    w.base = p.x;
    if (M.kind != ModelKind::Euclidean) w = project_to_tangent(M, p, w.v);
    double c = metric(M, w, e1);
    double s = metric(M, w, e2);
    return std::atan2(s, c) / (h * h);
}

} // namespace vfe::verify

#endif
