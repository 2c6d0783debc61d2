#ifndef VFE_SPACE_FORM_HPP
#define VFE_SPACE_FORM_HPP

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "vfe/errors.hpp"
#include "vfe/spectral.hpp"
#include "vfe/vec.hpp"

namespace vfe {

enum class ModelKind { Euclidean, Spherical, Hyperbolic };

inline const char* to_string(ModelKind k) {
    switch (k) {
        case ModelKind::Euclidean: return "Euclidean";
        case ModelKind::Spherical: return "Spherical";
        default: return "Hyperbolic";
    }
}

// One of the three simply connected constant-curvature 3-manifolds, in its
// standard embedding:
//   Euclidean  : R^3 itself,
//   Spherical  : round sphere <p,p> = R^2 in R^4,
//   Hyperbolic : upper hyperboloid <p,p>_mink = -R^2, p0 > 0, in Minkowski
//                R^4 with signature (-,+,+,+),
// where R = 1/sqrt(|K0|).  All three make the Levi-Civita derivative
// "differentiate in the ambient space, then project to the tangent space",
// which keeps a single code path for the whole library.
struct SpaceForm {
    ModelKind kind = ModelKind::Euclidean;
    double K0 = 0.0;
    double radius = 0.0; // 1/sqrt(|K0|) for curved kinds, unused when flat

    static SpaceForm euclidean() { return SpaceForm{}; }

    static SpaceForm with_curvature(double K0) {
        SpaceForm m;
        m.K0 = K0;
        if (K0 > 0.0) {
            m.kind = ModelKind::Spherical;
            m.radius = 1.0 / std::sqrt(K0);
        } else if (K0 < 0.0) {
            m.kind = ModelKind::Hyperbolic;
            m.radius = 1.0 / std::sqrt(-K0);
        }
        return m;
    }

    int ambient_dim() const { return kind == ModelKind::Euclidean ? 3 : 4; }
    bool flat() const { return kind == ModelKind::Euclidean; }

    // Ambient bilinear form: Euclidean dot for flat/spherical, Minkowski
    // pairing (-,+,+,+) for hyperbolic.
    double form(const Vec& a, const Vec& b) const {
        double s = dot_coords(a, b);
        if (kind == ModelKind::Hyperbolic) s -= 2.0 * a[0] * b[0];
        return s;
    }

    // |<p,p> -/+ R^2| / R^2; 0 for Euclidean.  Sign of p0 is checked
    // separately (a hyperboloid point on the lower sheet is invalid).
    double constraint_residual(const Vec& p) const {
        switch (kind) {
            case ModelKind::Euclidean: return 0.0;
            case ModelKind::Spherical:
                return std::abs(form(p, p) - radius * radius) / (radius * radius);
            default:
                return std::abs(form(p, p) + radius * radius) / (radius * radius);
        }
    }

    bool on_model(const Vec& p, double tol = 1e-9) const {
        if (p.dim != ambient_dim()) return false;
        if (kind == ModelKind::Hyperbolic && p[0] <= 0.0) return false;
        return constraint_residual(p) <= tol;
    }
};

struct AmbientPoint {
    Vec x;
};

struct TangentVector {
    Vec base; // ambient coordinates of the foot point
    Vec v;    // ambient coordinates of the vector
};

namespace detail {

inline void require_same_base(const TangentVector& u, const TangentVector& v,
                              const char* op) {
    double scale = 1.0 + norm_coords(u.base);
    if (dist_coords(u.base, v.base) > 1e-9 * scale)
        throw UsageError(std::string(op) + ": tangent vectors have different base points");
}

} // namespace detail

// Riemannian inner product of two tangent vectors at the same point.  The
// ambient form restricted to the tangent space is positive definite in all
// three models (for the hyperboloid the timelike direction is normal).
inline double metric(const SpaceForm& M, const TangentVector& u, const TangentVector& v) {
    detail::require_same_base(u, v, "metric");
    return M.form(u.v, v.v);
}

inline double norm(const SpaceForm& M, const TangentVector& u) {
    return std::sqrt(std::max(0.0, M.form(u.v, u.v)));
}

// Form-orthogonal projection of an ambient vector onto the tangent space at p:
// w - (<w,p>/<p,p>) p.  Identity in the Euclidean model.
inline TangentVector project_to_tangent(const SpaceForm& M, const AmbientPoint& p, const Vec& w) {
    if (w.dim != M.ambient_dim())
        throw UsageError("project_to_tangent: ambient dimension mismatch");
    if (M.flat()) return TangentVector{p.x, w};
    double pp = M.form(p.x, p.x); // = +/- R^2 up to constraint residual
    double wp = M.form(w, p.x);
    return TangentVector{p.x, w - (wp / pp) * p.x};
}

// Oriented cross product: the unique tangent w with metric(w,x) = vol(u,v,x)
// for every tangent x.  The volume form is det[u,v,x] in the Euclidean model
// and det[p/R, u, v, x] (outward/timelike normal first) in the curved ones;
// at the sphere's or hyperboloid's "north pole" this reproduces the familiar
// right-handed e1 x e2 = e3.
inline TangentVector cross(const SpaceForm& M, const TangentVector& u, const TangentVector& v) {
    detail::require_same_base(u, v, "cross");
    if (M.flat()) {
        const Vec &a = u.v, &b = v.v;
        return TangentVector{u.base,
                             Vec(a[1] * b[2] - a[2] * b[1],
                                 a[2] * b[0] - a[0] * b[2],
                                 a[0] * b[1] - a[1] * b[0])};
    }
    Vec n = (1.0 / M.radius) * u.base;
    Vec d = Vec::zero(4);
    for (int l = 0; l < 4; ++l) {
        Vec e = Vec::zero(4);
        e[l] = 1.0;
        d[l] = det4(n, u.v, v.v, e);
    }
    // dot_coords(d, x) = det[n,u,v,x]; convert the covector d to a vector via
    // the ambient form (flip the timelike slot for the hyperboloid).
    if (M.kind == ModelKind::Hyperbolic) d[0] = -d[0];
    return TangentVector{u.base, d};
}

// Constant-curvature tensor in the (X,Y,W,Z) slot order:
//   K0 ( <X,W><Y,Z> - <X,Z><Y,W> ),
// so riemann(T,B,T,B) = K0 for orthonormal T,B.
inline double riemann(const SpaceForm& M, const TangentVector& X, const TangentVector& Y,
                      const TangentVector& W, const TangentVector& Z) {
    detail::require_same_base(X, Y, "riemann");
    detail::require_same_base(X, W, "riemann");
    detail::require_same_base(X, Z, "riemann");
    return M.K0 * (metric(M, X, W) * metric(M, Y, Z) - metric(M, X, Z) * metric(M, Y, W));
}

// Rescale an ambient vector back onto the model surface (identity when flat).
// Used after each integrator stage; idempotent.
inline AmbientPoint retract(const SpaceForm& M, const Vec& p) {
    if (p.dim != M.ambient_dim())
        throw UsageError("retract: ambient dimension mismatch");
    if (M.flat()) return AmbientPoint{p};
    double pp = M.form(p, p);
    double R2 = M.radius * M.radius;
    if (M.kind == ModelKind::Spherical) {
        if (pp < 0.64 * R2 || pp > 1.44 * R2)
            throw NumericalError("retract: point too far from the sphere (|p|^2/R^2 = " +
                                 std::to_string(pp / R2) + ")");
        return AmbientPoint{(M.radius / std::sqrt(pp)) * p};
    }
    // Hyperboloid: need <p,p> < 0 (inside the light cone) and p0 > 0.
    if (p[0] <= 0.0 || pp > -0.64 * R2 || pp < -1.44 * R2)
        throw NumericalError("retract: point too far from the hyperboloid (<p,p>/R^2 = " +
                             std::to_string(pp / R2) + ")");
    return AmbientPoint{(M.radius / std::sqrt(-pp)) * p};
}

// Levi-Civita derivative D/ds of a tangent field along a uniformly sampled
// closed curve: spectral derivative of each ambient coordinate function,
// then tangent projection at every base point.  In the Euclidean model the
// projection is the identity and this is plain periodic differentiation.
inline std::vector<TangentVector> covariant_derivative(const SpaceForm& M,
                                                       std::span<const TangentVector> field,
                                                       double ds) {
    if (field.size() < spectral::min_samples)
        throw UsageError("covariant_derivative: need at least 16 samples, got " +
                         std::to_string(field.size()));
    if (!(ds > 0.0)) throw UsageError("covariant_derivative: ds must be positive");
    const std::size_t n = field.size();
    const double length = ds * static_cast<double>(n);
    const int dim = M.ambient_dim();
    std::vector<std::vector<double>> dcoord(dim);
    std::vector<double> comp(n);
    for (int a = 0; a < dim; ++a) {
        for (std::size_t i = 0; i < n; ++i) comp[i] = field[i].v[a];
        dcoord[a] = spectral::derivative(std::span<const double>(comp), length, 1);
    }
    std::vector<TangentVector> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec w = Vec::zero(dim);
        for (int a = 0; a < dim; ++a) w[a] = dcoord[a][i];
        out[i] = project_to_tangent(M, AmbientPoint{field[i].base}, w);
    }
    return out;
}

// Geodesic distance between nearby model points, used for chord lengths.
// Closed forms: straight-line distance (flat), 2R asin(|p-q|/2R) (sphere),
// 2R asinh(sqrt(<p-q,p-q>_mink)/2R) (hyperboloid; the difference of two
// hyperboloid points is spacelike).
inline double geodesic_distance(const SpaceForm& M, const Vec& p, const Vec& q) {
    switch (M.kind) {
        case ModelKind::Euclidean:
            return dist_coords(p, q);
        case ModelKind::Spherical: {
            double c = dist_coords(p, q);
            double x = std::min(1.0, c / (2.0 * M.radius));
            return 2.0 * M.radius * std::asin(x);
        }
        default: {
            Vec d = p - q;
            double m2 = M.form(d, d);
            double x = std::sqrt(std::max(0.0, m2)) / (2.0 * M.radius);
            return 2.0 * M.radius * std::asinh(x);
        }
    }
}

} // namespace vfe

#endif
