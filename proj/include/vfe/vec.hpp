#ifndef VFE_VEC_HPP
#define VFE_VEC_HPP

#include <array>
#include <cmath>
#include <cstddef>

namespace vfe {

// Small dense vector with runtime dimension 3 or 4.  Ambient coordinates of
// points and tangent vectors in all three models live in this type; the
// interpretation of the slots (and the pairing used on them) belongs to
// SpaceForm, not to Vec.
struct Vec {
    std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};
    int dim = 3;

    Vec() = default;
    Vec(double x, double y, double z) : c{x, y, z, 0.0}, dim(3) {}
    Vec(double x, double y, double z, double w) : c{x, y, z, w}, dim(4) {}

    static Vec zero(int d) {
        Vec v;
        v.dim = d;
        return v;
    }

    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < dim; ++i) c[i] += o.c[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < dim; ++i) c[i] -= o.c[i];
        return *this;
    }
    Vec& operator*=(double a) {
        for (int i = 0; i < dim; ++i) c[i] *= a;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
    friend Vec operator-(Vec a) { return a *= -1.0; }
};

// Plain Euclidean dot product of the stored coordinates.  Model-aware
// pairings (Minkowski for the hyperbolic model) are on SpaceForm.
inline double dot_coords(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (int i = 0; i < a.dim; ++i) s += a[i] * b[i];
    return s;
}

inline double norm_coords(const Vec& a) { return std::sqrt(dot_coords(a, a)); }

inline double dist_coords(const Vec& a, const Vec& b) { return norm_coords(a - b); }

inline double det3(const Vec& a, const Vec& b, const Vec& c) {
    return a[0] * (b[1] * c[2] - b[2] * c[1]) -
           a[1] * (b[0] * c[2] - b[2] * c[0]) +
           a[2] * (b[0] * c[1] - b[1] * c[0]);
}

// det of the 4x4 matrix with columns a,b,c,d (expansion along d).
inline double det4(const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
    auto minor3 = [&](int skip) {
        std::array<double, 3> x{}, y{}, z{};
        int r = 0;
        for (int i = 0; i < 4; ++i) {
            if (i == skip) continue;
            x[r] = a[i];
            y[r] = b[i];
            z[r] = c[i];
            ++r;
        }
        return x[0] * (y[1] * z[2] - y[2] * z[1]) -
               x[1] * (y[0] * z[2] - y[2] * z[0]) +
               x[2] * (y[0] * z[1] - y[1] * z[0]);
    };
    double det = 0.0;
    double sign = -1.0; // cofactor of entry (0,3) is -minor
    for (int i = 0; i < 4; ++i) {
        det += sign * d[i] * minor3(i);
        sign = -sign;
    }
    return det;
}

} // namespace vfe

#endif
