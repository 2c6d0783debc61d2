#include <catch2/catch_amalgamated.hpp>

#include "vfe/vfe.hpp"

using namespace vfe;

TEST_CASE("space form construction fixes kind, radius and dimension", "[geometry]") {
    SpaceForm E = SpaceForm::euclidean();
    CHECK(E.kind == ModelKind::Euclidean);
    CHECK(E.K0 == 0.0);
    CHECK(E.ambient_dim() == 3);

    SpaceForm S = SpaceForm::with_curvature(4.0);
    CHECK(S.kind == ModelKind::Spherical);
    CHECK(S.radius == 0.5);
    CHECK(S.ambient_dim() == 4);

    SpaceForm H = SpaceForm::with_curvature(-0.25);
    CHECK(H.kind == ModelKind::Hyperbolic);
    CHECK(H.radius == 2.0);
    CHECK(H.ambient_dim() == 4);
}

TEST_CASE("ambient pairing is Euclidean dot or Minkowski form", "[geometry]") {
    SpaceForm S = SpaceForm::with_curvature(1.0);
    SpaceForm H = SpaceForm::with_curvature(-1.0);
    Vec a(1.0, 2.0, 3.0, 4.0), b(5.0, 6.0, 7.0, 8.0);
    CHECK(S.form(a, b) == Catch::Approx(5.0 + 12.0 + 21.0 + 32.0));
    CHECK(H.form(a, b) == Catch::Approx(-5.0 + 12.0 + 21.0 + 32.0));

    // hyperboloid sheet point satisfies <p,p> = -R^2
    Vec p(1.0, 0.0, 0.0, 0.0);
    CHECK(H.form(p, p) == Catch::Approx(-1.0));
    CHECK(H.constraint_residual(p) < 1e-15);
}

TEST_CASE("tangent projection removes the normal component", "[geometry]") {
    SpaceForm H = SpaceForm::with_curvature(-1.0);
    AmbientPoint p{Vec(1.0, 0.0, 0.0, 0.0)};
    TangentVector u = project_to_tangent(H, p, Vec(5.0, 0.0, 1.0, 0.0));
    CHECK(u.v[0] == Catch::Approx(0.0).margin(1e-15));
    CHECK(u.v[2] == Catch::Approx(1.0));
    CHECK(std::abs(H.form(u.v, p.x)) < 1e-14);

    SpaceForm S = SpaceForm::with_curvature(1.0);
    AmbientPoint q{Vec(0.0, 1.0, 0.0, 0.0)};
    TangentVector w = project_to_tangent(S, q, Vec(3.0, 7.0, 2.0, 0.0));
    CHECK(std::abs(S.form(w.v, q.x)) < 1e-13);
    CHECK(w.v[0] == Catch::Approx(3.0));
    CHECK(w.v[1] == Catch::Approx(0.0).margin(1e-15));

    // projecting the normal direction itself leaves nothing
    TangentVector z = project_to_tangent(S, q, q.x);
    CHECK(norm(S, z) < 1e-15);

    CHECK_THROWS_AS(project_to_tangent(S, q, Vec(1.0, 0.0, 0.0)), UsageError);
}

TEST_CASE("retract rescales onto the model surface and is idempotent", "[geometry]") {
    SpaceForm S = SpaceForm::with_curvature(1.0);
    AmbientPoint p = retract(S, Vec(0.0, 1.1, 0.0, 0.0));
    CHECK(p.x[1] == Catch::Approx(1.0));
    CHECK(S.constraint_residual(p.x) < 1e-15);
    // points far off the surface signal integrator blow-up instead of being
    // silently rescaled
    CHECK_THROWS_AS(retract(S, Vec(0.0, 2.0, 0.0, 0.0)), NumericalError);

    SpaceForm H = SpaceForm::with_curvature(-1.0);
    AmbientPoint q = retract(H, Vec(1.1, 0.0, 0.0, 0.0));
    CHECK(q.x[0] == Catch::Approx(1.0));

    AmbientPoint q2 = retract(H, q.x);
    CHECK(q2.x[0] == q.x[0]);

    SpaceForm E = SpaceForm::euclidean();
    Vec v(3.0, -4.0, 5.0);
    AmbientPoint r = retract(E, v);
    CHECK(r.x[0] == 3.0);
    CHECK(r.x[2] == 5.0);
}

TEST_CASE("cross product is metric-orthogonal and correctly oriented", "[geometry]") {
    SpaceForm E = SpaceForm::euclidean();
    Vec base(0.0, 0.0, 0.0);
    TangentVector ex{base, Vec(1.0, 0.0, 0.0)}, ey{base, Vec(0.0, 1.0, 0.0)};
    TangentVector ez = cross(E, ex, ey);
    CHECK(ez.v[2] == Catch::Approx(1.0));

    for (double K0 : {1.0, -1.0}) {
        SpaceForm M = SpaceForm::with_curvature(K0);
        Vec p(1.0, 0.0, 0.0, 0.0); // on both model surfaces
        TangentVector u{p, Vec(0.0, 1.0, 0.0, 0.0)};
        TangentVector v{p, Vec(0.0, 0.0, 1.0, 0.0)};
        TangentVector w = cross(M, u, v);
        CHECK(metric(M, w, u) == Catch::Approx(0.0).margin(1e-15));
        CHECK(metric(M, w, v) == Catch::Approx(0.0).margin(1e-15));
        CHECK(metric(M, w, w) == Catch::Approx(1.0));
        // cross(u, v) then pairs positively with the volume orientation:
        // cross(u,v) against w reproduces the metric normalization above, and
        // swapping arguments flips the sign.
        TangentVector wr = cross(M, v, u);
        CHECK(metric(M, wr, w) == Catch::Approx(-1.0));
    }
}

TEST_CASE("curvature tensor has the constant-curvature form", "[geometry]") {
    for (double K0 : {0.0, 1.0, -1.0}) {
        SpaceForm M = K0 == 0.0 ? SpaceForm::euclidean() : SpaceForm::with_curvature(K0);
        Vec p = K0 == 0.0 ? Vec(0.0, 0.0, 0.0) : Vec(1.0, 0.0, 0.0, 0.0);
        TangentVector X{p, K0 == 0.0 ? Vec(1.0, 0.0, 0.0) : Vec(0.0, 1.0, 0.0, 0.0)};
        TangentVector Y{p, K0 == 0.0 ? Vec(0.0, 1.0, 0.0) : Vec(0.0, 0.0, 1.0, 0.0)};
        // sectional curvature of an orthonormal plane
        CHECK(riemann(M, X, Y, X, Y) == Catch::Approx(K0).margin(1e-15));
        CHECK(riemann(M, X, Y, Y, X) == Catch::Approx(-K0).margin(1e-15));
        CHECK(riemann(M, X, X, Y, Y) == Catch::Approx(0.0).margin(1e-15));
    }
}

TEST_CASE("closed-form geodesics hit known points", "[geometry]") {
    SpaceForm S = SpaceForm::with_curvature(1.0);
    AmbientPoint p{Vec(1.0, 0.0, 0.0, 0.0)};
    TangentVector u{p.x, Vec(0.0, 1.0, 0.0, 0.0)};
    const double quarter = 0.5 * 3.14159265358979323846;
    AmbientPoint q = verify::geodesic_point(S, p, u, quarter);
    CHECK(q.x[0] == Catch::Approx(0.0).margin(1e-15));
    CHECK(q.x[1] == Catch::Approx(1.0));
    CHECK(geodesic_distance(S, p.x, q.x) == Catch::Approx(quarter));

    TangentVector t = verify::geodesic_tangent(S, p, u, quarter);
    CHECK(t.v[0] == Catch::Approx(-1.0));
    CHECK(std::abs(S.form(t.v, t.base)) < 1e-15);

    SpaceForm H = SpaceForm::with_curvature(-1.0);
    AmbientPoint hp{Vec(1.0, 0.0, 0.0, 0.0)};
    TangentVector hu{hp.x, Vec(0.0, 0.0, 1.0, 0.0)};
    AmbientPoint hq = verify::geodesic_point(H, hp, hu, 0.8);
    CHECK(hq.x[0] == Catch::Approx(std::cosh(0.8)));
    CHECK(hq.x[2] == Catch::Approx(std::sinh(0.8)));
    CHECK(geodesic_distance(H, hp.x, hq.x) == Catch::Approx(0.8));

    SpaceForm E = SpaceForm::euclidean();
    AmbientPoint ep{Vec(1.0, 2.0, 3.0)};
    TangentVector eu{ep.x, Vec(0.0, 1.0, 0.0)};
    CHECK(verify::geodesic_point(E, ep, eu, 2.5).x[1] == Catch::Approx(4.5));
}

TEST_CASE("log is the inverse of the geodesic exponential", "[geometry]") {
    for (double K0 : {0.0, 1.0, -1.0}) {
        SpaceForm M = K0 == 0.0 ? SpaceForm::euclidean() : SpaceForm::with_curvature(K0);
        Vec pv = K0 == 0.0 ? Vec(0.2, -0.4, 1.0) : Vec(1.0, 0.0, 0.0, 0.0);
        AmbientPoint p = retract(M, pv);
        Vec uv = K0 == 0.0 ? Vec(0.6, 0.8, 0.0) : Vec(0.0, 0.6, 0.0, 0.8);
        TangentVector u = project_to_tangent(M, p, uv);
        u.v = u.v * (1.0 / norm(M, u));

        AmbientPoint y = verify::geodesic_point(M, p, u, 0.8);
        double dist = 0.0;
        TangentVector back = verify::log_direction(M, p, y, dist);
        CHECK(dist == Catch::Approx(0.8).epsilon(1e-12));
        for (int i = 0; i < M.ambient_dim(); ++i)
            CHECK(back.v[i] == Catch::Approx(u.v[i]).margin(1e-12));
    }

    SpaceForm E = SpaceForm::euclidean();
    AmbientPoint p{Vec(0.0, 0.0, 0.0)};
    double d;
    CHECK_THROWS_AS(verify::log_direction(E, p, p, d), UsageError);
}

TEST_CASE("parallel transport preserves inner products and the direction", "[geometry]") {
    for (double K0 : {1.0, -1.0}) {
        SpaceForm M = SpaceForm::with_curvature(K0);
        AmbientPoint p{Vec(1.0, 0.0, 0.0, 0.0)};
        TangentVector dir{p.x, Vec(0.0, 1.0, 0.0, 0.0)};
        TangentVector w{p.x, Vec(0.0, 0.3, 0.5, -0.2)};

        TangentVector moved = verify::transport_along_geodesic(M, p, dir, 0.7, w);
        CHECK(metric(M, moved, moved) ==
              Catch::Approx(M.form(w.v, w.v)).epsilon(1e-13));
        CHECK(std::abs(M.form(moved.v, moved.base)) < 1e-13);

        // the geodesic's own direction transports onto its tangent
        TangentVector td = verify::transport_along_geodesic(M, p, dir, 0.7, dir);
        TangentVector gt = verify::geodesic_tangent(M, p, dir, 0.7);
        for (int i = 0; i < 4; ++i) CHECK(td.v[i] == Catch::Approx(gt.v[i]).margin(1e-14));
    }
}

TEST_CASE("holonomy around a small square measures the model curvature", "[geometry]") {
    const double h = 1e-2;
    for (double K0 : {1.0, -1.0}) {
        SpaceForm M = SpaceForm::with_curvature(K0);
        AmbientPoint p{Vec(1.0, 0.0, 0.0, 0.0)};
        TangentVector e1{p.x, Vec(0.0, 1.0, 0.0, 0.0)};
        TangentVector e2{p.x, Vec(0.0, 0.0, 1.0, 0.0)};
        double est = verify::holonomy_curvature_estimate(M, p, e1, e2, h);
        CHECK(std::abs(est - K0) < 1e-3);
    }
    SpaceForm E = SpaceForm::euclidean();
    AmbientPoint p{Vec(0.0, 0.0, 0.0)};
    TangentVector e1{p.x, Vec(1.0, 0.0, 0.0)};
    TangentVector e2{p.x, Vec(0.0, 1.0, 0.0)};
    CHECK(std::abs(verify::holonomy_curvature_estimate(E, p, e1, e2, h)) < 1e-12);
    CHECK_THROWS_AS(verify::holonomy_curvature_estimate(E, p, e1, e2, 0.0), UsageError);
}

TEST_CASE("geodesic distance matches the ambient closed forms", "[geometry]") {
    SpaceForm E = SpaceForm::euclidean();
    CHECK(geodesic_distance(E, Vec(1.0, 2.0, 2.0), Vec(0.0, 0.0, 0.0)) == Catch::Approx(3.0));

    SpaceForm S = SpaceForm::with_curvature(0.25); // radius 2
    Vec a(2.0, 0.0, 0.0, 0.0), b(0.0, 2.0, 0.0, 0.0);
    CHECK(geodesic_distance(S, a, b) == Catch::Approx(3.14159265358979323846));

    SpaceForm H = SpaceForm::with_curvature(-1.0);
    Vec hp(1.0, 0.0, 0.0, 0.0);
    Vec hq(std::cosh(1.3), std::sinh(1.3), 0.0, 0.0);
    CHECK(geodesic_distance(H, hp, hq) == Catch::Approx(1.3));
}
