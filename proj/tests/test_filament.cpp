#include <catch2/catch_amalgamated.hpp>

#include "vfe/vfe.hpp"

using namespace vfe;

namespace {
constexpr double two_pi = 6.2831853071795864769;
}

TEST_CASE("unit circle filament has the exact length and Frenet data", "[filament]") {
    GeneratorParams gp;
    SpaceForm E = SpaceForm::euclidean();
    ClosedFilament f = generate_initial("circle", gp, E, 64);
    REQUIRE(f.N() == 64);
    CHECK(f.length == Catch::Approx(two_pi).epsilon(1e-12));
    CHECK_NOTHROW(validate_filament(f));

    ChordStats st = chord_stats(E, f.points);
    CHECK(st.max_abs_dev / st.mean < 1e-9);

    FrenetField fr = frenet(f);
    for (std::size_t j = 0; j < fr.size(); ++j) {
        CHECK(fr.kappa[j] == Catch::Approx(1.0).margin(1e-10));
        CHECK(fr.tau[j] == Catch::Approx(0.0).margin(1e-10));
        CHECK(metric(E, fr.T[j], fr.T[j]) == Catch::Approx(1.0).margin(1e-12));
        CHECK(metric(E, fr.T[j], fr.N[j]) == Catch::Approx(0.0).margin(1e-12));
        CHECK(metric(E, fr.N[j], fr.B[j]) == Catch::Approx(0.0).margin(1e-12));
    }

    ClosedFilament f2 = generate_initial("circle", [] {
        GeneratorParams g;
        g.radius = 2.0;
        return g;
    }(), E, 64);
    FrenetField fr2 = frenet(f2);
    CHECK(fr2.kappa[17] == Catch::Approx(0.5).margin(1e-10));
}

TEST_CASE("coiled-loop curvature/torsion closed form matches frozen values", "[filament]") {
    // Independent hand-derived spot values for the (2,5) coil on radii (3, 0.5)
    // at parameter t = 0.7, frozen from a 30-digit computation.
    acceptance::detail::CoilOracle oracle{3.0, 0.5, 2.0, 5.0};
    double kappa = 0.0, tau = 0.0;
    oracle.kappa_tau(0.7, kappa, tau);
    CHECK(kappa == Catch::Approx(0.17613773649836483976).margin(1e-15));
    CHECK(tau == Catch::Approx(-1.6415503756949443085).margin(1e-14));

    Vec p = oracle.position(0.0);
    CHECK(p[0] == Catch::Approx(3.5));
    CHECK(p[2] == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("Clifford-torus orbit has constant closed-form curvature and torsion",
          "[filament]") {
    GeneratorParams gp;
    gp.p = 1;
    gp.q = 2;
    SpaceForm S = SpaceForm::with_curvature(1.0);
    ClosedFilament f = generate_initial("hopf_circle", gp, S, 256);
    // speed v = sqrt(p^2 cos^2 + q^2 sin^2) = sqrt(2.5) at theta0 = pi/4
    CHECK(f.length == Catch::Approx(two_pi * std::sqrt(2.5)).epsilon(1e-12));
    FrenetField fr = frenet(f);
    for (std::size_t j = 0; j < fr.size(); ++j) {
        CHECK(fr.kappa[j] == Catch::Approx(0.6).margin(1e-9));
        CHECK(fr.tau[j] == Catch::Approx(0.8).margin(1e-9));
    }
}

TEST_CASE("geodesic circles in the curved models match cot and coth laws", "[filament]") {
    GeneratorParams gp;
    gp.radius = 0.6;

    SpaceForm S = SpaceForm::with_curvature(1.0);
    FrenetField frs = frenet(generate_initial("circle", gp, S, 256));
    for (std::size_t j = 0; j < frs.size(); ++j)
        CHECK(frs.kappa[j] == Catch::Approx(1.0 / std::tan(0.6)).margin(1e-9));

    SpaceForm H = SpaceForm::with_curvature(-1.0);
    FrenetField frh = frenet(generate_initial("hyperbolic_circle", gp, H, 256));
    for (std::size_t j = 0; j < frh.size(); ++j) {
        CHECK(frh.kappa[j] == Catch::Approx(1.0 / std::tanh(0.6)).margin(1e-9));
        CHECK(frh.tau[j] == Catch::Approx(0.0).margin(1e-10));
    }
}

TEST_CASE("zero-amplitude perturbation reproduces the circle", "[filament]") {
    GeneratorParams gp;
    gp.amplitude = 0.0;
    SpaceForm E = SpaceForm::euclidean();
    ClosedFilament f = generate_initial("perturbed_circle", gp, E, 64);
    FrenetField fr = frenet(f);
    for (std::size_t j = 0; j < fr.size(); ++j)
        CHECK(fr.kappa[j] == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("refinement reproduces the underlying curve at doubled resolution", "[filament]") {
    GeneratorParams gp;
    SpaceForm E = SpaceForm::euclidean();
    ClosedFilament c64 = generate_initial("circle", gp, E, 64);
    ClosedFilament c128 = generate_initial("circle", gp, E, 128);
    ClosedFilament r = refine(c64, 2);
    REQUIRE(r.N() == 128);
    CHECK(std::abs(r.length - c128.length) < 1e-9);
    for (std::size_t j = 0; j < 128; ++j)
        CHECK(geodesic_distance(E, r.points[j], c128.points[j]) < 1e-10);
    CHECK_THROWS_AS(refine(c64, 0), UsageError);
}

TEST_CASE("equal-chord resampling preserves arclength at fourth order", "[filament]") {
    GeneratorParams gp;
    SpaceForm E = SpaceForm::euclidean();
    ClosedFilament f128 = generate_initial("torus_knot", gp, E, 128);
    ClosedFilament f256 = generate_initial("torus_knot", gp, E, 256);
    double e128 = std::abs(resample_arclength(f128).length - f128.length);
    double e256 = std::abs(resample_arclength(f256).length - f256.length);
    double ratio = e128 / e256;
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);

    // already-uniform symmetric input is a fixed point
    ClosedFilament c = generate_initial("circle", gp, E, 64);
    ClosedFilament rc = resample_arclength(c);
    for (std::size_t j = 0; j < c.N(); ++j)
        CHECK(geodesic_distance(E, c.points[j], rc.points[j]) < 1e-9);
}

TEST_CASE("filament validation rejects broken invariants", "[filament]") {
    GeneratorParams gp;
    SpaceForm E = SpaceForm::euclidean();
    SpaceForm S = SpaceForm::with_curvature(1.0);

    ClosedFilament small;
    small.M = E;
    small.length = 1.0;
    small.points.assign(8, Vec(0.0, 0.0, 0.0));
    CHECK_THROWS_AS(validate_filament(small), UsageError);

    // point pushed off the sphere
    ClosedFilament sc = generate_initial("circle", gp, S, 64);
    sc.points[10] = 1.01 * sc.points[10];
    CHECK_THROWS_WITH(validate_filament(sc),
                      Catch::Matchers::ContainsSubstring("off the model surface"));

    // spacing broken
    ClosedFilament ec = generate_initial("circle", gp, E, 64);
    ec.points[3] = 0.5 * (ec.points[3] + ec.points[4]);
    CHECK_THROWS_AS(validate_filament(ec), GeometryError);

    // self-intersection: a far sample pulled next to sample 0, with the
    // uniformity check disabled so the proximity heuristic is what fires
    ClosedFilament si = generate_initial("circle", gp, E, 64);
    si.points[32] = si.points[0] + Vec(1e-9, 0.0, 0.0);
    FilamentChecks loose;
    loose.tol_uniform_rel = 1e9;
    CHECK_THROWS_AS(validate_filament(si, loose), GeometryError);

    // curvature below threshold is a loud failure, not garbage Frenet data
    ClosedFilament c = generate_initial("circle", gp, E, 64);
    CHECK_THROWS_AS(frenet(c, 10.0), FrenetUndefinedError);
}

TEST_CASE("resampling validates its input polygon", "[filament]") {
    SpaceForm E = SpaceForm::euclidean();
    std::vector<Vec> three{Vec(0.0, 0.0, 0.0), Vec(1.0, 0.0, 0.0), Vec(0.0, 1.0, 0.0)};
    CHECK_THROWS_AS(resample_to(E, three, 64), UsageError);

    std::vector<Vec> dup(8, Vec(0.0, 0.0, 0.0));
    for (std::size_t j = 0; j < dup.size(); ++j)
        dup[j] = Vec(std::cos(0.1 * static_cast<double>(j)),
                     std::sin(0.1 * static_cast<double>(j)), 0.0);
    dup[5] = dup[4];
    CHECK_THROWS_AS(resample_to(E, dup, 64), GeometryError);
}
