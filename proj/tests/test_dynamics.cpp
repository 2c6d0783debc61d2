#include <catch2/catch_amalgamated.hpp>

#include <cstring>

#include "vfe/vfe.hpp"

using namespace vfe;

namespace {
constexpr double two_pi = 6.2831853071795864769;
}

TEST_CASE("binormal velocity of a planar circle is the constant plane normal", "[dynamics]") {
    GeneratorParams gp;
    SpaceForm E = SpaceForm::euclidean();
    ClosedFilament f = generate_initial("circle", gp, E, 64);
    FlowState st = make_flow_state(f);
    auto v = vfe_velocity(st);
    REQUIRE(v.size() == 64);
    for (std::size_t j = 0; j < v.size(); ++j) {
        // |v| = kappa = 1, orthogonal to T and N
        CHECK(norm(E, v[j]) == Catch::Approx(1.0).margin(1e-10));
        CHECK(metric(E, v[j], st.frame.T[j]) == Catch::Approx(0.0).margin(1e-10));
        CHECK(metric(E, v[j], st.frame.N[j]) == Catch::Approx(0.0).margin(1e-10));
        // all samples share one direction (flat model: plain dot applies)
        CHECK(dot_coords(v[j].v, v[0].v) == Catch::Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("circle translates rigidly at speed kappa", "[dynamics]") {
    GeneratorParams gp;
    SpaceForm E = SpaceForm::euclidean();
    ClosedFilament f = generate_initial("circle", gp, E, 64);
    DynamicsOptions opts;
    FlowState st = make_flow_state(f, opts);
    const double dt = 1e-3;
    for (int k = 0; k < 20; ++k) st = step_extrinsic(st, dt, opts);
    CHECK(st.t == Catch::Approx(0.02));
    CHECK(st.steps == 20);

    Vec d0 = st.filament.points[0] - f.points[0];
    CHECK(norm_coords(d0) == Catch::Approx(0.02).margin(1e-7));
    for (std::size_t j = 0; j < f.N(); ++j) {
        Vec dj = st.filament.points[j] - f.points[j];
        CHECK(norm_coords(dj - d0) < 1e-9);
    }
    CHECK(st.drift_rel < 1e-9);

    // curvature is untouched by a rigid motion
    for (double k : st.frame.kappa) CHECK(k == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("spherical circle keeps constant curvature under the flow", "[dynamics]") {
    GeneratorParams gp;
    gp.radius = 0.6;
    SpaceForm S = SpaceForm::with_curvature(1.0);
    ClosedFilament f = generate_initial("circle", gp, S, 64);
    DynamicsOptions opts;
    FlowState st = make_flow_state(f, opts);
    for (int k = 0; k < 20; ++k) st = step_extrinsic(st, 5e-4, opts);
    const double want = 1.0 / std::tan(0.6);
    for (double k : st.frame.kappa) CHECK(k == Catch::Approx(want).margin(1e-7));
    for (const Vec& p : st.filament.points) CHECK(S.constraint_residual(p) < 1e-12);
    CHECK(st.drift_rel < 1e-9);
}

TEST_CASE("timestep above the dispersive bound is rejected up front", "[dynamics]") {
    GeneratorParams gp;
    SpaceForm E = SpaceForm::euclidean();
    ClosedFilament f = generate_initial("circle", gp, E, 64);
    DynamicsOptions opts;
    FlowState st = make_flow_state(f, opts);
    // ds ~ 0.098, bound = 0.25 ds^2 ~ 2.4e-3
    CHECK_THROWS_WITH(step_extrinsic(st, 1e-2, opts),
                      Catch::Matchers::ContainsSubstring("dispersive stability bound"));
}

TEST_CASE("arclength drift beyond tolerance rejects the step", "[dynamics]") {
    GeneratorParams gp;
    SpaceForm E = SpaceForm::euclidean();
    ClosedFilament f = generate_initial("perturbed_circle", gp, E, 64);
    DynamicsOptions opts;
    opts.tol_drift_rel = 1e-15; // unreachably tight
    FlowState st = make_flow_state(f, opts);
    CHECK_THROWS_AS(step_extrinsic(st, 1e-4, opts), StepRejectedError);
}

TEST_CASE("curvature/torsion system right-hand side matches the closed form", "[dynamics]") {
    const std::size_t n = 256;
    IntrinsicState st;
    st.length = two_pi;
    st.K0 = 0.0;
    st.kappa.resize(n);
    st.tau.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double s = two_pi * static_cast<double>(j) / static_cast<double>(n);
        st.kappa[j] = 1.0 + 0.1 * std::cos(s);
    }
    IntrinsicRhs rhs = intrinsic_rhs(st);
    for (std::size_t j = 0; j < n; ++j) {
        double s = two_pi * static_cast<double>(j) / static_cast<double>(n);
        double kap = 1.0 + 0.1 * std::cos(s);
        // d/ds (kappa_ss / kappa + kappa^2 / 2) for kappa = 1 + 0.1 cos s
        double expect = 0.1 * std::sin(s) / kap -
                        0.01 * std::sin(s) * std::cos(s) / (kap * kap) -
                        kap * 0.1 * std::sin(s);
        CHECK(rhs.tau_t[j] == Catch::Approx(expect).margin(1e-8));
        // kappa_t = -2 tau kappa_s - kappa tau_s vanishes identically here
        CHECK(rhs.kappa_t[j] == 0.0);
    }
}

TEST_CASE("closed-form torsion rate at a frozen spot value", "[dynamics]") {
    // The expression tested above, evaluated at s = 0.3 against a 30-digit
    // computation: guards the formula itself against transcription drift.
    double kap = 1.0 + 0.1 * std::cos(0.3);
    double expect = 0.1 * std::sin(0.3) / kap -
                    0.01 * std::sin(0.3) * std::cos(0.3) / (kap * kap) -
                    kap * 0.1 * std::sin(0.3);
    CHECK(expect == Catch::Approx(-0.0077525293205849486761).margin(1e-15));
}

TEST_CASE("curvature/torsion stepper output is independent of K0 bitwise", "[dynamics]") {
    GeneratorParams gp;
    SpaceForm E = SpaceForm::euclidean();
    ClosedFilament f = generate_initial("perturbed_circle", gp, E, 64);
    FrenetField fr = frenet(f);
    DynamicsOptions opts;
    IntrinsicState a = make_intrinsic_state(f, fr, 0.0);
    IntrinsicState b = make_intrinsic_state(f, fr, 7.5);
    for (int k = 0; k < 10; ++k) {
        a = step_intrinsic(a, 1e-4, opts);
        b = step_intrinsic(b, 1e-4, opts);
    }
    CHECK(std::memcmp(a.kappa.data(), b.kappa.data(), a.kappa.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(a.tau.data(), b.tau.data(), a.tau.size() * sizeof(double)) == 0);
}

TEST_CASE("curve flow and curvature/torsion system agree at second order", "[dynamics]") {
    GeneratorParams gp;
    SpaceForm E = SpaceForm::euclidean();
    ClosedFilament f = generate_initial("perturbed_circle", gp, E, 64);
    DynamicsOptions opts;
    opts.tol_drift_rel = 1e-4;
    CrossValidationReport rep = cross_validate(f, 0.02, 2.5e-4, opts);
    CHECK(rep.order_kappa > 1.8);
    CHECK(rep.order_tau > 1.8);
    CHECK(rep.coarse.linf_kappa > rep.fine.linf_kappa);
}
