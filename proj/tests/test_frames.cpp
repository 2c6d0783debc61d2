#include <catch2/catch_amalgamated.hpp>

#include "vfe/vfe.hpp"

using namespace vfe;

TEST_CASE("Frenet coefficient of a circle is the expected antisymmetric pattern",
          "[frames]") {
    GeneratorParams gp;
    SpaceForm E = SpaceForm::euclidean();
    ClosedFilament f = generate_initial("circle", gp, E, 64);
    FrenetField fr = frenet(f);
    RealConnectionCoefficient cc = frenet_frame_coefficient(E, fr, f.ds());
    REQUIRE(cc.m.size() == 64);
    CHECK(cc.max_presym_defect < 1e-9);
    for (std::size_t s = 0; s < 64; ++s) {
        CHECK(cc.entry(s, 1, 0) == Catch::Approx(1.0).margin(1e-9));  // <DT, N> = kappa
        CHECK(cc.entry(s, 0, 1) == Catch::Approx(-1.0).margin(1e-9));
        CHECK(cc.entry(s, 2, 1) == Catch::Approx(0.0).margin(1e-9));  // <DN, B> = tau
        for (int i = 0; i < 3; ++i) {
            CHECK(cc.entry(s, i, i) == 0.0); // antisymmetrized exactly
            for (int j = 0; j < 3; ++j)
                CHECK(cc.entry(s, i, j) == -cc.entry(s, j, i));
        }
        CHECK(cc.entry(s, 2, 0) == Catch::Approx(0.0).margin(1e-9)); // no <DT, B> term
    }
}

TEST_CASE("Frenet coefficient reads off constant curvature and torsion on the "
          "Clifford-torus orbit", "[frames]") {
    GeneratorParams gp;
    gp.p = 1;
    gp.q = 2;
    SpaceForm S = SpaceForm::with_curvature(1.0);
    ClosedFilament f = generate_initial("hopf_circle", gp, S, 256);
    FrenetField fr = frenet(f);
    RealConnectionCoefficient cc = frenet_frame_coefficient(S, fr, f.ds());
    for (std::size_t s = 0; s < f.N(); ++s) {
        CHECK(cc.entry(s, 1, 0) == Catch::Approx(0.6).margin(1e-9));
        CHECK(cc.entry(s, 2, 1) == Catch::Approx(0.8).margin(1e-9));
        CHECK(cc.entry(s, 2, 0) == Catch::Approx(0.0).margin(1e-9));
    }
}

TEST_CASE("torsion-integrating phase makes the complex line parallel", "[frames]") {
    GeneratorParams gp;
    gp.p = 1;
    gp.q = 2;
    SpaceForm S = SpaceForm::with_curvature(1.0);
    ClosedFilament f = generate_initial("hopf_circle", gp, S, 256);
    FrenetField fr = frenet(f);

    auto rho = parallel_phase(std::span<const double>(fr.tau), f.ds(), 0);
    double seam =
        spectral::cumulative_trapezoid(std::span<const double>(fr.tau), f.ds(), 0).total;
    MovingFrame frame = complex_line_frame(S, fr, f.length, rho, seam);
    REQUIRE(frame.rank == 1);
    CHECK(frame.seam[0] == Catch::Approx(seam));

    // column is unit for the Hermitian pairing
    for (std::size_t s = 0; s < f.N(); ++s)
        CHECK(std::abs(hermitian(S, frame.cols[0][s], frame.cols[0][s]) - cplx(1.0, 0.0)) <
              1e-12);

    ConnectionCoefficient cc = ehresmann_coefficient(frame);
    for (std::size_t s = 0; s < f.N(); ++s)
        CHECK(std::abs(cc.entry(s, 0, 0)) < 1e-8);

    // the zero phase is NOT parallel when tau != 0: coefficient = i(-tau)
    std::vector<double> zero(f.N(), 0.0);
    MovingFrame plain = complex_line_frame(S, fr, f.length, zero, 0.0);
    ConnectionCoefficient cp = ehresmann_coefficient(plain);
    for (std::size_t s = 0; s < f.N(); ++s)
        CHECK(std::abs(cp.entry(s, 0, 0) - cplx(0.0, -0.8)) < 1e-7);
}

TEST_CASE("rank-2 frame coefficient is skew-Hermitian with the field on the "
          "off-diagonal", "[frames]") {
    GeneratorParams gp;
    gp.p = 1;
    gp.q = 2;
    SpaceForm S = SpaceForm::with_curvature(1.0);
    ClosedFilament f = generate_initial("hopf_circle", gp, S, 256);
    FrenetField fr = frenet(f);
    HasimotoField h = hasimoto_transform(fr.kappa, fr.tau, f.ds(), 0);
    ConnectionCoefficient u2 = hasimoto_frame_coefficient(S, fr, f.ds(), 0);

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t s = 0; s < f.N(); ++s) {
        CHECK(std::abs(u2.entry(s, 0, 1) + inv_sqrt2 * h.psi[s]) < 1e-9);
        CHECK(std::abs(u2.entry(s, 1, 0) - inv_sqrt2 * std::conj(h.psi[s])) < 1e-9);
        CHECK(std::abs(u2.entry(s, 0, 0)) < 1e-8);
        CHECK(std::abs(u2.entry(s, 1, 1)) < 1e-8);
        // skew-Hermitian: m + m^dagger = 0
        CHECK(std::abs(u2.entry(s, 0, 1) + std::conj(u2.entry(s, 1, 0))) < 1e-14);
    }
}

TEST_CASE("frame columns must be orthonormal for the coefficient extraction",
          "[frames]") {
    GeneratorParams gp;
    SpaceForm E = SpaceForm::euclidean();
    ClosedFilament f = generate_initial("circle", gp, E, 64);
    FrenetField fr = frenet(f);
    auto rho = parallel_phase(std::span<const double>(fr.tau), f.ds(), 0);
    MovingFrame frame = complex_line_frame(E, fr, f.length, rho, 0.0);
    for (auto& col : frame.cols[0]) {
        col.re.v = 2.0 * col.re.v;
        col.im.v = 2.0 * col.im.v;
    }
    CHECK_THROWS_AS(ehresmann_coefficient(frame), UsageError);
}

TEST_CASE("normal plane rotation has N+iB as -i eigenvector", "[frames]") {
    GeneratorParams gp;
    for (double K0 : {0.0, 1.0, -1.0}) {
        SpaceForm M = K0 == 0.0 ? SpaceForm::euclidean() : SpaceForm::with_curvature(K0);
        const char* name = K0 == 0.0 ? "circle" : (K0 > 0.0 ? "circle" : "hyperbolic_circle");
        ClosedFilament f = generate_initial(name, gp, M, 64);
        FrenetField fr = frenet(f);
        CHECK(check_J_eigenvector(M, fr) < 1e-12);

        // flipping the binormal flips the eigenvalue; defect saturates at 2
        FrenetField flipped = fr;
        for (auto& b : flipped.B) b.v = -1.0 * b.v;
        CHECK(check_J_eigenvector(M, flipped) == Catch::Approx(2.0).margin(1e-10));
    }
}

TEST_CASE("complex line frame rejects mismatched phase arrays", "[frames]") {
    GeneratorParams gp;
    SpaceForm E = SpaceForm::euclidean();
    ClosedFilament f = generate_initial("circle", gp, E, 64);
    FrenetField fr = frenet(f);
    std::vector<double> wrong(32, 0.0);
    CHECK_THROWS_AS(complex_line_frame(E, fr, f.length, wrong, 0.0), UsageError);
}
