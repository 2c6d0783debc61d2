#ifndef VFE_FRAMES_HPP
#define VFE_FRAMES_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vfe/errors.hpp"
#include "vfe/filament.hpp"
#include "vfe/space_form.hpp"
#include "vfe/spectral.hpp"

namespace vfe {

// Complexified tangent vector, stored as (real part, imaginary part) at a
// shared base point.
struct ComplexTangent {
    TangentVector re, im;
};

// Hermitian extension of the metric, linear in the FIRST slot and
// conjugate-linear in the second:
//   h(u,v) = <u_re,v_re> + <u_im,v_im> + i (<u_im,v_re> - <u_re,v_im>).
// Under this convention the parallel-frame coefficient of a phase-rotated
// complex line comes out as +i(rho' - tau) and the rank-2 off-diagonal as
// -psi/sqrt(2), matching the expected connection matrices.
inline cplx hermitian(const SpaceForm& M, const ComplexTangent& u, const ComplexTangent& v) {
    return cplx(metric(M, u.re, v.re) + metric(M, u.im, v.im),
                metric(M, u.im, v.re) - metric(M, u.re, v.im));
}

inline ComplexTangent scale(const ComplexTangent& u, cplx z) {
    // (a+ib)(re + i im) = (a re - b im) + i(b re + a im)
    double a = z.real(), b = z.imag();
    return ComplexTangent{TangentVector{u.re.base, a * u.re.v - b * u.im.v},
                          TangentVector{u.im.base, b * u.re.v + a * u.im.v}};
}

// Moving frame of rank 1 or 2 along a closed filament.  Columns may be
// quasi-periodic sections: crossing the loop seam multiplies column c by
// e^{i seam[c]} (e.g. the parallel complex direction e^{i rho}(N+iB)/sqrt(2)
// picks up the total torsion).  Periodic columns have seam 0.
struct MovingFrame {
    int rank = 1;
    SpaceForm M;
    double length = 0.0;
    std::array<std::vector<ComplexTangent>, 2> cols;
    std::array<double, 2> seam{0.0, 0.0};

    std::size_t N() const { return cols[0].size(); }
    double ds() const { return length / static_cast<double>(cols[0].size()); }
};

// Values of the connection form along the curve: per-sample skew-Hermitian
// rank x rank matrix, row-major in m.  max_presym_defect records how far the
// raw matrices h(D A^j, A^i) were from skew-Hermitian before averaging —
// a discretization diagnostic that should shrink at second order.
struct ConnectionCoefficient {
    int rank = 1;
    std::vector<std::array<cplx, 4>> m;
    double max_presym_defect = 0.0;

    cplx entry(std::size_t sample, int i, int j) const {
        return m[sample][static_cast<std::size_t>(2 * i + j)];
    }
};

namespace detail {

// Covariant derivative of a quasi-periodic complexified tangent field:
// spectral derivative of each complex ambient coordinate with the seam
// phase handled by shifted wavenumbers, then tangent projection of real and
// imaginary parts at each base point.
inline std::vector<ComplexTangent> covariant_derivative_complex(
    const SpaceForm& M, std::span<const ComplexTangent> field, double length, double seam) {
    const std::size_t n = field.size();
    const int dim = M.ambient_dim();
    std::vector<cplx> comp(n);
    std::vector<std::vector<cplx>> d(dim);
    for (int a = 0; a < dim; ++a) {
        for (std::size_t i = 0; i < n; ++i)
            comp[i] = cplx(field[i].re.v[a], field[i].im.v[a]);
        d[a] = spectral::derivative_quasi_periodic(std::span<const cplx>(comp), length, 1, seam);
    }
    std::vector<ComplexTangent> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec wr = Vec::zero(dim), wi = Vec::zero(dim);
        for (int a = 0; a < dim; ++a) {
            wr[a] = d[a][i].real();
            wi[a] = d[a][i].imag();
        }
        AmbientPoint base{field[i].re.base};
        out[i] = ComplexTangent{project_to_tangent(M, base, wr), project_to_tangent(M, base, wi)};
    }
    return out;
}

} // namespace detail

// Per-sample matrix with entry (i,j) = h(D/ds A^j, A^i), skew-Hermitianized
// by m <- (m - m^H)/2 with the pre-symmetrization defect reported.
inline ConnectionCoefficient ehresmann_coefficient(const MovingFrame& frame) {
    const std::size_t n = frame.N();
    if (n < spectral::min_samples)
        throw UsageError("ehresmann_coefficient: need at least 16 samples");
    if (frame.rank < 1 || frame.rank > 2)
        throw UsageError("ehresmann_coefficient: rank must be 1 or 2");
    const int r = frame.rank;
    for (int c = 0; c < r; ++c)
        if (frame.cols[c].size() != n)
            throw UsageError("ehresmann_coefficient: column sample counts differ");

    // Hermitian orthonormality of the frame at every sample.
    for (std::size_t s = 0; s < n; ++s)
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                cplx hij = hermitian(frame.M, frame.cols[i][s], frame.cols[j][s]);
                double want = (i == j) ? 1.0 : 0.0;
                if (std::abs(hij - want) > 1e-8)
                    throw UsageError(
                        "ehresmann_coefficient: frame not orthonormal at sample " +
                        std::to_string(s) + " (|h(A" + std::to_string(i) + ",A" +
                        std::to_string(j) + ") - " + (i == j ? "1" : "0") + "| = " +
                        std::to_string(std::abs(hij - want)) + ")");
            }

    std::array<std::vector<ComplexTangent>, 2> dcols;
    for (int c = 0; c < r; ++c)
        dcols[c] = detail::covariant_derivative_complex(
            frame.M, std::span<const ComplexTangent>(frame.cols[c]), frame.length, frame.seam[c]);

    ConnectionCoefficient out;
    out.rank = r;
    out.m.assign(n, {});
    for (std::size_t s = 0; s < n; ++s) {
        std::array<cplx, 4> raw{};
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                raw[static_cast<std::size_t>(2 * i + j)] =
                    hermitian(frame.M, dcols[j][s], frame.cols[i][s]);
        double defect = 0.0;
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                cplx sym = raw[static_cast<std::size_t>(2 * i + j)] +
                           std::conj(raw[static_cast<std::size_t>(2 * j + i)]);
                defect += std::norm(sym);
                out.m[s][static_cast<std::size_t>(2 * i + j)] =
                    0.5 * (raw[static_cast<std::size_t>(2 * i + j)] -
                           std::conj(raw[static_cast<std::size_t>(2 * j + i)]));
            }
        out.max_presym_defect = std::max(out.max_presym_defect, std::sqrt(defect));
    }
    return out;
}

// Real rank-3 analogue on the Frenet frame (T,N,B): per-sample matrix with
// entry (i,j) = <D/ds A^j, A^i>, skew-symmetrized.  For a Frenet frame this
// is [[0,-kappa,0],[kappa,0,-tau],[0,tau,0]].
struct RealConnectionCoefficient {
    std::vector<std::array<double, 9>> m; // row-major 3x3 per sample
    double max_presym_defect = 0.0;

    double entry(std::size_t sample, int i, int j) const {
        return m[sample][static_cast<std::size_t>(3 * i + j)];
    }
};

inline RealConnectionCoefficient frenet_frame_coefficient(const SpaceForm& M,
                                                          const FrenetField& fr, double ds) {
    const std::size_t n = fr.size();
    if (n < spectral::min_samples)
        throw UsageError("frenet_frame_coefficient: need at least 16 samples");
    const std::vector<TangentVector>* cols[3] = {&fr.T, &fr.N, &fr.B};
    std::array<std::vector<TangentVector>, 3> d;
    for (int c = 0; c < 3; ++c)
        d[c] = covariant_derivative(M, std::span<const TangentVector>(*cols[c]), ds);
    RealConnectionCoefficient out;
    out.m.assign(n, {});
    for (std::size_t s = 0; s < n; ++s) {
        std::array<double, 9> raw{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                raw[static_cast<std::size_t>(3 * i + j)] =
                    metric(M, d[j][s], (*cols[i])[s]);
        double defect = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double sym = raw[static_cast<std::size_t>(3 * i + j)] +
                             raw[static_cast<std::size_t>(3 * j + i)];
                defect += sym * sym;
                out.m[s][static_cast<std::size_t>(3 * i + j)] =
                    0.5 * (raw[static_cast<std::size_t>(3 * i + j)] -
                           raw[static_cast<std::size_t>(3 * j + i)]);
            }
        out.max_presym_defect = std::max(out.max_presym_defect, std::sqrt(defect));
    }
    return out;
}

// rho(s) = cumulative trapezoid of tau from the base sample; the frame
// {e^{i rho}(N+iB)/sqrt(2)} built from it is parallel (zero coefficient).
inline std::vector<double> parallel_phase(std::span<const double> tau, double ds,
                                          std::size_t base_index = 0) {
    return spectral::cumulative_trapezoid(tau, ds, base_index).values;
}

// Rank-1 frame {e^{i rho}(N+iB)/sqrt(2)} with seam phase `seam` (the value
// rho would reach after a full loop; Theta = loop integral of tau for the
// parallel frame).
inline MovingFrame complex_line_frame(const SpaceForm& M, const FrenetField& fr, double length,
                                      std::span<const double> rho, double seam) {
    const std::size_t n = fr.size();
    if (rho.size() != n) throw UsageError("complex_line_frame: rho size mismatch");
    MovingFrame frame;
    frame.rank = 1;
    frame.M = M;
    frame.length = length;
    frame.seam[0] = seam;
    frame.cols[0].resize(n);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t s = 0; s < n; ++s) {
        double c = std::cos(rho[s]), si = std::sin(rho[s]);
        // e^{i rho} (N + iB)/sqrt(2) = (cos N - sin B)/sqrt(2) + i (sin N + cos B)/sqrt(2)
        Vec re = inv_sqrt2 * (c * fr.N[s].v - si * fr.B[s].v);
        Vec im = inv_sqrt2 * (si * fr.N[s].v + c * fr.B[s].v);
        frame.cols[0][s] = ComplexTangent{TangentVector{fr.N[s].base, re},
                                          TangentVector{fr.N[s].base, im}};
    }
    return frame;
}

// Rank-2 frame {T, e^{i rho}(N+iB)/sqrt(2)} with rho = parallel_phase(tau).
inline MovingFrame hasimoto_frame(const SpaceForm& M, const FrenetField& fr, double length,
                                  std::size_t base_index = 0) {
    const std::size_t n = fr.size();
    double ds = length / static_cast<double>(n);
    auto phase = spectral::cumulative_trapezoid(std::span<const double>(fr.tau), ds, base_index);
    MovingFrame line = complex_line_frame(M, fr, length, phase.values, phase.total);
    MovingFrame frame;
    frame.rank = 2;
    frame.M = M;
    frame.length = length;
    frame.seam = {0.0, phase.total};
    frame.cols[0].resize(n);
    for (std::size_t s = 0; s < n; ++s)
        frame.cols[0][s] = ComplexTangent{
            fr.T[s], TangentVector{fr.T[s].base, Vec::zero(M.ambient_dim())}};
    frame.cols[1] = std::move(line.cols[0]);
    return frame;
}

// The u(2) coefficient of the rank-2 frame {T, e^{i rho}(N+iB)/sqrt(2)}.
// Contract: equals (1/sqrt(2)) [[0, -psi],[conj(psi), 0]] within O(ds^2),
// where psi is the Hasimoto field built from the same (kappa, tau) — the
// phase recovery here goes through covariant differentiation of the frame
// vectors, not through kappa e^{i rho} directly.
inline ConnectionCoefficient hasimoto_frame_coefficient(const SpaceForm& M,
                                                        const FrenetField& fr, double ds,
                                                        std::size_t base_index = 0) {
    double length = ds * static_cast<double>(fr.size());
    return ehresmann_coefficient(hasimoto_frame(M, fr, length, base_index));
}

// Almost-complex structure J v = T x v on the normal plane: N+iB must be an
// eigenvector of its complexification with eigenvalue -i.  Returns the max
// over samples of the relative defect |J^C(N+iB) + i(N+iB)| / |N+iB|
// (0 for the correct orientation, 2 if the eigenvalue flips to +i).
inline double check_J_eigenvector(const SpaceForm& M, const FrenetField& fr) {
    const std::size_t n = fr.size();
    double worst = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        TangentVector JN = cross(M, fr.T[s], fr.N[s]);
        TangentVector JB = cross(M, fr.T[s], fr.B[s]);
        // w = J^C(N+iB) + i(N+iB):  re = J N - B,  im = J B + N
        TangentVector wre{JN.base, JN.v - fr.B[s].v};
        TangentVector wim{JB.base, JB.v + fr.N[s].v};
        double defect2 = metric(M, wre, wre) + metric(M, wim, wim);
        double norm2 = metric(M, fr.N[s], fr.N[s]) + metric(M, fr.B[s], fr.B[s]);
        worst = std::max(worst, std::sqrt(defect2 / norm2));
    }
    return worst;
}

} // namespace vfe

#endif
