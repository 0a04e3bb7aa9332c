#include <catch2/catch_amalgamated.hpp>

#include <zitterkit/eig.hpp>
#include <zitterkit/transforms.hpp>

#include "support/oracles.hpp"

using namespace zitterkit;

TEST_CASE("massless Dirac FW transform") {
    const Momentum pz{0.0, 0.0, 1.0};
    const TransformOp t = fw_massless_dirac(pz);

    // U = (I + gamma3)/sqrt(2) and U alpha3 U^dag = beta
    const ComplexMatrix want =
        (ComplexMatrix::identity(4) + dirac_gamma(3)) * (1.0 / std::sqrt(2.0));
    CHECK(max_abs_diff(t.u, want) <= 1e-15);
    CHECK(max_abs_diff(apply_similarity(t, dirac_alpha(3)), dirac_beta()) <= 1e-14);

    // unitarity
    CHECK(max_abs_diff(t.u * t.u.adjoint(), ComplexMatrix::identity(4)) <= 1e-14);
    CHECK(t.pseudounitarity_residual() <= 1e-14);

    // spectrum preserved under similarity
    oracle::Rng rng;
    const Momentum p = rng.momentum();
    const TransformOp tp = fw_massless_dirac(p);
    const ComplexMatrix h = hamiltonian(RepSpec::dirac(0.0), p);
    const auto before = eig_decompose(h);
    const auto after = eig_decompose(apply_similarity(tp, h));
    for (std::size_t i = 0; i < before.values.size(); ++i)
        CHECK(std::abs(before.values[i] - after.values[i]) <= 1e-10);

    CHECK_THROWS_AS(fw_massless_dirac(Momentum{0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("transform exactness: H maps to the block-diagonal beta eps") {
    oracle::Rng rng;

    SECTION("massless Dirac") {
        for (int trial = 0; trial < 10; ++trial) {
            const Momentum p = rng.momentum();
            const TransformOp t = fw_massless_dirac(p);
            const ComplexMatrix image = apply_similarity(t, hamiltonian(RepSpec::dirac(0.0), p));
            CHECK(max_abs_diff(image, dirac_beta() * p.norm()) <= 1e-10);
        }
    }

    SECTION("photon, on the transversal subspace") {
        for (int trial = 0; trial < 10; ++trial) {
            const Momentum p = rng.momentum();
            const TransformOp t = fw_photon(p);
            const ComplexMatrix image = apply_similarity(t, hamiltonian(RepSpec::photon(), p));
            const ComplexMatrix proj = photon_transversality_projector(p);
            const ComplexMatrix dev = proj * (image - photon_beta() * p.norm()) * proj;
            CHECK(dev.max_abs() <= 1e-10);
        }
    }

    SECTION("GFV for random mass, N, spin") {
        for (int trial = 0; trial < 10; ++trial) {
            const double m = (trial % 3 == 0) ? 0.0 : rng.uniform(0.1, 2.0);
            const double n = rng.uniform(0.2, 6.0);
            const double s = 0.5 * static_cast<double>(trial % 4);
            const Momentum p = rng.momentum();
            const TransformOp t = gfv_to_fw(m, n, p, s);
            const ComplexMatrix image =
                apply_similarity(t, hamiltonian(RepSpec::generalized_fv(m, s, n), p));
            const ComplexMatrix want =
                kron(pauli(3), ComplexMatrix::identity(t.source.spin_block())) *
                energy(t.source, p);
            CHECK(max_abs_diff(image, want) <= 1e-10);
        }
    }
}

TEST_CASE("pseudounitarity residuals across random parameter sweeps") {
    oracle::Rng rng;
    for (int trial = 0; trial < 20; ++trial) {
        const Momentum p = rng.momentum();
        CHECK(fw_massless_dirac(p).pseudounitarity_residual() <= 1e-12);
        CHECK(fw_photon(p).pseudounitarity_residual() <= 1e-12);
        const double m = rng.uniform(0.0, 2.0);
        const double n = rng.uniform(0.2, 8.0);
        const double s = 0.5 * static_cast<double>(trial % 3);
        CHECK(gfv_to_fw(m, n, p, s).pseudounitarity_residual() <= 1e-12);
    }
}

TEST_CASE("gfv_to_fw closed forms") {
    SECTION("N = eps trivializes the transform") {
        const Momentum p{0.6, 0.0, 0.8};
        const TransformOp t = gfv_to_fw(0.0, 1.0, p, 0.0); // eps = |p| = 1
        CHECK(max_abs_diff(t.u, ComplexMatrix::identity(2)) <= 1e-14);
        CHECK(max_abs_diff(t.u_inverse, ComplexMatrix::identity(2)) <= 1e-14);
    }

    SECTION("m=0, p=(0,0,1), N=4: U = (5 - 3 rho1)/4, 2x2 product oracle") {
        const TransformOp t = gfv_to_fw(0.0, 4.0, Momentum{0.0, 0.0, 1.0}, 0.0);
        const ComplexMatrix want =
            (ComplexMatrix::identity(2) * 5.0 - pauli(1) * 3.0) * 0.25;
        CHECK(max_abs_diff(t.u, want) <= 1e-15);
        CHECK(is_pseudo_unitary(t.u, t.metric, 1e-13));

        // similarity pins the direction: U H_GFV U^{-1} = rho3 * 1
        const ComplexMatrix h =
            hamiltonian(RepSpec::generalized_fv(0.0, 0.0, 4.0), Momentum{0.0, 0.0, 1.0});
        CHECK(max_abs_diff(apply_similarity(t, h), pauli(3)) <= 1e-13);

        // the printed inverse is both the pseudo-adjoint and the numeric inverse
        CHECK(max_abs_diff(t.u_inverse, pseudo_adjoint(t.u, t.metric)) <= 1e-14);
        CHECK(max_abs_diff(t.u_inverse, inverse(t.u)) <= 1e-13);
    }

    SECTION("spin extension matches the hand-assembled block matrix") {
        const Momentum p{0.0, 0.0, 2.0};
        const TransformOp t = gfv_to_fw(0.0, 1.0, p, 0.5);
        REQUIRE(t.u.dim() == 4);
        // core coefficients (eps=2, N=1): diag (eps+N)/d, off rho1 (eps-N)/d
        const double d = 2.0 * std::sqrt(2.0);
        const ComplexMatrix core =
            (ComplexMatrix::identity(2) * 3.0 + pauli(1) * 1.0) * (1.0 / d);
        CHECK(max_abs_diff(t.u, kron(core, ComplexMatrix::identity(2))) <= 1e-15);
    }

    CHECK_THROWS_AS(gfv_to_fw(1.0, 0.0, Momentum{0, 0, 1}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gfv_to_fw(1.0, -2.0, Momentum{0, 0, 1}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gfv_to_fw(0.0, 1.0, Momentum{0, 0, 0}, 0.0), std::invalid_argument);
}

TEST_CASE("photon FW transform") {
    oracle::Rng rng;

    SECTION("positive transversal pair (phi, (S.phat) phi) maps to upper block") {
        const Momentum p = rng.momentum();
        const ComplexMatrix tproj = transversality_projector(p);
        ComplexVector phi = {cplx{0.3, 0.1}, cplx{-0.7, 0.2}, cplx{0.4, 0.0}};
        phi = tproj * phi;
        REQUIRE(vnorm(phi) > 0.1);

        const ComplexMatrix sp =
            helicity_matrix({spin1(1), spin1(2), spin1(3)}, p); // S.p/|p|
        const ComplexVector chi = sp * phi;
        ComplexVector psi(6);
        for (std::size_t i = 0; i < 3; ++i) {
            psi[i] = phi[i];
            psi[i + 3] = chi[i];
        }

        // it really is a positive-energy eigenstate
        const ComplexVector hpsi = hamiltonian(RepSpec::photon(), p) * psi;
        for (std::size_t i = 0; i < 6; ++i)
            CHECK(std::abs(hpsi[i] - p.norm() * psi[i]) <= 1e-12);

        const TransformOp t = fw_photon(p);
        const ComplexVector fw = fw_wavefunction(t, psi, +1);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(std::abs(fw[i] - std::sqrt(2.0) * phi[i]) <= 1e-12);
            CHECK(std::abs(fw[i + 3]) <= 1e-12);
        }
    }

    SECTION("commutes with the transversality projector") {
        for (int trial = 0; trial < 10; ++trial) {
            const Momentum p = rng.momentum();
            const TransformOp t = fw_photon(p);
            CHECK(commutator(t.u, photon_transversality_projector(p)).max_abs() <= 1e-12);
        }
    }

    SECTION("squared-operator constraint on transversal states") {
        for (int trial = 0; trial < 10; ++trial) {
            const Momentum p = rng.momentum();
            const ComplexMatrix ap =
                photon_alpha(1) * p.px + photon_alpha(2) * p.py + photon_alpha(3) * p.pz;
            const ComplexMatrix sp =
                photon_sigma(1) * p.px + photon_sigma(2) * p.py + photon_sigma(3) * p.pz;
            const ComplexMatrix p2 = ComplexMatrix::identity(6) * p.norm_sq();
            const ComplexMatrix proj = photon_transversality_projector(p);
            CHECK(((p2 - ap * ap) * proj).max_abs() <= 1e-12);
            CHECK(((p2 - sp * sp) * proj).max_abs() <= 1e-12);
            // the two constraint operators coincide
            CHECK(max_abs_diff(ap * ap, sp * sp) <= 1e-12);
        }
    }
}

TEST_CASE("photon GFV wave functions carry the printed coupling factors") {
    oracle::Rng rng;
    for (int trial = 0; trial < 5; ++trial) {
        const Momentum p = rng.momentum();
        const double pn = p.norm();
        const double n = rng.uniform(0.2, 5.0);
        const TransformOp t = gfv_to_fw(0.0, n, p, 1.0);

        const ComplexMatrix tproj = transversality_projector(p);
        ComplexVector efield = {cplx{0.5, 0.0}, cplx{-0.2, 0.3}, cplx{0.1, -0.4}};
        efield = tproj * efield;

        const double fplus = (n + pn) / (2.0 * std::sqrt(pn * n));
        const double fminus = (n - pn) / (2.0 * std::sqrt(pn * n));

        // positive-energy FW state (E, 0) pulls back to E/(2 sqrt(pN)) (N+p, N-p)
        ComplexVector fw_plus(6, cplx{0.0, 0.0});
        for (std::size_t i = 0; i < 3; ++i)
            fw_plus[i] = efield[i];
        const ComplexVector gfv_plus = t.u_inverse * fw_plus;
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(std::abs(gfv_plus[i] - fplus * efield[i]) <= 1e-12);
            CHECK(std::abs(gfv_plus[i + 3] - fminus * efield[i]) <= 1e-12);
        }

        // negative-energy FW state (0, iB) pulls back to iB/(2 sqrt(pN)) (N-p, N+p)
        ComplexVector bfield = {cplx{0.0, 0.4}, cplx{0.0, -0.1}, cplx{0.0, 0.6}};
        bfield = tproj * bfield;
        ComplexVector fw_minus(6, cplx{0.0, 0.0});
        for (std::size_t i = 0; i < 3; ++i)
            fw_minus[i + 3] = bfield[i];
        const ComplexVector gfv_minus = t.u_inverse * fw_minus;
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(std::abs(gfv_minus[i] - fminus * bfield[i]) <= 1e-12);
            CHECK(std::abs(gfv_minus[i + 3] - fplus * bfield[i]) <= 1e-12);
        }
    }
}

TEST_CASE("apply_similarity") {
    const Momentum p{0.3, -0.4, 1.2};
    const TransformOp t = gfv_to_fw(0.5, 2.0, p, 0.0);

    CHECK(max_abs_diff(apply_similarity(t, ComplexMatrix::identity(2)),
                       ComplexMatrix::identity(2)) <= 1e-13);

    SECTION("the exact image of v_GFV keeps its odd part") {
        // U v_GFV U^{-1} = (rho3 + i rho2) p/eps: N-independent, but not the
        // FW representation's own velocity operator, which is derived from
        // H_FW and equals beta p/eps.
        const double eps = energy(t.source, p);
        const auto v = velocity_operator(t.source, p);
        for (int axis = 1; axis <= 3; ++axis) {
            const ComplexMatrix image = apply_similarity(t, v[static_cast<std::size_t>(axis - 1)]);
            const ComplexMatrix want =
                (pauli(3) + pauli(2) * cplx{0.0, 1.0}) * (p[axis] / eps);
            CHECK(max_abs_diff(image, want) <= 1e-12);
        }

        // the FW representation's velocity operator is the even part
        const auto vfw = velocity_operator(t.target, p);
        for (int axis = 1; axis <= 3; ++axis)
            CHECK(max_abs_diff(vfw[static_cast<std::size_t>(axis - 1)],
                               pauli(3) * (p[axis] / eps)) <= 1e-13);
    }

    SECTION("forward then inverse recovers the input") {
        oracle::Rng rng;
        const ComplexMatrix a = rng.matrix(2);
        TransformOp back = t;
        std::swap(back.u, back.u_inverse);
        CHECK(max_abs_diff(apply_similarity(back, apply_similarity(t, a)), a) <= 1e-10);
    }

    CHECK_THROWS_AS(apply_similarity(t, ComplexMatrix::identity(4)), std::invalid_argument);
}

TEST_CASE("fw_wavefunction branch structure") {
    oracle::Rng rng;
    const Momentum p = rng.momentum();
    const double m = 0.7, n = 1.9, s = 0.5;
    const auto rep = RepSpec::generalized_fv(m, s, n);
    const TransformOp t = gfv_to_fw(m, n, p, s);

    const ComplexVector up = branch_vector(rep, p, +1);
    const ComplexVector um = branch_vector(rep, p, -1);

    SECTION("pure positive-energy state maps to the upper block") {
        const ComplexVector fw = fw_wavefunction(t, up, +1);
        for (std::size_t i = 2; i < 4; ++i)
            CHECK(std::abs(fw[i]) <= 1e-12);
        // factor check: upper block is 2 sqrt(eps N)/(eps + N) * phi
        const double eps = energy(rep, p);
        const double factor = 2.0 * std::sqrt(eps * n) / (eps + n);
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(std::abs(fw[i] - factor * up[i]) <= 1e-12);
    }

    SECTION("pure negative-energy state maps to the lower block") {
        const ComplexVector fw = fw_wavefunction(t, um, -1);
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(std::abs(fw[i]) <= 1e-12);
        const double eps = energy(rep, p);
        const double factor = 2.0 * std::sqrt(eps * n) / (eps + n);
        for (std::size_t i = 2; i < 4; ++i)
            CHECK(std::abs(fw[i] - factor * um[i]) <= 1e-12);
    }

    SECTION("mixed input is rejected") {
        ComplexVector mixed(4);
        for (std::size_t i = 0; i < 4; ++i)
            mixed[i] = up[i] + um[i];
        CHECK_THROWS_AS(fw_wavefunction(t, mixed, +1), std::invalid_argument);
    }

    SECTION("the rho3 inner product is preserved") {
        for (int trial = 0; trial < 5; ++trial) {
            ComplexVector any(4);
            for (auto& v : any)
                v = cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
            const ComplexVector image = t.u * any;
            const Metric g = t.metric;
            CHECK(std::abs(metric_dot(any, g, any) - metric_dot(image, g, image)) <= 1e-12);
        }
    }
}

TEST_CASE("FW images are independent of N") {
    oracle::Rng rng;
    const Momentum p = rng.momentum();
    for (double m : {0.0, 1.0})
        for (double s : {0.0, 1.0}) {
            const double eps = energy(RepSpec::foldy_wouthuysen(m, s), p);
            const std::vector<double> ns = {0.3, 1.0, eps, 10.0};

            std::vector<ComplexMatrix> h_images, v_images;
            for (double n : ns) {
                const auto rep = RepSpec::generalized_fv(m, s, n);
                const TransformOp t = gfv_to_fw(m, n, p, s);
                h_images.push_back(apply_similarity(t, hamiltonian(rep, p)));
                v_images.push_back(apply_similarity(t, velocity_operator(rep, p)[2]));
            }
            for (std::size_t i = 1; i < ns.size(); ++i) {
                CHECK(max_abs_diff(h_images[i], h_images[0]) <= 1e-10);
                CHECK(max_abs_diff(v_images[i], v_images[0]) <= 1e-10);
            }
        }
}
