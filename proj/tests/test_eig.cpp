#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include <zitterkit/eig.hpp>
#include <zitterkit/representations.hpp>
#include <zitterkit/spin.hpp>

#include "support/oracles.hpp"

using namespace zitterkit;

TEST_CASE("eig_decompose basics") {
    const auto eig = eig_decompose(pauli(3));
    REQUIRE(eig.values.size() == 2);
    CHECK(eig.values[0] == cplx{1.0, 0.0});
    CHECK(eig.values[1] == cplx{-1.0, 0.0});
}

TEST_CASE("eig_decompose dirac dispersion with characteristic-polynomial oracle") {
    const auto rep = RepSpec::dirac(3.0);
    const Momentum p{0.0, 0.0, 4.0};
    const ComplexMatrix h = hamiltonian(rep, p);
    const auto eig = eig_decompose(h);

    // +-sqrt(9 + 16) = +-5, each doubled
    REQUIRE(eig.values.size() == 4);
    CHECK(std::abs(eig.values[0] - cplx{5.0, 0.0}) < 1e-12);
    CHECK(std::abs(eig.values[1] - cplx{5.0, 0.0}) < 1e-12);
    CHECK(std::abs(eig.values[2] - cplx{-5.0, 0.0}) < 1e-12);
    CHECK(std::abs(eig.values[3] - cplx{-5.0, 0.0}) < 1e-12);

    // every returned eigenvalue is a root of the independently computed
    // characteristic polynomial
    const auto coeffs = oracle::char_poly(oracle::from_lib(h));
    for (const cplx& lam : eig.values)
        CHECK(std::abs(oracle::poly_eval(coeffs, lam)) < 1e-9);
}

TEST_CASE("eig_decompose photon spectrum has doubled zero modes") {
    const Momentum p{0.0, 0.0, 1.0};
    const auto eig = eig_decompose(hamiltonian(RepSpec::photon(), p));
    REQUIRE(eig.values.size() == 6);
    // sorted descending: +1 +1 0 0 -1 -1; the zeros are the longitudinal
    // components removed by transversality
    CHECK(std::abs(eig.values[0] - cplx{1.0, 0.0}) < 1e-12);
    CHECK(std::abs(eig.values[1] - cplx{1.0, 0.0}) < 1e-12);
    CHECK(std::abs(eig.values[2]) < 1e-12);
    CHECK(std::abs(eig.values[3]) < 1e-12);
    CHECK(std::abs(eig.values[4] + cplx{1.0, 0.0}) < 1e-12);
    CHECK(std::abs(eig.values[5] + cplx{1.0, 0.0}) < 1e-12);
}

TEST_CASE("eig_decompose reconstruction across the representation catalogue") {
    oracle::Rng rng;
    const std::vector<RepSpec> reps = {
        RepSpec::dirac(1.0),
        RepSpec::dirac(0.0),
        RepSpec::feshbach_villars(0.5),
        RepSpec::generalized_fv(1.0, 0.0, 0.3),
        RepSpec::generalized_fv(0.0, 1.0, 2.0),
        RepSpec::photon(),
        RepSpec::foldy_wouthuysen(2.0, 0.5),
    };
    for (const auto& rep : reps) {
        for (int trial = 0; trial < 5; ++trial) {
            const Momentum p = rng.momentum();
            const ComplexMatrix h = hamiltonian(rep, p);
            const auto eig = eig_decompose(h);

            ComplexMatrix hv = h * eig.vectors;
            ComplexMatrix vd(eig.vectors.dim());
            for (std::size_t c = 0; c < eig.values.size(); ++c)
                for (std::size_t r = 0; r < eig.vectors.dim(); ++r)
                    vd(r, c) = eig.vectors(r, c) * eig.values[c];
            INFO(to_string(rep.kind));
            CHECK(max_abs_diff(hv, vd) <= 1e-10);
            CHECK(max_abs_diff(eig.vectors * eig.vectors_inverse,
                               ComplexMatrix::identity(eig.vectors.dim())) <= 1e-10);
        }
    }
}

TEST_CASE("eig_decompose orthonormalizes degenerate eigenspaces") {
    const auto eig = eig_decompose(hamiltonian(RepSpec::dirac(1.0), Momentum{0.3, -0.4, 1.2}));
    // the two spin states of each branch come out orthonormal
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) {
            cplx dot{0.0, 0.0};
            for (std::size_t r = 0; r < 4; ++r)
                dot += std::conj(eig.vectors(r, a)) * eig.vectors(r, b);
            CHECK(std::abs(dot - (a == b ? cplx{1.0, 0.0} : cplx{0.0, 0.0})) < 1e-12);
        }
}

TEST_CASE("eig_decompose rejects a defective matrix") {
    // a Jordan block has no eigenbasis
    ComplexMatrix jordan{{cplx{1.0, 0.0}, cplx{1.0, 0.0}}, {cplx{0.0, 0.0}, cplx{1.0, 0.0}}};
    CHECK_THROWS_AS(eig_decompose(jordan), NumericalError);
    try {
        eig_decompose(jordan);
    } catch (const NumericalError& e) {
        CHECK(e.condition_estimate() > 1e12);
    }
}

TEST_CASE("mat_exp examples") {
    CHECK(max_abs_diff(mat_exp(ComplexMatrix::zero(3), cplx{2.0, 1.0}),
                       ComplexMatrix::identity(3)) < 1e-14);

    // exp(i pi rho3) = -I
    CHECK(max_abs_diff(mat_exp(pauli(3), cplx{0.0, std::numbers::pi}),
                       ComplexMatrix::identity(2) * -1.0) < 1e-13);

    // exp(-2i H t) at m=0, p=(0,0,1), t=pi/2: eigenvalues +-1 give -I
    const ComplexMatrix h = hamiltonian(RepSpec::dirac(0.0), Momentum{0.0, 0.0, 1.0});
    const ComplexMatrix got = mat_exp(h, cplx{0.0, -std::numbers::pi});
    CHECK(max_abs_diff(got, ComplexMatrix::identity(4) * -1.0) < 1e-12);

    // series-summation oracle agrees
    const auto series = oracle::series_exp(oracle::from_lib(h), cplx{0.0, -std::numbers::pi});
    CHECK(max_abs_diff(got, oracle::to_lib(series)) < 1e-12);
}

TEST_CASE("mat_exp matches the series oracle on random Hamiltonians") {
    oracle::Rng rng;
    const std::vector<RepSpec> reps = {RepSpec::dirac(1.0), RepSpec::generalized_fv(0.5, 0.5, 2.0),
                                       RepSpec::photon()};
    for (const auto& rep : reps) {
        for (int trial = 0; trial < 5; ++trial) {
            const Momentum p = rng.momentum();
            const double t = rng.uniform(0.1, 5.0);
            const ComplexMatrix h = hamiltonian(rep, p);
            const ComplexMatrix got = mat_exp(h, cplx{0.0, -2.0 * t});
            const auto want = oracle::series_exp(oracle::from_lib(h), cplx{0.0, -2.0 * t});
            INFO(to_string(rep.kind));
            CHECK(max_abs_diff(got, oracle::to_lib(want)) < 1e-11);
        }
    }
}

TEST_CASE("mat_exp inverse property") {
    oracle::Rng rng;
    // imaginary arguments on Hamiltonians, up to ||s a|| ~ 50
    for (int trial = 0; trial < 8; ++trial) {
        const Momentum p = rng.momentum();
        const ComplexMatrix h = hamiltonian(RepSpec::dirac(1.0), p);
        const double t = rng.uniform(0.5, 50.0 / std::max(1.0, h.max_abs()));
        const ComplexMatrix fwd = mat_exp(h, cplx{0.0, t});
        const ComplexMatrix bwd = mat_exp(h, cplx{0.0, -t});
        CHECK(max_abs_diff(fwd * bwd, ComplexMatrix::identity(4)) <= 1e-10);
    }
    // moderate real arguments on generic matrices
    for (int trial = 0; trial < 8; ++trial) {
        const ComplexMatrix a = rng.matrix(3);
        const ComplexMatrix fwd = mat_exp(a, cplx{1.0, 0.0});
        const ComplexMatrix bwd = mat_exp(a, cplx{-1.0, 0.0});
        CHECK(max_abs_diff(fwd * bwd, ComplexMatrix::identity(3)) <= 1e-10);
    }
}

TEST_CASE("mat_exp falls back to scaling-and-squaring for a defective matrix") {
    ComplexMatrix jordan{{cplx{0.0, 0.0}, cplx{1.0, 0.0}}, {cplx{0.0, 0.0}, cplx{0.0, 0.0}}};
    // exp(s J) = I + s J exactly for the nilpotent block
    const ComplexMatrix got = mat_exp(jordan, cplx{0.7, 0.0});
    ComplexMatrix want = ComplexMatrix::identity(2);
    want(0, 1) = 0.7;
    CHECK(max_abs_diff(got, want) < 1e-13);
}

TEST_CASE("physical_inverse excludes photon null modes") {
    const Momentum p{0.4, 0.0, 0.9};
    const ComplexMatrix h = hamiltonian(RepSpec::photon(), p);
    const auto eig = eig_decompose(h);
    const ComplexMatrix hinv = physical_inverse(eig);
    const ComplexMatrix proj = physical_projector(eig);

    CHECK(max_abs_diff(h * hinv, proj) < 1e-10);
    CHECK(max_abs_diff(hinv * h, proj) < 1e-10);
    // the physical projector is the transversal one
    CHECK(max_abs_diff(proj, photon_transversality_projector(p)) < 1e-10);
}
