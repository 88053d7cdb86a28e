#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "llg/replica.hpp"

using namespace llg;

TEST_CASE("pair state overlap table <i|j> = q d_ij + d_i,1-j") {
    for (int q : {2, 3, 4}) {
        Vector p0 = pair_state(0, q), p1 = pair_state(1, q);
        CHECK(std::abs(p0.dot(p0) - Complex(q, 0)) < 1e-12);
        CHECK(std::abs(p1.dot(p1) - Complex(q, 0)) < 1e-12);
        CHECK(std::abs(p0.dot(p1) - Complex(1, 0)) < 1e-12);
        CHECK(std::abs(p1.dot(p0) - Complex(1, 0)) < 1e-12);
    }
}

TEST_CASE("decorated pair states") {
    int q = 2;
    Matrix sz = generalized_pauli(1, 0, q); // sigma_z
    Vector v = make_pair_state(0, sz, sz, q);
    CHECK(std::abs(v.dot(v) - Complex(q, 0)) < 1e-12); // sz^2 = 1 keeps the norm
    Vector p1 = pair_state(1, q);
    // <L_1|0> = tr(s s^dag)/q = 1 for unitary decorations
    Vector l = make_pair_state(1, sz, sz.adjoint(), q);
    CHECK(std::abs(formal_dot(l, pair_state(0, q)) - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(formal_dot(p1, make_pair_state(0, sz.adjoint(), sz, q)) -
                   Complex(1, 0)) < 1e-12);
}

TEST_CASE("generalized Pauli basics") {
    CHECK((generalized_pauli(0, 0, 3) - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <
          1e-14);
    // q = 2: sigma^{1,0} = diag(1,-1), sigma^{0,1} = sigma_x
    Matrix sz = generalized_pauli(1, 0, 2);
    CHECK(std::abs(sz(0, 0) - Complex(1, 0)) < 1e-14);
    CHECK(std::abs(sz(1, 1) + Complex(1, 0)) < 1e-14);
    Matrix sx = generalized_pauli(0, 1, 2);
    CHECK(std::abs(sx(1, 0) - Complex(1, 0)) < 1e-14);
    CHECK(std::abs(sx(0, 1) - Complex(1, 0)) < 1e-14);
}

TEST_CASE("generalized Pauli trace orthogonality and algebra") {
    for (int q : {2, 3}) {
        for (int mu = 0; mu < q * q; ++mu)
            for (int nu = 0; nu < q * q; ++nu) {
                Matrix a = generalized_pauli_mu(mu, q);
                Matrix b = generalized_pauli_mu(nu, q);
                Complex tr = (a.adjoint() * b).trace();
                CHECK(std::abs(tr - (mu == nu ? Complex(q, 0) : Complex(0, 0))) <
                      1e-12);
            }
        // sigma^{j,k} sigma^{j',k'} = omega^{j k'} sigma^{j+j', k+k'}
        const double two_pi = 2 * M_PI;
        for (int j = 0; j < q; ++j)
            for (int k = 0; k < q; ++k)
                for (int jp = 0; jp < q; ++jp)
                    for (int kp = 0; kp < q; ++kp) {
                        Matrix lhs = generalized_pauli(j, k, q) *
                                     generalized_pauli(jp, kp, q);
                        Matrix rhs = std::exp(Complex(0, two_pi * j * kp / q)) *
                                     generalized_pauli((j + jp) % q, (k + kp) % q, q);
                        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
                    }
    }
}

TEST_CASE("commutator identity sum_mu ||[s^mu, s^nu]||_F^2 = 2 q^3") {
    for (int q : {2, 3}) {
        for (int nu = 1; nu < q * q; ++nu) {
            Matrix b = generalized_pauli_mu(nu, q);
            double acc = 0;
            for (int mu = 1; mu < q * q; ++mu) {
                Matrix a = generalized_pauli_mu(mu, q);
                acc += (a * b - b * a).squaredNorm();
            }
            CHECK(acc == doctest::Approx(2.0 * q * q * q).epsilon(1e-12));
        }
    }
}

TEST_CASE("replicated gate fixes the paired states") {
    Rng rng(31);
    UnitaryGate g{2, sample_cue(4, rng)};
    Matrix u2 = replicate_gate(g);
    Vector p00 = Vector(pair_state(0, 2).size() * pair_state(0, 2).size());
    Vector p0 = pair_state(0, 2), p1 = pair_state(1, 2);
    auto kron_vec = [](const Vector& a, const Vector& b) {
        Vector out(a.size() * b.size());
        for (std::int64_t i = 0; i < a.size(); ++i)
            out.segment(i * b.size(), b.size()) = a(i) * b;
        return out;
    };
    p00 = kron_vec(p0, p0);
    Vector p11 = kron_vec(p1, p1);
    CHECK((u2 * p00 - p00).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((u2 * p11 - p11).cwiseAbs().maxCoeff() < 1e-12);

    // multiplicativity: replicate(u v) = replicate(u) replicate(v)
    UnitaryGate h{2, sample_cue(4, rng)};
    Matrix lhs = replicate_gate({2, g.matrix * h.matrix});
    Matrix rhs = replicate_gate(g) * replicate_gate(h);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-11);

    Matrix id4 = replicate_gate({2, Matrix::Identity(4, 4)});
    CHECK((id4 - Matrix::Identity(256, 256)).cwiseAbs().maxCoeff() < 1e-14);
}
