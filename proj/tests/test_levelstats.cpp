#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "llg/levelstats.hpp"
#include "llg/replica.hpp"

#include <Eigen/Eigenvalues>
#include <numeric>

using namespace llg;

namespace {
Matrix kron2(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}
} // namespace

TEST_CASE("identity gates give the identity Floquet operator") {
    GateEnsembleSpec spec;
    spec.model = Model::XYZc;
    spec.ax = spec.ay = spec.az = 0;
    Matrix f = build_floquet(spec, 6);
    CHECK((f - Matrix::Identity(64, 64)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Floquet operator is unitary") {
    GateEnsembleSpec spec;
    spec.model = Model::ThreePM;
    spec.seed = 4;
    Matrix f = build_floquet(spec, 8);
    CHECK(unitarity_residual(f) < 1e-10);
}

TEST_CASE("XYZc Floquet commutes with the Z2 operator and T^2") {
    GateEnsembleSpec spec;
    spec.model = Model::XYZc;
    int sites = 8;
    Matrix f = build_floquet(spec, sites);
    Matrix z = Matrix::Identity(1, 1);
    for (int k = 0; k < sites; ++k) z = kron2(z, pauli(3));
    CHECK((f * z - z * f).cwiseAbs().maxCoeff() < 1e-10);
    // T^2 commutation is checked inside sector_spacings; it should not throw
    SectorOptions opt;
    opt.momentum = 1;
    CHECK_NOTHROW(sector_spacings(f, 2, sites, opt));
}

TEST_CASE("momentum sectors partition the Hilbert space") {
    GateEnsembleSpec spec;
    spec.model = Model::HRM;
    spec.seed = 11;
    int sites = 8;
    Matrix f = build_floquet(spec, sites);
    std::int64_t total = 0;
    for (int k = 0; k < sites / 2; ++k) {
        SectorOptions opt;
        opt.momentum = k;
        FloquetSpectrum sp = sector_spacings(f, 2, sites, opt);
        total += std::int64_t(sp.phases.size());
        // unit-mean normalization is exact
        double mean = std::accumulate(sp.spacings.begin(), sp.spacings.end(), 0.0) /
                      double(sp.spacings.size());
        CHECK(mean == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(total == 256);
}

TEST_CASE("sector projection rejects asymmetric circuits") {
    GateEnsembleSpec spec;
    spec.model = Model::HRM;
    spec.seed = 6;
    spec.arrangement = Arrangement::SpatialTemporalRandom;
    Matrix f = build_floquet(spec, 6);
    SectorOptions opt;
    CHECK_THROWS_AS(sector_spacings(f, 2, 6, opt), not_symmetric);
}

TEST_CASE("powers act on eigenphases exactly") {
    Rng rng(13);
    Matrix s = sample_cue(6, rng);
    Eigen::ComplexEigenSolver<Matrix> es(s, false);
    Matrix s2 = s * s;
    Eigen::ComplexEigenSolver<Matrix> es2(s2, false);
    std::vector<double> doubled, direct;
    for (int i = 0; i < 6; ++i) {
        double ph = 2 * std::arg(es.eigenvalues()(i));
        ph = std::fmod(ph, 2 * M_PI);
        if (ph < 0) ph += 2 * M_PI;
        doubled.push_back(ph);
        double p2 = std::arg(es2.eigenvalues()(i));
        if (p2 < 0) p2 += 2 * M_PI;
        direct.push_back(p2);
    }
    std::sort(doubled.begin(), doubled.end());
    std::sort(direct.begin(), direct.end());
    for (int i = 0; i < 6; ++i)
        CHECK(doubled[std::size_t(i)] ==
              doctest::Approx(direct[std::size_t(i)]).epsilon(1e-9));
}

TEST_CASE("CUE spacing sample matches itself across seeds (self-consistency)") {
    Rng r1(100), r2(200);
    auto a = sample_matrix_power_ensemble(CircularKind::CUE, 1, 120, 40, r1);
    auto b = sample_matrix_power_ensemble(CircularKind::CUE, 1, 120, 40, r2);
    CHECK(ks_distance(a, b) < 0.03);
    double mean = std::accumulate(a.begin(), a.end(), 0.0) / double(a.size());
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("COE spacing shape: beta = 1 vs Wigner surmise") {
    Rng rng(300);
    auto sp = sample_matrix_power_ensemble(CircularKind::COE, 1, 60, 170, rng);
    // Wigner surmise reference sample for beta = 1: CDF = 1 - exp(-pi s^2/4)
    Rng u(42);
    std::vector<double> ref;
    for (std::size_t k = 0; k < 20000; ++k)
        ref.push_back(std::sqrt(-4.0 / M_PI * std::log(u.next_unit())));
    CHECK(ks_distance(sp, ref) < 0.05);
}

TEST_CASE("KS distance basics") {
    std::vector<double> a{0.1, 0.2, 0.3};
    CHECK(ks_distance(a, a) == 0.0);
    Rng u(5);
    std::vector<double> ex;
    for (int k = 0; k < 50000; ++k) ex.push_back(-std::log(u.next_unit()));
    CHECK(ks_distance_exponential(ex) < 0.01);
}

TEST_CASE("histogram integrates to one") {
    Rng u(9);
    std::vector<double> s;
    for (int k = 0; k < 10000; ++k) s.push_back(-std::log(u.next_unit()));
    Histogram h = spacing_histogram(s, 0.1, 12.0);
    double integral = 0;
    for (double d : h.density) integral += d * 0.1;
    CHECK(integral > 0.99); // a tiny tail may fall beyond s_max
}
