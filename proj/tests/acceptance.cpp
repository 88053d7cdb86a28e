// Acceptance suite: one numbered criterion per section, one PASS/FAIL line
// each, nonzero exit if anything fails.

#include "llg/analytic.hpp"
#include "llg/levelstats.hpp"
#include "llg/otoc.hpp"
#include "llg/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cstdio>
#include <map>

using namespace llg;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool ok,
            const std::string& detail = "") {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

GateEnsembleSpec make_spec(Model m, int q, std::uint64_t seed,
                           Arrangement arr = Arrangement::Invariant) {
    GateEnsembleSpec s;
    s.model = m;
    s.q = q;
    s.seed = seed;
    s.arrangement = arr;
    return s;
}

LLGOperator make_op(const GateEnsembleSpec& spec, int w, OpMode mode) {
    LLGOperator op;
    op.mode = mode;
    op.q = spec.q;
    op.w = w;
    op.spec = spec;
    return op;
}

void criterion1() {
    auto t0 = std::chrono::steady_clock::now();
    double worst_lb = 0, worst_lr = 0;
    std::vector<GateEnsembleSpec> specs;
    for (Model m : {Model::XYZc, Model::HRM, Model::RPM, Model::ThreePM,
                    Model::Z2COE, Model::DU, Model::Localized})
        specs.push_back(make_spec(m, 2, 11));
    specs.push_back(make_spec(Model::HRM, 2, 23, Arrangement::SpatialTemporalRandom));
    specs.push_back(make_spec(Model::RPM, 2, 23, Arrangement::SpatialTemporalRandom));
    for (const auto& spec : specs) {
        for (int w = 1; w <= 3; ++w) {
            OtocSeries left = otoc_llg_left(spec, w, 3);
            for (int tau = 1; tau <= 3; ++tau) {
                Complex cl = left.points[std::size_t(tau - 1)].value;
                Complex cb =
                    otoc_bruteforce(spec, coord_x(w, tau), coord_t(w, tau));
                worst_lb = std::max(worst_lb, std::abs(cl - cb));
                if (w >= 2) {
                    Complex cr = otoc_llg_right(spec, w, tau);
                    worst_lr = std::max(worst_lr, std::abs(cl - cr));
                }
            }
        }
    }
    double dt = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "max |C_left-C_brute| = %.2e, max |C_left-C_right| = %.2e, %.0f s",
                  worst_lb, worst_lr, dt);
    report(1, "oracle equivalence across the model zoo",
           worst_lb < 1e-9 && worst_lr < 1e-9 && dt < 300, buf);
}

void criterion2() {
    bool ok = true;
    double worst = 0;
    for (int q : {2, 3}) {
        for (int w = 1; w <= 8; ++w) {
            // exact spectrum through the triangular ordering; verify that the
            // ordering really triangularizes the matrix before trusting it
            Matrix t = averaged_llg(q, w);
            auto order = averaged_llg_triangular_order(w);
            for (std::size_t m = 0; m < order.size(); ++m)
                for (std::size_t n = 0; n < m; ++n)
                    if (std::abs(t(order[m], order[n])) > 0) ok = false;
            auto vals = averaged_llg_diagonal_spectrum(q, w);
            std::map<int, std::int64_t> mult;
            for (double v : vals) {
                bool matched = false;
                for (int n = 0; n <= w; ++n) {
                    double diff = std::abs(v - hrm_epsilon(q, n));
                    if (diff < 1e-10) {
                        mult[n] += 1;
                        matched = true;
                        worst = std::max(worst, diff);
                        break;
                    }
                }
                if (!matched) ok = false;
            }
            auto expect = hrm_eigenvalues(q, w);
            for (int n = 0; n < w; ++n)
                if (mult[n] != expect[std::size_t(n)].multiplicity) ok = false;
        }
    }
    char buf[100];
    std::snprintf(buf, sizeof buf, "max eigenvalue deviation %.1e", worst);
    report(2, "averaged-HRM exact spectrum, w <= 8, q in {2,3}", ok, buf);
}

void criterion3() {
    auto t0 = std::chrono::steady_clock::now();
    double worst = 0;
    for (Model m : {Model::ThreePM, Model::HRM}) {
        GateEnsembleSpec spec = make_spec(m, 2, 7);
        Complex z1 = subleading_eigenvalue(spec, 1);
        for (int w : {2, 3}) {
            Complex zw = subleading_eigenvalue(spec, w);
            double diff =
                std::min(std::abs(zw - z1), std::abs(zw - std::conj(z1)));
            worst = std::max(worst, diff);
        }
    }
    double dt = seconds_since(t0);
    char buf[100];
    std::snprintf(buf, sizeof buf, "max |z2(w)-z2(1)| = %.2e, %.0f s", worst, dt);
    report(3, "z2 universality for 3PM and an HRM realization",
           worst < 1e-4 && dt < 600, buf);
}

void criterion4() {
    bool ok = true;
    std::string detail;
    for (int w : {3, 4}) {
        ReducedHrm red(2, w);
        std::vector<double> taus, cabs;
        for (int tau = 1; tau <= 260; ++tau) {
            Complex c = red.otoc(tau);
            if (std::abs(c) < 1e-250) break;
            taus.push_back(tau);
            cabs.push_back(std::abs(c));
        }
        TailFit fit = tail_fit(taus, cabs);
        char buf[120];
        std::snprintf(buf, sizeof buf, "avgHRM w=%d: phi=%.3f z2=%.4f; ", w,
                      fit.phi, fit.z2_fit);
        detail += buf;
        if (std::abs(fit.phi - (w - 1)) > 0.3) ok = false;
        if (std::abs(fit.z2_fit - 0.8) > 0.02) ok = false;
    }
    {
        GateEnsembleSpec spec = make_spec(Model::XYZc, 2, 1);
        OtocSeries s = otoc_llg_left(spec, 3, 320);
        std::vector<double> taus, cabs;
        for (const auto& p : s.points) {
            if (std::abs(p.value) < 1e-250) break;
            taus.push_back(p.tau);
            cabs.push_back(std::abs(p.value));
        }
        TailFit fit = tail_fit(taus, cabs);
        char buf[80];
        std::snprintf(buf, sizeof buf, "XYZc w=3: phi=%.3f", fit.phi);
        detail += buf;
        if (std::abs(fit.phi - 4.0) > 0.5) ok = false;
    }
    report(4, "tail exponents phi = w-1 (avg HRM), 2(w-1) (XYZc)", ok, detail);
}

void criterion5() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    double worst_du = 0, worst_loc = 0;
    GateEnsembleSpec du = make_spec(Model::DU, 2, 3);
    for (int w = 1; w <= 4; ++w) {
        for (int tau : {1, 3, 6}) {
            SingularTriplet tri =
                leading_singular_triplet(make_op(du, w, OpMode::F), tau, 1e-11, 600);
            double rel = std::abs(tri.lambda / std::pow(2.0, w) - 1.0);
            worst_du = std::max(worst_du, rel);
            if (rel > 1e-6) ok = false;
        }
    }
    GateEnsembleSpec loc = make_spec(Model::Localized, 2, 9);
    for (int w = 2; w <= 4; ++w) {
        for (int tau = 1; tau <= std::min(6, w + 1); ++tau) {
            SingularTriplet tri =
                leading_singular_triplet(make_op(loc, w, OpMode::F), tau, 1e-11, 600);
            if (tau < w) {
                double err = std::abs(tri.lambda - std::pow(2.0, w));
                worst_loc = std::max(worst_loc, err);
                if (err / std::pow(2.0, w) > 1e-6) ok = false;
            } else {
                worst_loc = std::max(worst_loc, tri.lambda);
                if (tri.lambda > 1e-9) ok = false;
            }
        }
    }
    char buf[140];
    std::snprintf(buf, sizeof buf,
                  "DU max rel err %.1e; localized max err %.1e; %.0f s", worst_du,
                  worst_loc, seconds_since(t0));
    report(5, "DU and localized closed forms vs power iteration", ok, buf);
}

void criterion6() {
    int q = 2, w = 30;
    bool ok = true;
    double worst = 0;
    for (double ratio : {3.0, 3.5, 4.0, 4.5, 5.0}) {
        int tau = int(std::lround(ratio * w));
        double exact = hrm_leading_sv_exact(q, w, tau);
        double approx = std::pow(2.0, w) * f_tau(double(w) / tau, tau, q);
        double rel = std::abs(exact / approx - 1.0);
        worst = std::max(worst, rel);
        if (rel > 0.10) ok = false;
    }
    // ridge: half-height crossing of lambda / q^w as a function of tau/w
    double crossing = 0;
    for (int tau = w; tau <= 8 * w; ++tau) {
        double val = hrm_leading_sv_exact(q, w, tau) / std::pow(2.0, w);
        if (val < 0.5) {
            crossing = double(tau) / w;
            break;
        }
    }
    bool ridge_ok = std::abs(crossing - 4.0) <= 0.4;
    char buf[120];
    std::snprintf(buf, sizeof buf, "max rel dev %.3f, ridge at tau/w = %.2f",
                  worst, crossing);
    report(6, "butterfly-cone approximation at w = 30", ok && ridge_ok, buf);
}

void criterion7() {
    ReducedHrm red(2, 4);
    bool ok = true;
    double worst = 0;
    for (int tau = 12; tau <= 28; tau += 4) {
        Complex exact = red.otoc(tau);
        Complex approx = red.lsva(tau);
        double rel = std::abs(exact - approx) / std::abs(exact);
        worst = std::max(worst, rel);
        if (rel > 0.05) ok = false;
    }
    auto vp = red.variational(24);
    char buf[120];
    std::snprintf(buf, sizeof buf, "max LSVA rel err %.3f, VP overlap %.4f",
                  worst, vp.overlap_vs_exact);
    report(7, "LSVA accuracy and variational overlap (avg HRM, w = 4)",
           ok && vp.overlap_vs_exact > 0.99, buf);
}

void criterion8() {
    auto t0 = std::chrono::steady_clock::now();
    const int sites = 12;
    // pooled momentum-sector spacings for five 3PM realizations
    std::vector<double> pooled;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        GateEnsembleSpec spec = make_spec(Model::ThreePM, 2, seed);
        Matrix f = build_floquet(spec, sites);
        SectorOptions opt;
        opt.momentum = 1;
        FloquetSpectrum sp = sector_spacings(f, 2, sites, opt);
        pooled.insert(pooled.end(), sp.spacings.begin(), sp.spacings.end());
    }
    Rng rng(555);
    auto cue2 = sample_matrix_power_ensemble(CircularKind::CUE, 2, 400, 150, rng);
    double ks_cue2 = ks_distance(pooled, cue2);
    double ks_poisson = ks_distance_exponential(pooled);

    // XYZc: resolve Z2 and particle-hole, pool the free momentum sectors
    std::vector<double> xyzc_pool;
    {
        GateEnsembleSpec spec = make_spec(Model::XYZc, 2, 1);
        Matrix f = build_floquet(spec, sites);
        for (int momentum : {1, 2, 4, 5}) {
            SectorOptions opt;
            opt.momentum = momentum;
            opt.resolve_z2 = true;
            opt.resolve_ph = true;
            FloquetSpectrum sp = sector_spacings(f, 2, sites, opt);
            xyzc_pool.insert(xyzc_pool.end(), sp.spacings.begin(),
                             sp.spacings.end());
        }
    }
    double ks_xyzc = ks_distance_exponential(xyzc_pool);
    char buf[180];
    std::snprintf(buf, sizeof buf,
                  "3PM: KS(CUE^2)=%.3f (n=%zu), KS(Poisson)=%.3f; XYZc: "
                  "KS(Poisson)=%.3f (n=%zu); %.0f s",
                  ks_cue2, pooled.size(), ks_poisson, ks_xyzc, xyzc_pool.size(),
                  seconds_since(t0));
    report(8, "level statistics at L = 12",
           ks_cue2 < 0.08 && ks_poisson > 0.2 && ks_xyzc < 0.08, buf);
}

void criterion9() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string why;
    auto expect = [&](bool cond, const char* what) {
        if (!cond && why.size() < 120) {
            why += what;
            why += "; ";
        }
        ok = ok && cond;
    };

    // overlap table
    for (int q : {2, 3}) {
        Vector p0 = pair_state(0, q), p1 = pair_state(1, q);
        expect(std::abs(p0.dot(p0) - Complex(q, 0)) < 1e-12, "overlap00");
        expect(std::abs(p1.dot(p1) - Complex(q, 0)) < 1e-12, "overlap11");
        expect(std::abs(p0.dot(p1) - Complex(1, 0)) < 1e-12, "overlap01");
    }

    // Pauli identity sum_mu ||[s^mu, s^nu]||_F^2 = 2 q^3
    for (int q : {2, 3}) {
        for (int nu = 1; nu < q * q; ++nu) {
            Matrix b = generalized_pauli_mu(nu, q);
            double acc = 0;
            for (int mu = 1; mu < q * q; ++mu) {
                Matrix a = generalized_pauli_mu(mu, q);
                acc += (a * b - b * a).squaredNorm();
            }
            expect(std::abs(acc - 2.0 * q * q * q) < 1e-9, "pauli identity");
        }
    }

    std::vector<GateEnsembleSpec> zoo;
    for (Model m : {Model::XYZc, Model::HRM, Model::RPM, Model::ThreePM,
                    Model::Z2COE, Model::DU, Model::Localized})
        zoo.push_back(make_spec(m, 2, 13));
    for (Model m : {Model::HRM, Model::RPM, Model::Localized})
        zoo.push_back(make_spec(m, 3, 13));

    Rng rng(808);
    for (const auto& spec : zoo) {
        const int q = spec.q;
        for (int w = 1; w <= 3; ++w) {
            LLGOperator top = make_op(spec, w, OpMode::T);
            Vector zeros = pair_product_state(pair_state(0, q), w);
            Vector ones = pair_product_state(pair_state(1, q), w);
            expect((top.apply_at(1, zeros) - zeros).norm() < 1e-10, "fixpt 0");
            expect((top.apply_adjoint_at(1, ones) - ones).norm() < 1e-10,
                   "fixpt 1");

            // adjointness on random pairs
            int pairs = (q == 3 && w == 3) ? 2 : 3;
            for (int k = 0; k < pairs; ++k) {
                Vector u(top.dim()), v(top.dim());
                for (std::int64_t i = 0; i < u.size(); ++i) {
                    u(i) = rng.next_complex_normal();
                    v(i) = rng.next_complex_normal();
                }
                u.normalize();
                v.normalize();
                Complex a = top.apply_at(1, u).dot(v);
                Complex b = u.dot(top.apply_adjoint_at(1, v));
                expect(std::abs(a - b) < 1e-12, "adjointness");
            }
        }

        // norm bound: 100 random vectors per (q, w) cell; at q = 3, w = 3 the
        // vectors are spread across the zoo models to keep the suite's
        // runtime sane (each apply walks a 3^16-element working array)
        for (int w = 1; w <= 3; ++w) {
            LLGOperator top = make_op(spec, w, OpMode::T);
            int vectors = (q == 3 && w == 3) ? 34 : 100;
            for (int k = 0; k < vectors; ++k) {
                Vector v(top.dim());
                for (std::int64_t i = 0; i < v.size(); ++i)
                    v(i) = rng.next_complex_normal();
                v.normalize();
                expect(top.apply_at(1, v).norm() <= q + 1e-9, "norm bound");
            }
        }

        // reducibility residuals
        {
            LLGOperator fop = make_op(spec, 3, OpMode::F);
            for (int m : {1, 2}) {
                for (int k = 0; k < (q == 2 ? 2 : 1); ++k) {
                    Vector psi(ipow(q, 4 * (3 - m)));
                    for (std::int64_t i = 0; i < psi.size(); ++i)
                        psi(i) = rng.next_complex_normal();
                    psi.normalize();
                    ReduceResiduals r = reduce_check(fop, m, psi);
                    expect(r.ket_side < 1e-10, "reduce ket");
                    expect(r.bra_side < 1e-10, "reduce bra");
                }
            }
        }

        // eigenvalue moduli <= 1 in dense mode (within the size guard)
        for (int w = 1; w <= 3; ++w) {
            LLGOperator top = make_op(spec, w, OpMode::T);
            if (top.dim() > 4096) continue;
            Matrix t = top.dense();
            Eigen::ComplexEigenSolver<Matrix> es(t, false);
            for (int i = 0; i < es.eigenvalues().size(); ++i)
                expect(std::abs(es.eigenvalues()(i)) <= 1 + 1e-9, "eig moduli");
        }
    }
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s%.0f s", why.c_str(), seconds_since(t0));
    report(9, "property suite at q in {2,3}, w <= 3", ok, buf);
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    if (failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criterion(s) FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
