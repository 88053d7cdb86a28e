// Command-line driver: OTOC scans, singular-value approximations, spectra,
// tail fits, averaged-Haar oracles, special-case closed forms, level
// statistics, and the invariant verification suite.

#include "llg/analytic.hpp"
#include "llg/levelstats.hpp"
#include "llg/otoc.hpp"
#include "llg/spectral.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace llg;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitGuard = 4;

struct CommonOpts {
    std::string model = "hrm";
    int q = 2;
    std::uint64_t seed = 1;
    std::string arrangement = "invariant";
    double ax = 0.3, ay = 0.4, az = 0.5;
    double eps = 1.0;
    std::string out_dir = "out";
    int threads = 1;
};

GateEnsembleSpec to_spec(const CommonOpts& c) {
    GateEnsembleSpec s;
    s.model = model_from_name(c.model);
    s.q = c.q;
    s.seed = c.seed;
    s.ax = c.ax;
    s.ay = c.ay;
    s.az = c.az;
    s.eps = c.eps;
    s.arrangement = c.arrangement == "random"
                        ? Arrangement::SpatialTemporalRandom
                        : Arrangement::Invariant;
    s.validate();
    return s;
}

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--model", c.model,
                    "xyzc|hrm|rpm|3pm|z2coe|du|localized");
    cmd->add_option("--q", c.q, "local dimension");
    cmd->add_option("--seed", c.seed, "ensemble seed");
    cmd->add_option("--arrangement", c.arrangement, "invariant|random");
    cmd->add_option("--ax", c.ax);
    cmd->add_option("--ay", c.ay);
    cmd->add_option("--az", c.az);
    cmd->add_option("--eps", c.eps, "RPM phase variance");
    cmd->add_option("--out-dir", c.out_dir, "output directory");
    cmd->add_option("--threads", c.threads,
                    "worker threads inside operator applications; 1 = "
                    "bit-reproducible");
}

std::filesystem::path prepare_out(const CommonOpts& c) {
    std::string dir = c.out_dir;
    if (const char* env = std::getenv("LLG_OUT_DIR")) dir = env;
    std::filesystem::path p(dir);
    std::filesystem::create_directories(p);
    // operator-internal threading is keyed off this variable
    setenv("LLG_THREADS", std::to_string(c.threads).c_str(), 1);
    return p;
}

std::uint64_t config_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string provenance(const GateEnsembleSpec& spec, const std::string& extra) {
    std::string cfg = spec.to_config() + extra;
    char buf[64];
    std::snprintf(buf, sizeof buf, "config_hash=%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    return std::string(buf) + " git_describe=unversioned";
}

void write_gnuplot(const std::filesystem::path& path, const std::string& body) {
    std::ofstream os(path);
    os << "# gnuplot script\nset datafile separator ','\n" << body;
}

int run_otoc(const CommonOpts& c, int w_max, int tau_max, int ensemble,
             bool with_brute) {
    GateEnsembleSpec spec = to_spec(c);
    auto out = prepare_out(c);
    if (ipow(spec.q, 4 * w_max) > (std::int64_t(1) << 26)) {
        std::cerr << "resource guard: q^(4 w_max) too large\n";
        return kExitGuard;
    }
    std::ofstream os(out / "otoc.csv");
    os << "# " << provenance(spec, "otoc") << "\n";
    os << "model,seed,q,w,tau,x,t,method,C_re,C_im,err_abs\n";
    for (int w = 1; w <= w_max; ++w) {
        // ensemble mean with standard error over seeds (random arrangements)
        std::vector<std::vector<Complex>> samples;
        int reps = spec.arrangement == Arrangement::SpatialTemporalRandom
                       ? std::max(1, ensemble)
                       : 1;
        for (int r = 0; r < reps; ++r) {
            GateEnsembleSpec s = spec;
            s.seed = spec.seed + std::uint64_t(r);
            samples.push_back({});
            OtocSeries left = otoc_llg_left(s, w, tau_max);
            for (const auto& p : left.points) samples.back().push_back(p.value);
        }
        for (int tau = 1; tau <= tau_max; ++tau) {
            Complex mean = 0;
            for (const auto& s : samples) mean += s[std::size_t(tau - 1)];
            mean /= double(samples.size());
            double var = 0;
            for (const auto& s : samples)
                var += std::norm(s[std::size_t(tau - 1)] - mean);
            double se = samples.size() > 1
                            ? std::sqrt(var / (double(samples.size()) *
                                               (samples.size() - 1.0)))
                            : 0.0;
            os << model_name(spec.model) << "," << spec.seed << "," << spec.q
               << "," << w << "," << tau << "," << coord_x(w, tau) << ","
               << coord_t(w, tau) << ",llg_left," << mean.real() << ","
               << mean.imag() << "," << se << "\n";
            if (w >= 2 && spec.arrangement == Arrangement::Invariant) {
                Complex cr = otoc_llg_right(spec, w, tau);
                os << model_name(spec.model) << "," << spec.seed << "," << spec.q
                   << "," << w << "," << tau << "," << coord_x(w, tau) << ","
                   << coord_t(w, tau) << ",llg_right," << cr.real() << ","
                   << cr.imag() << ",0\n";
            }
            if (with_brute && coord_t(w, tau) <= 6) {
                Complex cb =
                    otoc_bruteforce(spec, coord_x(w, tau), coord_t(w, tau));
                os << model_name(spec.model) << "," << spec.seed << "," << spec.q
                   << "," << w << "," << tau << "," << coord_x(w, tau) << ","
                   << coord_t(w, tau) << ",brute," << cb.real() << ","
                   << cb.imag() << ",0\n";
            }
        }
    }
    write_gnuplot(out / "otoc.gp",
                  "set logscale y\nset xlabel 'tau'\nset ylabel '|C|'\n"
                  "plot 'otoc.csv' every ::1 using 5:(abs($9)) with linespoints "
                  "title 'OTOC'\n");
    std::cout << "wrote " << (out / "otoc.csv").string() << "\n";
    return 0;
}

int run_lsva(const CommonOpts& c, int w, int tau_max) {
    GateEnsembleSpec spec = to_spec(c);
    auto out = prepare_out(c);
    std::ofstream os(out / "lsva.csv");
    os << "# " << provenance(spec, "lsva") << "\n";
    os << "w,tau,C_exact_re,C_lsva_re,lambda,converged,C_lsva_right_re,"
          "lambda_right\n";
    bool all_converged = true;
    for (int tau = 1; tau <= tau_max; ++tau) {
        LsvaResult r = lsva(spec, w, tau);
        all_converged = all_converged && r.converged;
        os << w << "," << tau << "," << r.exact.real() << "," << r.value.real()
           << "," << r.lambda << "," << (r.converged ? 1 : 0);
        if (w >= 3 && tau <= w) { // right-mover dominates the early region
            LsvaResult rr = lsva_right(spec, w, tau);
            os << "," << rr.value.real() << "," << rr.lambda << "\n";
        } else {
            os << ",nan,nan\n";
        }
    }
    write_gnuplot(out / "lsva.gp",
                  "set logscale y\nset xlabel 'tau'\n"
                  "plot 'lsva.csv' every ::1 using 2:(abs($3)) w lp title "
                  "'exact', '' every ::1 using 2:(abs($4)) w lp title 'LSVA'\n");
    std::cout << "wrote " << (out / "lsva.csv").string() << "\n";
    return all_converged ? 0 : kExitNumerical;
}

int run_variational(const CommonOpts& c, int w, int tau_max) {
    GateEnsembleSpec spec = to_spec(c);
    auto out = prepare_out(c);
    std::ofstream os(out / "variational.csv");
    os << "# " << provenance(spec, "variational") << "\n";
    os << "w,tau,C_vp_re,lambda_vp,overlap,sweeps\n";
    bool ok = true;
    for (int tau = 2; tau <= tau_max; ++tau) {
        VariationalResult r = variational_lsva(spec, w, tau);
        ok = ok && r.converged;
        os << w << "," << tau << "," << r.value.real() << "," << r.lambda << ","
           << r.overlap_vs_exact << "," << r.sweeps << "\n";
    }
    std::cout << "wrote " << (out / "variational.csv").string() << "\n";
    return ok ? 0 : kExitNumerical;
}

int run_spectrum(const CommonOpts& c, int w, double delta) {
    GateEnsembleSpec spec = to_spec(c);
    auto out = prepare_out(c);
    LLGOperator op;
    op.q = spec.q;
    op.w = w;
    op.spec = spec;
    if (op.dim() > 4096) {
        std::cerr << "resource guard: dense spectrum needs q^(4w) <= 4096\n";
        return kExitGuard;
    }
    SpectrumReport rep = eigen_spectrum(op, delta);
    json j;
    j["z2"] = {rep.z2.real(), rep.z2.imag()};
    j["alpha"] = rep.alpha;
    j["eigenvalues"] = json::array();
    for (auto z : rep.eigenvalues)
        j["eigenvalues"].push_back({z.real(), z.imag()});
    j["clusters"] = json::array();
    for (const auto& cl : rep.clusters)
        j["clusters"].push_back({{"re", cl.representative.real()},
                                 {"im", cl.representative.imag()},
                                 {"multiplicity", cl.multiplicity}});
    std::ofstream(out / "spectrum.json") << j.dump(2) << "\n";
    std::ofstream csv(out / "spectrum.csv");
    csv << "# " << provenance(spec, "spectrum") << "\n";
    csv << "re,im\n";
    for (auto z : rep.eigenvalues) csv << z.real() << "," << z.imag() << "\n";
    write_gnuplot(out / "spectrum.gp",
                  "set size square\nset xlabel 'Re z'\nset ylabel 'Im z'\n"
                  "plot 'spectrum.csv' every ::1 using 1:2 with points pt 7 "
                  "title 'spectrum', cos(t),sin(t) with lines title 'unit "
                  "circle'\nset parametric\n");
    std::cout << "wrote " << (out / "spectrum.json").string() << "\n";
    return 0;
}

int run_tailfit(const CommonOpts& c, int w, int tau_max, int window_start) {
    GateEnsembleSpec spec = to_spec(c);
    auto out = prepare_out(c);
    std::vector<double> taus, cabs;
    std::ofstream os(out / "tailfit.csv");
    os << "# " << provenance(spec, "tailfit") << "\n";
    os << "tau,C_abs\n";
    OtocSeries s = otoc_llg_left(spec, w, tau_max);
    for (const auto& p : s.points) {
        if (std::abs(p.value) < 1e-250) break;
        taus.push_back(p.tau);
        cabs.push_back(std::abs(p.value));
        os << p.tau << "," << std::abs(p.value) << "\n";
    }
    try {
        TailFit fit = tail_fit(taus, cabs);
        json j;
        j["phi"] = fit.phi;
        j["z2_fit"] = fit.z2_fit;
        j["window_start_tau"] = taus[std::size_t(fit.window_start)];
        j["points_used"] = fit.points_used;
        j["rms"] = fit.rms;
        j["window_ok"] = fit.window_ok;
        // sensitivity: fits over a few forced windows
        j["window_sensitivity"] = json::array();
        for (int s0 : {window_start, fit.window_start + 4, fit.window_start + 8}) {
            if (s0 < 0 || s0 + 8 > int(taus.size())) continue;
            std::vector<double> t2(taus.begin() + s0, taus.end());
            std::vector<double> c2(cabs.begin() + s0, cabs.end());
            TailFit f2 = tail_fit(t2, c2, 1e9); // accept any suffix
            j["window_sensitivity"].push_back(
                {{"start_tau", t2.front()}, {"phi", f2.phi}, {"z2", f2.z2_fit}});
        }
        std::ofstream(out / "tailfit.json") << j.dump(2) << "\n";
        std::cout << "phi = " << fit.phi << ", z2 = " << fit.z2_fit << "\n";
    } catch (const insufficient_tail& e) {
        std::cerr << "tail fit failed: " << e.what() << "\n";
        return kExitNumerical;
    }
    write_gnuplot(out / "tailfit.gp",
                  "set logscale y\nset xlabel 'tau'\nset ylabel '|C|'\n"
                  "plot 'tailfit.csv' every ::1 using 1:2 w lp title 'OTOC'\n");
    return 0;
}

int run_avg_hrm(const CommonOpts& c, int w, int tau_max) {
    auto out = prepare_out(c);
    int q = c.q;
    std::ofstream os(out / "avg_hrm.csv");
    os << "# averaged Haar lattice, w = " << w << "\n";
    os << "tau,lambda_exact,qw_f_tau,otoc_abs\n";
    ReducedHrm* red = w <= 20 ? new ReducedHrm(q, std::min(w, 12)) : nullptr;
    for (int tau = 1; tau <= tau_max; ++tau) {
        double lam = hrm_leading_sv_exact(q, w, tau);
        double f = std::pow(double(q), w) * f_tau(double(w) / tau, tau, q);
        os << tau << "," << lam << "," << f;
        if (red && tau <= 200)
            os << "," << std::abs(red->otoc(tau));
        else
            os << ",nan";
        os << "\n";
    }
    delete red;
    write_gnuplot(out / "avg_hrm.gp",
                  "set logscale y\nset xlabel 'tau'\n"
                  "plot 'avg_hrm.csv' every ::2 using 1:2 w l title 'exact', "
                  "'' every ::2 using 1:3 w l title 'q^w f_tau'\n");
    std::cout << "wrote " << (out / "avg_hrm.csv").string() << "\n";
    return 0;
}

int run_special(const CommonOpts& c, int w_max, int tau_max) {
    auto out = prepare_out(c);
    std::ofstream os(out / "special.csv");
    os << "model,w,tau,closed_form,power_iteration\n";
    bool ok = true;
    for (int w = 1; w <= w_max; ++w) {
        for (int tau = 1; tau <= tau_max; ++tau) {
            GateEnsembleSpec du;
            du.model = Model::DU;
            du.seed = c.seed;
            LLGOperator fop;
            fop.mode = OpMode::F;
            fop.q = 2;
            fop.w = w;
            fop.spec = du;
            SingularTriplet tri = leading_singular_triplet(fop, tau, 1e-10, 500);
            ok = ok && tri.converged;
            os << "du," << w << "," << tau << "," << du_closed_form(2, w, tau).norm_f
               << "," << tri.lambda << "\n";

            GateEnsembleSpec loc;
            loc.model = Model::Localized;
            loc.seed = c.seed;
            fop.spec = loc;
            SingularTriplet trl = leading_singular_triplet(fop, tau, 1e-10, 500);
            os << "localized," << w << "," << tau << ","
               << localized_closed_form(2, w, tau).norm_f << "," << trl.lambda
               << "\n";
        }
    }
    std::cout << "wrote " << (out / "special.csv").string() << "\n";
    return ok ? 0 : kExitNumerical;
}

int run_levelstats(const CommonOpts& c, int sites, int n_seeds, int momentum,
                   int ref_dim, int ref_count) {
    GateEnsembleSpec spec = to_spec(c);
    auto out = prepare_out(c);
    if (ipow(spec.q, sites) > (1 << 14)) {
        std::cerr << "resource guard: q^L <= 2^14\n";
        return kExitGuard;
    }
    std::vector<double> pooled;
    bool integrable = spec.model == Model::XYZc;
    for (int k = 0; k < n_seeds; ++k) {
        GateEnsembleSpec s = spec;
        s.seed = spec.seed + std::uint64_t(k);
        Matrix f = build_floquet(s, sites);
        SectorOptions opt;
        opt.momentum = momentum;
        opt.resolve_z2 = integrable || spec.model == Model::Z2COE;
        opt.resolve_ph = integrable;
        try {
            FloquetSpectrum sp = sector_spacings(f, spec.q, sites, opt);
            pooled.insert(pooled.end(), sp.spacings.begin(), sp.spacings.end());
        } catch (const not_symmetric& e) {
            std::cerr << "sector projection failed: " << e.what() << "\n";
            return kExitNumerical;
        }
    }
    Rng rng(c.seed ^ 0xabcdefull);
    CircularKind kind = (spec.model == Model::Z2COE || spec.model == Model::XYZc)
                            ? CircularKind::COE
                            : CircularKind::CUE;
    auto ref = sample_matrix_power_ensemble(kind, 2, ref_dim, ref_count, rng);
    json j;
    j["n_spacings"] = pooled.size();
    j["ks_vs_power2_reference"] = ks_distance(pooled, ref);
    j["ks_vs_poisson"] = ks_distance_exponential(pooled);
    std::ofstream(out / "levelstats.json") << j.dump(2) << "\n";

    Histogram h = spacing_histogram(pooled);
    std::ofstream os(out / "levelstats.csv");
    os << "# " << provenance(spec, "levelstats") << "\n";
    os << "bin_left,bin_right,density\n";
    for (std::size_t b = 0; b < h.density.size(); ++b)
        os << h.bin_left[b] << "," << h.bin_right[b] << "," << h.density[b]
           << "\n";
    write_gnuplot(out / "levelstats.gp",
                  "set xlabel 's'\nset ylabel 'P(s)'\n"
                  "plot 'levelstats.csv' every ::1 using "
                  "(0.5*($1+$2)):3 with boxes title 'P(s)', exp(-x) title "
                  "'Poisson'\n");
    std::cout << "wrote " << (out / "levelstats.json").string() << "\n";
    return 0;
}

int run_verify(const CommonOpts& c, int w_max) {
    GateEnsembleSpec spec = to_spec(c);
    prepare_out(c);
    int bad = 0;
    auto check = [&](bool ok, const std::string& what) {
        std::cout << (ok ? "[ok]   " : "[FAIL] ") << what << "\n";
        if (!ok) ++bad;
    };
    for (int w = 1; w <= w_max; ++w) {
        OtocSeries left = otoc_llg_left(spec, w, std::min(3, w_max));
        for (int tau = 1; tau <= int(left.points.size()); ++tau) {
            Complex cl = left.points[std::size_t(tau - 1)].value;
            Complex cb = otoc_bruteforce(spec, coord_x(w, tau), coord_t(w, tau));
            check(std::abs(cl - cb) < 1e-9,
                  "triple equality w=" + std::to_string(w) +
                      " tau=" + std::to_string(tau));
            if (w >= 2)
                check(std::abs(cl - otoc_llg_right(spec, w, tau)) < 1e-9,
                      "left = right w=" + std::to_string(w) +
                          " tau=" + std::to_string(tau));
        }
        LLGOperator op;
        op.q = spec.q;
        op.w = w;
        op.spec = spec;
        Vector zeros = pair_product_state(pair_state(0, spec.q), w);
        Vector ones = pair_product_state(pair_state(1, spec.q), w);
        check((op.apply_at(1, zeros) - zeros).norm() < 1e-10,
              "T|0^w> fixed point, w=" + std::to_string(w));
        check((op.apply_adjoint_at(1, ones) - ones).norm() < 1e-10,
              "<1^w|T fixed point, w=" + std::to_string(w));
        Rng rng(4242);
        for (int k = 0; k < 20; ++k) {
            Vector v(op.dim());
            for (std::int64_t i = 0; i < v.size(); ++i)
                v(i) = rng.next_complex_normal();
            v.normalize();
            if (op.apply_at(1, v).norm() > spec.q + 1e-9) {
                check(false, "norm bound");
                break;
            }
        }
        if (w >= 2) {
            LLGOperator fop = op;
            fop.mode = OpMode::F;
            Vector psi(ipow(spec.q, 4 * (w - 1)));
            Rng r2(99);
            for (std::int64_t i = 0; i < psi.size(); ++i)
                psi(i) = r2.next_complex_normal();
            ReduceResiduals rr = reduce_check(fop, 1, psi.normalized());
            check(rr.ket_side < 1e-10 && rr.bra_side < 1e-10,
                  "reducibility, w=" + std::to_string(w));
        }
    }
    std::cout << (bad ? "verify: FAILURES\n" : "verify: all checks passed\n");
    return bad ? kExitNumerical : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"light-like generator toolkit for brick-wall circuit OTOCs"};
    app.set_config("--config", "", "flat key=value config file");
    app.require_subcommand(1);

    CommonOpts c;
    int w = 3, w_max = 3, tau_max = 8, ensemble = 1;
    int sites = 12, n_seeds = 5, momentum = 1, ref_dim = 400, ref_count = 150;
    int window_start = 0;
    double delta_cluster = 1e-7;
    bool with_brute = false;

    auto* otoc_cmd = app.add_subcommand("otoc", "OTOC grid scan");
    add_common(otoc_cmd, c);
    otoc_cmd->add_option("--w-max", w_max);
    otoc_cmd->add_option("--tau-max", tau_max);
    otoc_cmd->add_option("--ensemble", ensemble, "seeds for random circuits");
    otoc_cmd->add_flag("--brute", with_brute, "include brute-force values");

    auto* lsva_cmd = app.add_subcommand("lsva", "leading singular value approx");
    add_common(lsva_cmd, c);
    lsva_cmd->add_option("--w", w);
    lsva_cmd->add_option("--tau-max", tau_max);

    auto* var_cmd = app.add_subcommand("variational", "product-state ansatz");
    add_common(var_cmd, c);
    var_cmd->add_option("--w", w);
    var_cmd->add_option("--tau-max", tau_max);

    auto* spec_cmd = app.add_subcommand("spectrum", "dense LLG spectrum");
    add_common(spec_cmd, c);
    spec_cmd->add_option("--w", w);
    spec_cmd->add_option("--delta-cluster", delta_cluster);

    auto* tail_cmd = app.add_subcommand("tailfit", "large-tau decay fit");
    add_common(tail_cmd, c);
    tail_cmd->add_option("--w", w);
    tail_cmd->add_option("--tau-max", tau_max);
    tail_cmd->add_option("--fit-window-start", window_start);

    auto* avg_cmd = app.add_subcommand("avg-hrm", "averaged-Haar oracles");
    add_common(avg_cmd, c);
    avg_cmd->add_option("--w", w);
    avg_cmd->add_option("--tau-max", tau_max);

    auto* special_cmd =
        app.add_subcommand("special", "dual-unitary / localized closed forms");
    add_common(special_cmd, c);
    special_cmd->add_option("--w-max", w_max);
    special_cmd->add_option("--tau-max", tau_max);

    auto* level_cmd = app.add_subcommand("levelstats", "Floquet level spacing");
    add_common(level_cmd, c);
    level_cmd->add_option("--L", sites);
    level_cmd->add_option("--seeds", n_seeds);
    level_cmd->add_option("--momentum", momentum);
    level_cmd->add_option("--ref-dim", ref_dim);
    level_cmd->add_option("--ref-count", ref_count);

    auto* verify_cmd = app.add_subcommand("verify", "invariant suite");
    add_common(verify_cmd, c);
    verify_cmd->add_option("--w-max", w_max);

    CLI11_PARSE(app, argc, argv);

    try {
        if (otoc_cmd->parsed()) return run_otoc(c, w_max, tau_max, ensemble, with_brute);
        if (lsva_cmd->parsed()) return run_lsva(c, w, tau_max);
        if (var_cmd->parsed()) return run_variational(c, w, tau_max);
        if (spec_cmd->parsed()) return run_spectrum(c, w, delta_cluster);
        if (tail_cmd->parsed()) return run_tailfit(c, w, tau_max, window_start);
        if (avg_cmd->parsed()) return run_avg_hrm(c, w, tau_max);
        if (special_cmd->parsed()) return run_special(c, w_max, tau_max);
        if (level_cmd->parsed())
            return run_levelstats(c, sites, n_seeds, momentum, ref_dim, ref_count);
        if (verify_cmd->parsed()) return run_verify(c, w_max);
    } catch (const too_large_error& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return kExitGuard;
    } catch (const bad_params& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const wrong_q& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const no_convergence& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
