// Optional long-running checks (ctest label "long", disabled by default):
//  - F-norm plateau at w = 5
//  - 3PM w = 5 tail exponent
//  - 3PM w = 5 variational ansatz vs exact OTOC in the tail

#include "llg/otoc.hpp"
#include "llg/spectral.hpp"

#include <cstdio>

using namespace llg;

int main() {
    int failures = 0;
    auto check = [&](bool ok, const char* what, const std::string& detail) {
        std::printf("[%s] %s -- %s\n", ok ? "PASS" : "FAIL", what, detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    };

    GateEnsembleSpec spec;
    spec.model = Model::ThreePM;
    spec.q = 2;
    spec.seed = 7;

    {
        // plateau: leading singular value of F_5^tau within a factor 2 of q^5
        LLGOperator fop;
        fop.mode = OpMode::F;
        fop.q = 2;
        fop.w = 5;
        fop.spec = spec;
        std::string detail;
        bool ok = true;
        for (int tau : {1, 2, 4}) {
            SingularTriplet tri = leading_singular_triplet(fop, tau, 1e-4, 40);
            char buf[64];
            std::snprintf(buf, sizeof buf, "tau=%d: %.1f ", tau, tri.lambda);
            detail += buf;
            if (!(tri.lambda >= 16.0 && tri.lambda <= 64.0)) ok = false;
        }
        check(ok, "F-plateau ||F_5^tau|| within factor 2 of q^5 = 32", detail);
    }

    {
        OtocSeries s = otoc_llg_left(spec, 5, 60);
        std::vector<double> taus, cabs;
        for (const auto& p : s.points) {
            if (std::abs(p.value) < 1e-250) break;
            taus.push_back(p.tau);
            cabs.push_back(std::abs(p.value));
        }
        TailFit fit = tail_fit(taus, cabs);
        char buf[100];
        std::snprintf(buf, sizeof buf, "phi = %.3f (target 4 +- 0.5), rms %.3f",
                      fit.phi, fit.rms);
        check(std::abs(fit.phi - 4.0) <= 0.5, "3PM w=5 tail exponent", buf);

        VariationalResult vp = variational_lsva(spec, 5, 40, 100);
        Complex exact = s.points[39].value;
        double rel = std::abs(vp.value - exact) / std::abs(exact);
        std::snprintf(buf, sizeof buf, "rel err %.3f, overlap %.4f", rel,
                      vp.overlap_vs_exact);
        check(rel < 0.1, "3PM w=5 variational ansatz tracks the exact OTOC", buf);
    }

    std::printf(failures ? "long checks: %d FAILED\n" : "long checks: all passed\n",
                failures);
    return failures == 0 ? 0 : 1;
}
