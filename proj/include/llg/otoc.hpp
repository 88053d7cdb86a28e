#pragma once

#include "llg/llg_op.hpp"

#include <optional>
#include <string>
#include <vector>

namespace llg {

struct light_cone_clipped : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shifted light-cone coordinates: w = (t+x)/2 + 1, tau = (t-x)/2.
inline int coord_x(int w, int tau) { return w - tau - 1; }
inline int coord_t(int w, int tau) { return w + tau - 1; }

// Probe placement for the brute-force chain.  Layer s acts on bonds
// i in 2Z + s mod 2; the diamond of gates behind C(w,tau) then requires the
// lower probe on an odd site, and placing the upper probe at t+1 keeps both
// light cones inside a chain of length 2t+2.
inline int brute_top_site(int t) { return t + 1; }
inline int brute_bottom_site(int x, int t) { return t + 1 + x; }

struct OtocPoint {
    int w, tau, x, t;
    Complex value;
    std::string method;
};

struct OtocSeries {
    GateEnsembleSpec spec;
    std::string probe_label;
    std::vector<OtocPoint> points;
};

// Heisenberg-picture oracle: sigma(0,t) = U^dag sigma U evolved with explicit
// brick-wall layers on a finite chain, support-tracked so sites never touched
// by the light cone are exact identities.
//   C~(x,t) = 1 - tr[A^dag B^dag A B] / q^|supp|,  A = evolved top probe.
Complex otoc_bruteforce(const GateEnsembleSpec& spec, int x, int t,
                        int chain_len = -1);
Complex otoc_bruteforce(const GateEnsembleSpec& spec, int x, int t,
                        const Matrix& probe_bottom, const Matrix& probe_top,
                        int chain_len);

// C(w,tau) = 1 - <L_w|T_L^tau|R_w> for tau = 1..tau_max, with the
// F-route identity  <L|T^tau|R> - <L|F^tau|R> = 1 checked on every point.
OtocSeries otoc_llg_left(const GateEnsembleSpec& spec, int w, int tau_max,
                         std::optional<Matrix> probe = std::nullopt);

// Right-moving evaluation 1 - (L~_tau| T_R^{w-2} |R~_tau), w >= 2.
Complex otoc_llg_right(const GateEnsembleSpec& spec, int w, int tau,
                       std::optional<Matrix> probe = std::nullopt);

struct LsvaResult {
    double lambda;                 // leading singular value of F^tau
    Complex value;                 // -lambda <L|lam_L><lam_R|R>
    Complex exact;                 // -<L|F^tau|R> for reference
    bool converged;
    int iterations;
};
LsvaResult lsva(const GateEnsembleSpec& spec, int w, int tau,
                double tol = 1e-10, int max_iter = 300);

// Right-moving LSVA: the top singular triplet of F_R^{w-2} against the
// boundary pair (L~_tau|, |R~_tau); dominates the early-tau region.  w >= 3.
LsvaResult lsva_right(const GateEnsembleSpec& spec, int w, int tau,
                      double tol = 1e-10, int max_iter = 300);

struct VariationalResult {
    double lambda;
    Complex value;
    double overlap_vs_exact; // |<lamL_VP|lamL><lamR|lamR_VP>|, when computed
    bool converged;
    int sweeps;
};
VariationalResult variational_lsva(const GateEnsembleSpec& spec, int w, int tau,
                                   int max_sweeps = 200,
                                   bool compare_exact = true);

struct ButterflyGrid {
    std::vector<int> ws, taus;
    std::vector<double> c;      // |C|
    std::vector<double> c_lsva; // |C_LSVA|
    std::vector<double> err;    // |C - C_LSVA|
    double at(const std::vector<double>& g, int wi, int ti) const {
        return g[wi * taus.size() + ti];
    }
};
ButterflyGrid butterfly_scan(const GateEnsembleSpec& spec, int w_max, int tau_max);

void write_otoc_csv(const OtocSeries& s, const std::string& path,
                    const std::string& provenance);

} // namespace llg
