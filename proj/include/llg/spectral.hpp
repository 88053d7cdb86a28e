#pragma once

#include "llg/llg_op.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace llg {

struct no_convergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct insufficient_tail : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularTriplet {
    double lambda = 0;
    Vector left;  // unit vector, F^tau right = lambda * left
    Vector right; // unit vector
    int iterations = 0;
    bool converged = false;
    double residual = 0; // ||F^tau right - lambda left|| / lambda
};

// Power iteration on (F^tau)^dag (F^tau); tau forward applies at columns
// base..base+tau-1 and tau adjoint applies in reverse per step.  Start vector
// is the all-ones replica vector with seeded noise.
SingularTriplet leading_singular_triplet(const LLGOperator& op, int tau,
                                         double tol = 1e-10, int max_iter = 300,
                                         int column_base = 1,
                                         std::uint64_t seed = 11);

struct EigenCluster {
    Complex representative;
    int multiplicity;
};

struct SpectrumReport {
    std::vector<Complex> eigenvalues;
    std::vector<EigenCluster> clusters;
    Complex z2 = 0;     // subleading of T = leading of F
    double alpha = 0;   // log_q ||T_w||
    double phi = std::numeric_limits<double>::quiet_NaN();
    double z2_fit = std::numeric_limits<double>::quiet_NaN();
};

std::vector<EigenCluster> cluster_eigenvalues(std::vector<Complex> vals,
                                              double delta = 1e-7);

// Dense eigendecomposition of the LLG plus clustering; z2 from the F-route.
SpectrumReport eigen_spectrum(const LLGOperator& op, double delta_cluster = 1e-7,
                              std::int64_t max_dim = 4096);

// Largest-modulus eigenvalue of a matrix-free operator via restarted Arnoldi
// (modified Gram-Schmidt with one reorthogonalization pass).
Complex arnoldi_leading(const std::function<Vector(const Vector&)>& apply,
                        std::int64_t dim, int krylov = 60, int restarts = 20,
                        double tol = 1e-10, std::uint64_t seed = 13);

// z2(w): dense eigensolve of F_1 for w = 1, Arnoldi on matrix-free F_w else.
Complex subleading_eigenvalue(const GateEnsembleSpec& spec, int w,
                              int krylov = 60, double tol = 1e-10);

// a(z,w) - 2 a(z,w-1) + a(z,w-2) from clustered spectra.
struct RecursionRow {
    Complex z;
    int a_w, a_w1, a_w2;
    int a_tilde;
};
std::vector<RecursionRow> recursion_check(const std::vector<EigenCluster>& spec_w2,
                                          const std::vector<EigenCluster>& spec_w1,
                                          const std::vector<EigenCluster>& spec_w,
                                          double delta = 1e-6);

struct TailFit {
    double phi = 0;
    double z2_fit = 0;
    double constant = 0;
    int window_start = 0; // index into the input arrays
    int points_used = 0;
    double rms = 0;
    bool window_ok = false; // true when rms < resid_tol on the chosen suffix
};

// Least-squares fit of log|C| = phi*log(tau) + tau*log(z2) + const on the
// largest suffix whose per-point residual stays below resid_tol.
TailFit tail_fit(const std::vector<double>& taus, const std::vector<double>& cabs,
                 double resid_tol = 0.05, int min_points = 8);

} // namespace llg
