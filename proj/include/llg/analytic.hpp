#pragma once

#include "llg/llg_op.hpp"

#include <vector>

namespace llg {

struct quadrature_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Wg(i,j,N): (N^2-1)^{-1} when i = j, else -[N(N^2-1)]^{-1}.
double weingarten(int i, int j, int n);

// Entries M^{ii}_{ab} of the ensemble-averaged replicated gate in the pair
// labels: 1 when a = b = i, q/(q^2+1) when a != b, 0 when a = b = 1-i.
double averaged_m_entry(int i, int a, int b, int q);

// Ensemble-averaged light-like generator of the spatial-temporal random
// Haar model, restricted to the pair-state span; acts on coefficient vectors
// over the basis {|i_1> (x) ... (x) |i_w>}, i_k in {0,1}, site 0 slowest.
Matrix averaged_llg(int q, int w);

// Basis reordering that makes averaged_llg upper triangular.
std::vector<int> averaged_llg_triangular_order(int w);

// Exact spectrum of averaged_llg through the triangular ordering (diagonal
// entries); a general eigensolver cannot resolve these defective clusters.
std::vector<double> averaged_llg_diagonal_spectrum(int q, int w);

struct EigenvalueMultiplicity {
    double value;
    std::int64_t multiplicity;
};
// eps_n = (q/(q^2+1))^n (n even) or q (q/(q^2+1))^n (n odd), multiplicity
// C(w,n), n = 0..w-1.  The 2^w matrix carries one extra diagonal entry at
// n = w (the fully alternating domain-wall configuration).
std::vector<EigenvalueMultiplicity> hrm_eigenvalues(int q, int w);
double hrm_epsilon(int q, int n);

// Exact averaged-HRM OTOC machinery in the 2^w coefficient space.
class ReducedHrm {
  public:
    ReducedHrm(int q, int w);

    int q() const { return q_; }
    int w() const { return w_; }
    const Matrix& t() const { return t_; }
    const Matrix& f() const { return f_; }

    // C(w,tau) = 1 - l^T T^tau c_R with the default traceless unitary probe
    Complex otoc(int tau) const;
    std::vector<Complex> otoc_series(int tau_max) const;

    struct Triplet {
        double lambda;
        Vector left_coeff;  // coefficients of the unit-norm full-space vector
        Vector right_coeff;
    };
    // Exact SVD of F^tau as an operator on the full space (through the
    // Gram-corrected similarity G^{1/2} F^tau G^{-1/2}).
    Triplet leading_triplet(int tau) const;

    Complex lsva(int tau) const;

    struct Variational {
        double lambda;
        Complex value;
        double overlap_vs_exact;
        int sweeps;
    };
    Variational variational(int tau, int max_sweeps = 500) const;

    // coefficients -> dense q^{4w} vector (for cross-checks at small w)
    Vector embed(const Vector& coeff) const;
    // true-overlap extraction: coefficients of the pair-span projection
    Vector project(const Vector& full) const;

    // right eigenvector of F_{w=1} for z2 (used by singular-state checks)
    Vector z2_right_coeff_site() const; // 2-vector
    Vector z2_left_coeff_site() const;  // 2-vector (row)

  private:
    int q_, w_;
    Matrix t_, f_;
    Matrix gram_, gram_half_, gram_half_inv_;
    Vector ell_;  // formal boundary row
    Vector c_r_;  // boundary coefficient vector
    Vector row1_; // <1^w| formal row on pair coefficients
};

// (w+1)x(w+1) restriction of the averaged-HRM T_w to the domain-wall
// subspace V_w: lower-triangular Toeplitz block R with diagonal z2 and
// sub-diagonals z2 (z2/q)^n, closed by the <1^w| left-eigenvector row.
struct RestrictedLLG {
    int q, w;
    Matrix tprime; // (w+1) x (w+1)
    Eigen::VectorXd chi_row; // [chi(w), ..., chi(1), 1]
};
RestrictedLLG restricted_tprime(int q, int w);

// || chi R^tau ||: leading singular value of F_w^tau within V_w, evaluated
// through the binomial expansion of R^tau in the log domain.
double hrm_leading_sv_exact(int q, int w, int tau);
// componentwise values (chi R^tau)_n, n = 0..w-1, log-domain
std::vector<double> hrm_chi_r_tau(int q, int w, int tau);

// Gaussian approximation f_tau(x) of the leading singular value around the
// butterfly cone: lambda ~ q^w f_tau(w/tau).  Adaptive Simpson quadrature.
double f_tau(double x, int tau, int q, double rel_tol = 1e-8);
double butterfly_velocity(int q);           // (q^2-1)/(q^2+1)
double butterfly_sigma(int q, double time); // 2 q sqrt(t) / (q^2+1)

struct DuClosedForm {
    Matrix t_restricted; // 2x2, orthonormalized {|0^w>, |1^w>} basis
    Matrix f_restricted; // 2x2
    double norm_t;       // restricted ||T^tau|| = 1
    double norm_f;       // q^w
};
DuClosedForm du_closed_form(int q, int w, int tau);

struct LocalizedClosedForm {
    double norm_f;       // q^w for tau < w, 0 for tau >= w
    double norm_t;       // q
    Matrix t_restricted; // (w+1)x(w+1) shift-ladder matrix in the e-basis
    Matrix f_restricted;
};
LocalizedClosedForm localized_closed_form(int q, int w, int tau);

double log_binomial(double n, double k); // lgamma-based

} // namespace llg
