#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "llg/rng.hpp"

namespace llg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct bad_params : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct wrong_q : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Model { XYZc, HRM, RPM, ThreePM, Z2COE, DU, Localized };
enum class Arrangement { Invariant, SpatialTemporalRandom };

std::string model_name(Model m);
Model model_from_name(const std::string& name);

// Two-site gate on a pair of q-level sites; row/col index = q*(level of site
// a) + (level of site b).
struct UnitaryGate {
    int q;
    Matrix matrix; // q^2 x q^2
};

struct GateEnsembleSpec {
    Model model = Model::HRM;
    int q = 2;
    double ax = 0.3, ay = 0.4, az = 0.5; // XYZc / 3PM / DU couplings
    double eps = 1.0;                    // RPM phase variance
    std::uint64_t seed = 0;
    Arrangement arrangement = Arrangement::Invariant;

    void validate() const;
    std::string to_config() const;
    static GateEnsembleSpec from_config(const std::string& text);
};

// Haar-distributed n x n unitary: QR of a complex Ginibre matrix with the
// R_ii/|R_ii| phase fix applied to the columns of Q.
Matrix sample_cue(int n, Rng& rng);

// Symmetric unitary W^T W with W drawn from CUE(n).
Matrix sample_coe(int n, Rng& rng);

Matrix pauli(int mu); // 2x2 sigma_{0,x,y,z}

// exp(i sum_mu a_mu sigma_mu (x) sigma_mu) via the Bell-basis closed form.
Matrix xyzc_gate(double ax, double ay, double az);

// Gate at (layer, site).  Invariant arrangement ignores the position; random
// arrangement derives the gate deterministically from (seed, layer, site).
UnitaryGate build_gate(const GateEnsembleSpec& spec, std::int64_t layer = 0,
                       std::int64_t site = 0);

// Reshuffles legs (a,b;c,d) -> (a,c;b,d) and reports the unitarity residual of
// the reshuffled matrix.  Dual-unitary gates are unitary in both groupings.
struct DualUnitaryCheck {
    bool dual_unitary;
    double residual;
};
DualUnitaryCheck check_dual_unitary(const UnitaryGate& u, double tol = 1e-12);

double unitarity_residual(const Matrix& u);

} // namespace llg
