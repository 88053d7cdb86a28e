#pragma once

#include "llg/replica.hpp"

namespace llg {

// Light-like generators of a brick-wall circuit.
//
// The OTOC contraction C(w,tau) = 1 - <L_w| T_{L,w}^tau |R_w> lives on a
// parallelogram of gates.  With the layer convention "layer s acts on bonds
// i in 2Z + s mod 2" and the lower probe on site `anchor` at time 0, the gate
// of column c' (tau direction) and row j' (w direction) sits at
//     layer = c' + j' - 1,     bond (anchor + c' - j', anchor + c' - j' + 1),
// which forces `anchor` to be odd.  A left-moving column contracts its w
// gates along the up-left staircase; each gate consumes (input site j',
// carry) on its (bottom-left, bottom-right) legs and emits (carry', output
// site j') on (top-left, top-right).  The carry starts as |0> and ends
// contracted with the formal <1| row.  The right-moving generator is the
// mirror: columns run along the up-right staircase and are powered in the
// w direction.
//
// Vectors are dense, site-major (site 0 slowest); site 0 is the end adjacent
// to the lower probe for left movers and carries the |R> decoration.

enum class Direction { LeftMoving, RightMoving };
enum class OpMode { T, F };

struct LLGOperator {
    Direction direction = Direction::LeftMoving;
    OpMode mode = OpMode::T;
    int q = 2;
    int w = 1; // number of light-like sites this operator acts on
    GateEnsembleSpec spec;
    std::int64_t anchor = 1; // absolute site of the lower probe (odd)
    int column = 1;          // next column index; advances on apply()

    std::int64_t dim() const { return ipow(q, 4 * w); }

    // Stateful apply: uses the running column counter (fresh gates per
    // application in random arrangement, per the circuit geometry).
    Vector apply(const Vector& v);
    Vector apply_adjoint(const Vector& v);

    // Stateless variants used by solvers that own a fixed gate window.
    Vector apply_at(int column_index, const Vector& v) const;
    Vector apply_adjoint_at(int column_index, const Vector& v) const;

    // Column-by-column materialization through apply_at(1, e_k).
    Matrix dense(std::int64_t max_dim = 4096) const;

    UnitaryGate gate_for(int cprime, int jprime) const;
};

// Fixed-direction probe boundary states.
//  <L_w| = <1^{w-1}| (x) <1_{sigma_t, sigma_t^dag}|   (formal row vector)
//  |R_w> = |0_{sigma_b^dag, sigma_b}> (x) |0^{w-1}>
// The right-moving pair contracts one extra gate column each:
//  |R~_tau) = [column j'=1 with carry caps |0_{sigma_b^dag,sigma_b}>, <1|]
//             applied to |0^tau>,
//  (L~_tau| = transpose of [column j'=w with caps |0>, <1_{sigma_t,sigma_t^dag}|]
//             applied to the <1^tau| row.
struct BoundaryStates {
    Vector left;  // formal bra components, dim q^{4w}
    Vector right; // ket, dim q^{4w}
};

BoundaryStates make_boundary_states(int q, int w, const Matrix& probe_bottom,
                                    const Matrix& probe_top);
BoundaryStates make_boundary_states(int q, int w); // default probe
Matrix default_probe(int q);                       // sigma_z for q=2, sigma^{1,0} otherwise

Vector right_moving_rtilde(const GateEnsembleSpec& spec, int tau,
                           const Matrix& probe_bottom, std::int64_t anchor = 1);
Vector right_moving_ltilde(const GateEnsembleSpec& spec, int tau, int w,
                           const Matrix& probe_top, std::int64_t anchor = 1);

// || F_w (|0^m> (x) psi) - |0^m> (x) F_{w-m} psi ||  and the <1^m| analogue.
struct ReduceResiduals {
    double ket_side;
    double bra_side;
};
ReduceResiduals reduce_check(const LLGOperator& op, int m, const Vector& psi);

// Power-iteration estimate of ||op|| (largest singular value of one column
// application at `column_index`).
double operator_norm_estimate(const LLGOperator& op, int column_index = 1,
                              int iters = 60, double tol = 1e-9,
                              std::uint64_t seed = 7);

void write_replica_vector(const Vector& v, const std::string& path);
Vector read_replica_vector(const std::string& path);

} // namespace llg
