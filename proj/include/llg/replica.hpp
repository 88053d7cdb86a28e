#pragma once

#include "llg/gates.hpp"

namespace llg {

// Four-copy replicated space conventions.
//
// A replicated site carries four copies of the q-level Hilbert space in the
// order (ket1, bra1, ket2, bra2) = (a, b, c, d); the flattened index is
// ((a*q + b)*q + c)*q + d.  The two pairing states are
//   |0>       = q^{-1/2} sum_{a,c} |a,a,c,c>     (bonds 1-2 and 3-4)
//   |1>       = q^{-1/2} sum_{a,b} |a,b,b,a>     (bonds 2-3 and 4-1)
// and their decorated variants insert an operator on each bond:
//   |0_{s,m}> components  q^{-1/2} s_{ab} m_{cd}
//   |1_{s,m}> components  q^{-1/2} s_{bc} m_{da}
// Decorations enter unconjugated; boundary "bras" built from these vectors
// contract formally (no conjugation), matching the OTOC tensor network where
// all conjugation lives inside the u* copies.

struct too_large_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct dimension_mismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline std::int64_t ipow(std::int64_t base, int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= base;
    return r;
}

inline std::int64_t replica_dim(int q) { return ipow(q, 4); }

// sum_i bra_i * ket_i without conjugation
inline Complex formal_dot(const Vector& bra, const Vector& ket) {
    if (bra.size() != ket.size()) throw dimension_mismatch("formal_dot size");
    return (bra.array() * ket.array()).sum();
}

Vector make_pair_state(int kind, const Matrix& sigma, const Matrix& mu, int q);
Vector pair_state(int kind, int q); // identity decorations

// w-fold tensor product of a single-site replica vector
Vector pair_product_state(const Vector& site, int w);

// sigma^{j,k} = sum_m omega^{j m} |m+k><m|, omega = exp(2 pi i / q)
Matrix generalized_pauli(int j, int k, int q);
inline Matrix generalized_pauli_mu(int mu, int q) {
    return generalized_pauli(mu % q, mu / q, q);
}

// u (x) u* (x) u (x) u* as a dense q^8 x q^8 matrix over two replicated
// sites; row index = replica_dim(q) * A_left + A_right.  Oracle-sized only.
Matrix replicate_gate(const UnitaryGate& u, std::int64_t max_dim = 4096);

} // namespace llg
