#include "llg/llg_op.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <cstdlib>
#include <thread>
#include <vector>

namespace llg {

namespace {

int hardware_threads() {
    unsigned n = std::thread::hardware_concurrency();
    if (const char* e = std::getenv("LLG_THREADS")) n = unsigned(std::atoi(e));
    return n == 0 ? 1 : int(n);
}

// In-buffer transform for copy mu: the q^2 x q^2 matrix m acts on the
// (site-copy leg, carry-copy leg) pair of every element of buf (size q^8).
template <int Q>
void copy_pass(Complex* buf, const Complex* m, int mu) {
    constexpr std::int64_t d4 = Q * Q * Q * Q;
    constexpr std::int64_t d8 = d4 * d4;
    constexpr int q2 = Q * Q;
    std::int64_t pw = 1;
    for (int k = 0; k < 3 - mu; ++k) pw *= Q;
    const std::int64_t ls = d4 * pw;
    const std::int64_t lc = pw;
    const std::int64_t o2n = d8 / (ls * Q);
    const std::int64_t m2n = ls / (lc * Q);
    Complex x[q2], y[q2];
    for (std::int64_t o2 = 0; o2 < o2n; ++o2)
        for (std::int64_t m2 = 0; m2 < m2n; ++m2) {
            Complex* blk = buf + o2 * ls * Q + m2 * lc * Q;
            for (std::int64_t in = 0; in < lc; ++in) {
                Complex* p = blk + in;
                for (int a = 0; a < Q; ++a)
                    for (int c = 0; c < Q; ++c)
                        x[a * Q + c] = p[a * ls + c * lc];
                for (int r = 0; r < q2; ++r) {
                    Complex acc(0, 0);
                    const Complex* mr = m + r * q2;
                    for (int c = 0; c < q2; ++c) acc += mr[c] * x[c];
                    y[r] = acc;
                }
                for (int a = 0; a < Q; ++a)
                    for (int c = 0; c < Q; ++c)
                        p[a * ls + c * lc] = y[a * Q + c];
            }
        }
}

void copy_pass_generic(Complex* buf, const Complex* m, int mu, int q) {
    const std::int64_t d4 = ipow(q, 4);
    const std::int64_t d8 = d4 * d4;
    const int q2 = q * q;
    const std::int64_t pw = ipow(q, 3 - mu);
    const std::int64_t ls = d4 * pw;
    const std::int64_t lc = pw;
    const std::int64_t o2n = d8 / (ls * q);
    const std::int64_t m2n = ls / (lc * q);
    std::vector<Complex> x(q2), y(q2);
    for (std::int64_t o2 = 0; o2 < o2n; ++o2)
        for (std::int64_t m2 = 0; m2 < m2n; ++m2) {
            Complex* blk = buf + o2 * ls * q + m2 * lc * q;
            for (std::int64_t in = 0; in < lc; ++in) {
                Complex* p = blk + in;
                for (int a = 0; a < q; ++a)
                    for (int c = 0; c < q; ++c) x[a * q + c] = p[a * ls + c * lc];
                for (int r = 0; r < q2; ++r) {
                    Complex acc(0, 0);
                    const Complex* mr = m + r * q2;
                    for (int c = 0; c < q2; ++c) acc += mr[c] * x[c];
                    y[r] = acc;
                }
                for (int a = 0; a < q; ++a)
                    for (int c = 0; c < q; ++c) p[a * ls + c * lc] = y[a * q + c];
            }
        }
}

// One replicated two-site gate applied in place to the slot pair
// (site slot at `site_stride`, carry slot at stride 1), as four q^2 x q^2
// copy matrices acting on the (site-leg, carry-leg) pairs.  Disjoint q^8
// blocks are processed in parallel; the per-block arithmetic is identical
// regardless of the thread count, so results are bit-stable.
void apply_replicated_pair(Complex* w_data, std::int64_t n, int q,
                           std::int64_t site_stride,
                           const std::array<Matrix, 4>& copy_mats) {
    const std::int64_t d4 = ipow(q, 4);
    const std::int64_t d8 = d4 * d4;
    const int q2 = q * q;
    std::vector<Complex> mats_flat(std::size_t(4) * q2 * q2);
    for (int mu = 0; mu < 4; ++mu)
        for (int r = 0; r < q2; ++r)
            for (int c = 0; c < q2; ++c)
                mats_flat[std::size_t((mu * q2 + r) * q2 + c)] = copy_mats[mu](r, c);

    const std::int64_t outer = n / (site_stride * d4);
    const std::int64_t middle = site_stride / d4;
    const std::int64_t blocks = outer * middle;

    auto run_range = [&](std::int64_t b0, std::int64_t b1) {
        std::vector<Complex> buf(static_cast<std::size_t>(d8));
        for (std::int64_t b = b0; b < b1; ++b) {
            std::int64_t o = b / middle, mid = b % middle;
            Complex* base = w_data + o * site_stride * d4 + mid * d4;
            for (std::int64_t a = 0; a < d4; ++a)
                std::memcpy(buf.data() + a * d4, base + a * site_stride,
                            sizeof(Complex) * d4);
            for (int mu = 0; mu < 4; ++mu) {
                const Complex* m = mats_flat.data() + std::size_t(mu) * q2 * q2;
                switch (q) {
                case 2: copy_pass<2>(buf.data(), m, mu); break;
                case 3: copy_pass<3>(buf.data(), m, mu); break;
                case 4: copy_pass<4>(buf.data(), m, mu); break;
                default: copy_pass_generic(buf.data(), m, mu, q);
                }
            }
            for (std::int64_t a = 0; a < d4; ++a)
                std::memcpy(base + a * site_stride, buf.data() + a * d4,
                            sizeof(Complex) * d4);
        }
    };

    int nthreads = std::min<std::int64_t>(hardware_threads(), blocks);
    if (nthreads <= 1 || blocks < 8) {
        run_range(0, blocks);
        return;
    }
    std::vector<std::thread> pool;
    std::int64_t chunk = (blocks + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
        std::int64_t b0 = t * chunk, b1 = std::min(blocks, b0 + chunk);
        if (b0 >= b1) break;
        pool.emplace_back(run_range, b0, b1);
    }
    for (auto& th : pool) th.join();
}

std::array<Matrix, 4> copy_matrices(const Matrix& u, Direction dir, bool adjoint) {
    const int q = static_cast<int>(std::llround(std::sqrt(double(u.rows()))));
    Matrix uc = u.conjugate();
    std::array<Matrix, 4> out;
    int d = static_cast<int>(u.rows());
    auto build = [&](const Matrix& g) {
        Matrix m(d, d);
        for (int xp = 0; xp < q; ++xp)
            for (int yp = 0; yp < q; ++yp)
                for (int x = 0; x < q; ++x)
                    for (int y = 0; y < q; ++y) {
                        // row = (site-out, carry-out), col = (site-in, carry-in)
                        if (dir == Direction::LeftMoving)
                            m(xp * q + yp, x * q + y) = g(yp * q + xp, x * q + y);
                        else
                            m(xp * q + yp, x * q + y) = g(xp * q + yp, y * q + x);
                    }
        if (adjoint) m = m.adjoint().eval();
        return m;
    };
    Matrix m_u = build(u);
    Matrix m_uc = build(uc);
    out[0] = m_u;
    out[1] = m_uc;
    out[2] = m_u;
    out[3] = m_uc;
    return out;
}

struct ColumnGates {
    std::vector<Matrix> u; // one per row, or a single entry when invariant
    bool invariant;
    const Matrix& at(int idx) const { return invariant ? u[0] : u[idx]; }
};

ColumnGates gates_for_column(const LLGOperator& op, int column_index) {
    ColumnGates g;
    g.invariant = op.spec.arrangement == Arrangement::Invariant;
    if (g.invariant) {
        g.u.push_back(build_gate(op.spec).matrix);
        return g;
    }
    g.u.reserve(op.w);
    for (int j = 1; j <= op.w; ++j) {
        if (op.direction == Direction::LeftMoving)
            g.u.push_back(op.gate_for(column_index, j).matrix);
        else
            g.u.push_back(op.gate_for(j, column_index).matrix);
    }
    return g;
}

// Shared sweep for one light-like column.  `adjoint` reverses the row order,
// uses adjoint copy matrices and swaps the conjugated caps.
Vector column_sweep(const LLGOperator& op, int column_index, const Vector& v,
                    bool adjoint, const Vector& carry_init,
                    const Vector& carry_final) {
    const int q = op.q;
    const std::int64_t d4 = ipow(q, 4);
    const std::int64_t dim = op.dim();
    if (v.size() != dim) throw dimension_mismatch("replica vector dimension");
    const std::int64_t n = dim * d4;

    Vector init = adjoint ? carry_final.conjugate() : carry_init;
    Vector fin = adjoint ? carry_init.conjugate() : carry_final;

    static thread_local std::vector<Complex> wbuf;
    wbuf.resize(n);
    Complex* W = wbuf.data();
    for (std::int64_t i = 0; i < dim; ++i) {
        const Complex vi = v(i);
        Complex* dst = W + i * d4;
        for (std::int64_t y = 0; y < d4; ++y) dst[y] = vi * init(y);
    }

    ColumnGates gates = gates_for_column(op, column_index);
    for (int step = 0; step < op.w; ++step) {
        int j = adjoint ? op.w - 1 - step : step; // 0-based row
        std::int64_t site_stride = ipow(d4, op.w - j);
        auto mats = copy_matrices(gates.at(j), op.direction, adjoint);
        apply_replicated_pair(W, n, q, site_stride, mats);
    }

    Vector out(dim);
    for (std::int64_t i = 0; i < dim; ++i) {
        const Complex* src = W + i * d4;
        Complex acc(0, 0);
        for (std::int64_t y = 0; y < d4; ++y) acc += src[y] * fin(y);
        out(i) = acc;
    }
    return out;
}

} // namespace

UnitaryGate LLGOperator::gate_for(int cprime, int jprime) const {
    return build_gate(spec, /*layer=*/cprime + jprime - 1,
                      /*site=*/anchor + cprime - jprime);
}

Vector LLGOperator::apply_at(int column_index, const Vector& v) const {
    Vector t = column_sweep(*this, column_index, v, false, pair_state(0, q),
                            pair_state(1, q));
    if (mode == OpMode::F) {
        Vector one = pair_product_state(pair_state(1, q), w);
        Vector zero = pair_product_state(pair_state(0, q), w);
        t -= zero * formal_dot(one, v);
    }
    return t;
}

Vector LLGOperator::apply_adjoint_at(int column_index, const Vector& v) const {
    Vector t = column_sweep(*this, column_index, v, true, pair_state(0, q),
                            pair_state(1, q));
    if (mode == OpMode::F) {
        Vector one = pair_product_state(pair_state(1, q), w);
        Vector zero = pair_product_state(pair_state(0, q), w);
        t -= one * zero.dot(v); // <0^w|v>, |0^w> is real
    }
    return t;
}

Vector LLGOperator::apply(const Vector& v) { return apply_at(column++, v); }

Vector LLGOperator::apply_adjoint(const Vector& v) {
    return apply_adjoint_at(column++, v);
}

Matrix LLGOperator::dense(std::int64_t max_dim) const {
    std::int64_t d = dim();
    if (d > max_dim) throw too_large_error("dense LLG materialization guard");
    Matrix m(d, d);
    Vector e = Vector::Zero(d);
    for (std::int64_t k = 0; k < d; ++k) {
        e(k) = 1;
        m.col(k) = apply_at(1, e);
        e(k) = 0;
    }
    return m;
}

Matrix default_probe(int q) {
    return q == 2 ? pauli(3) : generalized_pauli(1, 0, q);
}

BoundaryStates make_boundary_states(int q, int w, const Matrix& probe_bottom,
                                    const Matrix& probe_top) {
    Vector r_site = make_pair_state(0, probe_bottom.adjoint(), probe_bottom, q);
    Vector l_site = make_pair_state(1, probe_top, probe_top.adjoint(), q);
    BoundaryStates b;
    if (w == 1) {
        b.right = r_site;
        b.left = l_site;
        return b;
    }
    Vector zeros = pair_product_state(pair_state(0, q), w - 1);
    Vector ones = pair_product_state(pair_state(1, q), w - 1);
    b.right = Vector(r_site.size() * zeros.size());
    for (std::int64_t i = 0; i < r_site.size(); ++i)
        b.right.segment(i * zeros.size(), zeros.size()) = r_site(i) * zeros;
    b.left = Vector(ones.size() * l_site.size());
    for (std::int64_t i = 0; i < ones.size(); ++i)
        b.left.segment(i * l_site.size(), l_site.size()) = ones(i) * l_site;
    return b;
}

BoundaryStates make_boundary_states(int q, int w) {
    Matrix probe = default_probe(q);
    return make_boundary_states(q, w, probe, probe);
}

Vector right_moving_rtilde(const GateEnsembleSpec& spec, int tau,
                           const Matrix& probe_bottom, std::int64_t anchor) {
    LLGOperator col;
    col.direction = Direction::RightMoving;
    col.mode = OpMode::T;
    col.q = spec.q;
    col.w = tau;
    col.spec = spec;
    col.anchor = anchor;
    Vector carry0 = make_pair_state(0, probe_bottom.adjoint(), probe_bottom, spec.q);
    Vector v0 = pair_product_state(pair_state(0, spec.q), tau);
    return column_sweep(col, /*column=*/1, v0, false, carry0,
                        pair_state(1, spec.q));
}

Vector right_moving_ltilde(const GateEnsembleSpec& spec, int tau, int w,
                           const Matrix& probe_top, std::int64_t anchor) {
    LLGOperator col;
    col.direction = Direction::RightMoving;
    col.mode = OpMode::T;
    col.q = spec.q;
    col.w = tau;
    col.spec = spec;
    col.anchor = anchor;
    Vector carry_end = make_pair_state(1, probe_top, probe_top.adjoint(), spec.q);
    Vector ones = pair_product_state(pair_state(1, spec.q), tau);
    // transpose of the column applied to the <1^tau| row: A^T x = conj(A^dag conj(x))
    Vector res = column_sweep(col, /*column=*/w, ones.conjugate(), true,
                              pair_state(0, spec.q), carry_end);
    return res.conjugate();
}

ReduceResiduals reduce_check(const LLGOperator& op, int m, const Vector& psi) {
    if (op.spec.arrangement != Arrangement::Invariant)
        throw bad_params("reduce_check requires an invariant circuit");
    if (m < 1 || m >= op.w) throw bad_params("reduce_check needs 1 <= m < w");
    LLGOperator sub = op;
    sub.w = op.w - m;
    if (psi.size() != sub.dim())
        throw dimension_mismatch("psi must have dimension q^{4(w-m)}");

    Vector zeros_m = pair_product_state(pair_state(0, op.q), m);
    Vector ones_m = pair_product_state(pair_state(1, op.q), m);

    auto tensor = [](const Vector& a, const Vector& b) {
        Vector out(a.size() * b.size());
        for (std::int64_t i = 0; i < a.size(); ++i)
            out.segment(i * b.size(), b.size()) = a(i) * b;
        return out;
    };

    Vector lhs = op.apply_at(1, tensor(zeros_m, psi));
    Vector rhs = tensor(zeros_m, sub.apply_at(1, psi));
    double ket = (lhs - rhs).norm();

    // bra side via the transpose:  F_w^T (psi (x) [1^m])  vs  (F_{w-m}^T psi) (x) [1^m]
    Vector lhs_b =
        op.apply_adjoint_at(1, tensor(psi, ones_m).conjugate()).conjugate();
    Vector rhs_b =
        tensor(sub.apply_adjoint_at(1, psi.conjugate()).conjugate(), ones_m);
    double bra = (lhs_b - rhs_b).norm();
    return {ket, bra};
}

double operator_norm_estimate(const LLGOperator& op, int column_index, int iters,
                              double tol, std::uint64_t seed) {
    Rng rng(mix_u64(seed ^ 0x6a09e667f3bcc908ull));
    Vector v(op.dim());
    for (std::int64_t i = 0; i < v.size(); ++i) v(i) = rng.next_complex_normal();
    v.normalize();
    double prev = 0;
    double sigma = 0;
    for (int it = 0; it < iters; ++it) {
        Vector u = op.apply_at(column_index, v);
        sigma = u.norm();
        if (sigma == 0) return 0;
        Vector vn = op.apply_adjoint_at(column_index, u / sigma);
        v = vn.normalized();
        if (it > 0 && std::abs(sigma - prev) <= tol * sigma) break;
        prev = sigma;
    }
    return sigma;
}

void write_replica_vector(const Vector& v, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    for (std::int64_t i = 0; i < v.size(); ++i) {
        double re = v(i).real(), im = v(i).imag();
        os.write(reinterpret_cast<const char*>(&re), sizeof(double));
        os.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
}

Vector read_replica_vector(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::vector<Complex> data;
    double re, im;
    while (is.read(reinterpret_cast<char*>(&re), sizeof(double)) &&
           is.read(reinterpret_cast<char*>(&im), sizeof(double)))
        data.emplace_back(re, im);
    Vector v(static_cast<std::int64_t>(data.size()));
    for (std::size_t i = 0; i < data.size(); ++i) v(i) = data[i];
    return v;
}

} // namespace llg
