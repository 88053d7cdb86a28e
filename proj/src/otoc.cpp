#include "llg/otoc.hpp"
#include "llg/spectral.hpp"

#include <fstream>

namespace llg {

namespace {

// Dense operator on a contiguous site window [lo, hi] of the chain,
// site-major (lo slowest).
struct WindowOperator {
    int q;
    int lo, hi; // inclusive
    Matrix a;

    int len() const { return hi - lo + 1; }

    void extend_to(int new_lo, int new_hi) {
        int grow_l = lo - new_lo, grow_r = new_hi - hi;
        if (grow_l == 0 && grow_r == 0) return;
        std::int64_t dl = ipow(q, grow_l), dr = ipow(q, grow_r);
        std::int64_t d = a.rows();
        Matrix big = Matrix::Zero(dl * d * dr, dl * d * dr);
        for (std::int64_t il = 0; il < dl; ++il)
            for (std::int64_t ir = 0; ir < dr; ++ir)
                for (std::int64_t r = 0; r < d; ++r)
                    for (std::int64_t c = 0; c < d; ++c)
                        big((il * d + r) * dr + ir, (il * d + c) * dr + ir) = a(r, c);
        a.swap(big);
        lo = new_lo;
        hi = new_hi;
    }

    // A <- G^dag A G with the two-site gate g on chain sites (i, i+1)
    void conjugate_gate(const Matrix& g, int i) {
        int pos = i - lo; // leftmost gate site within the window
        std::int64_t inner = ipow(q, len() - pos - 2); // stride of the right leg
        std::int64_t d = a.rows();
        std::int64_t q2 = q * q;
        std::int64_t outer = d / (inner * q2);
        Matrix gd = g.adjoint();
        Vector x(q2), y(q2);
        // rows: A <- G^dag A
        for (std::int64_t col = 0; col < d; ++col)
            for (std::int64_t o = 0; o < outer; ++o)
                for (std::int64_t in = 0; in < inner; ++in) {
                    std::int64_t base = o * inner * q2 + in;
                    for (std::int64_t k = 0; k < q2; ++k) x(k) = a(base + k * inner, col);
                    y = gd * x;
                    for (std::int64_t k = 0; k < q2; ++k) a(base + k * inner, col) = y(k);
                }
        // columns: A <- A G
        for (std::int64_t row = 0; row < d; ++row)
            for (std::int64_t o = 0; o < outer; ++o)
                for (std::int64_t in = 0; in < inner; ++in) {
                    std::int64_t base = o * inner * q2 + in;
                    for (std::int64_t k = 0; k < q2; ++k) x(k) = a(row, base + k * inner);
                    for (std::int64_t r = 0; r < q2; ++r) {
                        Complex acc(0, 0);
                        for (std::int64_t c = 0; c < q2; ++c) acc += x(c) * g(c, r);
                        y(r) = acc; // (A G)_{row, r} = sum_c A_{row,c} G_{c,r}
                    }
                    for (std::int64_t k = 0; k < q2; ++k) a(row, base + k * inner) = y(k);
                }
    }
};

LLGOperator make_left_op(const GateEnsembleSpec& spec, int w, OpMode mode,
                         std::int64_t anchor) {
    LLGOperator op;
    op.direction = Direction::LeftMoving;
    op.mode = mode;
    op.q = spec.q;
    op.w = w;
    op.spec = spec;
    op.anchor = anchor;
    return op;
}

} // namespace

Complex otoc_bruteforce(const GateEnsembleSpec& spec, int x, int t,
                        const Matrix& probe_bottom, const Matrix& probe_top,
                        int chain_len) {
    if (t < 0) throw bad_params("t must be >= 0");
    if (((x + t) % 2 + 2) % 2 != 0)
        throw bad_params("probes must satisfy x = t (mod 2) on the brick wall");
    const int q = spec.q;
    int p_top = brute_top_site(t);
    int p_bot = brute_bottom_site(x, t);
    if (p_bot < 0) { // far outside the left light cone: shift by an even amount
        int shift = 2 * ((-p_bot + 1) / 2);
        p_top += shift;
        p_bot += shift;
    }
    int L = chain_len > 0 ? chain_len
                          : std::max({2 * t + 2, p_top + t + 1, p_bot + 1});
    if (p_top - t < 0 || p_top + t > L - 1 || p_bot < 0 || p_bot > L - 1)
        throw light_cone_clipped("chain too short for the probe light cones");

    // sigma(0,t) = U^dag sigma U, support-tracked
    WindowOperator a{q, p_top, p_top, probe_top};
    for (int s = t; s >= 1; --s) {
        // gates on bonds i = s (mod 2) overlapping the support
        int first = a.lo - 1, last = a.hi; // candidate leftmost gate sites
        for (int i = first; i <= last; ++i) {
            if (((i % 2) + 2) % 2 != s % 2) continue;
            if (i + 1 < a.lo || i > a.hi) continue;
            if (i < 0 || i + 1 > L - 1)
                throw light_cone_clipped("light cone reached the chain boundary");
            a.extend_to(std::min(a.lo, i), std::max(a.hi, i + 1));
        }
        for (int i = first; i <= last; ++i) {
            if (((i % 2) + 2) % 2 != s % 2) continue;
            if (i + 1 < a.lo || i > a.hi) continue;
            a.conjugate_gate(build_gate(spec, s, i).matrix, i);
        }
    }

    if (p_bot < a.lo || p_bot > a.hi) return {0, 0}; // probes commute exactly

    // B = probe_bottom embedded at p_bot inside the window
    int pos = p_bot - a.lo;
    std::int64_t inner = ipow(q, a.len() - pos - 1);
    std::int64_t d = a.a.rows();
    Matrix b = Matrix::Zero(d, d);
    for (std::int64_t o = 0; o < d / (inner * q); ++o)
        for (std::int64_t in = 0; in < inner; ++in)
            for (int r = 0; r < q; ++r)
                for (int c = 0; c < q; ++c)
                    b(o * inner * q + r * inner + in, o * inner * q + c * inner + in) =
                        probe_bottom(r, c);

    Complex tr = (a.a.adjoint() * b.adjoint() * a.a * b).trace();
    return Complex(1, 0) - tr / double(d);
}

Complex otoc_bruteforce(const GateEnsembleSpec& spec, int x, int t, int chain_len) {
    Matrix probe = default_probe(spec.q);
    return otoc_bruteforce(spec, x, t, probe, probe, chain_len);
}

OtocSeries otoc_llg_left(const GateEnsembleSpec& spec, int w, int tau_max,
                         std::optional<Matrix> probe) {
    if (w < 1) throw bad_params("w >= 1 required");
    Matrix p = probe.value_or(default_probe(spec.q));
    std::int64_t anchor = 2 * w - 1; // matches the brute-force placement
    LLGOperator top = make_left_op(spec, w, OpMode::T, anchor);
    LLGOperator fop = make_left_op(spec, w, OpMode::F, anchor);
    BoundaryStates b = make_boundary_states(spec.q, w, p, p);

    OtocSeries series;
    series.spec = spec;
    series.probe_label = spec.q == 2 ? "sigma_z" : "sigma^{1,0}";
    Vector vt = b.right;
    Vector vf = b.right;
    for (int tau = 1; tau <= tau_max; ++tau) {
        vt = top.apply_at(tau, vt);
        vf = fop.apply_at(tau, vf);
        Complex via_t = Complex(1, 0) - formal_dot(b.left, vt);
        Complex via_f = -formal_dot(b.left, vf);
        if (std::abs(via_t - via_f) > 1e-10 * std::max(1.0, std::abs(via_f)))
            throw std::runtime_error("T/F route identity violated in otoc_llg_left");
        OtocPoint pt;
        pt.w = w;
        pt.tau = tau;
        pt.x = coord_x(w, tau);
        pt.t = coord_t(w, tau);
        pt.value = via_f;
        pt.method = "llg_left";
        series.points.push_back(pt);
    }
    return series;
}

Complex otoc_llg_right(const GateEnsembleSpec& spec, int w, int tau,
                       std::optional<Matrix> probe) {
    if (w < 2) throw bad_params("right-moving evaluation needs w >= 2");
    Matrix p = probe.value_or(default_probe(spec.q));
    std::int64_t anchor = 2 * w - 1;
    Vector rt = right_moving_rtilde(spec, tau, p, anchor);
    Vector lt = right_moving_ltilde(spec, tau, w, p, anchor);
    LLGOperator op;
    op.direction = Direction::RightMoving;
    op.mode = OpMode::T;
    op.q = spec.q;
    op.w = tau;
    op.spec = spec;
    op.anchor = anchor;
    Vector v = rt;
    for (int c = 2; c <= w - 1; ++c) v = op.apply_at(c, v);
    return Complex(1, 0) - formal_dot(lt, v);
}

LsvaResult lsva(const GateEnsembleSpec& spec, int w, int tau, double tol,
                int max_iter) {
    Matrix p = default_probe(spec.q);
    std::int64_t anchor = 2 * w - 1;
    LLGOperator fop = make_left_op(spec, w, OpMode::F, anchor);
    BoundaryStates b = make_boundary_states(spec.q, w, p, p);
    SingularTriplet tri = leading_singular_triplet(fop, tau, tol, max_iter);

    LsvaResult r;
    r.lambda = tri.lambda;
    r.converged = tri.converged;
    r.iterations = tri.iterations;
    r.value = -tri.lambda * formal_dot(b.left, tri.left) * tri.right.dot(b.right);
    Vector vf = b.right;
    for (int c = 0; c < tau; ++c) vf = fop.apply_at(1 + c, vf);
    r.exact = -formal_dot(b.left, vf);
    return r;
}

LsvaResult lsva_right(const GateEnsembleSpec& spec, int w, int tau, double tol,
                      int max_iter) {
    if (w < 3) throw bad_params("right-moving LSVA needs w >= 3");
    Matrix p = default_probe(spec.q);
    std::int64_t anchor = 2 * w - 1;
    LLGOperator fop;
    fop.direction = Direction::RightMoving;
    fop.mode = OpMode::F;
    fop.q = spec.q;
    fop.w = tau;
    fop.spec = spec;
    fop.anchor = anchor;
    Vector rt = right_moving_rtilde(spec, tau, p, anchor);
    Vector lt = right_moving_ltilde(spec, tau, w, p, anchor);
    SingularTriplet tri =
        leading_singular_triplet(fop, w - 2, tol, max_iter, /*column_base=*/2);
    LsvaResult r;
    r.lambda = tri.lambda;
    r.converged = tri.converged;
    r.iterations = tri.iterations;
    r.value = -tri.lambda * formal_dot(lt, tri.left) * tri.right.dot(rt);
    Vector v = rt;
    for (int c = 2; c <= w - 1; ++c) v = fop.apply_at(c, v);
    r.exact = -formal_dot(lt, v);
    return r;
}

VariationalResult variational_lsva(const GateEnsembleSpec& spec, int w, int tau,
                                   int max_sweeps, bool compare_exact) {
    if (w < 2) throw bad_params("variational ansatz needs w >= 2");
    const int q = spec.q;
    const std::int64_t d4 = replica_dim(q);
    Matrix p = default_probe(q);
    std::int64_t anchor = 2 * w - 1;
    LLGOperator fop = make_left_op(spec, w, OpMode::F, anchor);
    BoundaryStates b = make_boundary_states(q, w, p, p);

    Vector zeros = pair_product_state(pair_state(0, q), w - 1);
    Vector ones = pair_product_state(pair_state(1, q), w - 1);
    auto embed_left = [&](const Vector& u) { // |0^{w-1}> (x) |u>, u on the last site
        Vector out(zeros.size() * d4);
        for (std::int64_t i = 0; i < zeros.size(); ++i)
            out.segment(i * d4, d4) = zeros(i) * u;
        return out;
    };
    auto embed_right = [&](const Vector& v) { // |v> (x) |1^{w-1}>
        Vector out(d4 * ones.size());
        for (std::int64_t i = 0; i < d4; ++i)
            out.segment(i * ones.size(), ones.size()) = v(i) * ones;
        return out;
    };
    auto project_last = [&](const Vector& y) { // <0^{w-1}| on sites 0..w-2
        Vector u = Vector::Zero(d4);
        for (std::int64_t i = 0; i < zeros.size(); ++i)
            u += std::conj(zeros(i)) * y.segment(i * d4, d4);
        return u;
    };
    auto project_first = [&](const Vector& y) { // <1^{w-1}| on sites 1..w-1
        Vector v(d4);
        for (std::int64_t i = 0; i < d4; ++i)
            v(i) = (ones.conjugate().array() *
                    y.segment(i * ones.size(), ones.size()).array())
                       .sum();
        return v;
    };
    auto fwd = [&](Vector v) {
        for (int c = 0; c < tau; ++c) v = fop.apply_at(1 + c, v);
        return v;
    };
    auto adj = [&](Vector v) {
        for (int c = tau - 1; c >= 0; --c) v = fop.apply_adjoint_at(1 + c, v);
        return v;
    };

    Vector v = pair_state(1, q).normalized(); // bottom-site seed
    Vector u = pair_state(0, q).normalized();
    double lam = 0, prev = -1;
    int sweeps = 0;
    bool converged = false;
    for (; sweeps < max_sweeps; ++sweeps) {
        Vector y = fwd(embed_right(v).normalized());
        u = project_last(y);
        double un = u.norm();
        if (un < 1e-300) break;
        u /= un;
        Vector z = adj(embed_left(u).normalized());
        v = project_first(z);
        double vn = v.norm();
        if (vn < 1e-300) break;
        v /= vn;
        Vector l_full = embed_left(u).normalized();
        Vector r_full = embed_right(v).normalized();
        lam = std::abs(l_full.dot(fwd(r_full)));
        if (prev >= 0 && std::abs(lam - prev) <= 1e-8 * std::max(lam, 1e-300)) {
            converged = true;
            break;
        }
        prev = lam;
    }

    Vector l_full = embed_left(u).normalized();
    Vector r_full = embed_right(v).normalized();
    Complex amp = l_full.dot(fwd(r_full)); // <l|F^tau|r>, true inner product
    // phase-align the pair so the singular value is real positive
    Complex phase = amp / std::abs(amp);
    l_full *= phase;

    VariationalResult res;
    res.lambda = std::abs(amp);
    res.sweeps = sweeps;
    res.converged = converged;
    res.value = -res.lambda * formal_dot(b.left, l_full) * r_full.dot(b.right);
    res.overlap_vs_exact = std::numeric_limits<double>::quiet_NaN();
    if (compare_exact) {
        SingularTriplet tri = leading_singular_triplet(fop, tau);
        res.overlap_vs_exact =
            std::abs(tri.left.dot(l_full) * r_full.dot(tri.right));
    }
    return res;
}

ButterflyGrid butterfly_scan(const GateEnsembleSpec& spec, int w_max, int tau_max) {
    ButterflyGrid g;
    for (int w = 1; w <= w_max; ++w) g.ws.push_back(w);
    for (int tau = 1; tau <= tau_max; ++tau) g.taus.push_back(tau);
    g.c.resize(g.ws.size() * g.taus.size());
    g.c_lsva.resize(g.c.size());
    g.err.resize(g.c.size());
    for (std::size_t wi = 0; wi < g.ws.size(); ++wi) {
        int w = g.ws[wi];
        OtocSeries s = otoc_llg_left(spec, w, tau_max);
        for (std::size_t ti = 0; ti < g.taus.size(); ++ti) {
            int tau = g.taus[ti];
            LsvaResult l = lsva(spec, w, tau);
            g.c[wi * g.taus.size() + ti] = std::abs(s.points[tau - 1].value);
            g.c_lsva[wi * g.taus.size() + ti] = std::abs(l.value);
            g.err[wi * g.taus.size() + ti] =
                std::abs(s.points[tau - 1].value - l.value);
        }
    }
    return g;
}

void write_otoc_csv(const OtocSeries& s, const std::string& path,
                    const std::string& provenance) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << "# " << provenance << "\n";
    os << "model,seed,q,w,tau,x,t,method,C_re,C_im,err_abs\n";
    for (const auto& pt : s.points)
        os << model_name(s.spec.model) << "," << s.spec.seed << "," << s.spec.q
           << "," << pt.w << "," << pt.tau << "," << pt.x << "," << pt.t << ","
           << pt.method << "," << pt.value.real() << "," << pt.value.imag()
           << ",0\n";
}

} // namespace llg
