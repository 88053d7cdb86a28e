#include "llg/replica.hpp"

namespace llg {

Vector make_pair_state(int kind, const Matrix& sigma, const Matrix& mu, int q) {
    if (sigma.rows() != q || sigma.cols() != q || mu.rows() != q || mu.cols() != q)
        throw dimension_mismatch("decoration must be q x q");
    if (kind != 0 && kind != 1) throw bad_params("pair state kind must be 0 or 1");
    Vector v(replica_dim(q));
    double pref = 1.0 / std::sqrt(static_cast<double>(q));
    std::int64_t idx = 0;
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
            for (int c = 0; c < q; ++c)
                for (int d = 0; d < q; ++d, ++idx)
                    v(idx) = pref * (kind == 0 ? sigma(a, b) * mu(c, d)
                                               : sigma(b, c) * mu(d, a));
    return v;
}

Vector pair_state(int kind, int q) {
    Matrix id = Matrix::Identity(q, q);
    return make_pair_state(kind, id, id, q);
}

Vector pair_product_state(const Vector& site, int w) {
    Vector v = site;
    for (int i = 1; i < w; ++i) {
        Vector next(v.size() * site.size());
        for (std::int64_t a = 0; a < v.size(); ++a)
            next.segment(a * site.size(), site.size()) = v(a) * site;
        v.swap(next);
    }
    return v;
}

Matrix generalized_pauli(int j, int k, int q) {
    if (j < 0 || j >= q || k < 0 || k >= q)
        throw bad_params("generalized Pauli labels must lie in [0,q)");
    Matrix m = Matrix::Zero(q, q);
    const double two_pi = 6.283185307179586476925287;
    for (int col = 0; col < q; ++col)
        m((col + k) % q, col) = std::exp(Complex(0, two_pi * j * col / q));
    return m;
}

Matrix replicate_gate(const UnitaryGate& gate, std::int64_t max_dim) {
    int q = gate.q;
    std::int64_t d4 = replica_dim(q);
    std::int64_t dim = d4 * d4;
    if (dim > max_dim)
        throw too_large_error("replicated gate too large to materialize");
    const Matrix& u = gate.matrix;
    Matrix uc = u.conjugate();
    Matrix g(dim, dim);
    auto phys = [q](int l, int r) { return l * q + r; };
    // row (A1,A2), col (B1,B2); per copy: u on (a1,a2)<-(b1,b2), u* on b/d
    for (std::int64_t row = 0; row < dim; ++row) {
        std::int64_t r = row;
        int a2[4];
        for (int k = 3; k >= 0; --k) { a2[k] = static_cast<int>(r % q); r /= q; }
        int a1[4];
        for (int k = 3; k >= 0; --k) { a1[k] = static_cast<int>(r % q); r /= q; }
        for (std::int64_t col = 0; col < dim; ++col) {
            std::int64_t cTmp = col;
            int b2[4];
            for (int k = 3; k >= 0; --k) { b2[k] = static_cast<int>(cTmp % q); cTmp /= q; }
            int b1[4];
            for (int k = 3; k >= 0; --k) { b1[k] = static_cast<int>(cTmp % q); cTmp /= q; }
            Complex val = u(phys(a1[0], a2[0]), phys(b1[0], b2[0])) *
                          uc(phys(a1[1], a2[1]), phys(b1[1], b2[1])) *
                          u(phys(a1[2], a2[2]), phys(b1[2], b2[2])) *
                          uc(phys(a1[3], a2[3]), phys(b1[3], b2[3]));
            g(row, col) = val;
        }
    }
    return g;
}

} // namespace llg
