#include "llg/analytic.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <functional>

namespace llg {

double weingarten(int i, int j, int n) {
    double n2 = double(n) * n;
    return i == j ? 1.0 / (n2 - 1.0) : -1.0 / (n * (n2 - 1.0));
}

double averaged_m_entry(int i, int a, int b, int q) {
    if (a == b) return a == i ? 1.0 : 0.0;
    return q / (double(q) * q + 1.0);
}

Matrix averaged_llg(int q, int w) {
    if (w > 20) throw too_large_error("averaged_llg guard: w <= 20");
    std::int64_t dim = std::int64_t(1) << w;
    Matrix t = Matrix::Zero(dim, dim);
    for (std::int64_t iv = 0; iv < dim; ++iv) {
        for (std::int64_t jv = 0; jv < dim; ++jv) {
            double prod = 1.0;
            int prev = 0; // i_0 = 0
            for (int k = 0; k < w && prod != 0.0; ++k) {
                int ik = int((iv >> (w - 1 - k)) & 1);
                int jk = int((jv >> (w - 1 - k)) & 1);
                prod *= averaged_m_entry(ik, prev, jk, q);
                prev = ik;
            }
            if (prod != 0.0 && ((iv & 1) != 0)) prod *= q; // weight for i_w = 1
            t(iv, jv) = prod;
        }
    }
    return t;
}

std::vector<double> averaged_llg_diagonal_spectrum(int q, int w) {
    // Exact eigenvalues: the matrix is upper triangular after the domain-wall
    // reordering, so the diagonal entries are the spectrum; they read off the
    // domain-wall count of (0, i_1, ..., i_w).
    std::int64_t dim = std::int64_t(1) << w;
    std::vector<double> vals;
    vals.reserve(std::size_t(dim));
    for (std::int64_t iv = 0; iv < dim; ++iv) {
        int walls = 0, prev = 0;
        for (int k = 0; k < w; ++k) {
            int ik = int((iv >> (w - 1 - k)) & 1);
            if (ik != prev) ++walls;
            prev = ik;
        }
        vals.push_back(hrm_epsilon(q, walls));
    }
    return vals;
}

std::vector<int> averaged_llg_triangular_order(int w) {
    std::vector<int> order{0, 1};
    for (int len = 2; len <= w; ++len) {
        std::vector<int> next(std::size_t(1) << len);
        std::int64_t half = std::int64_t(1) << (len - 1);
        std::int64_t mask = half - 1;
        for (std::int64_t m = 0; m < half; ++m) {
            next[m] = int(order[m]);                         // 0 prefix
            next[half + m] = int(half | (~order[m] & mask)); // 1 prefix, flipped
        }
        order.assign(next.begin(), next.end());
    }
    order.resize(std::size_t(1) << w);
    return order;
}

double hrm_epsilon(int q, int n) {
    double base = q / (double(q) * q + 1.0);
    double v = std::pow(base, n);
    return n % 2 == 0 ? v : q * v;
}

std::vector<EigenvalueMultiplicity> hrm_eigenvalues(int q, int w) {
    std::vector<EigenvalueMultiplicity> out;
    std::int64_t binom = 1;
    for (int n = 0; n < w; ++n) {
        out.push_back({hrm_epsilon(q, n), binom});
        binom = binom * (w - n) / (n + 1);
    }
    return out;
}

namespace {

Matrix site_gram(int q) {
    Matrix u(2, 2);
    u << q, 1, 1, q;
    return u;
}

Matrix kron_pow(const Matrix& a, int n) {
    Matrix out = Matrix::Identity(1, 1);
    for (int k = 0; k < n; ++k) {
        Matrix next(out.rows() * a.rows(), out.cols() * a.cols());
        for (std::int64_t i = 0; i < out.rows(); ++i)
            for (std::int64_t j = 0; j < out.cols(); ++j)
                next.block(i * a.rows(), j * a.cols(), a.rows(), a.cols()) =
                    out(i, j) * a;
        out.swap(next);
    }
    return out;
}

Vector kron_vec(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (std::int64_t i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

Matrix matrix_sqrt_spd(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    return es.eigenvectors() *
           es.eigenvalues().cwiseSqrt().asDiagonal().toDenseMatrix().cast<Complex>() *
           es.eigenvectors().adjoint();
}

} // namespace

ReducedHrm::ReducedHrm(int q, int w) : q_(q), w_(w) {
    t_ = averaged_llg(q, w);
    std::int64_t dim = t_.rows();

    row1_ = Vector(dim);
    for (std::int64_t j = 0; j < dim; ++j)
        row1_(j) = std::pow(double(q), __builtin_popcountll(j));
    f_ = t_;
    f_.row(0) -= row1_.transpose(); // F = T - |0^w><1^w|, e_0 is |0^w>

    gram_ = kron_pow(site_gram(q), w);
    gram_half_ = matrix_sqrt_spd(gram_);
    gram_half_inv_ = gram_half_.inverse();

    // boundary data for the default traceless unitary probe
    Matrix uinv = site_gram(q).inverse();
    Vector m_probe(2), m_plain(2);
    m_probe << 0, 1; // (<0|R_site>, <1|R_site>) for a traceless unitary probe
    m_plain << q, 1;
    Vector c_site = uinv * m_probe;
    Vector c_zero = uinv * m_plain; // = (1, 0)
    c_r_ = c_site;
    for (int k = 1; k < w; ++k) c_r_ = kron_vec(c_r_, c_zero);

    Vector l_plain(2), l_probe(2);
    l_plain << 1, q; // formal <1| against |0>, |1>
    l_probe << 1, 0; // formal <1_{s,s^dag}| against |0>, |1>
    ell_ = Vector::Ones(1);
    for (int k = 0; k < w - 1; ++k) ell_ = kron_vec(ell_, l_plain);
    ell_ = kron_vec(ell_, l_probe);
}

Complex ReducedHrm::otoc(int tau) const {
    Vector v = c_r_;
    for (int k = 0; k < tau; ++k) v = f_ * v;
    return -(ell_.transpose() * v)(0);
}

std::vector<Complex> ReducedHrm::otoc_series(int tau_max) const {
    std::vector<Complex> out;
    Vector v = c_r_;
    for (int tau = 1; tau <= tau_max; ++tau) {
        v = f_ * v;
        out.push_back(-(ell_.transpose() * v)(0));
    }
    return out;
}

ReducedHrm::Triplet ReducedHrm::leading_triplet(int tau) const {
    Matrix ftau = Matrix::Identity(f_.rows(), f_.cols());
    for (int k = 0; k < tau; ++k) ftau = f_ * ftau;
    Matrix s = gram_half_ * ftau * gram_half_inv_;
    Eigen::JacobiSVD<Matrix> svd(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Triplet tr;
    tr.lambda = svd.singularValues()(0);
    tr.left_coeff = gram_half_inv_ * svd.matrixU().col(0);
    tr.right_coeff = gram_half_inv_ * svd.matrixV().col(0);
    return tr;
}

Complex ReducedHrm::lsva(int tau) const {
    Triplet tr = leading_triplet(tau);
    Complex left_ov = (ell_.transpose() * tr.left_coeff)(0);
    Complex right_ov = (tr.right_coeff.adjoint() * gram_ * c_r_)(0);
    return -tr.lambda * left_ov * right_ov;
}

ReducedHrm::Variational ReducedHrm::variational(int tau, int max_sweeps) const {
    std::int64_t half_dim = std::int64_t(1) << (w_ - 1);
    Matrix ftau = Matrix::Identity(f_.rows(), f_.cols());
    for (int k = 0; k < tau; ++k) ftau = f_ * ftau;
    Matrix fadj_coeff = gram_.inverse() * ftau.adjoint() * gram_;

    Matrix u2 = site_gram(q_);
    Vector row0 = u2.row(0); // (q, 1): <0| against pair states
    Vector col1 = u2.col(1); // (1, q): <1| against pair states

    auto contract_front = [&](const Vector& y) { // sum over first w-1 sites with <0|
        Vector out = Vector::Zero(2);
        for (std::int64_t j = 0; j < y.size(); ++j) {
            double wgt = 1;
            for (int k = 0; k < w_ - 1; ++k)
                wgt *= row0(int((j >> (w_ - 1 - k)) & 1)).real();
            out(j & 1) += wgt * y(j);
        }
        return out;
    };
    auto contract_back = [&](const Vector& y) { // sum over last w-1 sites with <1|
        Vector out = Vector::Zero(2);
        for (std::int64_t j = 0; j < y.size(); ++j) {
            double wgt = 1;
            for (int k = 1; k < w_; ++k)
                wgt *= col1(int((j >> (w_ - 1 - k)) & 1)).real();
            out((j >> (w_ - 1)) & 1) += wgt * y(j);
        }
        return out;
    };

    Vector e_zeros = Vector::Zero(half_dim);
    e_zeros(0) = 1;
    Vector e_ones = Vector::Zero(half_dim);
    e_ones(half_dim - 1) = 1;

    auto embed_l = [&](const Vector& u) { return kron_vec(e_zeros, u); };
    auto embed_r = [&](const Vector& v) { return kron_vec(v, e_ones); };
    auto true_norm = [&](const Vector& c) {
        return std::sqrt(std::abs((c.adjoint() * gram_ * c)(0).real()));
    };

    Vector u(2), v(2);
    u << 0, 1;
    v << 0, 1;
    double lam = 0, prev = -1;
    int sweeps = 0;
    for (; sweeps < max_sweeps; ++sweeps) {
        Vector r = embed_r(v) / true_norm(embed_r(v));
        Vector y = ftau * r;
        u = contract_front(y);
        if (u.norm() < 1e-300) break;
        Vector l = embed_l(u) / true_norm(embed_l(u));
        Vector z = fadj_coeff * l;
        v = contract_back(z);
        if (v.norm() < 1e-300) break;
        Vector lc = embed_l(u) / true_norm(embed_l(u));
        Vector rc = embed_r(v) / true_norm(embed_r(v));
        lam = std::abs((lc.adjoint() * gram_ * (ftau * rc))(0));
        if (prev >= 0 && std::abs(lam - prev) <= 1e-8 * std::max(lam, 1e-300)) break;
        prev = lam;
    }

    Vector lc = embed_l(u) / true_norm(embed_l(u));
    Vector rc = embed_r(v) / true_norm(embed_r(v));
    Complex amp = (lc.adjoint() * gram_ * (ftau * rc))(0);
    Complex phase = amp / std::abs(amp);
    lc *= phase;

    Variational res;
    res.lambda = std::abs(amp);
    res.sweeps = sweeps;
    Complex left_ov = (ell_.transpose() * lc)(0);
    Complex right_ov = (rc.adjoint() * gram_ * c_r_)(0);
    res.value = -res.lambda * left_ov * right_ov;
    Triplet tr = leading_triplet(tau);
    Complex o1 = (tr.left_coeff.adjoint() * gram_ * lc)(0);
    Complex o2 = (rc.adjoint() * gram_ * tr.right_coeff)(0);
    res.overlap_vs_exact = std::abs(o1 * o2);
    return res;
}

Vector ReducedHrm::embed(const Vector& coeff) const {
    Vector p0 = pair_state(0, q_), p1 = pair_state(1, q_);
    std::int64_t d4 = replica_dim(q_);
    std::int64_t full = ipow(q_, 4 * w_);
    Vector out = Vector::Zero(full);
    for (std::int64_t j = 0; j < coeff.size(); ++j) {
        if (coeff(j) == Complex(0, 0)) continue;
        Vector acc = Vector::Ones(1);
        for (int k = 0; k < w_; ++k)
            acc = kron_vec(acc, ((j >> (w_ - 1 - k)) & 1) ? p1 : p0);
        out += coeff(j) * acc;
    }
    (void)d4;
    return out;
}

Vector ReducedHrm::project(const Vector& full) const {
    Vector p0 = pair_state(0, q_), p1 = pair_state(1, q_);
    std::int64_t dim = std::int64_t(1) << w_;
    Vector m(dim);
    std::int64_t d4 = replica_dim(q_);
    for (std::int64_t j = 0; j < dim; ++j) {
        // overlap <pair_j|full> by sequential per-site contraction
        Vector cur = full;
        for (int k = 0; k < w_; ++k) {
            const Vector& site = ((j >> (w_ - 1 - k)) & 1) ? p1 : p0;
            std::int64_t blocks = cur.size() / d4;
            Vector next(blocks);
            for (std::int64_t bkt = 0; bkt < blocks; ++bkt) {
                Complex acc(0, 0);
                for (std::int64_t y = 0; y < d4; ++y)
                    acc += std::conj(site(y)) * cur(bkt * d4 + y);
                next(bkt) = acc;
            }
            cur.swap(next);
        }
        m(j) = cur(0);
    }
    // coefficients = Gram^{-1} overlaps
    return gram_.inverse() * m;
}

Vector ReducedHrm::z2_right_coeff_site() const {
    Vector v(2);
    v << -q_, 1; // |z2^R> = |1> - q|0>, orthogonal to <1|
    return v / std::sqrt(std::abs(
                   (v.adjoint() * site_gram(q_) * v)(0).real()));
}

Vector ReducedHrm::z2_left_coeff_site() const {
    ReducedHrm one(q_, 1);
    Eigen::ComplexEigenSolver<Matrix> es(one.f().transpose(), true);
    int best = 0;
    for (int i = 1; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(best)))
            best = i;
    Vector v = es.eigenvectors().col(best);
    return v;
}

RestrictedLLG restricted_tprime(int q, int w) {
    double z2 = double(q) * q / (double(q) * q + 1.0);
    Matrix tp = Matrix::Zero(w + 1, w + 1);
    for (int m = 0; m < w; ++m)
        for (int n = 0; n <= m; ++n)
            tp(m, n) = z2 * std::pow(z2 / q, m - n);
    tp(w, w) = 1.0;
    Eigen::VectorXd chi(w + 1);
    for (int j = 0; j < w; ++j)
        chi(j) = std::pow(double(q), w - j - 1) * std::sqrt(double(q) * q - 1.0);
    chi(w) = 1.0;
    // last row from <1^w| T' = <1^w|: y = chi - chi R
    for (int n = 0; n < w; ++n) {
        double acc = 0;
        for (int m = 0; m < w; ++m) acc += chi(m) * tp(m, n).real();
        tp(w, n) = chi(n) - acc;
    }
    return {q, w, tp, chi};
}

double log_binomial(double n, double k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

std::vector<double> hrm_chi_r_tau(int q, int w, int tau) {
    double z2 = double(q) * q / (double(q) * q + 1.0);
    double log_z2 = std::log(z2);
    double log_one_minus = std::log(1.0 - z2);
    double log_chi_unit = 0.5 * std::log(double(q) * q - 1.0);
    double log_q = std::log(double(q));
    std::vector<double> out(w); // log of components
    for (int n = 0; n < w; ++n) {
        // (chi R^tau)_n = chi(w-n) * sum_{k=0}^{w-1-n} NB(k; tau, z2)
        double log_chi = (w - n - 1) * log_q + log_chi_unit;
        double m = -std::numeric_limits<double>::infinity();
        std::vector<double> terms;
        for (int k = 0; k + n <= w - 1; ++k) {
            double lt = log_binomial(tau + k - 1, k) + k * log_one_minus +
                        tau * log_z2;
            terms.push_back(lt);
            m = std::max(m, lt);
        }
        double s = 0;
        for (double lt : terms) s += std::exp(lt - m);
        out[n] = log_chi + m + std::log(s);
    }
    return out;
}

double hrm_leading_sv_exact(int q, int w, int tau) {
    std::vector<double> lg = hrm_chi_r_tau(q, w, tau);
    double m = -std::numeric_limits<double>::infinity();
    for (double v : lg) m = std::max(m, v);
    if (!std::isfinite(m)) return 0;
    double s = 0;
    for (double v : lg) s += std::exp(2 * (v - m));
    return std::exp(m) * std::sqrt(s);
}

double butterfly_velocity(int q) {
    return (double(q) * q - 1.0) / (double(q) * q + 1.0);
}

double butterfly_sigma(int q, double time) {
    return 2.0 * q * std::sqrt(time) / (double(q) * q + 1.0);
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0) throw quadrature_failure("adaptive Simpson depth exhausted");
    if (std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

} // namespace

double f_tau(double x, int tau, int q, double rel_tol) {
    if (x <= 0 || tau < 1) throw bad_params("f_tau needs x > 0, tau >= 1");
    double z2 = double(q) * q / (double(q) * q + 1.0);
    // w'-integral form; the exponent's zero sits at w' = tau (1-z2)/z2,
    // the negative-binomial mean, matching the (x,t) Gaussian with front
    // x = -v_b t.
    auto integrand = [&](double wp) {
        double pref = std::sqrt(z2 / (2.0 * M_PI * (1.0 - z2) * (wp + tau)));
        double num = z2 * wp - (1.0 - z2) * tau;
        double arg = -num * num / (2.0 * z2 * (1.0 - z2) * (tau + wp));
        return pref * std::exp(arg);
    };
    // The integral stands in for a partial sum over integer w'; the
    // Euler-Maclaurin-consistent endpoint for sum_{k=0}^{J} is J + 1/2,
    // i.e. x tau - 1/2 when the last retained term is x tau - 1.
    double a = 0, b = std::max(0.0, x * tau - 0.5);
    if (b <= a) return 0.0;
    double fa = integrand(a), fb = integrand(b), fm = integrand(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    double scale = std::max(std::abs(whole), 1e-12);
    return adaptive_simpson(integrand, a, b, fa, fm, fb, whole, rel_tol * scale,
                            60);
}

DuClosedForm du_closed_form(int q, int w, int tau) {
    (void)tau; // both restrictions are tau-independent
    DuClosedForm out;
    out.t_restricted = Matrix::Identity(2, 2);
    double off = std::sqrt(std::pow(double(q), 2 * w) - 1.0);
    out.f_restricted = Matrix::Zero(2, 2);
    out.f_restricted(0, 1) = -off;
    out.f_restricted(1, 1) = 1.0;
    out.norm_t = 1.0;
    out.norm_f = std::pow(double(q), w);
    return out;
}

LocalizedClosedForm localized_closed_form(int q, int w, int tau) {
    LocalizedClosedForm out;
    out.norm_t = q;
    out.norm_f = tau < w ? std::pow(double(q), w) : 0.0;
    Matrix t = Matrix::Zero(w + 1, w + 1);
    for (int m = 0; m + 1 <= w - 1; ++m) t(m + 1, m) = q;
    double chi1 = std::sqrt(double(q) * q - 1.0);
    t(w, w - 1) = chi1;
    t(w, w) = 1.0;
    out.t_restricted = t;
    Eigen::VectorXd chi(w + 1);
    for (int j = 0; j < w; ++j)
        chi(j) = std::pow(double(q), w - j - 1) * chi1;
    chi(w) = 1.0;
    Matrix f = t;
    for (int nn = 0; nn <= w; ++nn) f(w, nn) -= chi(nn);
    out.f_restricted = f;
    return out;
}

} // namespace llg
