#include "llg/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>

namespace llg {

namespace {

Vector seeded_start(std::int64_t dim, std::uint64_t seed) {
    Rng rng(mix_u64(seed ^ 0xd1b54a32d192ed03ull));
    Vector v = Vector::Ones(dim);
    for (std::int64_t i = 0; i < dim; ++i)
        v(i) += Complex(0.05 * rng.next_normal(), 0.05 * rng.next_normal());
    v.normalize();
    return v;
}

} // namespace

SingularTriplet leading_singular_triplet(const LLGOperator& op, int tau,
                                         double tol, int max_iter,
                                         int column_base, std::uint64_t seed) {
    if (tau < 1) throw bad_params("leading_singular_triplet needs tau >= 1");
    auto fwd = [&](Vector v) {
        for (int c = 0; c < tau; ++c) v = op.apply_at(column_base + c, v);
        return v;
    };
    auto adj = [&](Vector v) {
        for (int c = tau - 1; c >= 0; --c)
            v = op.apply_adjoint_at(column_base + c, v);
        return v;
    };

    SingularTriplet out;
    Vector v = seeded_start(op.dim(), seed);
    double prev = -1;
    for (int it = 1; it <= max_iter; ++it) {
        Vector u = fwd(v);
        double lam = u.norm();
        out.iterations = it;
        if (lam < 1e-300) { // operator power annihilates the start vector
            out.lambda = 0;
            out.left = u;
            out.right = v;
            out.converged = true;
            out.residual = 0;
            return out;
        }
        u /= lam;
        Vector vn = adj(u);
        double vn_norm = vn.norm();
        if (vn_norm < 1e-300) {
            out.lambda = lam;
            out.left = u;
            out.right = v;
            out.converged = true;
            return out;
        }
        v = vn / vn_norm;
        out.lambda = lam;
        out.left = u;
        out.right = v;
        if (prev >= 0 && std::abs(lam - prev) <= tol * std::max(lam, 1e-300)) {
            out.converged = true;
            break;
        }
        prev = lam;
    }
    Vector check = fwd(out.right);
    out.lambda = check.norm();
    if (out.lambda > 0) {
        out.left = check / out.lambda;
        // adjoint-consistency residual: ||(F^tau)^dag u - lambda v|| / lambda
        out.residual = (adj(out.left) - out.lambda * out.right).norm() / out.lambda;
    }
    return out;
}

std::vector<EigenCluster> cluster_eigenvalues(std::vector<Complex> vals,
                                              double delta) {
    const int n = static_cast<int>(vals.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(vals[i] - vals[j]) < delta) parent[find(i)] = find(j);
    std::vector<EigenCluster> out;
    std::vector<int> root_index(n, -1);
    for (int i = 0; i < n; ++i) {
        int r = find(i);
        if (root_index[r] < 0) {
            root_index[r] = static_cast<int>(out.size());
            out.push_back({vals[i], 0});
        }
        auto& cl = out[root_index[r]];
        cl.representative =
            (cl.representative * double(cl.multiplicity) + vals[i]) /
            double(cl.multiplicity + 1);
        cl.multiplicity += 1;
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::abs(a.representative) > std::abs(b.representative);
    });
    return out;
}

SpectrumReport eigen_spectrum(const LLGOperator& op, double delta_cluster,
                              std::int64_t max_dim) {
    Matrix t = op.dense(max_dim);
    SpectrumReport rep;
    Eigen::ComplexEigenSolver<Matrix> es(t, /*computeEigenvectors=*/false);
    rep.eigenvalues.assign(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
    rep.clusters = cluster_eigenvalues(rep.eigenvalues, delta_cluster);

    LLGOperator fop = op;
    fop.mode = OpMode::F;
    Matrix f = fop.dense(max_dim);
    Eigen::ComplexEigenSolver<Matrix> esf(f, false);
    Complex z2 = 0;
    for (int i = 0; i < esf.eigenvalues().size(); ++i)
        if (std::abs(esf.eigenvalues()(i)) > std::abs(z2))
            z2 = esf.eigenvalues()(i);
    rep.z2 = z2;

    LLGOperator top = op;
    top.mode = OpMode::T;
    double nrm = operator_norm_estimate(top);
    rep.alpha = std::log(nrm) / std::log(double(op.q));
    return rep;
}

Complex arnoldi_leading(const std::function<Vector(const Vector&)>& apply,
                        std::int64_t dim, int krylov, int restarts, double tol,
                        std::uint64_t seed) {
    int m = static_cast<int>(std::min<std::int64_t>(krylov, dim));
    Vector start = seeded_start(dim, seed);
    Complex best = 0;
    double prev_mod = -1;
    for (int r = 0; r < restarts; ++r) {
        std::vector<Vector> basis;
        basis.reserve(m + 1);
        basis.push_back(start.normalized());
        Matrix h = Matrix::Zero(m + 1, m);
        int built = 0;
        bool breakdown = false;
        for (int j = 0; j < m; ++j) {
            Vector wv = apply(basis[j]);
            for (int i = 0; i <= j; ++i) {
                Complex hij = basis[i].dot(wv);
                h(i, j) += hij;
                wv -= hij * basis[i];
            }
            for (int i = 0; i <= j; ++i) { // one reorthogonalization pass
                Complex c = basis[i].dot(wv);
                h(i, j) += c;
                wv -= c * basis[i];
            }
            double nw = wv.norm();
            built = j + 1;
            if (nw < 1e-13) {
                breakdown = true;
                break;
            }
            h(j + 1, j) = nw;
            basis.push_back(wv / nw);
        }
        Matrix hm = h.topLeftCorner(built, built);
        Eigen::ComplexEigenSolver<Matrix> es(hm, true);
        int lead = 0;
        for (int i = 1; i < built; ++i)
            if (std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(lead)))
                lead = i;
        best = es.eigenvalues()(lead);
        // Ritz vector for the restart
        Vector ritz = Vector::Zero(dim);
        for (int i = 0; i < built; ++i)
            ritz += es.eigenvectors()(i, lead) * basis[i];
        double resid = breakdown
                           ? 0
                           : std::abs(h(built, built - 1) *
                                      es.eigenvectors()(built - 1, lead));
        start = ritz;
        double mod = std::abs(best);
        if (breakdown || resid < tol * std::max(mod, 1e-300)) return best;
        if (prev_mod >= 0 && std::abs(mod - prev_mod) < tol * std::max(mod, 1e-300))
            return best;
        prev_mod = mod;
    }
    return best; // best available estimate after all restarts
}

Complex subleading_eigenvalue(const GateEnsembleSpec& spec, int w, int krylov,
                              double tol) {
    LLGOperator op;
    op.q = spec.q;
    op.w = w;
    op.spec = spec;
    op.mode = OpMode::F;
    if (op.dim() <= 256) {
        Matrix f = op.dense();
        Eigen::ComplexEigenSolver<Matrix> es(f, false);
        Complex z2 = 0;
        for (int i = 0; i < es.eigenvalues().size(); ++i)
            if (std::abs(es.eigenvalues()(i)) > std::abs(z2))
                z2 = es.eigenvalues()(i);
        return z2;
    }
    auto apply = [&](const Vector& v) { return op.apply_at(1, v); };
    return arnoldi_leading(apply, op.dim(), krylov, 20, tol);
}

std::vector<RecursionRow> recursion_check(const std::vector<EigenCluster>& spec_w2,
                                          const std::vector<EigenCluster>& spec_w1,
                                          const std::vector<EigenCluster>& spec_w,
                                          double delta) {
    auto mult_at = [&](const std::vector<EigenCluster>& cl, Complex z) {
        for (const auto& c : cl)
            if (std::abs(c.representative - z) < delta) return c.multiplicity;
        return 0;
    };
    std::vector<RecursionRow> rows;
    for (const auto& c : spec_w) {
        RecursionRow r;
        r.z = c.representative;
        r.a_w = c.multiplicity;
        r.a_w1 = mult_at(spec_w1, c.representative);
        r.a_w2 = mult_at(spec_w2, c.representative);
        r.a_tilde = r.a_w - 2 * r.a_w1 + r.a_w2;
        rows.push_back(r);
    }
    return rows;
}

TailFit tail_fit(const std::vector<double>& taus, const std::vector<double>& cabs,
                 double resid_tol, int min_points) {
    if (taus.size() != cabs.size()) throw dimension_mismatch("tail_fit sizes");
    std::vector<double> lt, lc;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (!(cabs[i] > 1e-280) || !std::isfinite(cabs[i])) continue;
        lt.push_back(taus[i]);
        lc.push_back(std::log(cabs[i]));
    }
    const int n = static_cast<int>(lt.size());
    if (n < min_points) throw insufficient_tail("fewer than the required usable points");

    auto fit_suffix = [&](int s) {
        int m = n - s;
        Eigen::MatrixXd a(m, 3);
        Eigen::VectorXd b(m);
        for (int i = 0; i < m; ++i) {
            a(i, 0) = std::log(lt[s + i]);
            a(i, 1) = lt[s + i];
            a(i, 2) = 1.0;
            b(i) = lc[s + i];
        }
        Eigen::Vector3d coef = a.colPivHouseholderQr().solve(b);
        double rms = std::sqrt((a * coef - b).squaredNorm() / m);
        return std::pair<Eigen::Vector3d, double>(coef, rms);
    };

    TailFit best;
    double best_rms = std::numeric_limits<double>::infinity();
    for (int s = 0; s + min_points <= n; ++s) {
        auto [coef, rms] = fit_suffix(s);
        if (rms < resid_tol) {
            best.phi = coef(0);
            best.z2_fit = std::exp(coef(1));
            best.constant = coef(2);
            best.window_start = s;
            best.points_used = n - s;
            best.rms = rms;
            best.window_ok = true;
            return best;
        }
        if (rms < best_rms) {
            best_rms = rms;
            best.phi = coef(0);
            best.z2_fit = std::exp(coef(1));
            best.constant = coef(2);
            best.window_start = s;
            best.points_used = n - s;
            best.rms = rms;
            best.window_ok = false;
        }
    }
    return best;
}

} // namespace llg
