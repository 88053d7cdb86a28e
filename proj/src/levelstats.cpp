#include "llg/levelstats.hpp"
#include "llg/replica.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace llg {

namespace {

// apply the two-site gate g to the row legs (site_a, site_b) of m
void gate_rows(Matrix& m, const Matrix& g, int q, std::int64_t stride_a,
               std::int64_t stride_b) {
    const std::int64_t d = m.rows();
    const int q2 = q * q;
    Vector x(q2), y(q2);
    std::vector<std::int64_t> bases;
    bases.reserve(d / q2);
    // enumerate row indices with both legs at digit zero
    for (std::int64_t r = 0; r < d; ++r) {
        if ((r / stride_a) % q != 0 || (r / stride_b) % q != 0) continue;
        bases.push_back(r);
    }
    for (std::int64_t col = 0; col < d; ++col) {
        for (std::int64_t base : bases) {
            for (int a = 0; a < q; ++a)
                for (int b = 0; b < q; ++b)
                    x(a * q + b) = m(base + a * stride_a + b * stride_b, col);
            y.noalias() = g * x;
            for (int a = 0; a < q; ++a)
                for (int b = 0; b < q; ++b)
                    m(base + a * stride_a + b * stride_b, col) = y(a * q + b);
        }
    }
}

std::int64_t translate2(std::int64_t b, int q, int sites) {
    // digit of new site k = digit of old site (k+2) mod L
    std::vector<int> d(sites);
    std::int64_t t = b;
    for (int k = sites - 1; k >= 0; --k) {
        d[k] = int(t % q);
        t /= q;
    }
    std::int64_t out = 0;
    for (int k = 0; k < sites; ++k) out = out * q + d[(k + 2) % sites];
    return out;
}

} // namespace

Matrix build_floquet(const GateEnsembleSpec& spec, int sites)
{
    if (sites % 2 != 0) throw bad_params("build_floquet needs even L");
    std::int64_t d = ipow(spec.q, sites);
    if (d > (1 << 14)) throw too_large_error("build_floquet guard: q^L <= 2^14");
    const int q = spec.q;
    Matrix f = Matrix::Identity(d, d);
    for (int layer = 1; layer <= 2; ++layer) {
        for (int i = layer % 2; i < sites; i += 2) {
            int j = (i + 1) % sites;
            std::int64_t sa = ipow(q, sites - 1 - i);
            std::int64_t sb = ipow(q, sites - 1 - j);
            gate_rows(f, build_gate(spec, layer, i).matrix, q, sa, sb);
        }
    }
    return f;
}

FloquetSpectrum sector_spacings(const Matrix& floquet, int q, int sites,
                                const SectorOptions& opt) {
    const std::int64_t d = floquet.rows();
    const int period = sites / 2;

    // translation-symmetry check on random vectors
    {
        Rng rng(0x51ed270b21f24f13ull);
        Vector v(d);
        for (std::int64_t i = 0; i < d; ++i) v(i) = rng.next_complex_normal();
        Vector tv(d);
        for (std::int64_t i = 0; i < d; ++i) tv(translate2(i, q, sites)) = v(i);
        Vector a = floquet * tv;
        Vector b = floquet * v;
        Vector tb(d);
        for (std::int64_t i = 0; i < d; ++i) tb(translate2(i, q, sites)) = b(i);
        if ((a - tb).norm() / b.norm() > opt.commute_tol)
            throw not_symmetric("Floquet operator does not commute with T^2");
    }

    // orbit decomposition under the 2-site translation
    std::vector<std::int64_t> orbit_rep(d, -1);
    std::vector<std::vector<std::int64_t>> orbits;
    for (std::int64_t b = 0; b < d; ++b) {
        if (orbit_rep[b] >= 0) continue;
        std::vector<std::int64_t> orb{b};
        std::int64_t cur = translate2(b, q, sites);
        while (cur != b) {
            orb.push_back(cur);
            cur = translate2(cur, q, sites);
        }
        for (std::int64_t s : orb) orbit_rep[s] = b;
        orbits.push_back(std::move(orb));
    }

    const Complex i_unit(0, 1);
    const double two_pi = 2 * M_PI;
    std::vector<Vector> columns;
    for (const auto& orb : orbits) {
        int len = int(orb.size());
        if ((std::int64_t(opt.momentum) * len) % period != 0) continue;
        if (opt.resolve_z2 && q == 2) {
            int par = __builtin_popcountll(orb[0]) % 2;
            if (par != 0) continue; // Z2-even sector
        }
        Vector col = Vector::Zero(d);
        for (int m = 0; m < len; ++m)
            col(orb[m]) += std::exp(-i_unit * (two_pi * opt.momentum * m / period)) /
                           std::sqrt(double(len));
        columns.push_back(col);
    }
    Matrix v(d, std::int64_t(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) v.col(c) = columns[c];

    Matrix block = v.adjoint() * (floquet * v);

    int ph_sector = 0;
    if (opt.resolve_ph && q == 2) {
        // (x)sigma_x within the momentum (and Z2) block
        Matrix xb = Matrix::Zero(block.rows(), block.cols());
        std::int64_t mask = d - 1;
        Matrix xv(d, v.cols());
        for (std::int64_t r = 0; r < d; ++r) xv.row(r) = v.row((~r) & mask);
        xb = v.adjoint() * xv;
        double resid = (block * xb - xb * block).cwiseAbs().maxCoeff();
        if (resid > opt.commute_tol)
            throw not_symmetric("particle-hole operator does not commute in-sector");
        Eigen::SelfAdjointEigenSolver<Matrix> es(xb);
        std::int64_t keep = 0;
        for (int k = 0; k < es.eigenvalues().size(); ++k)
            if (es.eigenvalues()(k) > 0) ++keep;
        Matrix vp(block.rows(), keep);
        std::int64_t c = 0;
        for (int k = 0; k < es.eigenvalues().size(); ++k)
            if (es.eigenvalues()(k) > 0) vp.col(c++) = es.eigenvectors().col(k);
        block = (vp.adjoint() * block * vp).eval();
        ph_sector = 1;
    }

    Eigen::ComplexEigenSolver<Matrix> es(block, false);
    std::vector<double> phases;
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
        double ph = std::arg(es.eigenvalues()(k));
        if (ph < 0) ph += two_pi;
        phases.push_back(ph);
    }
    std::sort(phases.begin(), phases.end());

    FloquetSpectrum out;
    out.sites = sites;
    out.momentum = opt.momentum;
    out.z2_sector = opt.resolve_z2 ? 1 : 0;
    out.ph_sector = ph_sector;
    out.phases = phases;
    const std::size_t n = phases.size();
    out.spacings.resize(n);
    for (std::size_t k = 0; k + 1 < n; ++k)
        out.spacings[k] = phases[k + 1] - phases[k];
    out.spacings[n - 1] = two_pi - (phases[n - 1] - phases[0]);
    double mean = 0;
    for (double s : out.spacings) mean += s;
    mean /= double(n);
    for (double& s : out.spacings) s /= mean;
    return out;
}

std::vector<double> sample_matrix_power_ensemble(CircularKind kind, int n_power,
                                                 int dim, int count, Rng& rng) {
    std::vector<double> pooled;
    const double two_pi = 2 * M_PI;
    for (int draw = 0; draw < count; ++draw) {
        Matrix s = kind == CircularKind::CUE ? sample_cue(dim, rng)
                                             : sample_coe(dim, rng);
        Eigen::ComplexEigenSolver<Matrix> es(s, false);
        std::vector<double> phases;
        for (int k = 0; k < dim; ++k) {
            double ph = std::arg(es.eigenvalues()(k)) * n_power;
            ph = std::fmod(ph, two_pi);
            if (ph < 0) ph += two_pi;
            phases.push_back(ph);
        }
        std::sort(phases.begin(), phases.end());
        std::vector<double> sp(dim);
        for (int k = 0; k + 1 < dim; ++k) sp[k] = phases[k + 1] - phases[k];
        sp[dim - 1] = two_pi - (phases[dim - 1] - phases[0]);
        for (double& x : sp) x *= dim / two_pi; // exact unit mean per draw
        pooled.insert(pooled.end(), sp.begin(), sp.end());
    }
    return pooled;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        double fa = double(i) / a.size(), fb = double(j) / b.size();
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

double ks_distance_exponential(std::vector<double> a) {
    std::sort(a.begin(), a.end());
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double ref = 1.0 - std::exp(-a[i]);
        d = std::max(d, std::abs(double(i) / a.size() - ref));
        d = std::max(d, std::abs(double(i + 1) / a.size() - ref));
    }
    return d;
}

Histogram spacing_histogram(const std::vector<double>& s, double bin_width,
                            double s_max) {
    Histogram h;
    int bins = int(std::ceil(s_max / bin_width));
    h.bin_left.resize(bins);
    h.bin_right.resize(bins);
    h.density.assign(bins, 0.0);
    for (int b = 0; b < bins; ++b) {
        h.bin_left[b] = b * bin_width;
        h.bin_right[b] = (b + 1) * bin_width;
    }
    for (double x : s) {
        int b = int(x / bin_width);
        if (b >= 0 && b < bins) h.density[b] += 1;
    }
    for (double& dd : h.density) dd /= (double(s.size()) * bin_width);
    return h;
}

} // namespace llg
