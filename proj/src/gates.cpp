#include "llg/gates.hpp"

#include <map>
#include <sstream>

namespace llg {

std::string model_name(Model m) {
    switch (m) {
    case Model::XYZc: return "xyzc";
    case Model::HRM: return "hrm";
    case Model::RPM: return "rpm";
    case Model::ThreePM: return "3pm";
    case Model::Z2COE: return "z2coe";
    case Model::DU: return "du";
    case Model::Localized: return "localized";
    }
    throw bad_params("unknown model enum");
}

Model model_from_name(const std::string& name) {
    if (name == "xyzc") return Model::XYZc;
    if (name == "hrm") return Model::HRM;
    if (name == "rpm") return Model::RPM;
    if (name == "3pm") return Model::ThreePM;
    if (name == "z2coe") return Model::Z2COE;
    if (name == "du") return Model::DU;
    if (name == "localized") return Model::Localized;
    throw bad_params("unknown model name: " + name);
}

void GateEnsembleSpec::validate() const {
    if (q < 2) throw wrong_q("local dimension q must be >= 2");
    bool q2_only = model == Model::XYZc || model == Model::ThreePM ||
                   model == Model::Z2COE || model == Model::DU;
    if (q2_only && q != 2)
        throw wrong_q(model_name(model) + " is defined only for q = 2");
    if (model == Model::RPM && eps < 0)
        throw bad_params("RPM phase variance must be nonnegative");
}

std::string GateEnsembleSpec::to_config() const {
    std::ostringstream os;
    os << "model=" << model_name(model) << "\n";
    os << "q=" << q << "\n";
    os << "ax=" << ax << "\nay=" << ay << "\naz=" << az << "\n";
    os << "eps=" << eps << "\n";
    os << "seed=" << seed << "\n";
    os << "arrangement="
       << (arrangement == Arrangement::Invariant ? "invariant" : "random")
       << "\n";
    return os.str();
}

GateEnsembleSpec GateEnsembleSpec::from_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw bad_params("config line without '=': " + line);
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    GateEnsembleSpec spec;
    if (kv.count("model")) spec.model = model_from_name(kv["model"]);
    if (kv.count("q")) spec.q = std::stoi(kv["q"]);
    if (kv.count("ax")) spec.ax = std::stod(kv["ax"]);
    if (kv.count("ay")) spec.ay = std::stod(kv["ay"]);
    if (kv.count("az")) spec.az = std::stod(kv["az"]);
    if (kv.count("eps")) spec.eps = std::stod(kv["eps"]);
    if (kv.count("seed")) spec.seed = std::stoull(kv["seed"]);
    if (kv.count("arrangement"))
        spec.arrangement = kv["arrangement"] == "random"
                               ? Arrangement::SpatialTemporalRandom
                               : Arrangement::Invariant;
    spec.validate();
    return spec;
}

double unitarity_residual(const Matrix& u) {
    Matrix d = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

Matrix sample_cue(int n, Rng& rng) {
    if (n < 1) throw bad_params("CUE dimension must be >= 1");
    Matrix g(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g(i, j) = rng.next_complex_normal();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix quni = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        Complex d = r(j, j);
        quni.col(j) *= d / std::abs(d);
    }
    return quni;
}

Matrix sample_coe(int n, Rng& rng) {
    Matrix w = sample_cue(n, rng);
    return w.transpose() * w;
}

Matrix pauli(int mu) {
    Matrix m(2, 2);
    const Complex i(0, 1);
    switch (mu) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw bad_params("pauli index out of range");
    }
    return m;
}

Matrix xyzc_gate(double ax, double ay, double az) {
    // sigma_mu (x) sigma_mu are simultaneously diagonal in the Bell basis,
    // with signs (xx,yy,zz) = (+,-,+), (-,+,+), (+,+,-), (-,-,-).
    Eigen::Matrix<double, 4, 3> sign;
    sign << 1, -1, 1,
        -1, 1, 1,
        1, 1, -1,
        -1, -1, -1;
    Eigen::Matrix<Complex, 4, 4> bell;
    double s = 1.0 / std::sqrt(2.0);
    bell.col(0) << s, 0, 0, s;   // (|00> + |11>)/sqrt2
    bell.col(1) << s, 0, 0, -s;  // (|00> - |11>)/sqrt2
    bell.col(2) << 0, s, s, 0;   // (|01> + |10>)/sqrt2
    bell.col(3) << 0, s, -s, 0;  // (|01> - |10>)/sqrt2
    Matrix u = Matrix::Zero(4, 4);
    for (int b = 0; b < 4; ++b) {
        Complex phase = std::exp(
            Complex(0, sign(b, 0) * ax + sign(b, 1) * ay + sign(b, 2) * az));
        u += phase * bell.col(b) * bell.col(b).transpose();
    }
    return u;
}

namespace {

Matrix one_site_dressing(const GateEnsembleSpec& spec, Rng& rng, const Matrix& core) {
    int q = spec.q;
    Matrix u1 = sample_cue(q, rng);
    Matrix u2 = sample_cue(q, rng);
    Matrix u3 = sample_cue(q, rng);
    Matrix u4 = sample_cue(q, rng);
    Matrix left(q * q, q * q), right(q * q, q * q);
    // kron by hand keeps the index convention explicit: row = q*a + b
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
            for (int c = 0; c < q; ++c)
                for (int d = 0; d < q; ++d) {
                    left(a * q + b, c * q + d) = u1(a, c) * u2(b, d);
                    right(a * q + b, c * q + d) = u3(a, c) * u4(b, d);
                }
    return left * core * right;
}

} // namespace

UnitaryGate build_gate(const GateEnsembleSpec& spec, std::int64_t layer,
                       std::int64_t site) {
    spec.validate();
    std::uint64_t s = spec.arrangement == Arrangement::Invariant
                          ? mix_u64(spec.seed ^ 0x5851f42d4c957f2dull)
                          : position_seed(spec.seed, layer, site);
    Rng rng(s);
    int q = spec.q;
    switch (spec.model) {
    case Model::XYZc:
        return {2, xyzc_gate(spec.ax, spec.ay, spec.az)};
    case Model::HRM:
        return {q, sample_cue(q * q, rng)};
    case Model::ThreePM:
        return {2, one_site_dressing(spec, rng, xyzc_gate(spec.ax, spec.ay, spec.az))};
    case Model::DU:
        return {2, one_site_dressing(
                       spec, rng,
                       xyzc_gate(std::acos(-1.0) / 4, std::acos(-1.0) / 4, spec.az))};
    case Model::RPM: {
        Matrix phi = Matrix::Zero(q * q, q * q);
        // draw dressings first so the phase draws don't shift them
        double sd = std::sqrt(spec.eps);
        Rng phase_rng(mix_u64(s ^ 0xa24baed4963ee407ull));
        for (int k = 0; k < q * q; ++k)
            phi(k, k) = std::exp(Complex(0, sd * phase_rng.next_normal()));
        return {q, one_site_dressing(spec, rng, phi)};
    }
    case Model::Z2COE: {
        Matrix u1 = sample_coe(2, rng);
        Matrix u2 = sample_coe(2, rng);
        // blocks on span{|00>,|11>} and span{|01>,|10>}; commutes with sz(x)sz
        Matrix u = Matrix::Zero(4, 4);
        u(0, 0) = u1(0, 0);
        u(0, 3) = u1(0, 1);
        u(3, 0) = u1(1, 0);
        u(3, 3) = u1(1, 1);
        u(1, 1) = u2(0, 0);
        u(1, 2) = u2(0, 1);
        u(2, 1) = u2(1, 0);
        u(2, 2) = u2(1, 1);
        return {2, u};
    }
    case Model::Localized: {
        Matrix u1 = sample_cue(q, rng);
        Matrix u2 = sample_cue(q, rng);
        Matrix u(q * q, q * q);
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b)
                for (int c = 0; c < q; ++c)
                    for (int d = 0; d < q; ++d)
                        u(a * q + b, c * q + d) = u1(a, c) * u2(b, d);
        return {q, u};
    }
    }
    throw bad_params("unreachable model");
}

DualUnitaryCheck check_dual_unitary(const UnitaryGate& gate, double tol) {
    int q = gate.q;
    Matrix resh(q * q, q * q);
    // u[(a,b),(c,d)] -> resh[(a,c),(b,d)]
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
            for (int c = 0; c < q; ++c)
                for (int d = 0; d < q; ++d)
                    resh(a * q + c, b * q + d) = gate.matrix(a * q + b, c * q + d);
    double r = unitarity_residual(resh);
    return {r < tol, r};
}

} // namespace llg
