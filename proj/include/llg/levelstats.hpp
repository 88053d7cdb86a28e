#pragma once

#include "llg/gates.hpp"

#include <vector>

namespace llg {

struct not_symmetric : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Space-like Floquet operator: one brick-wall period (two layers) on a
// periodic chain of even length L; dense q^L x q^L.
Matrix build_floquet(const GateEnsembleSpec& spec, int sites);

struct FloquetSpectrum {
    int sites;
    int momentum; // eigenphase index of the 2-site translation
    int z2_sector;       // +1/-1, 0 = unresolved
    int ph_sector;       // +1/-1, 0 = unresolved
    std::vector<double> phases;   // sorted eigenphases in [0, 2pi)
    std::vector<double> spacings; // unit-mean normalized
};

struct SectorOptions {
    int momentum = 1;         // k-th eigenvalue exp(2 pi i k / (L/2)) of T^2
    bool resolve_z2 = false;  // project onto the  (x)sigma_z = +1 sector
    bool resolve_ph = false;  // project onto the  (x)sigma_x = +1 sector
    double commute_tol = 1e-8;
};

// Momentum (and optional Z2 / particle-hole) projection followed by dense
// eigenphases and unit-mean consecutive spacings.  Throws not_symmetric when
// a requested projector fails to commute with F.
FloquetSpectrum sector_spacings(const Matrix& floquet, int q, int sites,
                                const SectorOptions& opt);

// Pooled eigenphase spacings of S^n for `count` draws of S from CUE/COE(dim).
enum class CircularKind { CUE, COE };
std::vector<double> sample_matrix_power_ensemble(CircularKind kind, int n_power,
                                                 int dim, int count, Rng& rng);

// Two-sample and exponential-reference Kolmogorov-Smirnov distances.
double ks_distance(std::vector<double> a, std::vector<double> b);
double ks_distance_exponential(std::vector<double> a);

struct Histogram {
    std::vector<double> bin_left, bin_right, density;
};
Histogram spacing_histogram(const std::vector<double>& s, double bin_width = 0.1,
                            double s_max = 4.0);

} // namespace llg
