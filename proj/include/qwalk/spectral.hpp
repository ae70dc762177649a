#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace qwalk {

using cplx = std::complex<double>;

struct SpectralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Spectrum {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // orthonormal columns
    int dim() const { return static_cast<int>(values.size()); }
};

// E_l = eps_l - i gamma_l. Row l of `left` is the left vector <~Phi_l|; left * right = I.
struct BiorthSpectrum {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd right;
    Eigen::MatrixXcd left;
    Eigen::VectorXd gamma() const { return -values.imag(); }
    Eigen::VectorXd eps() const { return values.real(); }
    int dim() const { return static_cast<int>(values.size()); }
};

struct DegeneracyClasses {
    std::vector<std::vector<int>> classes;
    double tol = 1e-9;
    bool unstable = false;  // some gap between classes is below 10*tol
    std::vector<int> sizes() const;
};

struct DosHistogram {
    std::vector<double> edges;
    std::vector<double> mass;
};

Spectrum decompose_symmetric(const Eigen::MatrixXd& H);
// Diagonalizes a complex matrix, normalizes right vectors, takes left vectors from the inverse.
// Sorted by ascending gamma then eps. Throws SpectralError if the basis is nearly defective.
BiorthSpectrum decompose_biorthogonal(const Eigen::MatrixXcd& H);

DegeneracyClasses degeneracy_classes(const Eigen::VectorXd& sorted_values, double tol = 1e-9);

// Spectrum of the Cartesian product of two graphs (e.g. 2D lattices), built from the factors.
Spectrum kron_spectrum(const Spectrum& a, const Spectrum& b);

// Closed-form and recursive spectra.
std::vector<double> ring_eigenvalues(int n);
std::vector<double> line_eigenvalues(int n);
Spectrum line_spectrum(int n);
Eigen::MatrixXcd bloch_vectors(int n);  // column k: exp(i 2 pi k x / n) / sqrt(n)
std::vector<double> m_neighbor_ring_eigenvalues(int n, int m);
std::vector<double> long_range_ring_eigenvalues(int n, double exponent, int r_max = -1);
std::vector<double> lattice2d_pbc_eigenvalues(int nx, int ny);
std::vector<double> dsg_eigenvalues(int generation);
std::vector<double> vicsek_eigenvalues(int f, int generation);
// Cardano roots of x(x-3)(x-f-1) = lambda, ascending.
std::vector<double> vicsek_preimages(int f, double lambda);

struct ClosedSpectrum {
    std::vector<double> values;  // ascending
    Eigen::MatrixXcd bloch;      // ring families only
};
ClosedSpectrum closed_spectrum(const std::string& family, const nlohmann::json& params);

DosHistogram dos_histogram(const std::vector<double>& eigs, int n_bins, double lo, double hi);
DosHistogram dos_histogram(const std::vector<double>& eigs, int n_bins);
// Small-E exponent nu of rho(E) ~ E^nu from the integrated density on [lo, hi].
double dos_loglog_slope(const std::vector<double>& eigs, double lo, double hi, int n_points = 20);
// sup |F_emp - F| against a reference CDF
template <class F>
double kolmogorov_distance(std::vector<double> eigs, F cdf) {
    std::sort(eigs.begin(), eigs.end());
    const double n = static_cast<double>(eigs.size());
    double d = 0.0;
    for (std::size_t k = 0; k < eigs.size(); ++k) {
        const double c = cdf(eigs[k]);
        d = std::max({d, std::abs(c - k / n), std::abs(c - (k + 1) / n)});
    }
    return d;
}

}  // namespace qwalk
