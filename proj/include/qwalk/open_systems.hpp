#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qwalk/spectral.hpp"

namespace qwalk {

struct OpenSystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LindbladSpec {
    double lambda = 0.0;     // dephasing rate of the node projectors
    std::vector<int> traps;  // optional
    double gamma = 0.0;      // trap strength
};

// d rho/dt = -i[H0, rho] - {Gamma-bar, rho} - 2 lambda (rho - diag rho)
Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXd& h0, const LindbladSpec& spec, const Eigen::MatrixXcd& rho);

struct LindbladRun {
    std::vector<double> times;
    std::vector<Eigen::MatrixXcd> rho;
    double min_step = 0.0;
    long steps = 0;
    double max_trace_drift = 0.0;  // trap-free runs only
    double max_hermiticity = 0.0;
    double min_eigenvalue = 0.0;
    Eigen::MatrixXd populations() const;  // node x time
};

// RK4 with step-doubling control; the step is halved until the local error per unit time is below tol.
LindbladRun lindblad_propagate(const Eigen::MatrixXd& h0, const LindbladSpec& spec, const Eigen::MatrixXcd& rho0,
                               const std::vector<double>& t, double tol = 1e-11);

// Node populations under uniform projector dephasing on the torus Z_n^d with Bloch dispersion
// E(p) = sum_a 2m - 2 sum_{r<=m} cos(2 pi r p_a / n), by exact block diagonalization.
// Returns node x time; node index = sum_a x_a n^a.
Eigen::MatrixXd gurvitz_populations(int n, double lambda, int m, const std::vector<double>& t, int start = 0,
                                    int dim = 1);

// First-order expression with Bloch-pair decay factors (ring, d = 1).
Eigen::MatrixXd gurvitz_first_order(int n, double lambda, int m, const std::vector<double>& t, int start = 0);

struct MixingResult {
    double t_mix = 0.0;
    std::size_t index = 0;
};
// first grid time with sum_k |rho_kk - 1/N| <= eps; throws if never reached
MixingResult mixing_time(const Eigen::MatrixXd& populations, const std::vector<double>& t, double eps);
double mixing_bound_ring(int n, double lambda, double eps);
double mixing_bound_hypercycle(int n, int d, double lambda, double eps);
double mixing_bound_m_neighbor(int n, int m, double lambda, double eps);

struct DimerSpec {
    double e = 1.0;
    double v = 1.0;
    double gamma = 0.0;
    double lambda = 0.0;
    bool overdamped() const { return gamma > 2.0 * v; }
    double phi() const;
};

// node 1 free, node 2 trapped: [[E, -V], [-V, E - i Gamma]]
Eigen::MatrixXcd dimer_hamiltonian(const DimerSpec& d);

struct DimerSuite {
    cplx e_plus, e_minus;
    double phi = 0.0;
    BiorthSpectrum numeric;
    std::vector<double> times;
    std::vector<double> pi_trap;      // lambda = 0 closed form
    std::vector<double> pi11_free;    // Gamma = 0 closed form
    std::vector<double> combined;     // e^{-Gamma t} times the first-order free result
};
DimerSuite dimer_suite(const DimerSpec& d, const std::vector<double>& t);
double dimer_pi_trap(const DimerSpec& d, double t);
double dimer_pi11_free(const DimerSpec& d, double t);
double dimer_combined(const DimerSpec& d, double t);

}  // namespace qwalk
