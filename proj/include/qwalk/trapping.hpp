#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qwalk/fit.hpp"
#include "qwalk/spectral.hpp"

namespace qwalk {

struct TrapError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct TrapSpec {
    std::vector<int> traps;  // 0-based
    double gamma = 1.0;      // trap strength Gamma
    void validate(int n) const;
};

// 0-based trap sets for the ring arrangements: periodic m_j = jN/M, sequential m_j = j (j = 1..M)
std::vector<int> periodic_traps(int n, int m);
std::vector<int> sequential_traps(int m);

// H = H0 - i Gamma sum_m |m><m|
Eigen::MatrixXcd trap_hamiltonian(const Eigen::MatrixXd& h0, const TrapSpec& ts);
// T = -H0 - Gamma sum_m |m><m|
Eigen::MatrixXd classical_trap_matrix(const Eigen::MatrixXd& h0, const TrapSpec& ts);

// Mean survival over start nodes outside the trap set, evaluated from the biorthogonal
// decomposition: Pi(t) = d(t)^H C d(t) / (N - M), d_l = exp(-i E_l t).
class QuantumSurvival {
public:
    QuantumSurvival(const BiorthSpectrum& s, const std::vector<int>& traps);
    double operator()(double t) const;
    std::vector<double> operator()(const std::vector<double>& t) const;
    // stationary value from exactly real eigenvalues (gamma below tol)
    double plateau(double tol = 1e-10) const;

private:
    Eigen::VectorXcd e_;
    Eigen::MatrixXcd c_;
    double norm_ = 1.0;
};

// sum_l exp(-2 gamma_l t) / denominator; denominator = N - M (ring/line) or N (random traps)
std::vector<double> survival_spectral(const Eigen::VectorXd& gammas, double denominator, const std::vector<double>& t);

// P_M(t) from exp(T t), averaged over non-trap start nodes
std::vector<double> survival_classical(const Eigen::MatrixXd& h0, const TrapSpec& ts, const std::vector<double>& t);

// First order: gamma_l = Gamma * eigenvalues of W restricted to each degeneracy class of H0,
// W = sum_m |m><m|. Non-degenerate levels reduce to Gamma sum_m |<m|Psi_l>|^2.
Eigen::VectorXd perturbative_gammas(const Spectrum& s0, const std::vector<int>& traps, double gamma,
                                    double tol = 1e-9);

// closed forms, each returned in ascending order
Eigen::VectorXd ring_pair_gammas(int n, const std::vector<int>& traps, double gamma);
Eigen::VectorXd ring_sequential_gammas(int n, int m, double gamma);
Eigen::VectorXd line_end_trap_gammas(int n, double gamma);
// nearest plus next-nearest long-range correction for the chain with a trap at both ends
Eigen::VectorXd long_range_chain_gammas(int n, double nu, double gamma);

struct DarkStates {
    int count = 0;          // |Upsilon|
    double plateau = 0.0;   // |Upsilon| / (N - M)
};
enum class Arrangement { periodic, sequential };
DarkStates dark_state_count(int n, int m, Arrangement arr);
// explicit trap set: Bloch pairs whose trap phases all coincide carry a state that misses every trap
DarkStates dark_state_count(int n, const std::vector<int>& traps);
int count_zero_gammas(const Eigen::VectorXd& gammas, double tol = 1e-10);

// gamma_l ~ a l^mu with l = 1..N over the window [l_lo, l_hi]
FitResult gamma_scaling_fit(const Eigen::VectorXd& sorted_gammas, int l_lo, int l_hi);
double collapse_time(double t, int n, double mu);  // t / N^(3 - mu)

struct RandomTrapEnsemble {
    std::vector<double> times;
    std::vector<double> mean_survival;
    std::vector<double> jensen_bound;
    Eigen::VectorXd mean_gammas;
    int redraws = 0;
    std::vector<std::uint64_t> seeds;
    bool jensen_holds = true;
};
// Random geometric networks (box [0,N]^3, weights R^-3), one trap at node 0,
// realization strength Gamma * H0(0,0).
RandomTrapEnsemble random_trap_ensemble(int n, double gamma, int realizations, std::uint64_t seed,
                                        const std::vector<double>& t);
// intermediate decay exponent eta from <Pi(t)> ~ t^-eta
double fit_eta(const RandomTrapEnsemble& e, double lo = 10.0, double hi = 1e4);

struct VicsekTrapResult {
    std::vector<double> times;
    std::vector<double> survival;
    double plateau_predicted = 0.0;
    double plateau_numeric = 0.0;
    int n = 0;
};
VicsekTrapResult vicsek_trap_survival(int f, int g, double gamma, const std::vector<double>& t);

}  // namespace qwalk
