#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "qwalk/spectral.hpp"

namespace qwalk {

struct DynamicsError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::vector<double> linspace(double a, double b, int n);
std::vector<double> logspace(double a, double b, int n);  // endpoints a, b > 0
// throws DynamicsError unless t0 >= 0 and strictly increasing
void validate_grid(const std::vector<double>& t);

enum class FieldKind { classical_p, quantum_pi, quantum_alpha };

// values(k, i) is the probability at node k and time t[i] for a fixed start node.
struct ProbabilityField {
    FieldKind kind = FieldKind::classical_p;
    int start = 0;
    std::vector<double> times;
    Eigen::MatrixXd values;
    Eigen::MatrixXcd amplitudes;  // quantum only
};

ProbabilityField propagate_classical(const Spectrum& s, int j, const std::vector<double>& t, double gamma = 1.0);
ProbabilityField propagate_quantum(const Spectrum& s, int j, const std::vector<double>& t);
// propagation in a complex basis (ring Bloch states)
ProbabilityField propagate_quantum(const Eigen::VectorXd& energies, const Eigen::MatrixXcd& basis, int j,
                                   const std::vector<double>& t);

enum class ReturnKind { classical, quantum_exact, quantum_lower_bound };

// p-bar, pi-bar and |alpha-bar|^2
std::vector<double> average_return(const Spectrum& s, ReturnKind kind, const std::vector<double>& t);
std::vector<double> average_return(const Eigen::VectorXd& eigenvalues, ReturnKind kind, const std::vector<double>& t);

struct LtaMatrix {
    Eigen::MatrixXd chi;
    double chi_bar = 0.0;
    double chi_bar_lb = 0.0;
    bool unstable = false;
};

LtaMatrix long_time_average(const Spectrum& s, double tol = 1e-9);
// one column chi_{., j}; O(N^2)
Eigen::VectorXd lta_column(const Spectrum& s, int j, double tol = 1e-9);
// (1/N^2) sum over classes of size^2
double chi_bar_lower_bound(const Eigen::VectorXd& sorted_eigenvalues, double tol = 1e-9);
// explicit DSG expressions: the sum over degeneracy families and its closed form
double dsg_chi_bar_lb_sum(int g);
double dsg_chi_bar_lb_closed(int g);

struct Revivals {
    std::vector<double> tau;  // tau[n-1] for n = 1..N-1
    double tau0 = 0.0;        // N^2 / (2 pi)
    bool full_revival = false;
};
Revivals revival_times(int n, double r = 1.0);

std::vector<std::vector<int>> cluster_lps(const Eigen::VectorXd& column, double tol = 1e-10);

// Ring LTA from the Bloch ansatz. Odd N: (2N-1)/N^2 on the diagonal, (N-1)/N^2 elsewhere.
// Even N: 2(N-1)/N^2 for k = j and k = j + N/2, (N-2)/N^2 elsewhere.
Eigen::MatrixXd ring_lta_closed(int n);

// star (core = node 0) and complete graph; probabilities at time t
double star_pi_core(int n, double t);         // pi_{1,1}, start at the core
double star_pi_core_to_leaf(int n, double t); // pi_{k,1}, k a leaf
double star_pi_leaf(int n, double t);         // pi_{2,2}, start at a leaf
double complete_pi(int n, bool same_node, double t);
struct StarLta {
    double chi11, chi21, chi22, chi32;
};
StarLta star_lta(int n);

enum class Metric { ring, line };
// With verbatim_prefactor the sum carries the extra 1/N.
std::vector<double> msd(const ProbabilityField& f, Metric metric, bool verbatim_prefactor = false);

}  // namespace qwalk
