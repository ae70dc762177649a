#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "qwalk/spectral.hpp"

namespace qwalk {

struct WignerError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// W(x, kappa_hat) with rows x = 0..N-1 and columns kappa_hat = 0..N-1; kappa = 2 pi kappa_hat / N.
using WignerSlice = Eigen::MatrixXd;

// W(x,k) = (1/N) sum_y e^{i k y} psi*(x-y) psi(x+y), indices mod N
WignerSlice wigner_from_state(const Eigen::VectorXcd& psi);
// same with psi*(x-y) psi(x+y) replaced by rho(x+y, x-y)
WignerSlice wigner_of_density(const Eigen::MatrixXcd& rho);

// Bloch closed form on a ring with dispersion E_n (default 2 - 2 cos(2 pi n / N)).
WignerSlice wigner_ring_closed(int n, int j, double t);
WignerSlice wigner_ring_closed(const std::vector<double>& dispersion, int j, double t);
// E_n = 2m - 2 sum_{r<=m} cos(r theta_n), in Bloch index order
std::vector<double> m_neighbor_dispersion(int n, int m);

// long-time limits
WignerSlice wigner_limiting_closed(int n, int j);
// time average from a spectrum: W of rho-bar = sum_c P_c rho0 P_c
WignerSlice wigner_limiting(const Spectrum& s, int j, double tol = 1e-9);

struct Marginals {
    Eigen::VectorXd over_kappa;  // sum_k W(x, k), one entry per x
    Eigen::VectorXd over_x;      // sum_x W(x, k), one entry per kappa_hat
};
Marginals marginals(const WignerSlice& w);
// sum_x W for the ring: 1/N (odd N), 2/N or 0 (even N, even or odd kappa_hat)
double ring_kappa_marginal(int n, int kappa_hat);

struct WignerEnsemble {
    std::vector<double> times;
    std::vector<WignerSlice> mean;  // <W(t)>_R
    WignerSlice mean_limiting;      // <W-bar>_R
    std::vector<std::uint64_t> seeds;
};
// spec: {"model": "disorder", "n", "delta", "kind": "DD"|"DOD"} or {"model": "watts_strogatz", "n", "p"}
WignerEnsemble wigner_ensemble(const nlohmann::json& spec, int j, int realizations, std::uint64_t seed,
                               const std::vector<double>& t);

// strict cyclic local maxima in kappa of W(x, .) above frac * max|W(x, .)|
int front_maxima(const WignerSlice& w, int x, double frac = 0.05);

}  // namespace qwalk
