#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracle.hpp"
#include "qwalk/dynamics.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/open_systems.hpp"

using namespace qwalk;

namespace {

// Liouvillian assembled entry by entry from the master equation, column-major vec
Eigen::MatrixXcd liouvillian(const Eigen::MatrixXd& h0, double lambda, const std::vector<int>& traps, double gamma) {
    const auto n = h0.rows();
    Eigen::MatrixXcd h = h0.cast<cplx>();
    for (int m : traps) h(m, m) -= cplx(0.0, gamma);
    Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(n * n, n * n);
    const cplx i(0.0, 1.0);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) {
            const Eigen::Index row = a + n * b;
            for (Eigen::Index c = 0; c < n; ++c) {
                l(row, c + n * b) += -i * h(a, c);
                l(row, a + n * c) += i * std::conj(h(b, c));
            }
            if (a != b) l(row, row) -= 2.0 * lambda;
        }
    return l;
}

Eigen::MatrixXcd evolve(const Eigen::MatrixXcd& l, const Eigen::MatrixXcd& rho0, double t) {
    const auto n = rho0.rows();
    Eigen::VectorXcd v = expm_oracle(t * l) * Eigen::Map<const Eigen::VectorXcd>(rho0.data(), n * n);
    return Eigen::Map<Eigen::MatrixXcd>(v.data(), n, n);
}

}  // namespace

TEST_SUITE("open_systems") {

TEST_CASE("master equation right-hand side") {
    const Eigen::MatrixXd h0 = coupling_matrix(ring(5));
    const Eigen::MatrixXcd l = liouvillian(h0, 0.3, {2}, 0.4);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Random(5, 5);
    rho = (rho + rho.adjoint()).eval();
    const Eigen::MatrixXcd out = lindblad_rhs(h0, {0.3, {2}, 0.4}, rho);
    const Eigen::VectorXcd ref = l * Eigen::Map<const Eigen::VectorXcd>(rho.data(), 25);
    CHECK((Eigen::Map<const Eigen::VectorXcd>(out.data(), 25) - ref).cwiseAbs().maxCoeff() < 1e-12);
    // trace preserved without traps
    CHECK(std::abs(lindblad_rhs(h0, {0.3, {}, 0.0}, rho).trace()) < 1e-12);
}

TEST_CASE("integrator against the exact Liouvillian exponential") {
    const Eigen::MatrixXd h0 = coupling_matrix(dendrimer(1));
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(4, 4);
    rho0(1, 1) = 1.0;
    const std::vector<double> t{0.5, 2.0, 6.0};
    const LindbladRun run = lindblad_propagate(h0, {0.25, {0}, 0.3}, rho0, t);
    const Eigen::MatrixXcd l = liouvillian(h0, 0.25, {0}, 0.3);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(qtest::max_abs(run.rho[i] - evolve(l, rho0, t[i])) < 1e-9);
    CHECK(run.max_hermiticity < 1e-12);
    CHECK(run.populations().rows() == 4);
}

TEST_CASE("integrator input validation") {
    const Eigen::MatrixXd h0 = coupling_matrix(ring(3));
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(3, 3);
    CHECK_THROWS_AS(lindblad_propagate(h0, {0.1, {}, 0.0}, rho0, {1.0}), OpenSystemError);
    rho0(0, 0) = 1.0;
    CHECK_THROWS_AS(lindblad_propagate(h0, {-0.1, {}, 0.0}, rho0, {1.0}), OpenSystemError);
    CHECK_THROWS_AS(lindblad_propagate(h0, {0.1, {}, 0.0}, rho0, {2.0, 1.0}), OpenSystemError);
    rho0(0, 1) = 0.5;
    CHECK_THROWS_AS(lindblad_propagate(h0, {0.1, {}, 0.0}, rho0, {1.0}), OpenSystemError);
}

TEST_CASE("dephasing on rings and tori: block solution") {
    const std::vector<double> t{0.0, 1.0, 4.0, 15.0};
    for (int m : {1, 2}) {
        const int n = 7;
        const Eigen::MatrixXd pops = gurvitz_populations(n, 0.2, m, t, 3);
        const Eigen::MatrixXcd l = liouvillian(coupling_matrix(m_neighbor_ring(n, m)), 0.2, {}, 0.0);
        Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(n, n);
        rho0(3, 3) = 1.0;
        for (std::size_t i = 0; i < t.size(); ++i)
            CHECK((pops.col(i) - evolve(l, rho0, t[i]).diagonal().real()).cwiseAbs().maxCoeff() < 1e-10);
    }
    // d = 2 torus equals the hypercycle
    const int n = 4;
    const Eigen::MatrixXd p2 = gurvitz_populations(n, 0.15, 1, {2.0}, 0, 2);
    const Eigen::MatrixXcd l2 = liouvillian(coupling_matrix(hypercycle(n, 2)), 0.15, {}, 0.0);
    Eigen::MatrixXcd r0 = Eigen::MatrixXcd::Zero(16, 16);
    r0(0, 0) = 1.0;
    CHECK((p2.col(0) - evolve(l2, r0, 2.0).diagonal().real()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("first-order dephasing converges to the exact populations") {
    const std::vector<double> t{1.0, 3.0};
    auto err = [&](double l) { return qtest::max_abs(gurvitz_populations(9, l, 1, t) - gurvitz_first_order(9, l, 1, t)); };
    CHECK(err(0.0) < 1e-12);
    // error is linear in lambda
    CHECK(err(1e-3) / err(1e-4) == doctest::Approx(10.0).epsilon(0.01));
    CHECK(err(1e-4) < 1e-4);
}

TEST_CASE("mixing time") {
    const auto t = linspace(0.0, 200.0, 2001);
    const Eigen::MatrixXd p = gurvitz_populations(8, 0.3, 1, t);
    const MixingResult mr = mixing_time(p, t, 0.01);
    CHECK(mr.t_mix <= mixing_bound_ring(8, 0.3, 0.01));
    CHECK((p.col(mr.index).array() - 1.0 / 8).abs().sum() <= 0.01);
    CHECK((p.col(mr.index - 1).array() - 1.0 / 8).abs().sum() > 0.01);
    CHECK_THROWS_AS(mixing_time(p.leftCols(3), {0.0, 0.1, 0.2}, 1e-6), OpenSystemError);
    // every bound scales as 1/lambda
    CHECK(mixing_bound_ring(8, 0.6, 0.01) == doctest::Approx(mixing_bound_ring(8, 0.3, 0.01) / 2));
    CHECK(mixing_bound_hypercycle(8, 2, 0.6, 0.01) == doctest::Approx(mixing_bound_hypercycle(8, 2, 0.3, 0.01) / 2));
    CHECK(mixing_bound_m_neighbor(8, 2, 0.6, 0.01) == doctest::Approx(mixing_bound_m_neighbor(8, 2, 0.3, 0.01) / 2));
}

TEST_CASE("dimer closed forms") {
    DimerSpec d;
    d.gamma = 0.6;
    const DimerSuite s = dimer_suite(d, {0.0, 1.0});
    // eigenvalues E +- sqrt(V^2 - Gamma^2/4) - i Gamma/2
    const double r = std::sqrt(1.0 - 0.09);
    CHECK(std::abs(s.e_plus - cplx(1.0 + r, -0.3)) < 1e-12);
    CHECK(std::abs(s.e_minus - cplx(1.0 - r, -0.3)) < 1e-12);
    for (double g : s.numeric.gamma()) CHECK(g == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(s.phi == doctest::Approx(std::asin(0.3)));
    for (double t : {0.3, 1.7, 5.0}) {
        const Eigen::MatrixXcd u = expm_oracle(cplx(0.0, -t) * dimer_hamiltonian(d));
        CHECK(dimer_pi_trap(d, t) == doctest::Approx(std::norm(u(0, 0))).epsilon(1e-12));
    }
    DimerSpec f;
    f.lambda = 0.4;
    const Eigen::MatrixXcd l = liouvillian(Eigen::MatrixXd(dimer_hamiltonian(f).real()), 0.4, {}, 0.0);
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(2, 2);
    rho0(0, 0) = 1.0;
    for (double t : {0.5, 2.0, 8.0})
        CHECK(dimer_pi11_free(f, t) == doctest::Approx(evolve(l, rho0, t)(0, 0).real()).epsilon(1e-12));
    // lambda = 0 limit is cos^2(V t)
    DimerSpec z;
    CHECK(dimer_pi11_free(z, 0.7) == doctest::Approx(std::pow(std::cos(0.7), 2)));
    // overdamped branch stays a probability
    DimerSpec o;
    o.lambda = 3.0;
    for (double t : {0.5, 5.0}) {
        CHECK(dimer_pi11_free(o, t) <= 1.0);
        CHECK(dimer_pi11_free(o, t) >= 0.5);
    }
    DimerSpec bad;
    bad.v = 0.0;
    CHECK_THROWS_AS(dimer_suite(bad, {0.0}), OpenSystemError);
}

}
