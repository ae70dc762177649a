#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracle.hpp"
#include "qwalk/dynamics.hpp"
#include "qwalk/fit.hpp"
#include "qwalk/graph.hpp"

using namespace qwalk;
using std::numbers::pi;

TEST_SUITE("dynamics") {

TEST_CASE("propagators agree with the matrix exponential") {
    const Eigen::MatrixXd h = coupling_matrix(dendrimer(2));
    const Spectrum s = decompose_symmetric(h);
    const std::vector<double> t{0.0, 0.3, 2.0, 9.5};
    const auto q = propagate_quantum(s, 4, t);
    const auto p = propagate_classical(s, 4, t, 0.7);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const Eigen::VectorXcd u = qtest::unitary(h, t[i]).col(4);
        CHECK((q.amplitudes.col(i) - u).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((q.values.col(i) - u.cwiseAbs2()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((p.values.col(i) - qtest::heat(0.7 * h, t[i]).col(4)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("bloch-basis propagation matches the real basis") {
    const int n = 12;
    Eigen::VectorXd e(n);
    for (int k = 0; k < n; ++k) e[k] = 2.0 - 2.0 * std::cos(2.0 * pi * k / n);
    const auto a = propagate_quantum(e, bloch_vectors(n), 3, {1.7});
    const auto b = propagate_quantum(decompose_symmetric(coupling_matrix(ring(n))), 3, {1.7});
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("star and complete graph closed forms") {
    const int n = 9;
    const Eigen::MatrixXd hs = coupling_matrix(star(n));
    const Eigen::MatrixXd hc = coupling_matrix(complete(n));
    for (double t : {0.0, 0.4, 1.3, 7.0}) {
        const Eigen::MatrixXcd u = qtest::unitary(hs, t);
        CHECK(std::abs(star_pi_core(n, t) - std::norm(u(0, 0))) < 1e-12);
        CHECK(std::abs(star_pi_core_to_leaf(n, t) - std::norm(u(3, 0))) < 1e-12);
        CHECK(std::abs(star_pi_leaf(n, t) - std::norm(u(1, 1))) < 1e-12);
        const Eigen::MatrixXcd uc = qtest::unitary(hc, t);
        CHECK(std::abs(complete_pi(n, true, t) - std::norm(uc(2, 2))) < 1e-12);
        CHECK(std::abs(complete_pi(n, false, t) - std::norm(uc(5, 2))) < 1e-12);
    }
    const LtaMatrix lta = long_time_average(decompose_symmetric(hs));
    const StarLta c = star_lta(n);
    CHECK(std::abs(c.chi11 - lta.chi(0, 0)) < 1e-12);
    CHECK(std::abs(c.chi21 - lta.chi(1, 0)) < 1e-12);
    CHECK(std::abs(c.chi22 - lta.chi(1, 1)) < 1e-12);
    CHECK(std::abs(c.chi32 - lta.chi(2, 1)) < 1e-12);
}

TEST_CASE("long-time average against a brute-force time average") {
    // chi = lim (1/T) int pi dt, estimated by a midpoint rule over a long window
    const int n = 7;
    const Eigen::MatrixXd h = coupling_matrix(ring(n));
    const LtaMatrix lta = long_time_average(decompose_symmetric(h));
    CHECK(qtest::max_abs(lta.chi - ring_lta_closed(n)) < 1e-12);
    CHECK(qtest::max_abs(ring_lta_closed(8) - long_time_average(decompose_symmetric(coupling_matrix(ring(8)))).chi) <
          1e-12);
    const Spectrum s = decompose_symmetric(h);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
    const int samples = 40000;
    const double dt = 0.05;
    for (int i = 0; i < samples; ++i) acc += propagate_quantum(s, 0, {(i + 0.5) * dt}).values.col(0) / samples;
    CHECK((acc - lta.chi.col(0)).cwiseAbs().maxCoeff() < 5e-3);
    // columns of chi sum to one, chi is symmetric
    CHECK((lta.chi.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK(qtest::max_abs(lta.chi - lta.chi.transpose()) < 1e-12);
    CHECK((lta_column(s, 2) - lta.chi.col(2)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(lta.chi_bar >= lta.chi_bar_lb - 1e-15);
}

TEST_CASE("average return probabilities") {
    const Eigen::MatrixXd h = coupling_matrix(dendrimer(2));
    const Spectrum s = decompose_symmetric(h);
    const int n = s.dim();
    const std::vector<double> t{0.5, 3.0};
    const auto pc = average_return(s, ReturnKind::classical, t);
    const auto pq = average_return(s, ReturnKind::quantum_exact, t);
    const auto lb = average_return(s, ReturnKind::quantum_lower_bound, t);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const Eigen::MatrixXcd u = qtest::unitary(h, t[i]);
        const Eigen::MatrixXd p = qtest::heat(h, t[i]);
        double q = 0;
        for (int j = 0; j < n; ++j) q += std::norm(u(j, j));
        CHECK(std::abs(pc[i] - p.trace() / n) < 1e-12);
        CHECK(std::abs(pq[i] - q / n) < 1e-12);
        CHECK(std::abs(lb[i] - std::norm(u.trace() / double(n))) < 1e-12);
        CHECK(pq[i] >= lb[i] - 1e-14);
    }
}

TEST_CASE("chi-bar lower bound counts degeneracies") {
    Eigen::VectorXd v(4);
    v << 0.0, 1.0, 1.0, 3.0;
    CHECK(chi_bar_lower_bound(v) == doctest::Approx(6.0 / 16.0));
    for (int g = 2; g <= 6; ++g) {
        auto e = dsg_eigenvalues(g);
        std::sort(e.begin(), e.end());
        const double counted = chi_bar_lower_bound(Eigen::Map<Eigen::VectorXd>(e.data(), e.size()));
        CHECK(std::abs(counted - dsg_chi_bar_lb_closed(g)) < 1e-12);
        CHECK(std::abs(counted - dsg_chi_bar_lb_sum(g)) < 1e-12);
    }
}

TEST_CASE("ring revivals") {
    const Revivals r = revival_times(5);
    CHECK(r.tau0 == doctest::Approx(25.0 / (2.0 * pi)));
    // integer spectra: N = 3, 4, 6
    for (int n : {3, 4, 6}) {
        const Revivals rv = revival_times(n);
        CHECK(rv.full_revival);
    }
    CHECK_FALSE(revival_times(5).full_revival);
    const Eigen::MatrixXcd u = qtest::unitary(coupling_matrix(ring(6)), 2.0 * pi);
    CHECK(std::norm(u(2, 2)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("mean-square displacement") {
    const int n = 201;
    const Spectrum s = decompose_symmetric(coupling_matrix(ring(n)));
    const auto q = propagate_quantum(s, 100, {2.0, 4.0});
    const auto c = propagate_classical(s, 100, {2.0, 4.0});
    const auto mq = msd(q, Metric::ring), mc = msd(c, Metric::ring);
    // far from the boundary: classical <x^2> = 2t, quantum <x^2> = 2t^2
    CHECK(mc[0] == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(mc[1] == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(mq[0] == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(mq[1] == doctest::Approx(32.0).epsilon(1e-9));
    CHECK(msd(c, Metric::ring, true)[0] == doctest::Approx(4.0 / n));
}

TEST_CASE("time grids") {
    const auto l = linspace(0.0, 1.0, 5);
    CHECK(l[2] == 0.5);
    CHECK(l.back() == 1.0);
    const auto g = logspace(1.0, 1000.0, 4);
    CHECK(g[1] == doctest::Approx(10.0));
    CHECK(g.back() == 1000.0);
    CHECK_THROWS_AS(validate_grid({1.0, 1.0}), DynamicsError);
    CHECK_THROWS_AS(validate_grid({-1.0, 1.0}), DynamicsError);
    CHECK_THROWS(logspace(0.0, 1.0, 3));
}

TEST_CASE("fits") {
    std::vector<double> x, y;
    for (int i = 1; i <= 50; ++i) {
        x.push_back(i);
        y.push_back(3.0 * std::pow(i, -1.5));
    }
    const FitResult f = powerlaw_fit(x, y, 1.0, 50.0);
    CHECK(f.exponent == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(f.prefactor == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f.n_points == 50);
    const FitResult nls = powerlaw_nls(x, y, 1.0, 50.0);
    CHECK(nls.exponent == doctest::Approx(-1.5).epsilon(1e-8));
    const LineFit lf = linear_fit({0.0, 1.0, 2.0}, {1.0, 3.0, 5.0});
    CHECK(lf.slope == doctest::Approx(2.0));
    CHECK(lf.intercept == doctest::Approx(1.0));
    CHECK(lf.r2 == doctest::Approx(1.0));
    CHECK(strict_local_maxima({0.0, 2.0, 1.0, 1.0, 3.0, 0.0}) == std::vector<std::size_t>{1, 4});
    CHECK_THROWS_AS(powerlaw_fit(x, y, 100.0, 200.0), FitError);
}

}
