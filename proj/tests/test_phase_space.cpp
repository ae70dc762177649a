#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracle.hpp"
#include "qwalk/dynamics.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/phase_space.hpp"

using namespace qwalk;
using std::numbers::pi;

namespace {

// direct evaluation of (1/N) sum_y e^{i k y} psi*(x-y) psi(x+y)
Eigen::MatrixXd wigner_direct(const Eigen::VectorXcd& psi) {
    const int n = static_cast<int>(psi.size());
    Eigen::MatrixXd w(n, n);
    for (int x = 0; x < n; ++x)
        for (int kh = 0; kh < n; ++kh) {
            cplx s = 0.0;
            for (int y = 0; y < n; ++y)
                s += std::polar(1.0, 2.0 * pi * kh * y / n) * std::conj(psi[((x - y) % n + n) % n]) * psi[(x + y) % n];
            w(x, kh) = s.real() / n;
        }
    return w;
}

}  // namespace

TEST_SUITE("phase_space") {

TEST_CASE("wigner function of a state matches direct summation") {
    for (int n : {9, 10}) {
        const auto f = propagate_quantum(decompose_symmetric(coupling_matrix(ring(n))), 2, {1.3});
        const Eigen::VectorXcd psi = f.amplitudes.col(0);
        CHECK(qtest::max_abs(wigner_from_state(psi) - wigner_direct(psi)) < 1e-12);
        CHECK(qtest::max_abs(wigner_of_density(psi * psi.adjoint()) - wigner_direct(psi)) < 1e-12);
        CHECK(qtest::max_abs(wigner_ring_closed(n, 2, 1.3) - wigner_direct(psi)) < 1e-12);
    }
}

TEST_CASE("marginals") {
    for (int n : {11, 12}) {
        const auto f = propagate_quantum(decompose_symmetric(coupling_matrix(ring(n))), 0, {2.0});
        const Marginals m = marginals(wigner_from_state(f.amplitudes.col(0)));
        CHECK((m.over_kappa - f.values.col(0)).cwiseAbs().maxCoeff() < 1e-12);
        for (int k = 0; k < n; ++k) CHECK(m.over_x[k] == doctest::Approx(ring_kappa_marginal(n, k)).epsilon(1e-12));
    }
    CHECK(ring_kappa_marginal(11, 3) == doctest::Approx(1.0 / 11));
    CHECK(ring_kappa_marginal(12, 2) == doctest::Approx(2.0 / 12));
    CHECK(ring_kappa_marginal(12, 3) == 0.0);
}

TEST_CASE("limiting wigner function") {
    for (int n : {9, 10}) {
        const Spectrum s = decompose_symmetric(coupling_matrix(ring(n)));
        CHECK(qtest::max_abs(wigner_limiting(s, 4) - wigner_limiting_closed(n, 4)) < 1e-12);
        // total weight is one, and the x marginal is the LTA column
        const Marginals m = marginals(wigner_limiting(s, 4));
        CHECK(m.over_kappa.sum() == doctest::Approx(1.0));
        CHECK((m.over_kappa - ring_lta_closed(n).col(4)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("m-neighbour dispersion") {
    const int n = 13;
    const auto e = m_neighbor_dispersion(n, 2);
    const auto ref = decompose_symmetric(coupling_matrix(m_neighbor_ring(n, 2))).values;
    std::vector<double> es = e;
    std::sort(es.begin(), es.end());
    for (int k = 0; k < n; ++k) CHECK(es[k] == doctest::Approx(ref[k]).epsilon(1e-12));
    const auto f = propagate_quantum(decompose_symmetric(coupling_matrix(m_neighbor_ring(n, 2))), 0, {0.8});
    CHECK(qtest::max_abs(wigner_ring_closed(e, 0, 0.8) - wigner_direct(f.amplitudes.col(0))) < 1e-12);
}

TEST_CASE("ensemble wigner functions are reproducible") {
    const nlohmann::json spec{{"model", "disorder"}, {"n", 15}, {"delta", 0.3}, {"kind", "DOD"}};
    const WignerEnsemble a = wigner_ensemble(spec, 7, 6, 12, {1.0, 5.0});
    const WignerEnsemble b = wigner_ensemble(spec, 7, 6, 12, {1.0, 5.0});
    CHECK(qtest::max_abs(a.mean[1] - b.mean[1]) == 0.0);
    CHECK(a.mean[0].sum() == doctest::Approx(1.0));
    CHECK(a.mean_limiting.sum() == doctest::Approx(1.0));
    CHECK_THROWS(wigner_ensemble({{"model", "nope"}, {"n", 5}}, 0, 2, 1, {1.0}));
}

TEST_CASE("front maxima of an initially localized state") {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(11);
    psi[5] = 1.0;
    const WignerSlice w = wigner_from_state(psi);
    // a localized state is flat in kappa at its own site
    CHECK(front_maxima(w, 5) == 0);
    CHECK(w(5, 0) == doctest::Approx(1.0 / 11));
}

}
