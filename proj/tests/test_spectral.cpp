#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracle.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/trapping.hpp"

using namespace qwalk;
using std::numbers::pi;

namespace {

Eigen::VectorXd sorted_vec(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

TEST_SUITE("spectral_engine") {

TEST_CASE("symmetric decomposition reconstructs H") {
    const Eigen::MatrixXd h = coupling_matrix(dendrimer(3));
    const Spectrum s = decompose_symmetric(h);
    CHECK(qtest::max_abs(s.vectors * s.values.asDiagonal() * s.vectors.transpose() - h) < 1e-12);
    CHECK(qtest::max_abs(s.vectors.transpose() * s.vectors - Eigen::MatrixXd::Identity(s.dim(), s.dim())) < 1e-12);
    for (int k = 1; k < s.dim(); ++k) CHECK(s.values[k] >= s.values[k - 1]);
}

TEST_CASE("ring and line closed forms") {
    for (int n : {5, 8, 13}) {
        std::vector<double> ring_ref, line_ref;
        for (int k = 0; k < n; ++k) {
            ring_ref.push_back(2.0 - 2.0 * std::cos(2.0 * pi * k / n));
            line_ref.push_back(2.0 - 2.0 * std::cos(pi * k / n));
        }
        CHECK((sorted_vec(ring_eigenvalues(n)) - sorted_vec(ring_ref)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((sorted_vec(line_eigenvalues(n)) - sorted_vec(line_ref)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((decompose_symmetric(coupling_matrix(ring(n))).values - sorted_vec(ring_ref)).cwiseAbs().maxCoeff() <
              1e-12);
        const Spectrum ls = line_spectrum(n);
        CHECK(qtest::max_abs(ls.vectors * ls.values.asDiagonal() * ls.vectors.transpose() -
                             coupling_matrix(line(n))) < 1e-12);
    }
}

TEST_CASE("bloch vectors diagonalize the ring") {
    const int n = 9;
    const Eigen::MatrixXcd b = bloch_vectors(n);
    const Eigen::MatrixXcd d = b.adjoint() * coupling_matrix(ring(n)).cast<cplx>() * b;
    for (int k = 0; k < n; ++k) {
        CHECK(std::abs(d(k, k) - cplx(2.0 - 2.0 * std::cos(2.0 * pi * k / n))) < 1e-12);
        for (int q = 0; q < n; ++q)
            if (q != k) CHECK(std::abs(d(k, q)) < 1e-12);
    }
}

TEST_CASE("recursive spectra match direct diagonalization") {
    for (int g = 2; g <= 4; ++g) {
        const auto num = decompose_symmetric(coupling_matrix(dsg(g))).values;
        CHECK((sorted_vec(dsg_eigenvalues(g)) - num).cwiseAbs().maxCoeff() < 1e-9);
    }
    for (int g = 1; g <= 3; ++g) {
        const auto num = decompose_symmetric(coupling_matrix(vicsek(4, g))).values;
        CHECK((sorted_vec(vicsek_eigenvalues(4, g)) - num).cwiseAbs().maxCoeff() < 1e-9);
    }
    for (int m : {1, 2, 3}) {
        const auto num = decompose_symmetric(coupling_matrix(m_neighbor_ring(15, m))).values;
        CHECK((sorted_vec(m_neighbor_ring_eigenvalues(15, m)) - num).cwiseAbs().maxCoeff() < 1e-10);
    }
    const auto lr = decompose_symmetric(coupling_matrix(long_range_ring(16, 2.5))).values;
    CHECK((sorted_vec(long_range_ring_eigenvalues(16, 2.5)) - lr).cwiseAbs().maxCoeff() < 1e-10);
    const auto lat = decompose_symmetric(coupling_matrix(lattice2d(4, 5, true, true))).values;
    CHECK((sorted_vec(lattice2d_pbc_eigenvalues(4, 5)) - lat).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("vicsek preimages solve the cubic") {
    for (double lam : {0.3, 1.7, 4.2}) {
        const auto x = vicsek_preimages(4, lam);
        REQUIRE(x.size() == 3);
        for (double r : x) CHECK(std::abs(r * (r - 3.0) * (r - 5.0) - lam) < 1e-9);
    }
}

TEST_CASE("kron spectrum is the Cartesian-product spectrum") {
    const Spectrum a = line_spectrum(4), b = decompose_symmetric(coupling_matrix(ring(5)));
    const Spectrum k = kron_spectrum(a, b);
    const auto direct = decompose_symmetric(coupling_matrix(lattice2d(4, 5, false, true))).values;
    CHECK((k.values - direct).cwiseAbs().maxCoeff() < 1e-10);
    // vectors live on node id x + nx * y
    const Eigen::MatrixXd h = coupling_matrix(lattice2d(4, 5, false, true));
    CHECK(qtest::max_abs(h * k.vectors - k.vectors * k.values.asDiagonal()) < 1e-10);
}

TEST_CASE("biorthogonal decomposition of a trapped Hamiltonian") {
    const Eigen::MatrixXcd h = trap_hamiltonian(coupling_matrix(line(8)), {{0, 7}, 0.4});
    const BiorthSpectrum s = decompose_biorthogonal(h);
    const auto n = h.rows();
    CHECK(qtest::max_abs(Eigen::MatrixXcd(s.left * s.right) - Eigen::MatrixXcd::Identity(n, n)) < 1e-10);
    CHECK(qtest::max_abs(Eigen::MatrixXcd(s.right * s.values.asDiagonal() * s.left) - h) < 1e-10);
    for (int k = 1; k < s.dim(); ++k) CHECK(s.gamma()[k] >= s.gamma()[k - 1] - 1e-14);
    // trace identity
    CHECK(std::abs(s.gamma().sum() - 0.8) < 1e-12);
}

TEST_CASE("degenerate eigenspaces stay well conditioned") {
    // star with one trapped leaf: the other leaves form a large degenerate eigenspace
    const Eigen::MatrixXcd h = trap_hamiltonian(coupling_matrix(star(12)), {{3}, 0.7});
    const BiorthSpectrum s = decompose_biorthogonal(h);
    CHECK(qtest::max_abs(Eigen::MatrixXcd(s.right * s.values.asDiagonal() * s.left) - h) < 1e-10);
    CHECK(count_zero_gammas(s.gamma()) == 9);
}

TEST_CASE("defective matrices are rejected") {
    Eigen::MatrixXcd j(2, 2);
    j << 1.0, 1.0, 0.0, 1.0;
    CHECK_THROWS_AS(decompose_biorthogonal(j), SpectralError);
    // dimer exceptional point Gamma = 2V
    Eigen::MatrixXcd ep(2, 2);
    ep << 0.0, -1.0, -1.0, cplx(0.0, -2.0);
    CHECK_THROWS_AS(decompose_biorthogonal(ep), SpectralError);
}

TEST_CASE("degeneracy classes") {
    Eigen::VectorXd v(6);
    v << 0.0, 1.0, 1.0 + 1e-12, 2.0, 2.0, 2.0;
    const auto d = degeneracy_classes(v);
    CHECK(d.sizes() == std::vector<int>{1, 2, 3});
    CHECK_FALSE(d.unstable);
    Eigen::VectorXd w(2);
    w << 0.0, 5e-9;
    CHECK(degeneracy_classes(w).unstable);
}

TEST_CASE("density of states") {
    const auto e = ring_eigenvalues(40);
    const DosHistogram h = dos_histogram(e, 8, 0.0, 4.0);
    CHECK(h.edges.size() == 9);
    double total = 0;
    for (double m : h.mass) total += m;
    CHECK(std::abs(total - 1.0) < 1e-12);
    // ring: integrated density F(E) = acos(1 - E/2) / pi
    const double ks = kolmogorov_distance(e, [](double x) { return std::acos(std::clamp(1.0 - x / 2.0, -1.0, 1.0)) / pi; });
    CHECK(ks < 2.0 / 40);
}

}
