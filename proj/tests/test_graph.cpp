#include <set>

#include "doctest.h"
#include "qwalk/graph.hpp"
#include "qwalk/rng.hpp"

using namespace qwalk;

TEST_SUITE("graph_catalog") {

TEST_CASE("deterministic family sizes") {
    CHECK(ring(7).edges.size() == 7);
    CHECK(line(7).edges.size() == 6);
    CHECK(star(9).edges.size() == 8);
    CHECK(complete(6).edges.size() == 15);
    for (int g = 1; g <= 5; ++g) {
        CHECK(dendrimer(g).n == 3 * (1 << g) - 2);
        CHECK(glued_cayley(g).n == 3 * (1 << g) - 2);
        CHECK(husimi_cactus(g).n == static_cast<int>(dendrimer(g).edges.size()));
        int p3 = 1;
        for (int i = 0; i < g; ++i) p3 *= 3;
        CHECK(dsg(g).n == p3);
        CHECK(apollonian(g).n == (p3 + 5) / 2);
    }
    CHECK(vicsek(4, 3).n == 125);
    CHECK(vicsek(2, 2).n == 9);
    const Graph hc = hypercycle(5, 2);
    CHECK(hc.n == 25);
    CHECK(hc.edges.size() == 50);
}

TEST_CASE("degrees") {
    const auto ds = star(6).degrees();
    CHECK(ds[0] == 5);
    for (int k = 1; k < 6; ++k) CHECK(ds[k] == 1);
    for (int d : ring(11).degrees()) CHECK(d == 2);
    for (int d : complete(5).degrees()) CHECK(d == 4);
    // open-x, periodic-y 3x4 lattice: 2*4 horizontal + 3*4 vertical bonds
    CHECK(lattice2d(3, 4, false, true).edges.size() == 20);
    // dsg corners have degree 2, every other node degree 3
    const Graph g = dsg(3);
    const auto c = dsg_corners(3);
    const std::set<int> corners(c.begin(), c.end());
    const auto deg = g.degrees();
    for (int k = 0; k < g.n; ++k) CHECK(deg[k] == (corners.count(k) ? 2 : 3));
}

TEST_CASE("coupling matrix is a weighted Laplacian") {
    for (const Graph& g : {ring(9), dendrimer(3), long_range_ring(12, 2.0), random_geometric(10, 5)}) {
        const Eigen::MatrixXd h = coupling_matrix(g, 0.5);
        CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(h.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    }
    const Eigen::MatrixXd h = coupling_matrix(line(3));
    CHECK(h(0, 0) == 1.0);
    CHECK(h(1, 1) == 2.0);
    CHECK(h(0, 1) == -1.0);
}

TEST_CASE("validation rejects malformed graphs") {
    Graph g;
    g.n = 3;
    g.edges = {{0, 0, 1.0}};
    CHECK_THROWS_AS(finalize(g), GraphError);
    g.edges = {{0, 1, 1.0}, {1, 0, 1.0}};
    CHECK_THROWS_AS(finalize(g), GraphError);
    g.edges = {{0, 5, 1.0}};
    CHECK_THROWS_AS(finalize(g), GraphError);
    g.edges = {{0, 1, -1.0}};
    CHECK_THROWS_AS(finalize(g), GraphError);
    CHECK_THROWS_AS(ring(0), GraphError);
    CHECK_THROWS_AS(small_world(4, 3, 1), GraphError);
    CHECK_THROWS_AS(build_graph({{"family", "no_such_family"}}), GraphError);
}

TEST_CASE("json exchange is 1-based and round-trips") {
    const auto j = graph_to_json(line(3));
    CHECK(j["edges"][0][0] == 1);
    CHECK(j["edges"][1][1] == 3);
    const Graph g = graph_from_json(j);
    CHECK(g.edges == line(3).edges);
    const Graph d = dendrimer(3);
    CHECK(graph_from_json(graph_to_json(d)).edges == d.edges);
}

TEST_CASE("random families are reproducible per seed") {
    CHECK(small_world(30, 5, 9).edges == small_world(30, 5, 9).edges);
    CHECK(erdos_renyi(30, 0.2, 9).edges == erdos_renyi(30, 0.2, 9).edges);
    CHECK(watts_strogatz(30, 0.2, 9).edges == watts_strogatz(30, 0.2, 9).edges);
    CHECK(scale_free(30, 9).edges == scale_free(30, 9).edges);
    CHECK(small_world(30, 5, 9).edges != small_world(30, 5, 10).edges);
    CHECK(small_world(30, 5, 9).edges.size() == 35);
}

TEST_CASE("rng streams") {
    Rng a(3), b(3);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
    Rng r(11);
    double s = 0, s2 = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        s += z;
        s2 += z * z;
    }
    CHECK(std::abs(s / n) < 0.03);
    CHECK(std::abs(s2 / n - 1.0) < 0.05);
    CHECK(r.draws() == static_cast<std::uint64_t>(n));
    for (int i = 0; i < 1000; ++i) CHECK(r.below(7) < 7);
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
}

TEST_CASE("glued tree collapses to a tridiagonal chain") {
    const int g = 4;
    ClusterPartition p = glued_cayley_partition(g);
    const Eigen::MatrixXd c = collapse_clusters(glued_cayley(g), p);
    CHECK(c.rows() == 2 * g + 1);
    for (int i = 0; i < c.rows(); ++i)
        for (int j = 0; j < c.cols(); ++j)
            if (std::abs(i - j) > 1) CHECK(c(i, j) == 0.0);
    // spectrum of the collapsed chain is contained in the full spectrum
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(coupling_matrix(glued_cayley(g)), Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> red(c, Eigen::EigenvaluesOnly);
    for (double e : red.eigenvalues())
        CHECK((full.eigenvalues().array() - e).abs().minCoeff() < 1e-9);
}

}
