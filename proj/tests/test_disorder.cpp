#include <cstdlib>

#include "doctest.h"
#include "oracle.hpp"
#include "qwalk/disorder.hpp"
#include "qwalk/graph.hpp"

using namespace qwalk;

TEST_SUITE("disorder_ensembles") {

TEST_CASE("disorder keeps the sparsity pattern and symmetry") {
    const Eigen::MatrixXd h0 = coupling_matrix(ring(12));
    const auto dd = sample_disorder(h0, {0.5, DisorderKind::DD}, 3);
    const auto dod = sample_disorder(h0, {0.5, DisorderKind::DOD}, 3);
    CHECK(qtest::max_abs(dd.h - dd.h.transpose()) == 0.0);
    CHECK(qtest::max_abs(dod.h - dod.h.transpose()) == 0.0);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) {
            if (i != j) CHECK(dd.h(i, j) == h0(i, j));
            if (h0(i, j) == 0.0) CHECK(dod.h(i, j) == 0.0);
        }
    // one normal per node, plus one per bond
    CHECK(dd.draws == 12);
    CHECK(dod.draws == 24);
    // the diagonal draws come first, so DD and DOD share them
    CHECK((dd.h.diagonal() - dod.h.diagonal()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(qtest::max_abs(sample_disorder(h0, {0.0, DisorderKind::DOD}, 3).h - h0) == 0.0);
    CHECK_THROWS_AS(sample_disorder(h0, {-0.1, DisorderKind::DD}, 3), DisorderError);
}

TEST_CASE("diagonal disorder has the prescribed variance") {
    const Eigen::MatrixXd h0 = coupling_matrix(ring(4000));
    const auto dd = sample_disorder(h0, {0.25, DisorderKind::DD}, 17);
    const Eigen::ArrayXd z = (dd.h.diagonal() - h0.diagonal()).array();
    const double var = (z - z.mean()).square().mean();
    // 2 delta z with z ~ N(0,1)
    CHECK(var == doctest::Approx(0.25).epsilon(0.08));
}

TEST_CASE("ensemble average is independent of the thread count") {
    EnsembleSpec es{16, 99};
    auto task = [](std::uint64_t seed, std::size_t) {
        const auto d = sample_disorder(coupling_matrix(ring(20)), {0.3, DisorderKind::DOD}, seed);
        return long_time_average(decompose_symmetric(d.h)).chi_bar;
    };
    setenv("QWALK_THREADS", "1", 1);
    const auto a = ensemble_average<double>(es, task);
    setenv("QWALK_THREADS", "4", 1);
    const auto b = ensemble_average<double>(es, task, true);
    unsetenv("QWALK_THREADS");
    CHECK(a.mean == b.mean);
    CHECK(a.seeds == es.seeds());
    CHECK(b.per_realization.size() == 16);
    double s = 0;
    for (double v : b.per_realization) s += v;
    CHECK(b.mean == doctest::Approx(s / 16));
}

TEST_CASE("realization failures carry their index") {
    EnsembleSpec es{5, 1};
    auto bad = [](std::uint64_t, std::size_t i) -> double {
        if (i == 3) throw std::runtime_error("boom");
        return 1.0;
    };
    try {
        ensemble_average<double>(es, bad);
        FAIL("expected an exception");
    } catch (const RealizationError& e) {
        CHECK(e.index == 3);
    }
    CHECK_THROWS_AS(ensemble_average<double>(EnsembleSpec{0, 1}, bad), DisorderError);
}

TEST_CASE("participation ratio limits") {
    const int n = 10;
    CHECK(participation_ratio(bloch_vectors(n)).mean == doctest::Approx(1.0 / n));
    Spectrum loc;
    loc.values = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0);
    loc.vectors = Eigen::MatrixXd::Identity(n, n);
    CHECK(participation_ratio(loc).mean == doctest::Approx(1.0));
}

TEST_CASE("return LTA grows with disorder") {
    const double weak = disordered_ring_return_lta(30, {0.05, DisorderKind::DD}, {20, 4});
    const double strong = disordered_ring_return_lta(30, {2.0, DisorderKind::DD}, {20, 4});
    CHECK(strong > weak);
    CHECK(strong <= 1.0);
}

TEST_CASE("dynamic disorder with zero strength is the clean walk") {
    const Eigen::MatrixXd h0 = coupling_matrix(ring(21));
    const std::vector<double> t{0.0, 1.0, 2.5};
    const auto run = dynamic_disorder_run(h0, 0.0, 0.5, t, 10, 3);
    const auto clean = propagate_quantum(decompose_symmetric(h0), 10, t);
    CHECK((run.field.values - clean.values).cwiseAbs().maxCoeff() < 1e-10);
    const auto again = dynamic_disorder_run(h0, 0.4, 0.5, t, 10, 3);
    CHECK(again.msd == dynamic_disorder_run(h0, 0.4, 0.5, t, 10, 3).msd);
    for (Eigen::Index i = 0; i < again.field.values.cols(); ++i)
        CHECK(again.field.values.col(i).sum() == doctest::Approx(1.0).epsilon(1e-10));
}

}
