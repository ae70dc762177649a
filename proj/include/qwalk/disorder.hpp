#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qwalk/dynamics.hpp"
#include "qwalk/parallel.hpp"
#include "qwalk/rng.hpp"
#include "qwalk/spectral.hpp"

namespace qwalk {

struct DisorderError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class DisorderKind { DD, DOD };

struct DisorderSpec {
    double delta = 0.0;
    DisorderKind kind = DisorderKind::DD;
};

struct DisorderedMatrix {
    Eigen::MatrixXd h;
    std::uint64_t draws = 0;
};

// DD: H(j,j) += 2 delta z_j, one draw per node in node order.
// DOD: the same diagonal draws, then one draw per bond (i > j, row-major over the lower
// triangle, only where H0 is nonzero) with H(i,j) = H(j,i) += -delta z.
DisorderedMatrix sample_disorder(const Eigen::MatrixXd& h0, const DisorderSpec& ds, std::uint64_t seed);

struct EnsembleSpec {
    int realizations = 1;
    std::uint64_t master_seed = 0;
    std::vector<std::uint64_t> seeds() const;
    nlohmann::json manifest(const nlohmann::json& spec) const;
};

struct RealizationError : std::runtime_error {
    RealizationError(std::size_t index, const std::string& what)
        : std::runtime_error("realization " + std::to_string(index) + ": " + what), index(index) {}
    std::size_t index;
};

namespace detail {
inline void accumulate(std::vector<double>& acc, const std::vector<double>& v) {
    if (acc.empty()) acc.assign(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i];
}
inline void scale(std::vector<double>& acc, double s) {
    for (auto& x : acc) x *= s;
}
inline void accumulate(double& acc, double v) { acc += v; }
inline void scale(double& acc, double s) { acc *= s; }
template <class D>
void accumulate(Eigen::PlainObjectBase<D>& acc, const Eigen::PlainObjectBase<D>& v) {
    if (acc.size() == 0) acc = Eigen::PlainObjectBase<D>::Zero(v.rows(), v.cols());
    acc += v;
}
template <class D>
void scale(Eigen::PlainObjectBase<D>& acc, double s) {
    acc *= s;
}
}  // namespace detail

template <class T>
struct EnsembleResult {
    T mean{};
    std::vector<T> per_realization;  // filled when retained
    std::vector<std::uint64_t> seeds;
};

// task(seed, index) -> T. Realizations run in parallel; the mean is reduced in index order.
template <class T, class F>
EnsembleResult<T> ensemble_average(const EnsembleSpec& es, F task, bool retain = false) {
    if (es.realizations < 1) throw DisorderError("ensemble needs R >= 1");
    EnsembleResult<T> r;
    r.seeds = es.seeds();
    std::vector<T> out(es.realizations);
    std::vector<std::exception_ptr> errs(es.realizations);
    parallel_for(static_cast<std::size_t>(es.realizations), [&](std::size_t i) {
        try {
            out[i] = task(r.seeds[i], i);
        } catch (...) {
            errs[i] = std::current_exception();
        }
    });
    for (std::size_t i = 0; i < errs.size(); ++i) {
        if (!errs[i]) continue;
        try {
            std::rethrow_exception(errs[i]);
        } catch (const std::exception& e) {
            throw RealizationError(i, e.what());
        }
    }
    for (const auto& v : out) detail::accumulate(r.mean, v);
    detail::scale(r.mean, 1.0 / es.realizations);
    if (retain) r.per_realization = std::move(out);
    return r;
}

struct ParticipationRatio {
    double mean = 0.0;         // (1/N) sum_{j,n} |<j|Phi_n>|^4
    Eigen::VectorXd per_state; // sum_j |<j|Phi_n>|^4
};
ParticipationRatio participation_ratio(const Spectrum& s);
ParticipationRatio participation_ratio(const Eigen::MatrixXcd& basis);

struct DynamicDisorderRun {
    ProbabilityField field;
    std::vector<double> msd;  // ring metric, without the extra 1/N
    std::uint64_t draws = 0;
    std::size_t redraws = 0;
};
// Piecewise-constant propagation: the diagonal disorder 2 delta z_j is redrawn every
// resample_dt (infinite = static). Each piece uses a Taylor-series step.
DynamicDisorderRun dynamic_disorder_run(const Eigen::MatrixXd& h0, double delta, double resample_dt,
                                        const std::vector<double>& t, int start, std::uint64_t seed);

// ensemble statistics for random networks built from a JSON family spec
struct NetworkEnsembleStats {
    std::vector<double> times;
    std::vector<double> pi_bar;      // <pi-bar(t)>
    std::vector<double> alpha2;      // <|alpha-bar(t)|^2>
    double chi_bar = 0.0;            // <chi-bar>
    double chi_bar_lb = 0.0;         // <chi-bar_lb>
    double participation = 0.0;      // <participation ratio>
    double mean_degree = 0.0;
};
NetworkEnsembleStats network_ensemble(const nlohmann::json& family_spec, const EnsembleSpec& es,
                                      const std::vector<double>& t);

// <chi_{j,j}> on a disordered ring, averaged over realizations and over j
double disordered_ring_return_lta(int n, const DisorderSpec& ds, const EnsembleSpec& es);

}  // namespace qwalk
