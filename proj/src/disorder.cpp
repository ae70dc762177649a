#include "qwalk/disorder.hpp"

#include <cmath>
#include <limits>

#include "qwalk/graph.hpp"

namespace qwalk {

DisorderedMatrix sample_disorder(const Eigen::MatrixXd& h0, const DisorderSpec& ds, std::uint64_t seed) {
    if (!(ds.delta >= 0.0)) throw DisorderError("disorder strength must be >= 0");
    const auto n = h0.rows();
    DisorderedMatrix out{h0, 0};
    Rng rng(seed);
    for (Eigen::Index j = 0; j < n; ++j) out.h(j, j) += 2.0 * ds.delta * rng.normal();
    if (ds.kind == DisorderKind::DOD) {
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < i; ++j) {
                if (h0(i, j) == 0.0) continue;
                const double d = -ds.delta * rng.normal();
                out.h(i, j) += d;
                out.h(j, i) += d;
            }
    }
    out.draws = rng.draws();
    return out;
}

std::vector<std::uint64_t> EnsembleSpec::seeds() const {
    std::vector<std::uint64_t> s(realizations);
    for (int r = 0; r < realizations; ++r) s[r] = derive_seed(master_seed, static_cast<std::uint64_t>(r));
    return s;
}

nlohmann::json EnsembleSpec::manifest(const nlohmann::json& spec) const {
    return {{"master_seed", master_seed}, {"R", realizations}, {"spec", spec}, {"per_realization_seeds", seeds()}};
}

ParticipationRatio participation_ratio(const Spectrum& s) {
    ParticipationRatio p;
    p.per_state = s.vectors.cwiseAbs2().cwiseAbs2().colwise().sum().transpose();
    p.mean = p.per_state.sum() / s.dim();
    return p;
}

ParticipationRatio participation_ratio(const Eigen::MatrixXcd& basis) {
    ParticipationRatio p;
    p.per_state = basis.cwiseAbs2().cwiseAbs2().colwise().sum().transpose();
    p.mean = p.per_state.sum() / static_cast<double>(basis.rows());
    return p;
}

namespace {

// psi <- exp(-i H dt) psi by Taylor series on substeps with ||H||_1 h <= 1
void taylor_step(const Eigen::MatrixXd& h, double norm1, Eigen::VectorXcd& psi, double dt) {
    const int sub = std::max(1, static_cast<int>(std::ceil(norm1 * dt)));
    const double hstep = dt / sub;
    const cplx mi(0.0, -hstep);
    for (int s = 0; s < sub; ++s) {
        Eigen::VectorXcd term = psi, acc = psi;
        for (int k = 1; k < 60; ++k) {
            term = (mi / static_cast<double>(k)) * (h * term);
            acc += term;
            if (term.norm() < 1e-17) break;
        }
        psi = acc;
    }
}

}  // namespace

DynamicDisorderRun dynamic_disorder_run(const Eigen::MatrixXd& h0, double delta, double resample_dt,
                                        const std::vector<double>& t, int start, std::uint64_t seed) {
    validate_grid(t);
    if (!(resample_dt > 0.0)) throw DisorderError("resample interval must be positive");
    if (!(delta >= 0.0)) throw DisorderError("disorder strength must be >= 0");
    const auto n = h0.rows();
    if (start < 0 || start >= n) throw DisorderError("start node out of range");
    Rng rng(seed);
    Eigen::MatrixXd h = h0;
    auto redraw = [&] {
        for (Eigen::Index j = 0; j < n; ++j) h(j, j) = h0(j, j) + 2.0 * delta * rng.normal();
    };
    redraw();
    double norm1 = h.cwiseAbs().colwise().sum().maxCoeff();

    DynamicDisorderRun run;
    run.field.kind = FieldKind::quantum_pi;
    run.field.start = start;
    run.field.times = t;
    run.field.values.resize(n, static_cast<Eigen::Index>(t.size()));
    run.field.amplitudes.resize(n, static_cast<Eigen::Index>(t.size()));

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
    psi[start] = 1.0;
    double now = 0.0;
    double next_redraw = std::isinf(resample_dt) ? std::numeric_limits<double>::infinity() : resample_dt;
    for (std::size_t i = 0; i < t.size(); ++i) {
        while (now < t[i]) {
            const double stop = std::min(t[i], next_redraw);
            const double before = psi.norm();
            taylor_step(h, norm1, psi, stop - now);
            if (std::abs(psi.norm() - before) > 1e-6) throw DisorderError("norm drift above 1e-6; refine step");
            now = stop;
            if (now >= next_redraw) {
                redraw();
                norm1 = h.cwiseAbs().colwise().sum().maxCoeff();
                ++run.redraws;
                next_redraw += resample_dt;
            }
        }
        const auto c = static_cast<Eigen::Index>(i);
        run.field.amplitudes.col(c) = psi;
        run.field.values.col(c) = psi.cwiseAbs2();
    }
    run.draws = rng.draws();
    run.msd = msd(run.field, Metric::ring, false);
    return run;
}

NetworkEnsembleStats network_ensemble(const nlohmann::json& spec, const EnsembleSpec& es, const std::vector<double>& t) {
    // pack every observable into one vector so the generic reducer applies
    auto res = ensemble_average<Eigen::VectorXd>(es, [&](std::uint64_t seed, std::size_t) {
        const Graph g = build_random_graph(spec, seed);
        const Spectrum s = decompose_symmetric(coupling_matrix(g));
        const auto pb = average_return(s, ReturnKind::quantum_exact, t);
        const auto a2 = average_return(s, ReturnKind::quantum_lower_bound, t);
        const LtaMatrix lta = long_time_average(s);
        const auto nt = static_cast<Eigen::Index>(t.size());
        Eigen::VectorXd v(2 * nt + 4);
        for (Eigen::Index i = 0; i < nt; ++i) {
            v[i] = pb[i];
            v[nt + i] = a2[i];
        }
        v[2 * nt] = lta.chi_bar;
        v[2 * nt + 1] = lta.chi_bar_lb;
        v[2 * nt + 2] = participation_ratio(s).mean;
        v[2 * nt + 3] = 2.0 * g.edges.size() / g.n;
        return v;
    });
    NetworkEnsembleStats st;
    st.times = t;
    const auto nt = static_cast<Eigen::Index>(t.size());
    for (Eigen::Index i = 0; i < nt; ++i) {
        st.pi_bar.push_back(res.mean[i]);
        st.alpha2.push_back(res.mean[nt + i]);
    }
    st.chi_bar = res.mean[2 * nt];
    st.chi_bar_lb = res.mean[2 * nt + 1];
    st.participation = res.mean[2 * nt + 2];
    st.mean_degree = res.mean[2 * nt + 3];
    return st;
}

double disordered_ring_return_lta(int n, const DisorderSpec& ds, const EnsembleSpec& es) {
    const Eigen::MatrixXd h0 = coupling_matrix(ring(n));
    auto res = ensemble_average<double>(es, [&](std::uint64_t seed, std::size_t) {
        const auto dm = sample_disorder(h0, ds, seed);
        return long_time_average(decompose_symmetric(dm.h)).chi_bar;
    });
    return res.mean;
}

}  // namespace qwalk
