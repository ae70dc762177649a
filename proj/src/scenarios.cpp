#include "qwalk/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>

#include "qwalk/disorder.hpp"
#include "qwalk/dynamics.hpp"
#include "qwalk/fit.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/io.hpp"
#include "qwalk/open_systems.hpp"
#include "qwalk/parallel.hpp"
#include "qwalk/phase_space.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/trapping.hpp"

#ifndef QWALK_VERSION
#define QWALK_VERSION "0.0.0"
#endif

namespace qwalk {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Ctx {
    json params, graph, ensemble;
    std::vector<double> t;
    fs::path dir;
    std::vector<std::string> files;
    json seeds = json::object();
    json results = json::object();
    std::vector<CriterionReport> checks;

    template <class T>
    T p(const char* key) const {
        return params.at(key).get<T>();
    }
    int node(const char* key) const {  // 1-based in configs
        return p<int>(key) - 1;
    }
    std::vector<int> nodes(const char* key) const {
        std::vector<int> v;
        for (int x : params.at(key).get<std::vector<int>>()) v.push_back(x - 1);
        return v;
    }
    EnsembleSpec es() const { return {ensemble.at("R").get<int>(), ensemble.at("seed").get<std::uint64_t>()}; }
    void csv(const std::string& name, const CsvTable& table) {
        table.write(dir / name);
        files.push_back(name);
    }
    void out_json(const std::string& name, const json& j) {
        write_json(dir / name, j);
        files.push_back(name);
    }
};

std::vector<double> col(const Eigen::MatrixXd& m, Eigen::Index r) {
    std::vector<double> v(m.cols());
    for (Eigen::Index i = 0; i < m.cols(); ++i) v[i] = m(r, i);
    return v;
}

void write_wigner(Ctx& c, const std::string& name, const WignerSlice& w) {
    CsvTable tab({"x", "kappa_hat", "value"});
    for (Eigen::Index x = 0; x < w.rows(); ++x)
        for (Eigen::Index k = 0; k < w.cols(); ++k) tab.add_row({double(x + 1), double(k), w(x, k)});
    c.csv(name, tab);
}

// ---------------------------------------------------------------- scenarios

void sc_ring_lta(Ctx& c) {
    const int n = c.p<int>("n");
    const LtaMatrix l = long_time_average(decompose_symmetric(coupling_matrix(ring(n))));
    const Eigen::MatrixXd closed = ring_lta_closed(n);
    CsvTable tab({"k", "j", "chi", "chi_closed"});
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) tab.add_row({double(k + 1), double(j + 1), l.chi(k, j), closed(k, j)});
    c.csv("chi.csv", tab);
    c.results = {{"max_abs_diff", (l.chi - closed).cwiseAbs().maxCoeff()},
                 {"chi_bar", l.chi_bar},
                 {"chi_bar_lb", l.chi_bar_lb}};
}

void sc_star_complete(Ctx& c) {
    const int ns = c.p<int>("n_star"), nc = c.p<int>("n_complete");
    const Spectrum ss = decompose_symmetric(coupling_matrix(star(ns)));
    const Spectrum sc = decompose_symmetric(coupling_matrix(complete(nc)));
    const auto f0 = propagate_quantum(ss, 0, c.t), f1 = propagate_quantum(ss, 1, c.t);
    const auto g0 = propagate_quantum(sc, 0, c.t);
    CsvTable tab({"t", "star_pi11", "star_pi11_closed", "star_pi21", "star_pi21_closed", "star_pi22", "star_pi22_closed",
                  "complete_pi11", "complete_pi11_closed"});
    for (std::size_t i = 0; i < c.t.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        const double t = c.t[i];
        tab.add_row({t, f0.values(0, k), star_pi_core(ns, t), f0.values(1, k), star_pi_core_to_leaf(ns, t),
                     f1.values(1, k), star_pi_leaf(ns, t), g0.values(0, k), complete_pi(nc, true, t)});
    }
    c.csv("pi.csv", tab);
    const LtaMatrix ls = long_time_average(ss), lc = long_time_average(sc);
    const StarLta cl = star_lta(ns);
    c.results = {{"star", {{"chi11", ls.chi(0, 0)}, {"chi21", ls.chi(1, 0)}, {"chi22", ls.chi(1, 1)}, {"chi32", ls.chi(2, 1)}}},
                 {"star_closed", {{"chi11", cl.chi11}, {"chi21", cl.chi21}, {"chi22", cl.chi22}, {"chi32", cl.chi32}}},
                 {"complete", {{"chi11", lc.chi(0, 0)}, {"chi21", lc.chi(1, 0)}}},
                 {"revival_time_star", 2.0 * std::numbers::pi / ns},
                 {"revival_time_complete", 2.0 * std::numbers::pi / nc}};
}

void sc_return_scaling(Ctx& c) {
    const Graph g = build_graph(c.graph);
    const Spectrum s = decompose_symmetric(coupling_matrix(g));
    const auto pc = average_return(s, ReturnKind::classical, c.t);
    const auto pq = average_return(s, ReturnKind::quantum_exact, c.t);
    const auto pa = average_return(s, ReturnKind::quantum_lower_bound, c.t);
    CsvTable tab({"t", "p_bar", "pi_bar", "alpha2_bar"});
    for (std::size_t i = 0; i < c.t.size(); ++i) tab.add_row({c.t[i], pc[i], pq[i], pa[i]});
    c.csv("returns.csv", tab);
    const double lo = c.p<double>("fit_lo"), hi = c.p<double>("fit_hi");
    const FitResult fc = powerlaw_fit(c.t, pc, lo, hi), fq = powerlaw_fit(c.t, pq, lo, hi, true);
    c.results = {{"classical_exponent", fc.exponent}, {"quantum_envelope_exponent", fq.exponent}, {"window", {lo, hi}}};
}

void sc_star_return(Ctx& c) {
    const int n = c.p<int>("n");
    const Spectrum ss = decompose_symmetric(coupling_matrix(star(n)));
    const Spectrum re = decompose_symmetric(coupling_matrix(ring(n)));
    const auto sp = average_return(ss, ReturnKind::quantum_exact, c.t);
    const auto sa = average_return(ss, ReturnKind::quantum_lower_bound, c.t);
    const auto sc = average_return(ss, ReturnKind::classical, c.t);
    const auto rp = average_return(re, ReturnKind::quantum_exact, c.t);
    const auto rc = average_return(re, ReturnKind::classical, c.t);
    CsvTable tab({"t", "star_pi_bar", "star_alpha2_bar", "star_p_bar", "ring_pi_bar", "ring_p_bar"});
    for (std::size_t i = 0; i < c.t.size(); ++i) tab.add_row({c.t[i], sp[i], sa[i], sc[i], rp[i], rc[i]});
    c.csv("returns.csv", tab);
    c.results = {{"star_plateau", (n - 2.0) * (n - 2.0) / (double(n) * n)}};
}

void sc_dsg_bound(Ctx& c) {
    const int gmax = c.p<int>("g_max"), gnum = c.p<int>("numeric_g_max");
    CsvTable tab({"g", "N", "chi_bar_lb_counted", "chi_bar_lb_closed", "chi_bar_lb_sum", "chi_bar_numeric"});
    for (int g = 1; g <= gmax; ++g) {
        auto ev = dsg_eigenvalues(g);
        std::sort(ev.begin(), ev.end());
        const double counted = chi_bar_lower_bound(Eigen::Map<const Eigen::VectorXd>(ev.data(), ev.size()));
        const double numeric =
            g <= gnum ? long_time_average(decompose_symmetric(coupling_matrix(dsg(g)))).chi_bar : kNaN;
        tab.add_row({double(g), double(ev.size()), counted, dsg_chi_bar_lb_closed(g), g >= 2 ? dsg_chi_bar_lb_sum(g) : kNaN,
                     numeric});
    }
    c.csv("chi_bound.csv", tab);
    c.results = {{"limit", 1.0 / 14.0}};
}

void sc_lattice_asymmetry(Ctx& c) {
    CsvTable sq({"N", "chi_corner", "chi_opposite", "diff"});
    for (int n = 2; n <= c.p<int>("n_max"); ++n) {
        const Spectrum l = line_spectrum(n);
        const Eigen::VectorXd v = lta_column(kron_spectrum(l, l), 0);
        sq.add_row({double(n), v[0], v[n * n - 1], v[0] - v[n * n - 1]});
    }
    c.csv("square.csv", sq);
    const int m = c.p<int>("cylinder_m");
    const Spectrum rs = decompose_symmetric(coupling_matrix(ring(m)));
    CsvTable cy({"N", "chi_edge", "chi_other_edge", "diff"});
    for (int n = 2; n <= c.p<int>("cylinder_n_max"); ++n) {
        const Eigen::VectorXd v = lta_column(kron_spectrum(rs, line_spectrum(n)), 0);
        cy.add_row({double(n), v[0], v[m * (n - 1)], v[0] - v[m * (n - 1)]});
    }
    c.csv("cylinder.csv", cy);
}

void write_survival(Ctx& c, const std::string& name, const std::vector<double>& pi, const std::vector<double>& pc,
                    const std::vector<double>& lb) {
    CsvTable tab({"t", "Pi", "P_classical", "lower_bound"});
    for (std::size_t i = 0; i < c.t.size(); ++i) tab.add_row({c.t[i], pi[i], pc[i], lb[i]});
    c.csv(name, tab);
}

void sc_line_traps(Ctx& c) {
    const int n = c.p<int>("n");
    const double gamma = c.p<double>("gamma");
    const TrapSpec ts{{0, n - 1}, gamma};
    const Eigen::MatrixXd h0 = coupling_matrix(line(n));
    const BiorthSpectrum bs = decompose_biorthogonal(trap_hamiltonian(h0, ts));
    const Eigen::VectorXd g = bs.gamma();
    const Eigen::VectorXd gc = line_end_trap_gammas(n, gamma);
    CsvTable gt({"l", "gamma", "provenance"});
    for (int l = 0; l < n; ++l) gt.add_row_text({std::to_string(l + 1), format_double(g[l]), "exact_biorth"});
    for (int l = 0; l < n; ++l) gt.add_row_text({std::to_string(l + 1), format_double(gc[l]), "closed_form"});
    c.csv("gamma.csv", gt);
    const QuantumSurvival qs(bs, ts.traps);
    write_survival(c, "survival.csv", qs(c.t), survival_classical(h0, ts, c.t), survival_spectral(g, n - 2.0, c.t));
    const FitResult f = gamma_scaling_fit(g, c.p<int>("l_lo"), c.p<int>("l_hi"));
    const FitResult pf = powerlaw_fit(c.t, qs(c.t), n / 2.0, double(n) * n);
    c.results = {{"mu", f.exponent},
                 {"a", f.prefactor},
                 {"survival_exponent", pf.exponent},
                 {"minus_inverse_mu", -1.0 / f.exponent},
                 {"collapse_scale", std::pow(n, 3.0 - f.exponent)}};
}

void sc_ring_dark(Ctx& c) {
    const int n = c.p<int>("n");
    const double gamma = c.p<double>("gamma");
    const bool periodic = c.p<std::string>("arrangement") == "periodic";
    if (!periodic && c.p<std::string>("arrangement") != "sequential")
        throw ConfigError("arrangement must be periodic or sequential");
    const Eigen::MatrixXd h0 = coupling_matrix(ring(n));
    json rows = json::array();
    for (int m : c.params.at("m").get<std::vector<int>>()) {
        const auto traps = periodic ? periodic_traps(n, m) : sequential_traps(m);
        const TrapSpec ts{traps, gamma};
        const BiorthSpectrum bs = decompose_biorthogonal(trap_hamiltonian(h0, ts));
        const QuantumSurvival qs(bs, traps);
        write_survival(c, "survival_M" + std::to_string(m) + ".csv", qs(c.t), survival_classical(h0, ts, c.t),
                       survival_spectral(bs.gamma(), n - double(m), c.t));
        const DarkStates ds = dark_state_count(n, m, periodic ? Arrangement::periodic : Arrangement::sequential);
        rows.push_back({{"M", m},
                        {"zero_gamma_count", count_zero_gammas(bs.gamma())},
                        {"predicted_count", ds.count},
                        {"predicted_plateau", ds.plateau},
                        {"stationary_value", qs.plateau()}});
    }
    c.results = {{"dark_states", rows}};
}

void sc_perturbation(Ctx& c) {
    const int n = c.p<int>("n");
    const double gamma = c.p<double>("gamma");
    const std::string topo = c.p<std::string>("topology");
    if (topo != "line" && topo != "ring") throw ConfigError("topology must be line or ring");
    const Eigen::MatrixXd h0 = coupling_matrix(topo == "line" ? line(n) : ring(n));
    const auto traps = c.nodes("traps");
    Eigen::VectorXd pert = perturbative_gammas(decompose_symmetric(h0), traps, gamma);
    Eigen::VectorXd exact = decompose_biorthogonal(trap_hamiltonian(h0, {traps, gamma})).gamma();
    std::sort(pert.begin(), pert.end());
    std::sort(exact.begin(), exact.end());
    CsvTable tab({"l", "gamma", "provenance"});
    for (int l = 0; l < n; ++l) tab.add_row_text({std::to_string(l + 1), format_double(exact[l]), "exact_biorth"});
    for (int l = 0; l < n; ++l) tab.add_row_text({std::to_string(l + 1), format_double(pert[l]), "perturbative"});
    c.csv("gamma.csv", tab);
    double rel = 0;
    for (int l = 0; l < n; ++l)
        if (exact[l] > 1e-10 * gamma) rel = std::max(rel, std::abs(pert[l] / exact[l] - 1.0));
    c.results = {{"max_relative_error", rel}, {"sum_exact", exact.sum()}, {"sum_perturbative", pert.sum()},
                 {"gamma_times_M", gamma * traps.size()}};
}

void sc_wigner_ring(Ctx& c) {
    const int n = c.p<int>("n"), j = c.node("j"), m = c.p<int>("m");
    const auto disp = m_neighbor_dispersion(n, m);
    json marg = json::array();
    for (std::size_t i = 0; i < c.t.size(); ++i) {
        const WignerSlice w = wigner_ring_closed(disp, j, c.t[i]);
        write_wigner(c, "wigner_t" + std::to_string(i) + ".csv", w);
        const Marginals mg = marginals(w);
        marg.push_back({{"t", c.t[i]}, {"sum_over_x", std::vector<double>(mg.over_x.begin(), mg.over_x.end())}});
    }
    const Spectrum s = decompose_symmetric(coupling_matrix(m == 1 ? ring(n) : m_neighbor_ring(n, m)));
    write_wigner(c, "limiting.csv", wigner_limiting(s, j));
    c.results = {{"marginals", marg}};
}

void sc_wigner_disorder(Ctx& c) {
    json spec{{"model", c.p<std::string>("model")}, {"n", c.p<int>("n")}};
    if (spec["model"] == "disorder") {
        spec["delta"] = c.p<double>("delta");
        spec["kind"] = c.p<std::string>("kind");
    } else {
        spec["p"] = c.p<double>("p");
    }
    const EnsembleSpec es = c.es();
    const WignerEnsemble e = wigner_ensemble(spec, c.node("j"), es.realizations, es.master_seed, c.t);
    for (std::size_t i = 0; i < e.mean.size(); ++i) write_wigner(c, "mean_t" + std::to_string(i) + ".csv", e.mean[i]);
    write_wigner(c, "mean_limiting.csv", e.mean_limiting);
    c.seeds = es.manifest(spec);
    double lo = e.mean_limiting.minCoeff();
    for (const auto& w : e.mean) lo = std::min(lo, w.minCoeff());
    c.results = {{"min_value", lo}};
}

void sc_dephasing(Ctx& c) {
    const int n = c.p<int>("n"), m = c.p<int>("m"), dim = c.p<int>("dim"), start = c.node("start");
    const double lambda = c.p<double>("lambda"), eps = c.p<double>("eps");
    const Eigen::MatrixXd closed = gurvitz_populations(n, lambda, m, c.t, start, dim);
    std::vector<std::string> head{"t"};
    for (Eigen::Index k = 0; k < closed.rows(); ++k) head.push_back("rho_" + std::to_string(k + 1));
    head.push_back("trace");
    CsvTable ct(head);
    for (std::size_t i = 0; i < c.t.size(); ++i) {
        std::vector<double> row{c.t[i]};
        for (double v : col(closed.transpose(), static_cast<Eigen::Index>(i))) row.push_back(v);
        row.push_back(closed.col(static_cast<Eigen::Index>(i)).sum());
        ct.add_row(row);
    }
    c.csv("populations_closed.csv", ct);
    json res;
    if (dim == 1) {
        const Eigen::MatrixXd h0 = coupling_matrix(m == 1 ? ring(n) : m_neighbor_ring(n, m));
        Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(n, n);
        rho0(start, start) = 1.0;
        const LindbladRun run = lindblad_propagate(h0, {lambda, {}, 0.0}, rho0, c.t);
        const Eigen::MatrixXd pops = run.populations();
        CsvTable it(head);
        for (std::size_t i = 0; i < c.t.size(); ++i) {
            std::vector<double> row{c.t[i]};
            for (int k = 0; k < n; ++k) row.push_back(pops(k, static_cast<Eigen::Index>(i)));
            row.push_back(run.rho[i].trace().real());
            it.add_row(row);
        }
        c.csv("populations.csv", it);
        res["max_abs_diff"] = (pops - closed).cwiseAbs().maxCoeff();
        res["integrator"] = {{"steps", run.steps}, {"min_step", run.min_step}, {"trace_drift", run.max_trace_drift}};
    }
    try {
        res["t_mix"] = mixing_time(closed, c.t, eps).t_mix;
    } catch (const OpenSystemError&) {
        res["t_mix"] = nullptr;
    }
    res["bound"] = dim > 1 ? mixing_bound_hypercycle(n, dim, lambda, eps)
                   : m == 1 ? mixing_bound_ring(n, lambda, eps)
                            : mixing_bound_m_neighbor(n, m, lambda, eps);
    c.results = res;
}

void sc_dimer(Ctx& c) {
    DimerSpec d{c.p<double>("e"), c.p<double>("v"), c.p<double>("gamma"), c.p<double>("lambda")};
    Eigen::MatrixXd h0(2, 2);
    h0 << d.e, -d.v, -d.v, d.e;
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(2, 2);
    rho0(0, 0) = 1.0;
    const LindbladRun run = lindblad_propagate(h0, {d.lambda, {1}, d.gamma}, rho0, c.t);
    DimerSpec trap_only = d, free_only = d;
    trap_only.lambda = 0.0;
    free_only.gamma = 0.0;
    CsvTable tab({"t", "rho_11", "rho_22", "trace", "trace_closed_no_dephasing", "rho_11_closed_no_trap",
                  "rho_11_combined"});
    for (std::size_t i = 0; i < c.t.size(); ++i) {
        const auto& r = run.rho[i];
        tab.add_row({c.t[i], r(0, 0).real(), r(1, 1).real(), r.trace().real(),
                     d.overdamped() ? kNaN : dimer_pi_trap(trap_only, c.t[i]), dimer_pi11_free(free_only, c.t[i]),
                     dimer_combined(d, c.t[i])});
    }
    c.csv("dimer.csv", tab);
    const DimerSuite s = dimer_suite(trap_only, {});
    c.results = {{"E_plus", {s.e_plus.real(), s.e_plus.imag()}},
                 {"E_minus", {s.e_minus.real(), s.e_minus.imag()}},
                 {"phi", s.phi}};
}

void sc_criterion(Ctx& c, int id) {
    const CriterionReport r = run_criterion(id);
    json items = json::array();
    for (const auto& it : r.items)
        items.push_back({{"name", it.name}, {"pass", it.pass}, {"detail", it.detail}, {"info", it.info}});
    c.out_json("report.json", {{"criterion", id}, {"title", r.title}, {"pass", r.pass()}, {"items", items}});
    c.checks.push_back(r);
}

void sc_revivals(Ctx& c) {
    CsvTable tab({"N", "mode", "tau"});
    json full = json::object();
    for (int n : c.params.at("n").get<std::vector<int>>()) {
        const Revivals r = revival_times(n);
        for (std::size_t k = 0; k < r.tau.size(); ++k) tab.add_row({double(n), double(k + 1), r.tau[k]});
        full[std::to_string(n)] = {{"tau0", r.tau0}, {"full_revival", r.full_revival}};
    }
    c.csv("revivals.csv", tab);
    c.results = full;
}

void sc_lp_clusters(Ctx& c) {
    const Graph g = build_graph(c.graph);
    const int j = c.node("start");
    const Eigen::VectorXd chi = lta_column(decompose_symmetric(coupling_matrix(g)), j);
    const auto cl = cluster_lps(chi);
    CsvTable tab({"cluster", "chi", "size", "nodes"});
    for (std::size_t i = 0; i < cl.size(); ++i) {
        std::string nodes;
        for (int k : cl[i]) nodes += (nodes.empty() ? "" : ";") + std::to_string(k + 1);
        tab.add_row_text({std::to_string(i + 1), format_double(chi[cl[i][0]]), std::to_string(cl[i].size()), nodes});
    }
    c.csv("clusters.csv", tab);
    c.results = {{"clusters", cl.size()}, {"N", g.n}};
}

void sc_spectrum(Ctx& c) {
    const Graph g = build_graph(c.graph);
    const Eigen::MatrixXd h0 = coupling_matrix(g);
    const auto traps = c.nodes("traps");
    CsvTable tab({"index", "eigenvalue_real", "eigenvalue_imag", "class_id"});
    std::vector<double> real;
    if (traps.empty()) {
        const Spectrum s = decompose_symmetric(h0);
        const auto dc = degeneracy_classes(s.values);
        std::vector<int> cls(s.dim());
        for (std::size_t k = 0; k < dc.classes.size(); ++k)
            for (int m : dc.classes[k]) cls[m] = static_cast<int>(k);
        for (int l = 0; l < s.dim(); ++l) tab.add_row({double(l + 1), s.values[l], 0.0, double(cls[l])});
        real.assign(s.values.begin(), s.values.end());
        c.results = {{"classes", dc.classes.size()}, {"chi_bar_lb", chi_bar_lower_bound(s.values)}};
    } else {
        const BiorthSpectrum b = decompose_biorthogonal(trap_hamiltonian(h0, {traps, c.p<double>("gamma")}));
        for (int l = 0; l < b.dim(); ++l) {
            tab.add_row({double(l + 1), b.values[l].real(), b.values[l].imag(), double(l)});
            real.push_back(b.values[l].real());
        }
        c.results = {{"zero_gamma_count", count_zero_gammas(b.gamma())}};
    }
    c.csv("spectrum.csv", tab);
    const DosHistogram h = dos_histogram(real, c.p<int>("bins"));
    CsvTable dt({"lo", "hi", "mass"});
    for (std::size_t i = 0; i < h.mass.size(); ++i) dt.add_row({h.edges[i], h.edges[i + 1], h.mass[i]});
    c.csv("dos.csv", dt);
}

void sc_network_ensemble(Ctx& c) {
    const EnsembleSpec es = c.es();
    const NetworkEnsembleStats st = network_ensemble(c.graph, es, c.t);
    CsvTable tab({"t", "pi_bar", "alpha2_bar"});
    for (std::size_t i = 0; i < c.t.size(); ++i) tab.add_row({c.t[i], st.pi_bar[i], st.alpha2[i]});
    c.csv("returns.csv", tab);
    c.seeds = es.manifest(c.graph);
    c.results = {{"chi_bar", st.chi_bar},
                 {"chi_bar_lb", st.chi_bar_lb},
                 {"participation", st.participation},
                 {"mean_degree", st.mean_degree}};
}

void sc_disorder(Ctx& c) {
    const int n = c.p<int>("n");
    const std::string kind = c.p<std::string>("kind");
    if (kind != "DD" && kind != "DOD") throw ConfigError("kind must be DD or DOD");
    const EnsembleSpec es = c.es();
    const Eigen::MatrixXd h0 = coupling_matrix(ring(n));
    CsvTable tab({"delta", "chi_bar", "participation"});
    for (double delta : c.params.at("deltas").get<std::vector<double>>()) {
        const DisorderSpec ds{delta, kind == "DD" ? DisorderKind::DD : DisorderKind::DOD};
        const auto r = ensemble_average<Eigen::VectorXd>(es, [&](std::uint64_t seed, std::size_t) {
            const Spectrum s = decompose_symmetric(sample_disorder(h0, ds, seed).h);
            Eigen::VectorXd v(2);
            v << long_time_average(s).chi_bar, participation_ratio(s).mean;
            return v;
        });
        tab.add_row({delta, r.mean[0], r.mean[1]});
    }
    c.csv("localization.csv", tab);
    c.seeds = es.manifest(c.params);
}

void sc_dynamic_disorder(Ctx& c) {
    const int n = c.p<int>("n");
    const json& rd = c.params.at("resample_dt");
    const double dt = rd.is_string() && rd.get<std::string>() == "inf" ? std::numeric_limits<double>::infinity()
                                                                        : rd.get<double>();
    const EnsembleSpec es = c.es();
    const Eigen::MatrixXd h0 = coupling_matrix(ring(n));
    const auto r = ensemble_average<std::vector<double>>(es, [&](std::uint64_t seed, std::size_t) {
        return dynamic_disorder_run(h0, c.p<double>("delta"), dt, c.t, c.node("start"), seed).msd;
    });
    CsvTable tab({"t", "msd"});
    for (std::size_t i = 0; i < c.t.size(); ++i) tab.add_row({c.t[i], r.mean[i]});
    c.csv("msd.csv", tab);
    c.seeds = es.manifest(c.params);
}

void sc_random_traps(Ctx& c) {
    const EnsembleSpec es = c.es();
    const RandomTrapEnsemble e = random_trap_ensemble(c.p<int>("n"), c.p<double>("gamma"), es.realizations,
                                                      es.master_seed, c.t);
    CsvTable tab({"t", "Pi", "lower_bound"});
    for (std::size_t i = 0; i < c.t.size(); ++i) tab.add_row({c.t[i], e.mean_survival[i], e.jensen_bound[i]});
    c.csv("survival.csv", tab);
    c.seeds = es.manifest(c.params);
    c.results = {{"eta", fit_eta(e, c.p<double>("eta_lo"), c.p<double>("eta_hi"))},
                 {"jensen_holds", e.jensen_holds},
                 {"redraws", e.redraws}};
}

void sc_vicsek_traps(Ctx& c) {
    const VicsekTrapResult r = vicsek_trap_survival(c.p<int>("f"), c.p<int>("g"), c.p<double>("gamma"), c.t);
    CsvTable tab({"t", "Pi"});
    for (std::size_t i = 0; i < c.t.size(); ++i) tab.add_row({c.t[i], r.survival[i]});
    c.csv("survival.csv", tab);
    c.results = {{"N", r.n}, {"plateau_predicted", r.plateau_predicted}, {"plateau_numeric", r.plateau_numeric}};
}

void sc_msd(Ctx& c) {
    const Graph g = build_graph(c.graph);
    const Spectrum s = decompose_symmetric(coupling_matrix(g));
    const Metric m = c.graph.at("family") == "ring" ? Metric::ring : Metric::line;
    const int j = c.node("start");
    const auto q = msd(propagate_quantum(s, j, c.t), m);
    const auto p = msd(propagate_classical(s, j, c.t), m);
    CsvTable tab({"t", "msd_quantum", "msd_classical"});
    for (std::size_t i = 0; i < c.t.size(); ++i) tab.add_row({c.t[i], q[i], p[i]});
    c.csv("msd.csv", tab);
    const double lo = c.p<double>("fit_lo"), hi = c.p<double>("fit_hi");
    c.results = {{"quantum_slope", powerlaw_fit(c.t, q, lo, hi).exponent},
                 {"classical_slope", powerlaw_fit(c.t, p, lo, hi).exponent}};
}

// ---------------------------------------------------------------- registry

struct Entry {
    ScenarioInfo info;
    json defaults;  // {"graph", "params", "time", "ensemble"}
    void (*fn)(Ctx&);
};

json lin(double a, double b, int n) { return {{"linspace", {a, b, n}}}; }
json logs(double a, double b, int n) { return {{"logspace", {a, b, n}}}; }

const std::vector<Entry>& registry() {
    static const std::vector<Entry> r = {
        {{"ring-lta", "Long-time averages chi_{k,j} on a ring against the Bloch closed form",
          "ring LTA table", 1},
         {{"params", {{"n", 21}}}},
         sc_ring_lta},
        {{"star-complete", "Transition probabilities and LTAs of the star and the complete graph",
          "star and complete graph transition probabilities", 2},
         {{"params", {{"n_star", 51}, {"n_complete", 5}}}, {"time", lin(0, 20, 401)}},
         sc_star_complete},
        {{"return-scaling", "Average return probabilities p-bar, pi-bar and |alpha-bar|^2 with power-law fits",
          "ring return probability decay t^-1/2 vs t^-1", 3},
         {{"graph", {{"family", "ring"}, {"n", 1000}}},
          {"params", {{"fit_lo", 1.0}, {"fit_hi", 100.0}}},
          {"time", lin(1, 100, 1981)}},
         sc_return_scaling},
        {{"star-return", "Star versus ring average return probabilities", "ring and star return behaviour", 4},
         {{"params", {{"n", 51}}}, {"time", lin(0, 100, 2001)}},
         sc_star_return},
        {{"dsg-chi-bound", "Dual Sierpinski gasket lower bound chi-bar_lb: counting, family sum and closed form",
          "DSG chi-bar lower bound closed form", 5},
         {{"params", {{"g_max", 10}, {"numeric_g_max", 5}}}},
         sc_dsg_bound},
        {{"lattice-asymmetry", "Corner LTA differences on square lattices and M=15 cylinders",
          "2D lattice limiting-probability differences", 6},
         {{"params", {{"n_max", 30}, {"cylinder_m", 15}, {"cylinder_n_max", 30}}}},
         sc_lattice_asymmetry},
        {{"line-traps", "Line with traps at both ends: gamma spectrum, survival, mu fit",
          "imaginary parts of the line eigenvalues and survival decay", 7},
         {{"params", {{"n", 100}, {"gamma", 1.0}, {"l_lo", 10}, {"l_hi", 60}}}, {"time", logs(1, 1e6, 300)}},
         sc_line_traps},
        {{"ring-dark-states", "Ring with periodic or sequential traps: dark states and survival plateaus",
          "periodic trap survival plateaus", 8},
         {{"params", {{"n", 300}, {"m", {10, 75}}, {"gamma", 1.0}, {"arrangement", "periodic"}}},
          {"time", logs(0.1, 1e6, 200)}},
         sc_ring_dark},
        {{"trap-perturbation", "First-order gamma_l against the exact biorthogonal spectrum",
          "perturbative trapping rates", 9},
         {{"params", {{"n", 100}, {"gamma", 1e-3}, {"topology", "line"}, {"traps", {1, 100}}}}},
         sc_perturbation},
        {{"wigner-ring", "Discrete Wigner function of a ring walk, time slices and the long-time limit",
          "Wigner function snapshots on the N=101 ring", 10},
         {{"params", {{"n", 101}, {"j", 51}, {"m", 1}}}, {"time", {{"values", {0.0, 1.0, 20.0, 40.0}}}}},
         sc_wigner_ring},
        {{"wigner-disorder", "Ensemble-averaged Wigner function for disordered rings or rewired networks",
          "averaged Wigner functions with disorder", 0},
         {{"params", {{"n", 101}, {"j", 51}, {"model", "disorder"}, {"delta", 0.5}, {"kind", "DD"}, {"p", 0.1}}},
          {"time", {{"values", {1.0, 20.0, 100.0}}}},
          {"ensemble", {{"R", 200}, {"seed", 20240611}}}},
         sc_wigner_disorder},
        {{"dephasing-ring", "Uniform projector dephasing on rings and hypercycles: populations and mixing time",
          "dephasing ring populations and mixing-time bound", 11},
         {{"params", {{"n", 10}, {"lambda", 0.1}, {"m", 1}, {"dim", 1}, {"start", 1}, {"eps", 0.01}}},
          {"time", lin(0, 50, 501)}},
         sc_dephasing},
        {{"dimer", "Dimer with a trap and dephasing: integrator and closed forms",
          "dimer survival with trapping and dephasing", 11},
         {{"params", {{"e", 1.0}, {"v", 1.0}, {"gamma", 0.1}, {"lambda", std::numbers::pi / 10.0}}},
          {"time", lin(0, 10, 201)}},
         sc_dimer},
        {{"property-suite", "Invariant suites, exponential oracle, Jensen bound, disorder and MSD checks",
          "no figure; consistency checks", 12},
         json::object(),
         [](Ctx& c) { sc_criterion(c, 12); }},
        {{"revivals", "Per-mode revival times of rings", "ring revival times", 0},
         {{"params", {{"n", {3, 4, 5, 6, 8, 20, 21}}}}},
         sc_revivals},
        {{"lp-clusters", "Clusters of equal limiting probabilities for a start node",
          "dendrimer limiting-probability clusters", 0},
         {{"graph", {{"family", "dendrimer"}, {"G", 5}}}, {"params", {{"start", 94}}}},
         sc_lp_clusters},
        {{"spectrum", "Spectrum export with degeneracy classes and density of states",
          "spectra and DOS of deterministic graphs", 0},
         {{"graph", {{"family", "dsg"}, {"g", 4}}}, {"params", {{"bins", 50}, {"traps", json::array()}, {"gamma", 1.0}}}},
         sc_spectrum},
        {{"network-ensemble", "Random-network ensembles: averaged returns, LTAs and participation",
          "small-world and random network return probabilities", 0},
         {{"graph", {{"family", "small_world"}, {"n", 100}, {"B", 10}}},
          {"time", logs(0.1, 100, 100)},
          {"ensemble", {{"R", 100}, {"seed", 42}}}},
         sc_network_ensemble},
        {{"disorder-localization", "Static disorder on a ring: chi-bar and participation against Delta",
          "localization with diagonal and off-diagonal disorder", 0},
         {{"params", {{"n", 50}, {"kind", "DD"}, {"deltas", {0.0, 0.1, 0.25, 0.5, 1.0, 2.0}}}},
          {"ensemble", {{"R", 100}, {"seed", 7}}}},
         sc_disorder},
        {{"dynamic-disorder", "Diagonal disorder redrawn at fixed intervals: mean-square displacement",
          "dynamic disorder spreading", 0},
         {{"params", {{"n", 101}, {"start", 51}, {"delta", 0.5}, {"resample_dt", 1.0}}},
          {"time", lin(0, 40, 81)},
          {"ensemble", {{"R", 50}, {"seed", 11}}}},
         sc_dynamic_disorder},
        {{"random-traps", "Random geometric networks with one trap: ensemble survival and Jensen bound",
          "random trap survival and eta(N)", 0},
         {{"params", {{"n", 100}, {"gamma", 1.0}, {"eta_lo", 10.0}, {"eta_hi", 1e4}}},
          {"time", logs(0.1, 1e5, 150)},
          {"ensemble", {{"R", 50}, {"seed", 777}}}},
         sc_random_traps},
        {{"vicsek-traps", "Vicsek fractal with a central trap: survival and plateau",
          "hyperbranched fractal trapping", 0},
         {{"params", {{"f", 4}, {"g", 3}, {"gamma", 1.0}}}, {"time", logs(0.01, 1e4, 200)}},
         sc_vicsek_traps},
        {{"msd", "Quantum and classical mean-square displacement", "ballistic versus diffusive spreading", 0},
         {{"graph", {{"family", "ring"}, {"n", 401}}},
          {"params", {{"start", 201}, {"fit_lo", 5.0}, {"fit_hi", 50.0}}},
          {"time", logs(1, 50, 40)}},
         sc_msd},
    };
    return r;
}

const Entry& find_entry(const std::string& name) {
    for (const auto& e : registry())
        if (e.info.name == name) return e;
    throw ConfigError("unknown scenario: " + name);
}

}  // namespace

const std::vector<ScenarioInfo>& list_scenarios() {
    static const std::vector<ScenarioInfo> v = [] {
        std::vector<ScenarioInfo> out;
        for (const auto& e : registry()) out.push_back(e.info);
        return out;
    }();
    return v;
}

const ScenarioInfo& find_scenario(const std::string& name) { return find_entry(name).info; }

std::vector<double> parse_time_grid(const json& spec) {
    if (!spec.is_object() || spec.size() != 1) throw ConfigError("time must have exactly one of linspace, logspace, values");
    try {
        std::vector<double> t;
        if (spec.contains("values")) {
            t = spec["values"].get<std::vector<double>>();
        } else if (spec.contains("linspace") || spec.contains("logspace")) {
            const bool is_log = spec.contains("logspace");
            const json& a = is_log ? spec["logspace"] : spec["linspace"];
            if (!a.is_array() || a.size() != 3) throw ConfigError("grid needs [start, stop, count]");
            const int n = a[2].get<int>();
            if (n < 1) throw ConfigError("grid count must be >= 1");
            t = is_log ? logspace(a[0].get<double>(), a[1].get<double>(), n)
                       : linspace(a[0].get<double>(), a[1].get<double>(), n);
        } else {
            throw ConfigError("time must have exactly one of linspace, logspace, values");
        }
        validate_grid(t);
        return t;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("time grid: ") + e.what());
    } catch (const DynamicsError& e) {
        throw ConfigError(std::string("time grid: ") + e.what());
    }
}

ScenarioConfig ScenarioConfig::from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be an object");
    static const std::set<std::string> keys{"scenario", "output_dir", "graph", "params", "time", "ensemble", "self_check"};
    for (const auto& [k, v] : j.items())
        if (!keys.count(k)) throw ConfigError("unknown config key: " + k);
    ScenarioConfig c;
    try {
        c.scenario = j.at("scenario").get<std::string>();
        c.output_dir = j.value("output_dir", "qwalk_out/" + c.scenario);
        for (auto [key, dst] : {std::pair{"graph", &c.graph}, std::pair{"params", &c.params}, std::pair{"time", &c.time},
                                std::pair{"ensemble", &c.ensemble}}) {
            if (!j.contains(key)) continue;
            if (!j[key].is_object()) throw ConfigError(std::string(key) + " must be an object");
            *dst = j[key];
        }
        c.self_check = j.value("self_check", false);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    find_entry(c.scenario);
    return c;
}

json ScenarioConfig::to_json() const {
    return {{"scenario", scenario}, {"output_dir", output_dir.generic_string()}, {"graph", graph}, {"params", params},
            {"time", time}, {"ensemble", ensemble}, {"self_check", self_check}};
}

bool ResultBundle::checks_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CriterionReport& r) { return r.pass(); });
}

ResultBundle run_scenario(const ScenarioConfig& cfg) {
    const Entry& e = find_entry(cfg.scenario);
    Ctx c;
    // resolve against defaults; unknown parameter names are schema errors
    c.params = e.defaults.value("params", json::object());
    for (const auto& [k, v] : cfg.params.items()) {
        if (!c.params.contains(k)) throw ConfigError("scenario " + cfg.scenario + " has no parameter '" + k + "'");
        c.params[k] = v;
    }
    c.graph = cfg.graph.empty() ? e.defaults.value("graph", json::object()) : cfg.graph;
    if (!cfg.graph.empty() && !e.defaults.contains("graph"))
        throw ConfigError("scenario " + cfg.scenario + " does not take a graph");
    c.ensemble = e.defaults.value("ensemble", json::object());
    for (const auto& [k, v] : cfg.ensemble.items()) {
        if (!c.ensemble.contains(k)) throw ConfigError("scenario " + cfg.scenario + " has no ensemble field '" + k + "'");
        c.ensemble[k] = v;
    }
    const json time = cfg.time.empty() ? e.defaults.value("time", json::object()) : cfg.time;
    if (!time.empty()) c.t = parse_time_grid(time);

    ScenarioConfig resolved = cfg;
    resolved.params = c.params;
    resolved.graph = c.graph;
    resolved.ensemble = c.ensemble;
    resolved.time = time;
    const json rj = resolved.to_json();

    c.dir = cfg.output_dir;
    fs::create_directories(c.dir);
    try {
        e.fn(c);
        if (cfg.self_check && e.info.criterion > 0 && c.checks.empty()) c.checks.push_back(run_criterion(e.info.criterion));
    } catch (const ConfigError& err) {
        throw ConfigError("scenario " + cfg.scenario + ": " + err.what());
    } catch (const json::exception& err) {
        throw ConfigError("scenario " + cfg.scenario + ": " + err.what());
    } catch (const std::exception& err) {
        throw ScenarioError("scenario " + cfg.scenario + ": " + err.what());
    }
    if (!c.results.empty()) c.out_json("results.json", c.results);

    ResultBundle b;
    b.dir = c.dir;
    b.checks = c.checks;
    std::sort(c.files.begin(), c.files.end());
    b.files = c.files;
    json checks = json::array();
    for (const auto& r : b.checks) checks.push_back({{"criterion", r.id}, {"pass", r.pass()}});
    b.manifest = {{"scenario", cfg.scenario},
                  {"config", rj},
                  {"config_hash", config_hash(rj)},
                  {"seeds", c.seeds},
                  {"versions", {{"qwalk", QWALK_VERSION}, {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                                                       std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                                                       std::to_string(EIGEN_MINOR_VERSION)}}},
                  {"files", b.files},
                  {"self_check", checks}};
    write_json(c.dir / "manifest.json", b.manifest);
    return b;
}

std::vector<ResultBundle> run_scenarios(const std::vector<ScenarioConfig>& cfgs) {
    std::set<std::string> dirs;
    for (const auto& c : cfgs)
        if (!dirs.insert(fs::weakly_canonical(c.output_dir).string()).second)
            throw ConfigError("two configs share the output directory " + c.output_dir.string());
    std::vector<ResultBundle> out(cfgs.size());
    parallel_for(cfgs.size(), [&](std::size_t i) { out[i] = run_scenario(cfgs[i]); });
    return out;
}

}  // namespace qwalk
