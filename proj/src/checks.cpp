#include "qwalk/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <set>

#include "qwalk/disorder.hpp"
#include "qwalk/dynamics.hpp"
#include "qwalk/fit.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/open_systems.hpp"
#include "qwalk/phase_space.hpp"
#include "qwalk/rng.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/trapping.hpp"

namespace qwalk {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

struct Items {
    std::vector<CheckItem>& v;
    void add(const std::string& name, bool pass, const std::string& detail) { v.push_back({name, pass, detail, false}); }
    void info(const std::string& name, const std::string& detail) { v.push_back({name, true, detail, true}); }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Eigen::VectorXd to_vec(const std::vector<double>& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()); }

std::vector<double> grid_per_unit(double a, double b, int per_unit) {
    return linspace(a, b, static_cast<int>(std::lround((b - a) * per_unit)) + 1);
}

// ---- 1
void ring_lta(Items& it) {
    for (int n : {20, 21}) {
        const auto t0 = std::chrono::steady_clock::now();
        const LtaMatrix l = long_time_average(decompose_symmetric(coupling_matrix(ring(n))));
        const double secs = seconds_since(t0);
        const double err = (l.chi - ring_lta_closed(n)).cwiseAbs().maxCoeff();
        it.add(fmt("N=%d chi vs Bloch closed form", n), err <= 1e-10, fmt("max |diff| = %.2e", err));
        it.add(fmt("N=%d runtime", n), secs < 1.0, fmt("%.3f s", secs));
        // the short printed table (1/N^2 off-diagonal) does not conserve probability; shown for reference
        double dev = 0.0;
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) {
                const bool mirror = k == j || (n % 2 == 0 && k == (j + n / 2) % n);
                const double printed = mirror ? (n % 2 ? 1.0 / n : 0.5 / n) : 1.0 / (double(n) * n);
                dev = std::max(dev, std::abs(l.chi(k, j) - printed));
            }
        it.info(fmt("N=%d short printed table", n), fmt("max |diff| = %.3e, column sums of that table = %.4f", dev,
                                                        n % 2 ? 1.0 / n + (n - 1.0) / (double(n) * n)
                                                              : 1.0 / n + (n - 2.0) / (double(n) * n)));
    }
}

// ---- 2
void star_complete(Items& it) {
    const auto t = linspace(0.0, 20.0, 401);
    {
        const int n = 51;
        const Spectrum s = decompose_symmetric(coupling_matrix(star(n)));
        const auto f0 = propagate_quantum(s, 0, t);
        const auto f1 = propagate_quantum(s, 1, t);
        double e11 = 0, ek1 = 0, e22 = 0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const auto c = static_cast<Eigen::Index>(i);
            e11 = std::max(e11, std::abs(f0.values(0, c) - star_pi_core(n, t[i])));
            for (int k = 1; k < n; ++k) ek1 = std::max(ek1, std::abs(f0.values(k, c) - star_pi_core_to_leaf(n, t[i])));
            e22 = std::max(e22, std::abs(f1.values(1, c) - star_pi_leaf(n, t[i])));
        }
        it.add("star N=51 pi_11(t)", e11 <= 1e-10, fmt("max |diff| = %.2e", e11));
        it.add("star N=51 pi_k1(t)", ek1 <= 1e-10, fmt("max |diff| = %.2e", ek1));
        it.add("star N=51 pi_22(t)", e22 <= 1e-10, fmt("max |diff| = %.2e", e22));
        const LtaMatrix l = long_time_average(s);
        const StarLta c = star_lta(n);
        const double ec = std::max({std::abs(l.chi(0, 0) - c.chi11), std::abs(l.chi(1, 0) - c.chi21),
                                    std::abs(l.chi(1, 1) - c.chi22), std::abs(l.chi(2, 1) - c.chi32)});
        it.add("star N=51 chi_11, chi_21, chi_22, chi_32", ec <= 1e-10, fmt("max |diff| = %.2e", ec));
        const double tr = 2.0 * kPi / n;
        const double p = propagate_quantum(s, 0, {tr}).values(0, 0);
        it.add("star N=51 revival at 2 pi/N", std::abs(p - 1.0) <= 1e-8, fmt("pi_11 = 1 - %.2e", 1.0 - p));
    }
    {
        const int n = 5;
        const Spectrum s = decompose_symmetric(coupling_matrix(complete(n)));
        double e = 0;
        for (int j = 0; j < n; ++j) {
            const auto f = propagate_quantum(s, j, t);
            for (std::size_t i = 0; i < t.size(); ++i)
                for (int k = 0; k < n; ++k)
                    e = std::max(e, std::abs(f.values(k, static_cast<Eigen::Index>(i)) - complete_pi(n, k == j, t[i])));
        }
        it.add("complete N=5 pi_kj(t)", e <= 1e-10, fmt("max |diff| = %.2e", e));
        const LtaMatrix l = long_time_average(s);
        const double nn = double(n) * n;
        double ec = 0;
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                ec = std::max(ec, std::abs(l.chi(k, j) - (k == j ? (nn - 2.0 * n + 2.0) / nn : 2.0 / nn)));
        it.add("complete N=5 chi", ec <= 1e-10, fmt("max |diff| = %.2e", ec));
        const auto f = propagate_quantum(s, 0, {2.0 * kPi / n});
        it.add("complete N=5 revival at 2 pi/N", std::abs(f.values(0, 0) - 1.0) <= 1e-8,
               fmt("pi_11 = 1 - %.2e", 1.0 - f.values(0, 0)));
    }
}

// ---- 3
void return_scaling(Items& it) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n = 1000;
    const Eigen::VectorXd e = to_vec(ring_eigenvalues(n));
    const auto tc = logspace(1.0, 100.0, 200);
    const auto pc = average_return(e, ReturnKind::classical, tc);
    const FitResult fc = powerlaw_fit(tc, pc, 1.0, 100.0);
    it.add("classical exponent", std::abs(fc.exponent + 0.5) <= 0.05, fmt("%.4f (target -0.5 +- 0.05)", fc.exponent));
    const Spectrum s = decompose_symmetric(coupling_matrix(ring(n)));
    const auto tq = grid_per_unit(1.0, 100.0, 20);
    const auto pq = average_return(s, ReturnKind::quantum_exact, tq);
    const FitResult fq = powerlaw_fit(tq, pq, 1.0, 100.0, true);
    it.add("quantum envelope exponent", std::abs(fq.exponent + 1.0) <= 0.1,
           fmt("%.4f over %d maxima (target -1 +- 0.1)", fq.exponent, fq.n_points));
    const double secs = seconds_since(t0);
    it.add("runtime", secs < 30.0, fmt("%.2f s", secs));
}

// ---- 4
void star_nondecay(Items& it) {
    const int n = 51;
    const double target = (n - 2.0) * (n - 2.0) / (double(n) * n), tol = 3.0 / n;
    const Spectrum s = decompose_symmetric(coupling_matrix(star(n)));
    const auto t = grid_per_unit(1.0, 100.0, 20);
    for (auto [kind, name] : {std::pair{ReturnKind::quantum_exact, "pi-bar"},
                              std::pair{ReturnKind::quantum_lower_bound, "|alpha-bar|^2"}}) {
        const auto v = average_return(s, kind, t);
        double dev = 0, at = 0;
        for (std::size_t i = 0; i < t.size(); ++i)
            if (std::abs(v[i] - target) > dev) dev = std::abs(v[i] - target), at = t[i];
        it.add(fmt("%s within 3/N of (N-2)^2/N^2", name), dev <= tol,
               fmt("max |dev| = %.4f at t = %.2f (bound %.4f)", dev, at, tol));
    }
    // integer spectrum {0, 1, N}: exact revivals of |alpha-bar|^2 at t = 2 pi k
    const auto r = average_return(s, ReturnKind::quantum_lower_bound, {2.0 * kPi});
    it.info("|alpha-bar|^2 at t = 2 pi", fmt("%.12f, deviation %.4f = 4(N-1)/N^2", r[0], r[0] - target));
}

// ---- 5
void dsg_bound(Items& it) {
    double worst = 0, worst_sum = 0;
    for (int g = 3; g <= 6; ++g) {
        auto ev = dsg_eigenvalues(g);
        std::sort(ev.begin(), ev.end());
        const double counted = chi_bar_lower_bound(to_vec(ev));
        worst = std::max(worst, std::abs(counted - dsg_chi_bar_lb_closed(g)));
        worst_sum = std::max(worst_sum, std::abs(counted - dsg_chi_bar_lb_sum(g)));
    }
    it.add("closed form vs degeneracy counting, g=3..6", worst <= 1e-12, fmt("max |diff| = %.2e", worst));
    it.add("family sum vs degeneracy counting, g=3..6", worst_sum <= 1e-12, fmt("max |diff| = %.2e", worst_sum));
    {
        const Spectrum s = decompose_symmetric(coupling_matrix(dsg(5)));
        auto ev = dsg_eigenvalues(5);
        std::sort(ev.begin(), ev.end());
        const double err = (s.values - to_vec(ev)).cwiseAbs().maxCoeff();
        it.add("recursive spectrum matches numeric, g=5", err <= 1e-9, fmt("max |diff| = %.2e", err));
    }
    bool mono = true;
    for (int g = 3; g < 25; ++g) mono = mono && dsg_chi_bar_lb_closed(g + 1) < dsg_chi_bar_lb_closed(g);
    const double lim = std::abs(dsg_chi_bar_lb_closed(30) - 1.0 / 14.0);
    it.add("decreasing toward 1/14", mono && lim < 1e-10 && dsg_chi_bar_lb_closed(30) > 1.0 / 14.0,
           fmt("monotone g=3..25: %s, |lb(30) - 1/14| = %.2e", mono ? "yes" : "no", lim));
    const LtaMatrix l = long_time_average(decompose_symmetric(coupling_matrix(dsg(4))));
    const double lb = dsg_chi_bar_lb_closed(4);
    it.add("chi-bar >= chi-bar_lb at g=4", l.chi_bar >= lb - 1e-12, fmt("%.6f >= %.6f", l.chi_bar, lb));
}

// ---- 6
double corner_asymmetry(const Spectrum& s, int c, int other) {
    const Eigen::VectorXd col = lta_column(s, c);
    return col[c] - col[other];
}

void lattice_asymmetry(Items& it) {
    for (int n : {5, 14, 23, 47}) {
        const Spectrum l = line_spectrum(n);
        const double d = corner_asymmetry(kron_spectrum(l, l), 0, n * n - 1);
        it.add(fmt("%dx%d corner vs opposite corner equal", n, n), std::abs(d) < 1e-10, fmt("diff = %.2e", d));
    }
    for (int n : {6, 15, 24, 48}) {
        const Spectrum l = line_spectrum(n);
        const double d = corner_asymmetry(kron_spectrum(l, l), 0, n * n - 1);
        it.add(fmt("%dx%d corner vs opposite corner differ", n, n), std::abs(d) > 1e-6, fmt("diff = %.3e", d));
    }
    const int m = 15;
    const Spectrum rs = decompose_symmetric(coupling_matrix(ring(m)));
    std::vector<int> nonzero;
    for (int n = 4; n <= 30; ++n) {
        const double d = corner_asymmetry(kron_spectrum(rs, line_spectrum(n)), 0, m * (n - 1));
        if (std::abs(d) > 1e-6) nonzero.push_back(n);
        else if (std::abs(d) > 1e-10) nonzero.push_back(-n);  // ambiguous
    }
    std::string got;
    for (int n : nonzero) got += (got.empty() ? "" : ",") + std::to_string(n);
    it.add("cylinder M=15 asymmetric only at N in {10,15,30}", nonzero == std::vector<int>{10, 15, 30},
           "nonzero at {" + got + "}");
}

// ---- 7
struct LineTrap {
    BiorthSpectrum bs;
    std::vector<int> traps;
};
LineTrap line_with_end_traps(int n, double gamma) {
    TrapSpec ts{{0, n - 1}, gamma};
    return {decompose_biorthogonal(trap_hamiltonian(coupling_matrix(line(n)), ts)), ts.traps};
}

void line_traps(Items& it) {
    const LineTrap lt = line_with_end_traps(100, 1.0);
    const Eigen::VectorXd g = lt.bs.gamma();
    const FitResult f = gamma_scaling_fit(g, 10, 60);
    const double mu = f.exponent;
    it.add("gamma_l ~ l^mu over l in [10,60]", std::abs(mu - 1.865) <= 0.02, fmt("mu = %.4f (target 1.865 +- 0.02)", mu));
    const QuantumSurvival qs(lt.bs, lt.traps);
    const auto t = logspace(1.0, 1e6, 600);
    const auto pi = qs(t);
    const FitResult pf = powerlaw_fit(t, pi, 50.0, 1e4);
    it.add("intermediate power law t^(-1/mu) on [N/2, N^2]", std::abs(pf.exponent + 1.0 / mu) <= 0.05,
           fmt("exponent %.4f vs -1/mu = %.4f", pf.exponent, -1.0 / mu));
    const double g1 = g[0];
    const auto tt = linspace(2.0 / g1, 5.0 / g1, 40);
    std::vector<double> lp;
    for (double x : qs(tt)) lp.push_back(std::log(x));
    const LineFit lf = linear_fit(tt, lp);
    it.add("exponential tail with rate 2 gamma_min", std::abs(lf.slope / (-2.0 * g1) - 1.0) <= 0.05,
           fmt("d ln Pi/dt = %.4e vs %.4e", lf.slope, -2.0 * g1));
    const auto x = logspace(0.1, 10.0, 41);
    auto curve = [&](int n) {
        const LineTrap l = line_with_end_traps(n, 1.0);
        const QuantumSurvival q(l.bs, l.traps);
        std::vector<double> out;
        for (double xi : x) out.push_back(q(xi * std::pow(n, 3.0 - mu)));
        return out;
    };
    const auto ref = curve(100);
    double worst = 0;
    for (int n : {60, 80}) {
        const auto c = curve(n);
        for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(c[i] / ref[i] - 1.0));
    }
    it.add("collapse under t/N^(3-mu), N in {60,80,100}", worst <= 0.1,
           fmt("max relative spread %.4f on x in [0.1,10]", worst));
}

// ---- 8
void ring_dark(Items& it) {
    const int n = 300;
    const Eigen::MatrixXd h0 = coupling_matrix(ring(n));
    for (auto [m, plateau] : {std::pair{10, 0.1}, std::pair{75, 1.0 / 225.0}}) {
        const auto traps = periodic_traps(n, m);
        const BiorthSpectrum bs = decompose_biorthogonal(trap_hamiltonian(h0, {traps, 1.0}));
        const Eigen::VectorXd g = bs.gamma();
        const int zeros = count_zero_gammas(g);
        const DarkStates ds = dark_state_count(n, m, Arrangement::periodic);
        const int expect = m == 10 ? 29 : 1;
        it.add(fmt("M=%d zero-gamma count", m), zeros == ds.count && zeros == expect,
               fmt("exact %d, formula %d, expected %d", zeros, ds.count, expect));
        const QuantumSurvival qs(bs, traps);
        double gmin = 0;
        for (double v : g)
            if (v > 1e-10) {
                gmin = v;
                break;
            }
        const double tl = std::min(25.0 / gmin, 1e9);
        const double late = qs(tl);
        const double rel = std::abs(late / plateau - 1.0);
        it.add(fmt("M=%d plateau reaches %.6f", m, plateau), rel <= 1e-2,
               fmt("Pi(%.3g) = %.8f, stationary part %.8f, rel dev %.2e", tl, late, qs.plateau(), rel));
    }
    for (int nn : {32, 64}) {
        const double gamma = 0.004;
        const int m = nn / 2;
        const auto traps = sequential_traps(m);
        const BiorthSpectrum bs =
            decompose_biorthogonal(trap_hamiltonian(coupling_matrix(ring(nn)), {traps, gamma}));
        const QuantumSurvival qs(bs, traps);
        const auto t = linspace(0.5 / gamma, 3.0 / gamma, 60);
        std::vector<double> lp;
        for (double v : qs(t)) lp.push_back(std::log(v));
        const LineFit lf = linear_fit(t, lp);
        const double pred = -2.0 * gamma * m / nn;
        it.add(fmt("sequential N=%d M=N/2 slope", nn), std::abs(lf.slope / pred - 1.0) <= 0.05,
               fmt("d ln Pi/dt = %.5f vs -2 Gamma M/N = %.5f (Gamma = %.3g)", lf.slope, pred, gamma));
    }
}

// ---- 9
void perturbation(Items& it) {
    const double gamma = 1e-3;
    auto compare = [&](const std::string& label, const Eigen::MatrixXd& h0, const std::vector<int>& traps) {
        const Spectrum s0 = decompose_symmetric(h0);
        Eigen::VectorXd pert = perturbative_gammas(s0, traps, gamma);
        Eigen::VectorXd exact = decompose_biorthogonal(trap_hamiltonian(h0, {traps, gamma})).gamma();
        std::sort(pert.begin(), pert.end());
        std::sort(exact.begin(), exact.end());
        double rel = 0;
        bool dark_ok = true;
        for (Eigen::Index l = 0; l < exact.size(); ++l) {
            if (exact[l] < 1e-10 * gamma) {
                dark_ok = dark_ok && std::abs(pert[l]) < 1e-10 * gamma;
                continue;
            }
            rel = std::max(rel, std::abs(pert[l] / exact[l] - 1.0));
        }
        it.add(label + " perturbative vs exact gamma_l", rel <= 1e-2 && dark_ok,
               fmt("max relative error %.3e%s", rel, dark_ok ? "" : ", dark states disagree"));
        const double target = gamma * traps.size();
        const double tr = std::max(std::abs(exact.sum() - target), std::abs(pert.sum() - target));
        it.add(label + " trace identity sum gamma_l = Gamma M", tr <= 1e-8, fmt("max |diff| = %.2e", tr));
    };
    compare("line N=100, end traps:", coupling_matrix(line(100)), {0, 99});
    compare("ring N=100, periodic M=10:", coupling_matrix(ring(100)), periodic_traps(100, 10));
    compare("ring N=100, sequential M=5:", coupling_matrix(ring(100)), sequential_traps(5));
}

// ---- 10
void wigner(Items& it) {
    for (int n : {100, 101}) {
        const int j = n / 2;
        const Spectrum s = decompose_symmetric(coupling_matrix(ring(n)));
        double e_kappa = 0, e_x = 0, e_closed = 0;
        for (double t : {0.0, 1.0, 20.0}) {
            const WignerSlice w = wigner_ring_closed(n, j, t);
            const auto f = propagate_quantum(s, j, {t});
            const WignerSlice wn = wigner_from_state(f.amplitudes.col(0));
            e_closed = std::max(e_closed, (w - wn).cwiseAbs().maxCoeff());
            const Marginals mg = marginals(w);
            e_kappa = std::max(e_kappa, (mg.over_kappa - f.values.col(0)).cwiseAbs().maxCoeff());
            for (int k = 0; k < n; ++k) e_x = std::max(e_x, std::abs(mg.over_x[k] - ring_kappa_marginal(n, k)));
        }
        it.add(fmt("N=%d closed form vs definition", n), e_closed <= 1e-12, fmt("max |diff| = %.2e", e_closed));
        it.add(fmt("N=%d sum over kappa = pi_{x,j}(t)", n), e_kappa <= 1e-12, fmt("max |diff| = %.2e", e_kappa));
        it.add(fmt("N=%d sum over x = parity values", n), e_x <= 1e-12, fmt("max |diff| = %.2e", e_x));
        const double el = (wigner_limiting(s, j) - wigner_limiting_closed(n, j)).cwiseAbs().maxCoeff();
        it.add(fmt("N=%d limiting WF", n), el <= 1e-10, fmt("max |diff| = %.2e", el));
    }
    const nlohmann::json spec{{"model", "disorder"}, {"n", 101}, {"delta", 0.5}, {"kind", "DOD"}};
    const WignerEnsemble e = wigner_ensemble(spec, 50, 200, 20240611ULL, {100.0, 500.0});
    double lo = e.mean_limiting.minCoeff();
    std::string where = "limit";
    for (std::size_t i = 0; i < e.times.size(); ++i)
        if (e.mean[i].minCoeff() < lo) lo = e.mean[i].minCoeff(), where = fmt("t = %g", e.times[i]);
    it.add("disorder Delta=1/2, R=200: averaged WF nonnegative (t=100, 500, limit)", lo >= -1e-6,
           fmt("min = %.3e at %s", lo, where.c_str()));
    it.info("disorder Delta=1/2: min / max of averaged WF at t = 500",
            fmt("%.3f", e.mean[1].minCoeff() / e.mean[1].maxCoeff()));
}

// ---- 11
void open_systems(Items& it) {
    {
        const int n = 10;
        const double lambda = 0.1;
        const auto t = linspace(0.0, 50.0, 501);
        const Eigen::MatrixXd exact = gurvitz_populations(n, lambda, 1, t);
        Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(n, n);
        rho0(0, 0) = 1.0;
        const LindbladRun run = lindblad_propagate(coupling_matrix(ring(n)), {lambda, {}, 0.0}, rho0, t);
        const double err = (run.populations() - exact).cwiseAbs().maxCoeff();
        it.add("dephasing ring N=10, lambda=0.1: block solution vs integrator", err <= 1e-6,
               fmt("max |diff| = %.2e over t in [0,50]", err));
        it.add("integrator invariants", run.max_trace_drift < 1e-9 && run.min_eigenvalue > -1e-9,
               fmt("trace drift %.1e, min eigenvalue %.1e", run.max_trace_drift, run.min_eigenvalue));
        for (double eps : {0.1, 0.01, 0.001}) {
            const double bound = mixing_bound_ring(n, lambda, eps);
            const auto tg = linspace(0.0, 1.5 * bound, static_cast<int>(1.5 * bound * 20) + 1);
            const MixingResult mr = mixing_time(gurvitz_populations(n, lambda, 1, tg), tg, eps);
            it.add(fmt("mixing time <= bound, eps=%g", eps), mr.t_mix <= bound,
                   fmt("t_mix = %.2f, bound = %.2f", mr.t_mix, bound));
        }
    }
    const auto t = linspace(0.0, 10.0, 201);
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(2, 2);
    rho0(0, 0) = 1.0;
    Eigen::MatrixXd h0(2, 2);
    h0 << 1.0, -1.0, -1.0, 1.0;
    {
        DimerSpec d;
        d.gamma = 0.5;
        const LindbladRun run = lindblad_propagate(h0, {0.0, {1}, d.gamma}, rho0, t);
        double err = 0;
        for (std::size_t i = 0; i < t.size(); ++i)
            err = std::max(err, std::abs(run.rho[i](0, 0).real() - dimer_pi_trap(d, t[i])));
        it.add("dimer, trap only (Gamma=0.5): survival rho_11", err <= 1e-6, fmt("max |diff| = %.2e", err));
    }
    {
        DimerSpec d;
        d.lambda = 0.3;
        const LindbladRun run = lindblad_propagate(h0, {d.lambda, {}, 0.0}, rho0, t);
        double err = 0;
        for (std::size_t i = 0; i < t.size(); ++i)
            err = std::max(err, std::abs(run.rho[i](0, 0).real() - dimer_pi11_free(d, t[i])));
        it.add("dimer, dephasing only (lambda=0.3): pi_11", err <= 1e-8, fmt("max |diff| = %.2e", err));
    }
    {
        DimerSpec d;
        d.gamma = 0.1;
        d.lambda = kPi / 10.0;
        const LindbladRun run = lindblad_propagate(h0, {d.lambda, {1}, d.gamma}, rho0, t);
        double num = 0, den = 0, mx = 0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double a = run.rho[i](0, 0).real(), b = dimer_combined(d, t[i]);
            num += (a - b) * (a - b);
            den += a * a;
            mx = std::max(mx, std::abs(a - b));
        }
        const double rel = std::sqrt(num / den);
        it.add("dimer, alpha=1/10 and Gamma=0.1: combined approximation (relative L2)", rel <= 0.05,
               fmt("relative L2 %.4f", rel));
        it.info("dimer combined approximation, max abs", fmt("%.4f", mx));
    }
}

// ---- 12
std::vector<int> trap_pick(int n, Rng& r) {
    std::set<int> s;
    const int m = 1 + static_cast<int>(r.below(std::max(1, n / 3)));
    while (static_cast<int>(s.size()) < m) s.insert(static_cast<int>(r.below(n)));
    return {s.begin(), s.end()};
}

nlohmann::json random_family(std::size_t idx, int n) {
    switch (idx % 5) {
        case 0: return {{"family", "erdos_renyi"}, {"n", n}, {"p", 0.3}};
        case 1: return {{"family", "watts_strogatz"}, {"n", n}, {"p", 0.2}};
        case 2: return {{"family", "small_world"}, {"n", n}, {"B", std::min(3, n * (n - 3) / 2)}};
        case 3: return {{"family", "scale_free"}, {"n", n}};
        default: return {{"family", "random_geometric"}, {"n", n}};
    }
}

void property_suites(Items& it) {
    const std::uint64_t master = 0x5eed2024ULL;
    // invariants on 200 random graphs
    double unit = 0, cons = 0, neg = 0, surv = 0, lind_tr = 0, lind_neg = 0;
    for (std::size_t c = 0; c < 200; ++c) {
        const std::uint64_t seed = derive_seed(master, c);
        Rng r(seed);
        const int n = 6 + static_cast<int>(r.below(19));
        const Graph g = build_random_graph(random_family(c, n), seed);
        const Eigen::MatrixXd h = coupling_matrix(g);
        const Spectrum s = decompose_symmetric(h);
        const int j = static_cast<int>(r.below(n));
        const std::vector<double> t{0.0, 0.37, 1.9, 7.3, 31.0};
        const auto q = propagate_quantum(s, j, t);
        const auto p = propagate_classical(s, j, t);
        for (Eigen::Index i = 0; i < q.values.cols(); ++i) {
            unit = std::max(unit, std::abs(q.values.col(i).sum() - 1.0));
            cons = std::max(cons, std::abs(p.values.col(i).sum() - 1.0));
        }
        neg = std::min(neg, p.values.minCoeff());
        const auto traps = trap_pick(n, r);
        const QuantumSurvival qs(decompose_biorthogonal(trap_hamiltonian(h, {traps, 0.5})), traps);
        const auto pi = qs(t);
        for (std::size_t i = 1; i < pi.size(); ++i) surv = std::max(surv, pi[i] - pi[i - 1]);
        surv = std::max(surv, std::abs(pi[0] - 1.0));
        if (n <= 10) {
            Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(n, n);
            rho0(j, j) = 1.0;
            const auto run = lindblad_propagate(h, {0.2, {}, 0.0}, rho0, {0.5, 2.0, 6.0}, 1e-10);
            lind_tr = std::max(lind_tr, run.max_trace_drift);
            lind_neg = std::min(lind_neg, run.min_eigenvalue);
        }
    }
    it.add("200 random graphs: quantum unitarity", unit <= 1e-10, fmt("max |sum pi - 1| = %.2e", unit));
    it.add("200 random graphs: classical conservation and positivity", cons <= 1e-10 && neg >= -1e-12,
           fmt("max |sum p - 1| = %.2e, min p = %.2e", cons, neg));
    it.add("200 random graphs: trapped survival starts at 1 and never grows", surv <= 1e-10,
           fmt("max violation %.2e", surv));
    it.add("random graphs N<=10: dephasing trace and positivity", lind_tr <= 1e-8 && lind_neg >= -1e-9,
           fmt("trace drift %.2e, min eigenvalue %.2e", lind_tr, lind_neg));

    // brute-force exponential oracle, N <= 12
    double e_q = 0, e_c = 0, e_trap = 0, e_bloch = 0, e_lind = 0;
    for (std::size_t c = 0; c < 20; ++c) {
        const std::uint64_t seed = derive_seed(master ^ 0xabcdefULL, c);
        Rng r(seed);
        const int n = 4 + static_cast<int>(r.below(9));
        const Eigen::MatrixXd h = coupling_matrix(build_random_graph(random_family(c, n), seed));
        const Spectrum s = decompose_symmetric(h);
        const int j = static_cast<int>(r.below(n));
        const double t = 0.1 + 5.0 * r.uniform();
        const Eigen::MatrixXcd u = expm_oracle(cplx(0.0, -t) * h.cast<cplx>());
        const Eigen::MatrixXcd tc = expm_oracle(cplx(-t) * h.cast<cplx>());
        const auto q = propagate_quantum(s, j, {t});
        const auto p = propagate_classical(s, j, {t});
        e_q = std::max(e_q, (q.amplitudes.col(0) - u.col(j)).cwiseAbs().maxCoeff());
        e_c = std::max(e_c, (p.values.col(0) - tc.col(j).real()).cwiseAbs().maxCoeff());
        const auto traps = trap_pick(n, r);
        const Eigen::MatrixXcd ht = trap_hamiltonian(h, {traps, 0.7});
        const Eigen::MatrixXcd ut = expm_oracle(cplx(0.0, -t) * ht);
        auto trapped = [&](int k) { return std::find(traps.begin(), traps.end(), k) != traps.end(); };
        double pi = 0;
        int starts = 0;
        for (int j0 = 0; j0 < n; ++j0) {
            if (trapped(j0)) continue;
            for (int k = 0; k < n; ++k)
                if (!trapped(k)) pi += std::norm(ut(k, j0));
            ++starts;
        }
        const QuantumSurvival qs(decompose_biorthogonal(ht), traps);
        e_trap = std::max(e_trap, std::abs(qs(t) - pi / starts));
        // dephasing: vectorized Liouvillian, column-major vec
        const double lambda = 0.3;
        Eigen::MatrixXcd lv = Eigen::MatrixXcd::Zero(n * n, n * n);
        for (int col = 0; col < n * n; ++col) {
            Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(n, n);
            basis(col % n, col / n) = 1.0;
            const Eigen::MatrixXcd out = lindblad_rhs(h, {lambda, traps, 0.7}, basis);
            lv.col(col) = Eigen::Map<const Eigen::VectorXcd>(out.data(), n * n);
        }
        Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(n, n);
        rho0(j, j) = 1.0;
        const Eigen::VectorXcd v = expm_oracle(t * lv) * Eigen::Map<const Eigen::VectorXcd>(rho0.data(), n * n);
        const auto run = lindblad_propagate(h, {lambda, traps, 0.7}, rho0, {t});
        e_lind = std::max(e_lind, (Eigen::Map<const Eigen::VectorXcd>(run.rho[0].data(), n * n) - v).cwiseAbs().maxCoeff());
        if (c < 6) {
            const int nr = 3 + static_cast<int>(c);
            const Eigen::MatrixXd hr = coupling_matrix(ring(nr));
            Eigen::VectorXd en(nr);
            for (int k = 0; k < nr; ++k) en[k] = 2.0 - 2.0 * std::cos(2.0 * kPi * k / nr);
            const auto bq = propagate_quantum(en, bloch_vectors(nr), 0, {t});
            e_bloch = std::max(e_bloch,
                               (bq.amplitudes.col(0) - expm_oracle(cplx(0.0, -t) * hr.cast<cplx>()).col(0)).cwiseAbs().maxCoeff());
        }
    }
    for (int n = 3; n <= 8; ++n) {
        const auto tg = std::vector<double>{0.7, 3.1};
        const Eigen::MatrixXd g = gurvitz_populations(n, 0.25, 1, tg);
        const Eigen::MatrixXd hr = coupling_matrix(ring(n));
        Eigen::MatrixXcd lv = Eigen::MatrixXcd::Zero(n * n, n * n);
        for (int col = 0; col < n * n; ++col) {
            Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(n, n);
            basis(col % n, col / n) = 1.0;
            const Eigen::MatrixXcd out = lindblad_rhs(hr, {0.25, {}, 0.0}, basis);
            lv.col(col) = Eigen::Map<const Eigen::VectorXcd>(out.data(), n * n);
        }
        Eigen::VectorXcd v0 = Eigen::VectorXcd::Zero(n * n);
        v0[0] = 1.0;
        for (std::size_t i = 0; i < tg.size(); ++i) {
            const Eigen::VectorXcd v = expm_oracle(tg[i] * lv) * v0;
            for (int k = 0; k < n; ++k)
                e_lind = std::max(e_lind, std::abs(g(k, static_cast<Eigen::Index>(i)) - v[k + n * k].real()));
        }
    }
    it.add("oracle exp(-iHt): spectral quantum propagator", e_q <= 1e-8, fmt("max |diff| = %.2e", e_q));
    it.add("oracle exp(-Ht): spectral classical propagator", e_c <= 1e-8, fmt("max |diff| = %.2e", e_c));
    it.add("oracle: biorthogonal trapped survival", e_trap <= 1e-8, fmt("max |diff| = %.2e", e_trap));
    it.add("oracle: Bloch-basis ring propagator", e_bloch <= 1e-8, fmt("max |diff| = %.2e", e_bloch));
    it.add("oracle: dephasing integrator and block solution", e_lind <= 1e-8, fmt("max |diff| = %.2e", e_lind));

    {
        const auto t = logspace(0.1, 1e5, 120);
        const RandomTrapEnsemble e = random_trap_ensemble(100, 1.0, 50, 777ULL, t);
        double worst = 0;
        for (std::size_t i = 0; i < t.size(); ++i) worst = std::min(worst, e.mean_survival[i] - e.jensen_bound[i]);
        it.add("random traps N=100, R=50: Jensen bound pointwise", e.jensen_holds && worst >= -1e-12,
               fmt("min(<Pi> - bound) = %.2e, redraws %d", worst, e.redraws));
    }
    {
        std::vector<double> chi;
        std::string list;
        for (double d : {0.1, 0.25, 0.5, 1.0, 2.0}) {
            const double v = disordered_ring_return_lta(40, {d, DisorderKind::DD}, {50, 99ULL});
            chi.push_back(v);
            list += fmt("%s%.4f", list.empty() ? "" : ", ", v);
        }
        bool mono = true;
        for (std::size_t i = 1; i < chi.size(); ++i) mono = mono && chi[i] > chi[i - 1];
        it.add("<chi_jj> increases with Delta (N=40, R=50)", mono, "Delta = 0.1..2: " + list);
    }
    {
        const int n = 401;
        const Spectrum s = decompose_symmetric(coupling_matrix(ring(n)));
        const auto t = logspace(5.0, 50.0, 30);
        const auto mq = msd(propagate_quantum(s, 200, t), Metric::ring);
        const auto mc = msd(propagate_classical(s, 200, t), Metric::ring);
        const FitResult fq = powerlaw_fit(t, mq, 5.0, 50.0), fc = powerlaw_fit(t, mc, 5.0, 50.0);
        it.add("MSD ballistic slope 2 (quantum)", std::abs(fq.exponent / 2.0 - 1.0) <= 0.05, fmt("%.4f", fq.exponent));
        it.add("MSD diffusive slope 1 (classical)", std::abs(fc.exponent - 1.0) <= 0.05, fmt("%.4f", fc.exponent));
    }
}

}  // namespace

Eigen::MatrixXcd expm_oracle(const Eigen::MatrixXcd& a) {
    const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
    const Eigen::MatrixXcd x = a / std::pow(2.0, squarings);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
    Eigen::MatrixXcd sum = term;
    for (int k = 1; k <= 30; ++k) {
        term = term * x / static_cast<double>(k);
        sum += term;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

bool CriterionReport::pass() const {
    if (items.empty()) return false;
    return std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.info || c.pass; });
}

std::string CriterionReport::summary() const {
    std::string s = fmt("[%s] %2d %s (%.1f s)", pass() ? "PASS" : "FAIL", id, title.c_str(), seconds);
    for (const auto& c : items)
        if (!c.info && !c.pass) s += "\n       failed: " + c.name + ": " + c.detail;
    return s;
}

std::string criterion_title(int id) {
    static const char* titles[] = {"ring long-time averages",
                                   "star and complete graph closed forms",
                                   "return-probability scaling",
                                   "star non-decay",
                                   "DSG lower bound",
                                   "2D asymmetry table",
                                   "line with traps",
                                   "ring dark states",
                                   "perturbative trapping consistency",
                                   "Wigner identities",
                                   "open systems",
                                   "property suites"};
    if (id < 1 || id > kCriterionCount) throw std::out_of_range("criterion id out of range");
    return titles[id - 1];
}

CriterionReport run_criterion(int id) {
    using Fn = void (*)(Items&);
    static const Fn fns[] = {ring_lta,     star_complete, return_scaling, star_nondecay, dsg_bound, lattice_asymmetry,
                             line_traps,   ring_dark,     perturbation,   wigner,        open_systems, property_suites};
    CriterionReport r;
    r.id = id;
    r.title = criterion_title(id);
    const auto t0 = std::chrono::steady_clock::now();
    Items it{r.items};
    try {
        fns[id - 1](it);
    } catch (const std::exception& e) {
        it.add("exception", false, e.what());
    }
    r.seconds = seconds_since(t0);
    return r;
}

}  // namespace qwalk
