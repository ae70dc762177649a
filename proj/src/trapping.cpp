#include "qwalk/trapping.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "qwalk/graph.hpp"
#include "qwalk/parallel.hpp"
#include "qwalk/rng.hpp"

namespace qwalk {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd sorted_vec(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<char> trap_mask(int n, const std::vector<int>& traps) {
    std::vector<char> mask(n, 0);
    for (int m : traps) mask[m] = 1;
    return mask;
}

}  // namespace

void TrapSpec::validate(int n) const {
    if (traps.empty()) throw TrapError("trap set is empty");
    if (!std::isfinite(gamma) || gamma < 0.0) throw TrapError("trap strength must be finite and >= 0");
    std::set<int> seen;
    for (int m : traps) {
        if (m < 0 || m >= n) throw TrapError("trap index " + std::to_string(m) + " out of range");
        if (!seen.insert(m).second) throw TrapError("duplicate trap index");
    }
}

std::vector<int> periodic_traps(int n, int m) {
    if (m < 1 || n % m != 0) throw TrapError("periodic traps need N/M integer");
    std::vector<int> t;
    for (int j = 1; j <= m; ++j) t.push_back(j * (n / m) - 1);
    return t;
}

std::vector<int> sequential_traps(int m) {
    if (m < 1) throw TrapError("need M >= 1");
    std::vector<int> t(m);
    for (int j = 0; j < m; ++j) t[j] = j;
    return t;
}

Eigen::MatrixXcd trap_hamiltonian(const Eigen::MatrixXd& h0, const TrapSpec& ts) {
    ts.validate(static_cast<int>(h0.rows()));
    Eigen::MatrixXcd h = h0.cast<cplx>();
    for (int m : ts.traps) h(m, m) -= cplx(0.0, ts.gamma);
    return h;
}

Eigen::MatrixXd classical_trap_matrix(const Eigen::MatrixXd& h0, const TrapSpec& ts) {
    ts.validate(static_cast<int>(h0.rows()));
    Eigen::MatrixXd t = -h0;
    for (int m : ts.traps) t(m, m) -= ts.gamma;
    return t;
}

QuantumSurvival::QuantumSurvival(const BiorthSpectrum& s, const std::vector<int>& traps) : e_(s.values) {
    const int n = s.dim();
    TrapSpec{traps, 0.0}.validate(n);
    if (static_cast<int>(traps.size()) >= n) throw TrapError("traps cover every node");
    const auto mask = trap_mask(n, traps);
    Eigen::MatrixXcd pr = s.right, lp = s.left;
    for (int k = 0; k < n; ++k)
        if (mask[k]) {
            pr.row(k).setZero();
            lp.col(k).setZero();
        }
    const Eigen::MatrixXcd a = s.right.adjoint() * pr;
    const Eigen::MatrixXcd b = lp * s.left.adjoint();
    c_ = a.cwiseProduct(b.transpose());
    norm_ = 1.0 / (n - static_cast<double>(traps.size()));
}

double QuantumSurvival::operator()(double t) const {
    Eigen::VectorXcd d(e_.size());
    for (Eigen::Index l = 0; l < e_.size(); ++l) d[l] = std::exp(cplx(0.0, -1.0) * e_[l] * t);
    return (d.adjoint() * c_ * d)(0, 0).real() * norm_;
}

std::vector<double> QuantumSurvival::operator()(const std::vector<double>& t) const {
    std::vector<double> out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = (*this)(t[i]);
    return out;
}

double QuantumSurvival::plateau(double tol) const {
    double s = 0.0;
    for (Eigen::Index l = 0; l < e_.size(); ++l) {
        if (-e_[l].imag() > tol) continue;
        for (Eigen::Index k = 0; k < e_.size(); ++k) {
            if (-e_[k].imag() > tol) continue;
            if (std::abs(e_[l].real() - e_[k].real()) > 1e-9) continue;
            s += c_(l, k).real();
        }
    }
    return s * norm_;
}

std::vector<double> survival_spectral(const Eigen::VectorXd& gammas, double denominator, const std::vector<double>& t) {
    if (!(denominator > 0.0)) throw TrapError("survival denominator must be positive");
    std::vector<double> out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = (-2.0 * t[i] * gammas.array()).exp().sum() / denominator;
    return out;
}

std::vector<double> survival_classical(const Eigen::MatrixXd& h0, const TrapSpec& ts, const std::vector<double>& t) {
    const int n = static_cast<int>(h0.rows());
    ts.validate(n);
    if (static_cast<int>(ts.traps.size()) >= n) throw TrapError("traps cover every node");
    const Spectrum s = decompose_symmetric(-classical_trap_matrix(h0, ts));
    const auto mask = trap_mask(n, ts.traps);
    Eigen::VectorXd u = Eigen::VectorXd::Ones(n);
    for (int k = 0; k < n; ++k)
        if (mask[k]) u[k] = 0.0;
    const Eigen::VectorXd w = (s.vectors.transpose() * u).cwiseAbs2();
    const double denom = n - static_cast<double>(ts.traps.size());
    std::vector<double> out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = (-t[i] * s.values.array()).exp().matrix().dot(w) / denom;
    return out;
}

Eigen::VectorXd perturbative_gammas(const Spectrum& s0, const std::vector<int>& traps, double gamma, double tol) {
    TrapSpec{traps, gamma}.validate(s0.dim());
    const auto dc = degeneracy_classes(s0.values, tol);
    std::vector<double> out;
    out.reserve(s0.dim());
    for (const auto& c : dc.classes) {
        const auto k = static_cast<Eigen::Index>(c.size());
        Eigen::MatrixXd vt(static_cast<Eigen::Index>(traps.size()), k);
        for (Eigen::Index a = 0; a < k; ++a)
            for (std::size_t m = 0; m < traps.size(); ++m) vt(static_cast<Eigen::Index>(m), a) = s0.vectors(traps[m], c[a]);
        const Eigen::MatrixXd w = vt.transpose() * vt;
        if (k == 1) {
            out.push_back(gamma * w(0, 0));
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w, Eigen::EigenvaluesOnly);
            for (Eigen::Index a = 0; a < k; ++a) out.push_back(gamma * std::max(0.0, es.eigenvalues()[a]));
        }
    }
    return sorted_vec(out);
}

Eigen::VectorXd ring_pair_gammas(int n, const std::vector<int>& traps, double gamma) {
    TrapSpec{traps, gamma}.validate(n);
    const double m = static_cast<double>(traps.size());
    std::vector<double> out;
    out.push_back(gamma * m / n);
    if (n % 2 == 0) out.push_back(gamma * m / n);
    for (int l = 1; 2 * l < n; ++l) {
        cplx s = 0.0;
        for (int mj : traps) s += std::polar(1.0, 4.0 * kPi * ((static_cast<long long>(l) * mj) % n) / n);
        const double a = std::min(std::abs(s), m);
        out.push_back(gamma / n * (m + a));
        out.push_back(gamma / n * (m - a));
    }
    return sorted_vec(out);
}

Eigen::VectorXd ring_sequential_gammas(int n, int m, double gamma) {
    if (m < 1 || m >= n) throw TrapError("need 1 <= M < N");
    std::vector<double> out;
    out.push_back(gamma * m / n);
    if (n % 2 == 0) out.push_back(gamma * m / n);
    for (int l = 1; 2 * l < n; ++l) {
        const double r = std::sin(2.0 * kPi * m * l / n) / std::sin(2.0 * kPi * l / n);
        out.push_back(gamma / n * (m + r));
        out.push_back(gamma / n * (m - r));
    }
    return sorted_vec(out);
}

Eigen::VectorXd line_end_trap_gammas(int n, double gamma) {
    if (n < 2) throw TrapError("line needs N >= 2");
    std::vector<double> out{2.0 * gamma / n};
    for (int l = 1; l < n; ++l) {
        const double th = kPi * (n - l) / n;
        const double c = std::cos(th / 2.0);
        out.push_back(4.0 * gamma / n * c * c);
    }
    return sorted_vec(out);
}

Eigen::VectorXd long_range_chain_gammas(int n, double nu, double gamma) {
    if (n < 2) throw TrapError("chain needs N >= 2");
    std::vector<double> out{2.0 * gamma / n};
    const double eps = std::pow(2.0, -nu);
    for (int l = 1; l < n; ++l) {
        const double th = kPi * (n - l) / n;
        const double g0 = 4.0 * gamma / n * std::cos(th / 2.0) * std::cos(th / 2.0);
        const double g1 = 8.0 * gamma / n * std::cos(th / 2.0) * std::sin(2.0 * th) * std::sin(th / 2.0);
        out.push_back(g0 + eps * g1);
    }
    return sorted_vec(out);
}

DarkStates dark_state_count(int n, int m, Arrangement arr) {
    if (m < 1 || m >= n) throw TrapError("need 1 <= M < N");
    DarkStates d;
    if (arr == Arrangement::periodic) {
        if (n % m != 0) throw TrapError("periodic arrangement needs N/M integer");
        d.count = m % 2 == 0 ? (n - 2) / m : (n - 2) / (2 * m);
        d.plateau = d.count / static_cast<double>(n - m);
        return d;
    }
    return dark_state_count(n, sequential_traps(m));
}

DarkStates dark_state_count(int n, const std::vector<int>& traps) {
    TrapSpec{traps, 1.0}.validate(n);
    const int m = static_cast<int>(traps.size());
    if (m >= n) throw TrapError("traps cover every node");
    DarkStates d;
    for (int l = 1; 2 * l < n; ++l) {
        cplx s = 0.0;
        for (int mj : traps) s += std::polar(1.0, 4.0 * kPi * ((static_cast<long long>(l) * mj) % n) / n);
        if (std::abs(std::abs(s) - m) < 1e-9) ++d.count;
    }
    d.plateau = d.count / static_cast<double>(n - m);
    return d;
}

int count_zero_gammas(const Eigen::VectorXd& gammas, double tol) {
    return static_cast<int>((gammas.array() < tol).count());
}

FitResult gamma_scaling_fit(const Eigen::VectorXd& g, int l_lo, int l_hi) {
    if (l_lo < 1 || l_hi > g.size() || l_hi - l_lo < 4) throw FitError("gamma window too small");
    std::vector<double> l, y;
    for (Eigen::Index k = 0; k < g.size(); ++k) {
        l.push_back(static_cast<double>(k + 1));
        y.push_back(g[k]);
    }
    return powerlaw_nls(l, y, l_lo, l_hi);
}

double collapse_time(double t, int n, double mu) { return t / std::pow(static_cast<double>(n), 3.0 - mu); }

RandomTrapEnsemble random_trap_ensemble(int n, double gamma, int realizations, std::uint64_t seed,
                                        const std::vector<double>& t) {
    if (n < 2) throw TrapError("ensemble needs N >= 2");
    if (realizations < 1) throw TrapError("ensemble needs R >= 1");
    constexpr int kMaxRedraws = 8;
    std::vector<Eigen::VectorXd> gam(realizations);
    std::vector<std::uint64_t> used(realizations);
    std::vector<int> redraws(realizations, 0);
    parallel_for(static_cast<std::size_t>(realizations), [&](std::size_t r) {
        std::uint64_t s = derive_seed(seed, r);
        for (int attempt = 0;; ++attempt) {
            const Graph g = random_geometric(n, s);
            const Eigen::MatrixXd h0 = coupling_matrix(g);
            try {
                const auto bs = decompose_biorthogonal(trap_hamiltonian(h0, TrapSpec{{0}, gamma * h0(0, 0)}));
                Eigen::VectorXd gv = bs.gamma();
                std::sort(gv.begin(), gv.end());
                gam[r] = gv;
                used[r] = s;
                redraws[r] = attempt;
                return;
            } catch (const SpectralError&) {
                if (attempt + 1 >= kMaxRedraws) throw;
                s = derive_seed(s, static_cast<std::uint64_t>(attempt) + 1);
            }
        }
    });
    RandomTrapEnsemble e;
    e.times = t;
    e.seeds = used;
    e.mean_gammas = Eigen::VectorXd::Zero(n);
    e.mean_survival.assign(t.size(), 0.0);
    for (int r = 0; r < realizations; ++r) {
        e.redraws += redraws[r];
        e.mean_gammas += gam[r];
        const auto s = survival_spectral(gam[r], n, t);
        for (std::size_t i = 0; i < t.size(); ++i) e.mean_survival[i] += s[i];
    }
    e.mean_gammas /= realizations;
    for (auto& v : e.mean_survival) v /= realizations;
    e.jensen_bound = survival_spectral(e.mean_gammas, n, t);
    for (std::size_t i = 0; i < t.size(); ++i)
        if (e.mean_survival[i] < e.jensen_bound[i] * (1.0 - 1e-12)) e.jensen_holds = false;
    return e;
}

double fit_eta(const RandomTrapEnsemble& e, double lo, double hi) {
    return -powerlaw_fit(e.times, e.mean_survival, lo, hi).exponent;
}

VicsekTrapResult vicsek_trap_survival(int f, int g, double gamma, const std::vector<double>& t) {
    if (g < 1) throw TrapError("invalid generation");
    const Graph gr = vicsek(f, g);
    const Eigen::MatrixXd h0 = coupling_matrix(gr);
    const auto bs = decompose_biorthogonal(trap_hamiltonian(h0, TrapSpec{{0}, gamma}));
    const QuantumSurvival qs(bs, {0});
    VicsekTrapResult r;
    r.n = gr.n;
    r.times = t;
    r.survival = qs(t);
    const double real_count = (std::pow(3.0, g) - 1.0) / 2.0 + std::pow(f + 1.0, g) - std::pow(3.0, g);
    r.plateau_predicted = real_count / (gr.n - 1.0);
    r.plateau_numeric = qs.plateau();
    return r;
}

}  // namespace qwalk
