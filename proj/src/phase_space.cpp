#include "qwalk/phase_space.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qwalk/disorder.hpp"
#include "qwalk/dynamics.hpp"
#include "qwalk/graph.hpp"

namespace qwalk {

namespace {

constexpr double kPi = std::numbers::pi;

int mod(long long a, int n) {
    const long long r = a % n;
    return static_cast<int>(r < 0 ? r + n : r);
}

std::vector<cplx> phases(int n) {
    std::vector<cplx> p(n);
    for (int k = 0; k < n; ++k) p[k] = std::polar(1.0, 2.0 * kPi * k / n);
    return p;
}

}  // namespace

WignerSlice wigner_of_density(const Eigen::MatrixXcd& rho) {
    const int n = static_cast<int>(rho.rows());
    if (n < 1 || rho.cols() != n) throw WignerError("density matrix must be square");
    const auto ph = phases(n);
    WignerSlice w(n, n);
    std::vector<cplx> f(n);
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) f[y] = rho(mod(x + y, n), mod(x - y, n));
        for (int k = 0; k < n; ++k) {
            cplx s = 0.0;
            for (int y = 0; y < n; ++y) s += ph[mod(static_cast<long long>(k) * y, n)] * f[y];
            w(x, k) = s.real() / n;
        }
    }
    return w;
}

WignerSlice wigner_from_state(const Eigen::VectorXcd& psi) {
    if (std::abs(psi.norm() - 1.0) > 1e-10) throw WignerError("state is not normalized");
    return wigner_of_density(psi * psi.adjoint());
}

std::vector<double> m_neighbor_dispersion(int n, int m) {
    std::vector<double> e(n);
    for (int q = 0; q < n; ++q) {
        double v = 2.0 * m;
        for (int r = 1; r <= m; ++r) v -= 2.0 * std::cos(2.0 * kPi * mod(static_cast<long long>(r) * q, n) / n);
        e[q] = v;
    }
    return e;
}

WignerSlice wigner_ring_closed(const std::vector<double>& e, int j, double t) {
    const int n = static_cast<int>(e.size());
    if (n < 1) throw WignerError("empty dispersion");
    const auto ph = phases(n);
    WignerSlice w(n, n);
    // W(x,k) = (1/N^2) sum_q exp[-i 2 pi (2q+k)(x-j)/N] exp[i (E_q - E_{q+k}) t]
    for (int k = 0; k < n; ++k) {
        std::vector<cplx> tp(n);
        for (int q = 0; q < n; ++q) tp[q] = std::polar(1.0, (e[q] - e[mod(q + k, n)]) * t);
        for (int x = 0; x < n; ++x) {
            cplx s = 0.0;
            const long long d = x - j;
            for (int q = 0; q < n; ++q) s += std::conj(ph[mod((2LL * q + k) * d, n)]) * tp[q];
            w(x, k) = s.real() / (static_cast<double>(n) * n);
        }
    }
    return w;
}

WignerSlice wigner_ring_closed(int n, int j, double t) { return wigner_ring_closed(m_neighbor_dispersion(n, 1), j, t); }

WignerSlice wigner_limiting_closed(int n, int j) {
    if (n < 1 || j < 0 || j >= n) throw WignerError("bad ring size or start node");
    const double nn = static_cast<double>(n) * n;
    WignerSlice w = WignerSlice::Zero(n, n);
    if (n % 2 == 1) {
        for (int k = 1; k < n; ++k) w.col(k).setConstant(1.0 / nn);
        w(j, 0) = 1.0 / n;
    } else {
        for (int k = 2; k < n; k += 2) w.col(k).setConstant(2.0 / nn);
        w(j, 0) = 1.0 / n;
        w((j + n / 2) % n, 0) = 1.0 / n;
    }
    return w;
}

WignerSlice wigner_limiting(const Spectrum& s, int j, double tol) {
    const int n = s.dim();
    if (j < 0 || j >= n) throw WignerError("start node out of range");
    const auto dc = degeneracy_classes(s.values, tol);
    Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(n, n);
    for (const auto& c : dc.classes) {
        Eigen::VectorXd pj = Eigen::VectorXd::Zero(n);
        for (int m : c) pj += s.vectors.col(m) * s.vectors(j, m);
        rho += pj * pj.transpose();
    }
    return wigner_of_density(rho.cast<cplx>());
}

Marginals marginals(const WignerSlice& w) { return {w.rowwise().sum(), w.colwise().sum().transpose()}; }

double ring_kappa_marginal(int n, int kappa_hat) {
    if (n % 2 == 1) return 1.0 / n;
    return kappa_hat % 2 == 0 ? 2.0 / n : 0.0;
}

WignerEnsemble wigner_ensemble(const nlohmann::json& spec, int j, int realizations, std::uint64_t seed,
                               const std::vector<double>& t) {
    validate_grid(t);
    const std::string model = spec.at("model").get<std::string>();
    const int n = spec.at("n").get<int>();
    if (j < 0 || j >= n) throw WignerError("start node out of range");
    Eigen::MatrixXd h0;
    DisorderSpec ds;
    if (model == "disorder") {
        h0 = coupling_matrix(ring(n));
        ds.delta = spec.at("delta").get<double>();
        const std::string kind = spec.value("kind", std::string("DD"));
        if (kind != "DD" && kind != "DOD") throw WignerError("disorder kind must be DD or DOD");
        ds.kind = kind == "DD" ? DisorderKind::DD : DisorderKind::DOD;
    } else if (model != "watts_strogatz") {
        throw WignerError("unknown ensemble model: " + model);
    }
    const EnsembleSpec es{realizations, seed};
    const auto nt = static_cast<Eigen::Index>(t.size());
    // stack [W(t_0); ...; W(t_last); W-bar] as one matrix per realization
    auto res = ensemble_average<Eigen::MatrixXd>(es, [&](std::uint64_t s, std::size_t) {
        Eigen::MatrixXd h;
        if (model == "disorder") {
            h = sample_disorder(h0, ds, s).h;
        } else {
            h = coupling_matrix(watts_strogatz(n, spec.at("p").get<double>(), s));
        }
        const Spectrum sp = decompose_symmetric(h);
        const ProbabilityField f = propagate_quantum(sp, j, t);
        Eigen::MatrixXd out((nt + 1) * n, n);
        for (Eigen::Index i = 0; i < nt; ++i) {
            const Eigen::VectorXcd psi = f.amplitudes.col(i) / f.amplitudes.col(i).norm();
            out.middleRows(i * n, n) = wigner_from_state(psi);
        }
        out.middleRows(nt * n, n) = wigner_limiting(sp, j);
        return out;
    });
    WignerEnsemble e;
    e.times = t;
    e.seeds = res.seeds;
    for (Eigen::Index i = 0; i < nt; ++i) e.mean.push_back(res.mean.middleRows(i * n, n));
    e.mean_limiting = res.mean.middleRows(nt * n, n);
    return e;
}

int front_maxima(const WignerSlice& w, int x, double frac) {
    const int n = static_cast<int>(w.cols());
    const double thr = frac * w.row(x).cwiseAbs().maxCoeff();
    int count = 0;
    for (int k = 0; k < n; ++k) {
        const double v = w(x, k);
        if (v > thr && v > w(x, mod(k - 1, n)) && v > w(x, mod(k + 1, n))) ++count;
    }
    return count;
}

}  // namespace qwalk
