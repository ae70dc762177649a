#include "qwalk/open_systems.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numbers>

namespace qwalk {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXcd effective_h(const Eigen::MatrixXd& h0, const LindbladSpec& s) {
    Eigen::MatrixXcd h = h0.cast<cplx>();
    for (int m : s.traps) {
        if (m < 0 || m >= h0.rows()) throw OpenSystemError("trap index out of range");
        h(m, m) -= cplx(0.0, s.gamma);
    }
    return h;
}

Eigen::MatrixXcd rhs(const Eigen::MatrixXcd& h, double lambda, const Eigen::MatrixXcd& rho) {
    const cplx mi(0.0, -1.0);
    Eigen::MatrixXcd d = mi * (h * rho - rho * h.adjoint());
    if (lambda != 0.0) {
        Eigen::MatrixXcd off = rho;
        off.diagonal().setZero();
        d -= 2.0 * lambda * off;
    }
    return d;
}

Eigen::MatrixXcd rk4(const Eigen::MatrixXcd& h, double lambda, const Eigen::MatrixXcd& rho, double dt) {
    const Eigen::MatrixXcd k1 = rhs(h, lambda, rho);
    const Eigen::MatrixXcd k2 = rhs(h, lambda, rho + 0.5 * dt * k1);
    const Eigen::MatrixXcd k3 = rhs(h, lambda, rho + 0.5 * dt * k2);
    const Eigen::MatrixXcd k4 = rhs(h, lambda, rho + dt * k3);
    return rho + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXd& h0, const LindbladSpec& spec, const Eigen::MatrixXcd& rho) {
    return rhs(effective_h(h0, spec), spec.lambda, rho);
}

Eigen::MatrixXd LindbladRun::populations() const {
    if (rho.empty()) return {};
    Eigen::MatrixXd p(rho.front().rows(), static_cast<Eigen::Index>(rho.size()));
    for (std::size_t i = 0; i < rho.size(); ++i) p.col(static_cast<Eigen::Index>(i)) = rho[i].diagonal().real();
    return p;
}

LindbladRun lindblad_propagate(const Eigen::MatrixXd& h0, const LindbladSpec& spec, const Eigen::MatrixXcd& rho0,
                               const std::vector<double>& t, double tol) {
    if (spec.lambda < 0.0 || !std::isfinite(spec.lambda)) throw OpenSystemError("lambda must be finite and >= 0");
    const auto n = h0.rows();
    if (rho0.rows() != n || rho0.cols() != n) throw OpenSystemError("rho0 has the wrong shape");
    if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw OpenSystemError("rho0 is not Hermitian");
    if (std::abs(rho0.trace() - cplx(1.0)) > 1e-10) throw OpenSystemError("rho0 does not have unit trace");
    if (t.empty() || t[0] < 0.0) throw OpenSystemError("bad time grid");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1])) throw OpenSystemError("time grid not strictly increasing");

    const Eigen::MatrixXcd h = effective_h(h0, spec);
    const bool trap_free = spec.traps.empty() || spec.gamma == 0.0;
    const double scale = h.cwiseAbs().rowwise().sum().maxCoeff() + 2.0 * spec.lambda;
    double dt = std::min(0.05, 0.25 / std::max(scale, 1e-12));
    constexpr double kMinStep = 1e-9;

    LindbladRun run;
    run.times = t;
    run.min_step = dt;
    Eigen::MatrixXcd rho = rho0;
    double now = 0.0;
    auto record = [&] {
        run.rho.push_back(rho);
        if (trap_free) run.max_trace_drift = std::max(run.max_trace_drift, std::abs(rho.trace() - cplx(1.0)));
        run.max_hermiticity = std::max(run.max_hermiticity, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
        run.min_eigenvalue = std::min(run.min_eigenvalue, es.eigenvalues().minCoeff());
    };
    for (double target : t) {
        while (target - now > 1e-14 * std::max(1.0, target)) {
            const double h_try = std::min(dt, target - now);
            const Eigen::MatrixXcd full = rk4(h, spec.lambda, rho, h_try);
            const Eigen::MatrixXcd half = rk4(h, spec.lambda, rk4(h, spec.lambda, rho, h_try / 2), h_try / 2);
            const double err = (full - half).cwiseAbs().maxCoeff() / 15.0;
            // below the rounding floor halving the step cannot help
            const double floor = 64.0 * std::numeric_limits<double>::epsilon() * rho.cwiseAbs().maxCoeff();
            if (err > tol * h_try && err > floor) {
                dt = h_try / 2;
                if (dt < kMinStep) throw OpenSystemError("step refinement exhausted");
                run.min_step = std::min(run.min_step, dt);
                continue;
            }
            rho = half + (half - full) / 15.0;
            now += h_try;
            ++run.steps;
            if (err < tol * h_try / 64.0 && h_try == dt) dt *= 2.0;
        }
        now = target;
        record();
    }
    return run;
}

namespace {

struct Torus {
    int n, d, size;
    std::vector<int> digits(int idx) const {
        std::vector<int> x(d);
        for (int a = 0; a < d; ++a) {
            x[a] = idx % n;
            idx /= n;
        }
        return x;
    }
    int index(const std::vector<int>& x) const {
        int idx = 0;
        for (int a = d - 1; a >= 0; --a) idx = idx * n + ((x[a] % n) + n) % n;
        return idx;
    }
};

}  // namespace

Eigen::MatrixXd gurvitz_populations(int n, double lambda, int m, const std::vector<double>& t, int start, int dim) {
    if (n < 3) throw OpenSystemError("need N >= 3");
    if (m < 1 || 2 * m >= n) throw OpenSystemError("need 1 <= m < N/2");
    if (dim < 1) throw OpenSystemError("need d >= 1");
    if (lambda < 0.0) throw OpenSystemError("lambda must be >= 0");
    const Torus tor{n, dim, static_cast<int>(std::lround(std::pow(n, dim)))};
    if (start < 0 || start >= tor.size) throw OpenSystemError("start node out of range");
    const int sz = tor.size;
    std::vector<double> e1(n);
    for (int q = 0; q < n; ++q) {
        double v = 2.0 * m;
        for (int r = 1; r <= m; ++r) v -= 2.0 * std::cos(2.0 * kPi * ((static_cast<long long>(r) * q) % n) / n);
        e1[q] = v;
    }
    std::vector<std::vector<int>> dig(sz);
    std::vector<double> e(sz, 0.0);
    for (int p = 0; p < sz; ++p) {
        dig[p] = tor.digits(p);
        for (int a = 0; a < dim; ++a) e[p] += e1[dig[p][a]];
    }
    // rho~(p, p-Q) obeys x' = (-i D_Q - 2 lambda + (2 lambda / N) J) x, x(0) = 1/N
    std::vector<Eigen::VectorXcd> w(sz), amp(sz);
    for (int q = 0; q < sz; ++q) {
        Eigen::MatrixXcd mx = Eigen::MatrixXcd::Constant(sz, sz, 2.0 * lambda / sz);
        for (int p = 0; p < sz; ++p) {
            std::vector<int> pq(dim);
            for (int a = 0; a < dim; ++a) pq[a] = dig[p][a] - dig[q][a];
            mx(p, p) += cplx(-2.0 * lambda, -(e[p] - e[tor.index(pq)]));
        }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(mx);
        const Eigen::MatrixXcd& v = es.eigenvectors();
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(v);
        if (!lu.isInvertible()) throw OpenSystemError("defective Bloch block");
        const Eigen::VectorXcd c = lu.solve(Eigen::VectorXcd::Constant(sz, 1.0 / sz));
        w[q] = es.eigenvalues();
        amp[q] = v.colwise().sum().transpose().cwiseProduct(c);
    }
    const auto sx = tor.digits(start);
    Eigen::MatrixXd out(sz, static_cast<Eigen::Index>(t.size()));
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::vector<cplx> s(sz);
        for (int q = 0; q < sz; ++q) s[q] = (amp[q].array() * (w[q].array() * t[i]).exp()).sum();
        for (int k = 0; k < sz; ++k) {
            const auto kx = tor.digits(k);
            cplx acc = 0.0;
            for (int q = 0; q < sz; ++q) {
                long long ph = 0;
                for (int a = 0; a < dim; ++a) ph += static_cast<long long>(dig[q][a]) * (kx[a] - sx[a]);
                acc += s[q] * std::polar(1.0, 2.0 * kPi * (((ph % n) + n) % n) / n);
            }
            out(k, static_cast<Eigen::Index>(i)) = acc.real() / sz;
        }
    }
    return out;
}

Eigen::MatrixXd gurvitz_first_order(int n, double lambda, int m, const std::vector<double>& t, int start) {
    if (n < 3) throw OpenSystemError("need N >= 3");
    if (m < 1 || 2 * m >= n) throw OpenSystemError("need 1 <= m < N/2");
    std::vector<double> e(n);
    for (int q = 0; q < n; ++q) {
        double v = 2.0 * m;
        for (int r = 1; r <= m; ++r) v -= 2.0 * std::cos(2.0 * kPi * ((static_cast<long long>(r) * q) % n) / n);
        e[q] = v;
    }
    const double rate_pair = 2.0 * lambda * (n - 1.0) / n;
    const double rate_other = m % 2 == 0 ? rate_pair : 2.0 * lambda * (n - 2.0) / n;
    Eigen::MatrixXd out(n, static_cast<Eigen::Index>(t.size()));
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double dp = std::exp(-rate_pair * t[i]), dq = std::exp(-rate_other * t[i]);
        for (int k = 0; k < n; ++k) {
            cplx acc = 0.0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    if (a == b) continue;
                    const double dec = (a + b) % n == 0 ? dp : dq;
                    const long long ph = (static_cast<long long>(a - b) * (k - start)) % n;
                    acc += dec * std::polar(1.0, 2.0 * kPi * ph / n - (e[a] - e[b]) * t[i]);
                }
            out(k, static_cast<Eigen::Index>(i)) = 1.0 / n + acc.real() / (static_cast<double>(n) * n);
        }
    }
    return out;
}

MixingResult mixing_time(const Eigen::MatrixXd& pop, const std::vector<double>& t, double eps) {
    const double n = static_cast<double>(pop.rows());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double dev = (pop.col(static_cast<Eigen::Index>(i)).array() - 1.0 / n).abs().sum();
        if (dev <= eps) return {t[i], i};
    }
    throw OpenSystemError("mixing criterion never met on the grid");
}

double mixing_bound_ring(int n, double lambda, double eps) {
    return n / (2.0 * lambda * (n - 2.0)) * std::log((n + 1.0) / eps);
}

double mixing_bound_hypercycle(int n, int d, double lambda, double eps) {
    const double nd = std::pow(n, d);
    return d / (2.0 * lambda) * (n / (n - 1.0)) * std::log(d * (n + 1.0) * (1.0 + eps * nd) / eps);
}

double mixing_bound_m_neighbor(int n, int m, double lambda, double eps) {
    const double f = m % 2 == 0 ? n / (n - 1.0) : n / (n - 2.0);
    return f / (2.0 * lambda) * std::log(n / eps);
}

double DimerSpec::phi() const {
    if (overdamped()) throw OpenSystemError("overdamped dimer (Gamma > 2V)");
    return std::asin(gamma / (2.0 * v));
}

Eigen::MatrixXcd dimer_hamiltonian(const DimerSpec& d) {
    Eigen::MatrixXcd h(2, 2);
    h << d.e, -d.v, -d.v, cplx(d.e, -d.gamma);
    return h;
}

double dimer_pi_trap(const DimerSpec& d, double t) {
    const double phi = d.phi(), c = std::cos(phi);
    const double a = std::cos(t * d.v * c - phi);
    return std::exp(-d.gamma * t) * a * a / (c * c);
}

double dimer_pi11_free(const DimerSpec& d, double t) {
    const double l = d.lambda, disc = 4.0 * d.v * d.v - l * l;
    double osc;
    if (disc > 0.0) {
        const double w = std::sqrt(disc);
        osc = l * std::sin(w * t) / w + std::cos(w * t);
    } else if (disc < 0.0) {
        const double w = std::sqrt(-disc);
        osc = l * std::sinh(w * t) / w + std::cosh(w * t);
    } else {
        osc = l * t + 1.0;
    }
    return 0.5 + 0.5 * std::exp(-l * t) * osc;
}

double dimer_combined(const DimerSpec& d, double t) {
    const double l = d.lambda, v = d.v;
    return std::exp(-d.gamma * t) *
           (0.5 + 0.5 * std::exp(-l * t) * (std::cos(2.0 * v * t) + l / (2.0 * v) * std::sin(2.0 * v * t)));
}

DimerSuite dimer_suite(const DimerSpec& d, const std::vector<double>& t) {
    if (!(d.v > 0.0)) throw OpenSystemError("coupling V must be positive");
    DimerSuite s;
    s.phi = d.phi();
    const double r = std::sqrt(d.v * d.v - d.gamma * d.gamma / 4.0);
    s.e_plus = cplx(d.e + r, -d.gamma / 2.0);
    s.e_minus = cplx(d.e - r, -d.gamma / 2.0);
    s.numeric = decompose_biorthogonal(dimer_hamiltonian(d));
    s.times = t;
    for (double x : t) {
        s.pi_trap.push_back(dimer_pi_trap(d, x));
        s.pi11_free.push_back(dimer_pi11_free(d, x));
        s.combined.push_back(dimer_combined(d, x));
    }
    return s;
}

}  // namespace qwalk
