#include "qwalk/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace qwalk {

namespace {

void check_start(int j, int n) {
    if (j < 0 || j >= n) throw DynamicsError("start node " + std::to_string(j) + " out of range");
}

}  // namespace

std::vector<double> linspace(double a, double b, int n) {
    if (n < 1) throw DynamicsError("linspace needs n >= 1");
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return t;
}

std::vector<double> logspace(double a, double b, int n) {
    if (!(a > 0.0 && b > 0.0)) throw DynamicsError("logspace endpoints must be positive");
    auto e = linspace(std::log(a), std::log(b), n);
    for (auto& x : e) x = std::exp(x);
    e.front() = a;
    e.back() = b;
    return e;
}

void validate_grid(const std::vector<double>& t) {
    if (t.empty()) throw DynamicsError("empty time grid");
    if (t[0] < 0.0) throw DynamicsError("time grid starts below zero");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1])) throw DynamicsError("time grid not strictly increasing");
}

ProbabilityField propagate_classical(const Spectrum& s, int j, const std::vector<double>& t, double gamma) {
    const int n = s.dim();
    check_start(j, n);
    validate_grid(t);
    ProbabilityField f;
    f.kind = FieldKind::classical_p;
    f.start = j;
    f.times = t;
    f.values.resize(n, static_cast<Eigen::Index>(t.size()));
    const Eigen::VectorXd qj = s.vectors.row(j).transpose();
    for (std::size_t i = 0; i < t.size(); ++i) {
        const Eigen::VectorXd w = (-gamma * t[i] * s.values.array()).exp().matrix().cwiseProduct(qj);
        f.values.col(static_cast<Eigen::Index>(i)) = s.vectors * w;
    }
    return f;
}

ProbabilityField propagate_quantum(const Spectrum& s, int j, const std::vector<double>& t) {
    const int n = s.dim();
    check_start(j, n);
    validate_grid(t);
    ProbabilityField f;
    f.kind = FieldKind::quantum_pi;
    f.start = j;
    f.times = t;
    f.values.resize(n, static_cast<Eigen::Index>(t.size()));
    f.amplitudes.resize(n, static_cast<Eigen::Index>(t.size()));
    const Eigen::VectorXd qj = s.vectors.row(j).transpose();
    for (std::size_t i = 0; i < t.size(); ++i) {
        Eigen::VectorXd re(n), im(n);
        for (int m = 0; m < n; ++m) {
            re[m] = std::cos(s.values[m] * t[i]) * qj[m];
            im[m] = -std::sin(s.values[m] * t[i]) * qj[m];
        }
        const Eigen::VectorXd ar = s.vectors * re, ai = s.vectors * im;
        const auto c = static_cast<Eigen::Index>(i);
        f.amplitudes.col(c).real() = ar;
        f.amplitudes.col(c).imag() = ai;
        f.values.col(c) = ar.cwiseAbs2() + ai.cwiseAbs2();
    }
    return f;
}

ProbabilityField propagate_quantum(const Eigen::VectorXd& energies, const Eigen::MatrixXcd& basis, int j,
                                   const std::vector<double>& t) {
    const int n = static_cast<int>(energies.size());
    check_start(j, n);
    validate_grid(t);
    ProbabilityField f;
    f.kind = FieldKind::quantum_pi;
    f.start = j;
    f.times = t;
    f.values.resize(n, static_cast<Eigen::Index>(t.size()));
    f.amplitudes.resize(n, static_cast<Eigen::Index>(t.size()));
    const Eigen::VectorXcd bj = basis.row(j).adjoint();
    for (std::size_t i = 0; i < t.size(); ++i) {
        Eigen::VectorXcd c(n);
        for (int m = 0; m < n; ++m) c[m] = std::polar(1.0, -energies[m] * t[i]) * bj[m];
        const auto col = static_cast<Eigen::Index>(i);
        f.amplitudes.col(col) = basis * c;
        f.values.col(col) = f.amplitudes.col(col).cwiseAbs2();
    }
    return f;
}

std::vector<double> average_return(const Eigen::VectorXd& e, ReturnKind kind, const std::vector<double>& t) {
    validate_grid(t);
    const double n = static_cast<double>(e.size());
    std::vector<double> out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (kind == ReturnKind::classical) {
            out[i] = (-t[i] * e.array()).exp().sum() / n;
        } else if (kind == ReturnKind::quantum_lower_bound) {
            cplx a = 0.0;
            for (Eigen::Index m = 0; m < e.size(); ++m) a += std::polar(1.0, -e[m] * t[i]);
            out[i] = std::norm(a / n);
        } else {
            throw DynamicsError("exact quantum return needs eigenvectors");
        }
    }
    return out;
}

std::vector<double> average_return(const Spectrum& s, ReturnKind kind, const std::vector<double>& t) {
    if (kind != ReturnKind::quantum_exact) return average_return(s.values, kind, t);
    validate_grid(t);
    const int n = s.dim();
    const Eigen::MatrixXd q2 = s.vectors.cwiseAbs2();
    std::vector<double> out(t.size());
    // alpha_jj = sum_m |q_m(j)|^2 e^{-i E_m t}, evaluated in blocks of time points
    constexpr std::size_t kBlock = 256;
    for (std::size_t b = 0; b < t.size(); b += kBlock) {
        const auto nb = static_cast<Eigen::Index>(std::min(kBlock, t.size() - b));
        Eigen::MatrixXd c(n, nb), sn(n, nb);
        for (Eigen::Index i = 0; i < nb; ++i)
            for (int m = 0; m < n; ++m) {
                c(m, i) = std::cos(s.values[m] * t[b + i]);
                sn(m, i) = std::sin(s.values[m] * t[b + i]);
            }
        const Eigen::MatrixXd re = q2 * c, im = q2 * sn;
        for (Eigen::Index i = 0; i < nb; ++i)
            out[b + i] = (re.col(i).squaredNorm() + im.col(i).squaredNorm()) / n;
    }
    return out;
}

LtaMatrix long_time_average(const Spectrum& s, double tol) {
    const int n = s.dim();
    const auto dc = degeneracy_classes(s.values, tol);
    LtaMatrix r;
    r.chi = Eigen::MatrixXd::Zero(n, n);
    r.unstable = dc.unstable;
    for (const auto& c : dc.classes) {
        Eigen::MatrixXd vc(n, static_cast<Eigen::Index>(c.size()));
        for (std::size_t a = 0; a < c.size(); ++a) vc.col(static_cast<Eigen::Index>(a)) = s.vectors.col(c[a]);
        const Eigen::MatrixXd p = vc * vc.transpose();
        r.chi += p.cwiseAbs2();
    }
    r.chi_bar = r.chi.trace() / n;
    r.chi_bar_lb = chi_bar_lower_bound(s.values, tol);
    return r;
}

Eigen::VectorXd lta_column(const Spectrum& s, int j, double tol) {
    const int n = s.dim();
    check_start(j, n);
    const auto dc = degeneracy_classes(s.values, tol);
    Eigen::VectorXd col = Eigen::VectorXd::Zero(n);
    for (const auto& c : dc.classes) {
        Eigen::VectorXd pj = Eigen::VectorXd::Zero(n);
        for (int m : c) pj += s.vectors.col(m) * s.vectors(j, m);
        col += pj.cwiseAbs2();
    }
    return col;
}

double chi_bar_lower_bound(const Eigen::VectorXd& e, double tol) {
    const auto dc = degeneracy_classes(e, tol);
    double s = 0.0;
    for (const auto& c : dc.classes) s += static_cast<double>(c.size()) * c.size();
    const double n = static_cast<double>(e.size());
    return s / (n * n);
}

double dsg_chi_bar_lb_sum(int g) {
    const double n = std::pow(3.0, g);
    double s = 1.0;
    for (int r = 0; r <= g - 1; ++r) {
        const double m = (std::pow(3.0, g - r - 1) + 3.0) / 2.0;
        s += m * m * std::pow(2.0, r);
    }
    for (int r = 0; r <= g - 2; ++r) {
        const double m = (std::pow(3.0, g - r - 1) - 1.0) / 2.0;
        s += m * m * std::pow(2.0, r);
    }
    return s / (n * n);
}

double dsg_chi_bar_lb_closed(int g) {
    const double p = std::pow(3.0, g);
    return (p * (1.0 + p / 14.0) + 10.0 / 7.0 * std::pow(2.0, g) - 1.5) / (p * p);
}

Revivals revival_times(int n, double r) {
    if (n < 1) throw DynamicsError("revival times need N >= 1");
    Revivals rv;
    rv.tau0 = n * static_cast<double>(n) / (2.0 * std::numbers::pi);
    for (int m = 1; m < n; ++m) {
        const double c = 1.0 / std::tan(m * std::numbers::pi / n);
        rv.tau.push_back(r * std::numbers::pi / 2.0 * (1.0 + c * c));
    }
    // every ring eigenvalue an integer <=> exact return at t = 2 pi
    rv.full_revival = true;
    for (double e : ring_eigenvalues(n))
        if (std::abs(e - std::round(e)) > 1e-12) rv.full_revival = false;
    return rv;
}

std::vector<std::vector<int>> cluster_lps(const Eigen::VectorXd& column, double tol) {
    const auto n = column.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return column[a] < column[b]; });
    std::vector<std::vector<int>> out;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (k == 0 || column[order[k]] - column[order[k - 1]] > tol) out.emplace_back();
        out.back().push_back(order[k]);
    }
    for (auto& c : out) std::sort(c.begin(), c.end());
    return out;
}

std::vector<double> msd(const ProbabilityField& f, Metric metric, bool verbatim_prefactor) {
    if (f.kind == FieldKind::quantum_alpha) throw DynamicsError("msd needs a probability field");
    const int n = static_cast<int>(f.values.rows());
    std::vector<double> d2(n);
    for (int k = 0; k < n; ++k) {
        int d = std::abs(k - f.start);
        if (metric == Metric::ring) d = std::min(d, n - d);
        d2[k] = static_cast<double>(d) * d;
    }
    std::vector<double> out(f.times.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += d2[k] * f.values(k, static_cast<Eigen::Index>(i));
        out[i] = verbatim_prefactor ? s / n : s;
    }
    return out;
}

Eigen::MatrixXd ring_lta_closed(int n) {
    if (n < 1) throw DynamicsError("ring needs N >= 1");
    const double nn = static_cast<double>(n) * n;
    Eigen::MatrixXd chi(n, n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            if (n % 2 == 1) {
                chi(k, j) = k == j ? (2.0 * n - 1.0) / nn : (n - 1.0) / nn;
            } else {
                const bool mirror = k == j || k == (j + n / 2) % n;
                chi(k, j) = mirror ? 2.0 * (n - 1.0) / nn : (n - 2.0) / nn;
            }
        }
    return chi;
}

double star_pi_core(int n, double t) {
    const double nn = static_cast<double>(n) * n;
    return (nn - 2.0 * n + 2.0) / nn + 2.0 * (n - 1.0) / nn * std::cos(n * t);
}

double star_pi_core_to_leaf(int n, double t) {
    const double nn = static_cast<double>(n) * n;
    return 2.0 / nn * (1.0 - std::cos(n * t));
}

double star_pi_leaf(int n, double t) {
    const double N = n, d = N * N * (N - 1.0) * (N - 1.0);
    return ((std::pow(N, 4) - 4.0 * std::pow(N, 3) + 5.0 * N * N - 2.0 * N + 2.0) +
            (2.0 * std::pow(N, 3) - 6.0 * N * N + 4.0 * N) * std::cos(t) +
            (2.0 * N * N - 4.0 * N) * std::cos((N - 1.0) * t) + (2.0 * N - 2.0) * std::cos(N * t)) /
           d;
}

double complete_pi(int n, bool same_node, double t) {
    return same_node ? star_pi_core(n, t) : star_pi_core_to_leaf(n, t);
}

StarLta star_lta(int n) {
    const double N = n, nn = N * N, d = nn * (N - 1.0) * (N - 1.0);
    return {(nn - 2.0 * N + 2.0) / nn, 2.0 / nn,
            (std::pow(N, 4) - 4.0 * std::pow(N, 3) + 5.0 * nn - 2.0 * N + 2.0) / d, 2.0 * (nn - N + 1.0) / d};
}

}  // namespace qwalk
