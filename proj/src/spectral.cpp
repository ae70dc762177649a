#include "qwalk/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <numeric>
#include <numbers>

namespace qwalk {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

std::vector<int> DegeneracyClasses::sizes() const {
    std::vector<int> s;
    for (const auto& c : classes) s.push_back(static_cast<int>(c.size()));
    return s;
}

Spectrum decompose_symmetric(const Eigen::MatrixXd& H) {
    if (H.rows() != H.cols()) throw SpectralError("matrix must be square");
    const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
    if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw SpectralError("matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success) throw SpectralError("symmetric eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

BiorthSpectrum decompose_biorthogonal(const Eigen::MatrixXcd& H) {
    if (H.rows() != H.cols()) throw SpectralError("matrix must be square");
    const Eigen::Index n = H.rows();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success) throw SpectralError("complex eigensolver did not converge");
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    const Eigen::VectorXcd& ev = es.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const double ga = -ev[a].imag(), gb = -ev[b].imag();
        if (ga != gb) return ga < gb;
        return ev[a].real() < ev[b].real();
    });
    BiorthSpectrum s;
    s.values.resize(n);
    s.right.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        s.values[k] = ev[order[k]];
        s.right.col(k) = es.eigenvectors().col(order[k]).normalized();
    }
    // degenerate eigenvalues: the solver's vectors within one eigenspace can be nearly parallel,
    // so replace them by an orthonormal basis of the numerical null space of H - lambda
    const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
    std::vector<bool> done(n, false);
    for (Eigen::Index k = 0; k < n; ++k) {
        if (done[k]) continue;
        std::vector<Eigen::Index> cls{k};
        for (Eigen::Index q = k + 1; q < n; ++q)
            if (!done[q] && std::abs(s.values[q] - s.values[k]) <= 1e-9 * scale) cls.push_back(q);
        for (auto q : cls) done[q] = true;
        if (cls.size() < 2) continue;
        Eigen::MatrixXcd block(n, static_cast<Eigen::Index>(cls.size()));
        for (std::size_t i = 0; i < cls.size(); ++i) block.col(static_cast<Eigen::Index>(i)) = s.right.col(cls[i]);
        // well-separated vectors already span the eigenspace
        if (Eigen::JacobiSVD<Eigen::MatrixXcd>(block).singularValues().minCoeff() > 1e-3) continue;
        cplx mean = 0.0;
        for (auto q : cls) mean += s.values[q];
        mean /= static_cast<double>(cls.size());
        const Eigen::MatrixXcd shifted = H - mean * Eigen::MatrixXcd::Identity(n, n);
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullV);
        // singular values come sorted descending; the last cls.size() span the eigenspace, if it
        // has full dimension. Otherwise the matrix is defective and the residual check below fires.
        const auto& sv = svd.singularValues();
        if (sv[n - static_cast<Eigen::Index>(cls.size())] > 1e-8 * scale) continue;
        for (std::size_t i = 0; i < cls.size(); ++i) {
            s.right.col(cls[i]) = svd.matrixV().col(n - 1 - static_cast<Eigen::Index>(i));
            s.values[cls[i]] = mean;
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(s.right);
    if (!lu.isInvertible()) throw SpectralError("defective spectrum: eigenvectors are not a basis");
    s.left = lu.inverse();
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
    const double res = std::max((s.left * s.right - I).cwiseAbs().maxCoeff(), (s.right * s.left - I).cwiseAbs().maxCoeff());
    if (!(res <= 1e-6)) throw SpectralError("defective spectrum: completeness residual " + std::to_string(res));
    // with unit right vectors the row norms of `left` are the eigenvalue condition numbers
    const double kappa = s.left.rowwise().norm().maxCoeff();
    if (!(kappa <= 1e6)) throw SpectralError("defective spectrum: eigenvalue condition number " + std::to_string(kappa));
    return s;
}

DegeneracyClasses degeneracy_classes(const Eigen::VectorXd& v, double tol) {
    DegeneracyClasses d;
    d.tol = tol;
    const Eigen::Index n = v.size();
    if (n == 0) return d;
    d.classes.push_back({0});
    for (Eigen::Index k = 1; k < n; ++k) {
        const double gap = v[k] - v[k - 1];
        if (gap <= tol) {
            d.classes.back().push_back(static_cast<int>(k));
        } else {
            if (gap < 10.0 * tol) d.unstable = true;
            d.classes.push_back({static_cast<int>(k)});
        }
    }
    return d;
}

Spectrum kron_spectrum(const Spectrum& a, const Spectrum& b) {
    const int na = a.dim(), nb = b.dim();
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(na) * nb);
    for (int j = 0; j < nb; ++j)
        for (int i = 0; i < na; ++i) pairs.emplace_back(i, j);
    std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& p, const auto& q) {
        return a.values[p.first] + b.values[p.second] < a.values[q.first] + b.values[q.second];
    });
    Spectrum s;
    const int n = na * nb;
    s.values.resize(n);
    s.vectors.resize(n, n);
    for (int k = 0; k < n; ++k) {
        const auto [i, j] = pairs[k];
        s.values[k] = a.values[i] + b.values[j];
        // node (x, y) sits at x + na*y
        for (int y = 0; y < nb; ++y) s.vectors.col(k).segment(static_cast<Eigen::Index>(y) * na, na) = a.vectors.col(i) * b.vectors(y, j);
    }
    return s;
}

std::vector<double> ring_eigenvalues(int n) {
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = 2.0 - 2.0 * std::cos(2.0 * kPi * k / n);
    return sorted(v);
}

std::vector<double> line_eigenvalues(int n) {
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = 2.0 - 2.0 * std::cos(kPi * k / n);
    return v;
}

Spectrum line_spectrum(int n) {
    Spectrum s;
    s.values.resize(n);
    s.vectors.resize(n, n);
    for (int k = 0; k < n; ++k) {
        s.values[k] = 2.0 - 2.0 * std::cos(kPi * k / n);
        for (int x = 0; x < n; ++x)
            s.vectors(x, k) = k == 0 ? 1.0 / std::sqrt(n) : std::sqrt(2.0 / n) * std::cos(kPi * k * (x + 0.5) / n);
    }
    return s;
}

Eigen::MatrixXcd bloch_vectors(int n) {
    Eigen::MatrixXcd B(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k)
        for (int x = 0; x < n; ++x) B(x, k) = std::polar(norm, 2.0 * kPi * k * x / n);
    return B;
}

std::vector<double> m_neighbor_ring_eigenvalues(int n, int m) {
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) {
        const double th = 2.0 * kPi * k / n;
        double e = 2.0 * m;
        for (int j = 1; j <= m; ++j) e -= 2.0 * std::cos(j * th);
        v[k] = e;
    }
    return sorted(v);
}

std::vector<double> long_range_ring_eigenvalues(int n, double exponent, int r_max) {
    if (r_max < 0) r_max = n / 2;
    std::vector<double> w(r_max + 1, 0.0);
    for (int R = 1; R <= r_max; ++R) {
        double c = std::isinf(exponent) ? (R == 1 ? 1.0 : 0.0) : std::pow(static_cast<double>(R), -exponent);
        if (2 * R == n) c *= 0.5;  // the antipodal neighbour exists once
        w[R] = c;
    }
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) {
        double e = 0.0;
        for (int R = 1; R <= r_max; ++R) {
            if (w[R] == 0.0) continue;
            // reduce the angle exactly in integers
            const long long m = (static_cast<long long>(k) * R) % n;
            e += w[R] * (2.0 - 2.0 * std::cos(2.0 * kPi * static_cast<double>(m) / n));
        }
        v[k] = e;
    }
    return sorted(v);
}

std::vector<double> lattice2d_pbc_eigenvalues(int nx, int ny) {
    const auto ex = ring_eigenvalues(nx), ey = ring_eigenvalues(ny);
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(nx) * ny);
    for (double a : ex)
        for (double b : ey) v.push_back(a + b);
    return sorted(v);
}

std::vector<double> dsg_eigenvalues(int generation) {
    if (generation < 1) throw SpectralError("dsg needs g >= 1");
    std::vector<double> v{0.0, 3.0, 3.0};
    long long p = 1;  // 3^(g-1)
    for (int g = 2; g <= generation; ++g) {
        p *= 3;
        std::vector<double> next{0.0};
        for (double mu : v) {
            if (mu == 0.0) continue;
            const double r = std::sqrt(25.0 - 4.0 * mu);
            next.push_back((5.0 - r) / 2.0);
            next.push_back((5.0 + r) / 2.0);
        }
        next.insert(next.end(), static_cast<std::size_t>((p + 3) / 2), 3.0);
        next.insert(next.end(), static_cast<std::size_t>((p - 1) / 2), 5.0);
        v = std::move(next);
    }
    return sorted(v);
}

std::vector<double> vicsek_preimages(int f, double lambda) {
    const double a = -(f + 4.0), b = 3.0 * (f + 1.0), c = -lambda;
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double centre = -a / 3.0;  // (f+4)/3
    const double amp = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (2.0 * p) * std::sqrt(-3.0 / p), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    std::vector<double> r(3);
    for (int k = 0; k < 3; ++k) r[k] = centre + amp * std::cos(phi - 2.0 * kPi * k / 3.0);
    return sorted(r);
}

std::vector<double> vicsek_eigenvalues(int f, int generation) {
    if (f < 2 || generation < 1) throw SpectralError("vicsek needs f >= 2 and g >= 1");
    std::vector<double> v{0.0, static_cast<double>(f + 1)};
    v.insert(v.end(), static_cast<std::size_t>(f - 1), 1.0);
    for (int g = 2; g <= generation; ++g) {
        const std::size_t n_prev = v.size();
        std::vector<double> next;
        next.reserve(n_prev * (f + 1));
        bool dropped = false;
        for (double lam : v) {
            for (double r : vicsek_preimages(f, lam)) {
                // the root 3 above lambda = 0 does not survive
                if (lam == 0.0 && !dropped && std::abs(r - 3.0) < 1e-9) {
                    dropped = true;
                    continue;
                }
                next.push_back(lam == 0.0 && std::abs(r) < 1e-12 ? 0.0 : r);
            }
        }
        next.insert(next.end(), (f - 2) * n_prev + 1, 1.0);
        v = std::move(next);
    }
    return sorted(v);
}

ClosedSpectrum closed_spectrum(const std::string& family, const nlohmann::json& p) {
    ClosedSpectrum c;
    if (family == "ring") {
        const int n = p.at("n").get<int>();
        c.values = ring_eigenvalues(n);
        c.bloch = bloch_vectors(n);
    } else if (family == "m_neighbor_ring") {
        const int n = p.at("n").get<int>();
        c.values = m_neighbor_ring_eigenvalues(n, p.at("m").get<int>());
        c.bloch = bloch_vectors(n);
    } else if (family == "long_range_ring") {
        const int n = p.at("n").get<int>();
        const double ex = p.at("exponent").get<double>();
        c.values = long_range_ring_eigenvalues(n, ex < 0 ? INFINITY : ex, p.value("r_max", -1));
        c.bloch = bloch_vectors(n);
    } else if (family == "lattice2d_pbc" || family == "lattice2d") {
        c.values = lattice2d_pbc_eigenvalues(p.at("nx").get<int>(), p.at("ny").get<int>());
    } else if (family == "dsg") {
        c.values = dsg_eigenvalues(p.at("g").get<int>());
    } else if (family == "vicsek") {
        c.values = vicsek_eigenvalues(p.at("f").get<int>(), p.at("g").get<int>());
    } else {
        throw SpectralError("no closed-form spectrum for family " + family);
    }
    return c;
}

DosHistogram dos_histogram(const std::vector<double>& eigs, int n_bins, double lo, double hi) {
    if (eigs.empty()) throw SpectralError("empty spectrum");
    if (n_bins < 1 || !(hi > lo)) throw SpectralError("bad histogram range");
    DosHistogram h;
    h.edges.resize(n_bins + 1);
    for (int b = 0; b <= n_bins; ++b) h.edges[b] = lo + (hi - lo) * b / n_bins;
    h.mass.assign(n_bins, 0.0);
    double total = 0.0;
    for (double e : eigs) {
        if (e < lo || e > hi) continue;
        int b = static_cast<int>((e - lo) / (hi - lo) * n_bins);
        b = std::clamp(b, 0, n_bins - 1);
        h.mass[b] += 1.0;
        total += 1.0;
    }
    if (total == 0.0) throw SpectralError("no eigenvalues inside histogram range");
    for (auto& m : h.mass) m /= total;
    return h;
}

DosHistogram dos_histogram(const std::vector<double>& eigs, int n_bins) {
    if (eigs.empty()) throw SpectralError("empty spectrum");
    const auto [mn, mx] = std::minmax_element(eigs.begin(), eigs.end());
    const double pad = std::max(1e-12, 1e-9 * (*mx - *mn));
    return dos_histogram(eigs, n_bins, *mn - pad, *mx + pad);
}

double dos_loglog_slope(const std::vector<double>& eigs, double lo, double hi, int n_points) {
    if (eigs.empty()) throw SpectralError("empty spectrum");
    if (!(lo > 0.0 && hi > lo) || n_points < 2) throw SpectralError("degenerate window");
    auto s = sorted(eigs);
    std::vector<double> x, y;
    for (int k = 0; k < n_points; ++k) {
        const double e = lo * std::pow(hi / lo, static_cast<double>(k) / (n_points - 1));
        const double count = static_cast<double>(std::upper_bound(s.begin(), s.end(), e) - s.begin());
        if (count <= 0.0) continue;
        x.push_back(std::log(e));
        y.push_back(std::log(count / s.size()));
    }
    if (x.size() < 2) throw SpectralError("degenerate window");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxy += (x[k] - mx) * (y[k] - my);
        sxx += (x[k] - mx) * (x[k] - mx);
    }
    // integrated density ~ E^(nu+1)
    return sxy / sxx - 1.0;
}

}  // namespace qwalk
