#include "qwalk/fit.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace qwalk {

LineFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw FitError("linear fit needs two or more points");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw FitError("degenerate abscissa");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    return f;
}

std::vector<std::size_t> strict_local_maxima(const std::vector<double>& y) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
        if (y[i] > y[i - 1] && y[i] > y[i + 1]) idx.push_back(i);
    return idx;
}

FitResult powerlaw_fit(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi, bool envelope) {
    if (x.size() != y.size()) throw FitError("x and y differ in length");
    std::vector<std::size_t> cand;
    if (envelope) {
        cand = strict_local_maxima(y);
    } else {
        cand.resize(x.size());
        std::iota(cand.begin(), cand.end(), std::size_t{0});
    }
    std::vector<double> lx, ly;
    for (std::size_t i : cand) {
        if (x[i] < lo || x[i] > hi) continue;
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw FitError("nonpositive value inside fit window");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    if (lx.size() < 5) throw FitError("fewer than 5 points in fit window (" + std::to_string(lx.size()) + ")");
    const LineFit lf = linear_fit(lx, ly);
    FitResult r;
    r.exponent = lf.slope;
    r.prefactor = std::exp(lf.intercept);
    r.lo = lo;
    r.hi = hi;
    r.n_points = static_cast<int>(lx.size());
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double e = ly[i] - (lf.intercept + lf.slope * lx[i]);
        ss += e * e;
    }
    r.residual = std::sqrt(ss / lx.size());
    return r;
}

FitResult powerlaw_nls(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi) {
    FitResult start = powerlaw_fit(x, y, lo, hi, false);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] >= lo && x[i] <= hi) {
            xs.push_back(x[i]);
            ys.push_back(y[i]);
        }
    double a = start.prefactor, mu = start.exponent;
    auto sse = [&](double aa, double mm) {
        double s = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double e = ys[i] - aa * std::pow(xs[i], mm);
            s += e * e;
        }
        return s;
    };
    double cur = sse(a, mu), damp = 1e-3;
    for (int it = 0; it < 500; ++it) {
        // normal equations in (a, mu)
        double j11 = 0, j12 = 0, j22 = 0, g1 = 0, g2 = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double p = std::pow(xs[i], mu);
            const double da = p, dm = a * p * std::log(xs[i]);
            const double e = ys[i] - a * p;
            j11 += da * da;
            j12 += da * dm;
            j22 += dm * dm;
            g1 += da * e;
            g2 += dm * e;
        }
        bool improved = false;
        for (int tries = 0; tries < 30 && !improved; ++tries) {
            const double b11 = j11 * (1 + damp), b22 = j22 * (1 + damp);
            const double det = b11 * b22 - j12 * j12;
            if (det == 0.0) break;
            const double sa = (b22 * g1 - j12 * g2) / det;
            const double sm = (b11 * g2 - j12 * g1) / det;
            const double trial = sse(a + sa, mu + sm);
            if (trial < cur) {
                const double rel = (cur - trial) / std::max(cur, 1e-300);
                a += sa;
                mu += sm;
                cur = trial;
                damp = std::max(damp / 10, 1e-12);
                improved = true;
                if (rel < 1e-15) it = 1 << 20;
            } else {
                damp *= 10;
            }
        }
        if (!improved) break;
    }
    FitResult r = start;
    r.exponent = mu;
    r.prefactor = a;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = (ys[i] - a * std::pow(xs[i], mu)) / ys[i];
        ss += e * e;
    }
    r.residual = std::sqrt(ss / xs.size());
    return r;
}

}  // namespace qwalk
