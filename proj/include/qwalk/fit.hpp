#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qwalk {

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// y ~ prefactor * x^exponent
struct FitResult {
    double exponent = 0.0;
    double prefactor = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double residual = 0.0;  // rms of log residuals (log-log) or of relative residuals (nonlinear)
    int n_points = 0;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LineFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// indices i with y[i-1] < y[i] > y[i+1]
std::vector<std::size_t> strict_local_maxima(const std::vector<double>& y);

// Least squares in log-log coordinates over x in [lo, hi]. With envelope=true
// the strict local maxima of y are fitted instead of all samples.
FitResult powerlaw_fit(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi,
                       bool envelope = false);

// Levenberg-Marquardt on a*x^mu in linear space, started from the log-log fit.
FitResult powerlaw_nls(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi);

}  // namespace qwalk
