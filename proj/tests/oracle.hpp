#pragma once
// Small helpers shared by the unit tests. Reference values here never go through an eigensolver.

#include <Eigen/Dense>
#include <complex>

#include "qwalk/checks.hpp"

namespace qtest {

using cplx = std::complex<double>;

inline Eigen::MatrixXcd unitary(const Eigen::MatrixXd& h, double t) {
    return qwalk::expm_oracle(cplx(0.0, -t) * h.cast<cplx>());
}

inline Eigen::MatrixXd heat(const Eigen::MatrixXd& h, double t) {
    return qwalk::expm_oracle(cplx(-t) * h.cast<cplx>()).real();
}

template <class D>
double max_abs(const Eigen::MatrixBase<D>& a) {
    return a.cwiseAbs().maxCoeff();
}

}  // namespace qtest
