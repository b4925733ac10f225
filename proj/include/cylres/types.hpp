#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cylres {

using Complex = std::complex<double>;

template <typename Real>
using ComplexT = std::complex<Real>;

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using CMatrixXd = CMatrix<double>;
using CVectorXd = CVector<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a numerical procedure cannot deliver a certified result
/// (zero on a contour, near-pole evaluation, non-convergence).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cylres
