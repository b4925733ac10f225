#pragma once

#include <functional>
#include <vector>

#include "cylres/potential.hpp"
#include "cylres/zeros.hpp"

namespace cylres {

// Conventions for -u'' + V0 u = lambda^2 u on the line, V0 a step profile on [a, b]:
//   f_-(x) = exp(-i lambda x) for x <= a,   f_+(x) = exp(i lambda x) for x >= b,
//   W(lambda) = f_- f_+' - f_-' f_+   (= 2 i lambda for V0 = 0),
//   R(lambda; x, x') = -f_-(min) f_+(max) / W   (= (i / 2 lambda) exp(i lambda |x - x'|) for V0 = 0).

/// Propagator of (u, u') across one slab of width w where u'' = -mu2 u.
Eigen::Matrix2cd slab_propagator(Complex mu2, double w);

/// Exact propagator of (u, u') across the whole support of a step profile.
Eigen::Matrix2cd transfer_matrix(Complex lambda, const ModeProfile& pot);

struct JostData {
    Complex lambda;
    Complex wronskian;
    Complex fminus_value, fminus_deriv;  ///< f_- at the right support edge
    Complex fplus_value, fplus_deriv;    ///< f_+ at the left support edge
};

JostData jost_data(Complex lambda, const ModeProfile& pot);
Complex jost_wronskian(Complex lambda, const ModeProfile& pot);

/// Jost solutions f_-, f_+ evaluated anywhere on the line.
class JostSolutions {
public:
    JostSolutions(Complex lambda, const ModeProfile& pot);

    Complex lambda() const { return lambda_; }
    Complex wronskian() const { return wronskian_; }
    Complex fminus(double x) const;
    Complex fplus(double x) const;
    /// (value, derivative) at the right support edge.
    Eigen::Vector2cd fminus_state_right() const { return minus_nodes_.back(); }
    Eigen::Vector2cd fplus_state_right() const { return plus_nodes_.back(); }

private:
    Complex propagate(const std::vector<Eigen::Vector2cd>& nodes, double x) const;

    Complex lambda_;
    std::vector<double> bps_;
    std::vector<Complex> mu2_;
    std::vector<Eigen::Vector2cd> minus_nodes_, plus_nodes_;
    Complex wronskian_;
};

struct Resonance1D {
    Complex lambda;
    int multiplicity;
};

std::vector<Resonance1D> find_resonances_1d(const ModeProfile& pot, const Rect& rect, double tol,
                                            ZeroOptions opt = {});

/// Residue data u with R(lambda) - i/(lambda - lambda0) u (x) u analytic at lambda0.
class ResonanceState {
public:
    ResonanceState(const ModeProfile& pot, Complex lambda0);

    Complex lambda0() const { return lambda0_; }
    /// f_+ = c f_- at lambda0.
    Complex proportionality() const { return c_; }
    /// u = c_plus exp(i lambda0 x) right of the support, c_minus exp(-i lambda0 x) left of it.
    Complex c_plus() const { return scale_; }
    Complex c_minus() const { return scale_ * c_; }
    Complex wronskian_derivative() const { return wprime_; }

    Complex operator()(double x) const { return scale_ * jost_.fplus(x); }

    /// Values of u on the breakpoints of the step profile.
    const std::vector<double>& grid() const { return grid_; }
    const CVectorXd& values() const { return values_; }

    /// Integral of u^2 over the line (bilinear). Requires Im lambda0 > 0.
    Complex integral_u_squared() const;
    /// Integral of u g over [lo, hi], Gauss-Legendre per slab.
    Complex integrate_against(const std::function<Complex(double)>& g, double lo, double hi, int panels = 64) const;

private:
    Complex lambda0_;
    JostSolutions jost_;
    Complex c_;
    Complex wprime_;
    Complex scale_;
    std::vector<double> grid_;
    CVectorXd values_;
    double a_, b_;
};

Complex resolvent_kernel(const ModeProfile& pot, Complex lambda, double x, double xp);

/// Hilbert-Schmidt norm of the kernel restricted to [lo, hi]^2 (2-D composite trapezoid).
double cutoff_resolvent_hs_norm(const ModeProfile& pot, Complex lambda, double lo, double hi, int n = 0);

}  // namespace cylres
