#pragma once

#include <map>
#include <string>
#include <vector>

#include "cylres/types.hpp"

namespace cylres {

enum class ProfileKind { Sampled, Step };

/// One angular Fourier coefficient V_m(x) of a cylinder potential.
///
/// A sampled profile stores values on the uniform grid
/// x_min + i*(x_max - x_min)/n, i = 0..n, and must vanish at both ends.
/// A step profile stores strictly increasing breakpoints and one constant
/// value per interval; it is zero outside [x_min, x_max].
class ModeProfile {
public:
    ModeProfile() = default;

    static ModeProfile sampled(double x_min, double x_max, CVectorXd samples);
    static ModeProfile step(std::vector<double> breakpoints, CVectorXd values);
    static ModeProfile zero(double x_min, double x_max);

    ProfileKind kind() const { return kind_; }
    bool is_step() const { return kind_ == ProfileKind::Step; }
    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }

    /// Grid samples (sampled kind) or per-interval values (step kind).
    const CVectorXd& values() const { return values_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    /// Number of grid intervals (sampled) or slabs (step).
    int intervals() const;
    double grid_point(int i) const;

    /// Pointwise value. Sampled profiles use local cubic interpolation.
    Complex operator()(double x) const;

    double sup_norm() const;
    bool is_zero() const;

private:
    ProfileKind kind_ = ProfileKind::Sampled;
    double x_min_ = -1.0;
    double x_max_ = 1.0;
    CVectorXd values_;
    std::vector<double> breakpoints_;
};

/// Values V(x_i, theta_j) on a uniform theta grid over [0, 2 pi).
/// Rows follow the x layout of the requested output kind: grid points for
/// sampled output, intervals between `breakpoints` for step output.
struct AngularSamples {
    ProfileKind kind = ProfileKind::Sampled;
    double x_min = -1.0;
    double x_max = 1.0;
    std::vector<double> breakpoints;
    CMatrixXd values;
};

class CylinderPotential {
public:
    CylinderPotential() = default;
    CylinderPotential(std::map<int, ModeProfile> modes, bool real, double realness_tol = 1e-12);

    int max_mode() const { return max_mode_; }
    bool is_real() const { return real_; }
    double support_min() const { return support_min_; }
    double support_max() const { return support_max_; }

    /// V_m, or the zero profile when m is not stored.
    ModeProfile mode(int m) const;
    bool has_mode(int m) const;
    const std::map<int, ModeProfile>& modes() const { return modes_; }

    /// V minus its angular average.
    CylinderPotential oscillatory_part() const;
    /// True when every stored mode is a step profile.
    bool all_steps() const;

private:
    std::map<int, ModeProfile> modes_;
    int max_mode_ = 0;
    bool real_ = false;
    double support_min_ = -1.0;
    double support_max_ = 1.0;
};

ModeProfile fourier_mode(const AngularSamples& samples, int m);
ModeProfile average_v0(const CylinderPotential& pot);

struct DecayFit {
    double exponent;  ///< +infinity when fewer than two |m| carry nonzero modes
    double constant;
};
DecayFit mode_decay_exponent(const CylinderPotential& pot);

/// Midpoint-sampled piecewise-constant approximation on `n_steps` equal slabs.
ModeProfile to_steps(const ModeProfile& p, int n_steps);

/// Composite-trapezoid integral of |p|^2 (sampled) or exact (step).
double l2_norm_squared(const ModeProfile& p);

// Builtin potentials.

/// V(x, theta) = 2 chi_[-1,1](x) cos(theta): V_{+1} = V_{-1} = chi, V_0 = 0.
CylinderPotential example10();

/// Smooth real potential: V_0 = -depth * b(x) and V_{+1} = V_{-1} = bumpscale * b(x)^2
/// with the C-infinity bump b(x) = exp(1 - 1/(1 - x^2)) on (-1, 1).
CylinderPotential well_bump(double depth = 6.0, double bumpscale = 1.0, int grid_n = 512);

/// Square well/barrier V_0 = height * chi_[-width, width] with no angular dependence.
CylinderPotential square_well(double height, double half_width = 1.0);

CylinderPotential zero_potential(double half_width = 1.0);

/// Smooth bump b(x) = exp(1 - 1/(1 - x^2)), zero for |x| >= 1.
double smooth_bump(double x);

}  // namespace cylres
