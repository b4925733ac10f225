#pragma once

#include <cmath>

#include "cylres/types.hpp"

namespace cylres {

/// Radius below which z = tau_l is a valid coordinate on B_l.
inline double chart_radius(int l) { return std::sqrt(2.0 * l - 1.0) - 1e-9; }

/// A point of the Riemann surface near the l-th threshold, in the chart
/// coordinate z = tau_l(zeta).
struct SurfacePoint {
    int l;
    Complex z;

    SurfacePoint(int l_, Complex z_);
};

/// tau_k on the chart of threshold l, for a coordinate of arbitrary precision.
/// k < l: Re tau_k > 0; k > l: Im tau_k > 0; k = l: the coordinate itself.
template <typename Real>
std::complex<Real> tau_chart(int l, std::complex<Real> z, int k) {
    k = k < 0 ? -k : k;
    if (k == l) return z;
    const Real shift = static_cast<Real>(l) * l - static_cast<Real>(k) * k;
    const std::complex<Real> radicand = z * z + shift;
    if (k < l) return std::sqrt(radicand);
    return std::complex<Real>(0, 1) * std::sqrt(-radicand);
}

Complex tau(const SurfacePoint& p, int k);

/// sup_j |tau_j(p) - tau_j(q)| for two points on the same chart.
double surface_distance(const SurfacePoint& p, const SurfacePoint& q);

/// Infimum of surface_distance from p to the closed physical quadrant of its chart.
double distance_to_physical(const SurfacePoint& p);

struct RegionSpec {
    enum class Variant { Disk, ResonanceDisk, UPlus, UMinus };

    Variant variant = Variant::Disk;
    double rho = 1.0;       ///< B_l(rho)
    Complex lambda0 = 0.0;  ///< D_l(lambda0, r)
    double r = 1.0;
    double m_plus = 10.0;
    double c_plus = 0.5;
    double gamma = 0.9;
    double m_minus = 10.0;
    double alpha = 1.0;

    static RegionSpec disk(double rho);
    static RegionSpec resonance_disk(double rho, Complex lambda0, double r);
    static RegionSpec u_plus(double m_plus = 10.0, double c_plus = 0.5, double gamma = 0.9);
    static RegionSpec u_minus(double m_minus = 10.0, double alpha = 1.0, double gamma = 0.9);

    void validate() const;
};

bool contains(const RegionSpec& region, const SurfacePoint& p);

}  // namespace cylres
