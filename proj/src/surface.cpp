#include "cylres/surface.hpp"

#include <algorithm>
#include <array>

namespace cylres {

SurfacePoint::SurfacePoint(int l_, Complex z_) : l(l_), z(z_) {
    if (l < 1) throw std::invalid_argument("SurfacePoint: threshold index must be >= 1");
    if (!(std::abs(z) < chart_radius(l)))
        throw std::invalid_argument("SurfacePoint: |z| must be below sqrt(2l-1) (chart violation)");
}

Complex tau(const SurfacePoint& p, int k) { return tau_chart<double>(p.l, p.z, k); }

double surface_distance(const SurfacePoint& p, const SurfacePoint& q) {
    if (p.l != q.l) throw std::invalid_argument("surface_distance: points lie on different charts");
    const int l = p.l;
    double best = 0.0;
    for (int j = 0; j <= l; ++j) best = std::max(best, std::abs(tau(p, j) - tau(q, j)));
    // For j > l, |tau_j - tau_j'| = |z^2 - z'^2| / |tau_j + tau_j'| and
    // Im(tau_j + tau_j') increases with j, so the bound below is monotone.
    const double numer = std::abs(p.z * p.z - q.z * q.z);
    for (int j = l + 1;; ++j) {
        const Complex tp = tau(p, j);
        const Complex tq = tau(q, j);
        best = std::max(best, std::abs(tp - tq));
        const double tail = numer / (tp.imag() + tq.imag());
        if (tail <= best || numer == 0.0) break;
    }
    return best;
}

namespace {

double min_along_ray(const SurfacePoint& p, Complex dir, double length) {
    auto dist = [&](double t) { return surface_distance(p, SurfacePoint(p.l, dir * t)); };
    constexpr int coarse = 200;
    double best_t = 0.0;
    double best = dist(0.0);
    for (int i = 1; i <= coarse; ++i) {
        const double t = length * i / coarse;
        const double d = dist(t);
        if (d < best) {
            best = d;
            best_t = t;
        }
    }
    double lo = std::max(0.0, best_t - length / coarse);
    double hi = std::min(length, best_t + length / coarse);
    // golden-section refinement on the bracketing cell
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    double fa = dist(a), fb = dist(b);
    for (int it = 0; it < 100 && hi - lo > 1e-14 * std::max(1.0, length); ++it) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - g * (hi - lo);
            fa = dist(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + g * (hi - lo);
            fb = dist(b);
        }
    }
    return std::min({best, fa, fb});
}

}  // namespace

double distance_to_physical(const SurfacePoint& p) {
    if (p.z.real() >= 0.0 && p.z.imag() >= 0.0) return 0.0;
    const double length = chart_radius(p.l) * (1.0 - 1e-12);
    return std::min(min_along_ray(p, Complex(1.0, 0.0), length), min_along_ray(p, Complex(0.0, 1.0), length));
}

RegionSpec RegionSpec::disk(double rho) {
    RegionSpec r;
    r.variant = Variant::Disk;
    r.rho = rho;
    r.validate();
    return r;
}

RegionSpec RegionSpec::resonance_disk(double rho, Complex lambda0, double radius) {
    RegionSpec r;
    r.variant = Variant::ResonanceDisk;
    r.rho = rho;
    r.lambda0 = lambda0;
    r.r = radius;
    r.validate();
    return r;
}

RegionSpec RegionSpec::u_plus(double m_plus, double c_plus, double gamma) {
    RegionSpec r;
    r.variant = Variant::UPlus;
    r.m_plus = m_plus;
    r.c_plus = c_plus;
    r.gamma = gamma;
    r.validate();
    return r;
}

RegionSpec RegionSpec::u_minus(double m_minus, double alpha, double gamma) {
    RegionSpec r;
    r.variant = Variant::UMinus;
    r.m_minus = m_minus;
    r.alpha = alpha;
    r.gamma = gamma;
    r.validate();
    return r;
}

void RegionSpec::validate() const {
    const std::array<double, 7> positive{rho, r, m_plus, c_plus, m_minus, alpha, gamma};
    for (double v : positive)
        if (!(v > 0.0)) throw std::invalid_argument("RegionSpec: radii and constants must be positive");
    if (!(gamma < 1.0)) throw std::invalid_argument("RegionSpec: gamma must lie in (0,1)");
}

bool contains(const RegionSpec& region, const SurfacePoint& p) {
    const Complex z = p.z;
    const double edge = region.gamma * std::sqrt(2.0 * p.l);
    switch (region.variant) {
        case RegionSpec::Variant::Disk:
            return std::abs(z) < region.rho;
        case RegionSpec::Variant::ResonanceDisk:
            return std::abs(z) < region.rho && std::abs(z - region.lambda0) < region.r;
        case RegionSpec::Variant::UPlus:
            return region.m_plus < z.real() && z.real() < edge &&
                   z.imag() > -region.c_plus * std::log(z.real());
        case RegionSpec::Variant::UMinus:
            return region.m_minus < z.imag() && z.imag() < edge && z.real() > -region.alpha;
    }
    return false;
}

}  // namespace cylres
