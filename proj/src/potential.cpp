#include "cylres/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cylres {

namespace {

bool finite(const CVectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
    return true;
}

}  // namespace

ModeProfile ModeProfile::sampled(double x_min, double x_max, CVectorXd samples) {
    if (!(x_min < x_max)) throw std::invalid_argument("ModeProfile: x_min must be < x_max");
    if (samples.size() < 2) throw std::invalid_argument("ModeProfile: need at least 2 samples");
    if (!finite(samples)) throw std::invalid_argument("ModeProfile: non-finite sample");
    const double scale = std::max(1.0, samples.cwiseAbs().maxCoeff());
    if (std::abs(samples[0]) > 1e-12 * scale || std::abs(samples[samples.size() - 1]) > 1e-12 * scale)
        throw std::invalid_argument("ModeProfile: sampled profile must vanish at both endpoints");
    ModeProfile p;
    p.kind_ = ProfileKind::Sampled;
    p.x_min_ = x_min;
    p.x_max_ = x_max;
    p.values_ = std::move(samples);
    return p;
}

ModeProfile ModeProfile::step(std::vector<double> breakpoints, CVectorXd values) {
    if (breakpoints.size() < 2 || values.size() != static_cast<Eigen::Index>(breakpoints.size() - 1))
        throw std::invalid_argument("ModeProfile: step needs n+1 breakpoints for n values");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i] > breakpoints[i - 1]))
            throw std::invalid_argument("ModeProfile: breakpoints must be strictly increasing");
    if (!finite(values)) throw std::invalid_argument("ModeProfile: non-finite step value");
    ModeProfile p;
    p.kind_ = ProfileKind::Step;
    p.x_min_ = breakpoints.front();
    p.x_max_ = breakpoints.back();
    p.breakpoints_ = std::move(breakpoints);
    p.values_ = std::move(values);
    return p;
}

ModeProfile ModeProfile::zero(double x_min, double x_max) {
    return step({x_min, x_max}, CVectorXd::Zero(1));
}

int ModeProfile::intervals() const {
    return static_cast<int>(is_step() ? values_.size() : values_.size() - 1);
}

double ModeProfile::grid_point(int i) const {
    if (is_step()) return breakpoints_[static_cast<std::size_t>(i)];
    return x_min_ + (x_max_ - x_min_) * i / intervals();
}

Complex ModeProfile::operator()(double x) const {
    if (x < x_min_ || x > x_max_) return 0.0;
    if (is_step()) {
        auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
        auto idx = static_cast<Eigen::Index>(std::distance(breakpoints_.begin(), it)) - 1;
        idx = std::clamp<Eigen::Index>(idx, 0, values_.size() - 1);
        return values_[idx];
    }
    const int n = intervals();
    const double h = (x_max_ - x_min_) / n;
    const double t = (x - x_min_) / h;
    int i = std::clamp(static_cast<int>(std::floor(t)), 0, n - 1);
    // 4-point Lagrange stencil i-1..i+2, shifted inward at the edges
    int s = std::clamp(i - 1, 0, std::max(0, n - 3));
    if (n < 3) s = 0;
    const int pts = std::min(4, n + 1);
    Complex acc = 0.0;
    for (int a = 0; a < pts; ++a) {
        double w = 1.0;
        for (int b = 0; b < pts; ++b)
            if (b != a) w *= (t - (s + b)) / static_cast<double>(a - b);
        acc += w * values_[s + a];
    }
    return acc;
}

double ModeProfile::sup_norm() const {
    return values_.size() == 0 ? 0.0 : values_.cwiseAbs().maxCoeff();
}

bool ModeProfile::is_zero() const { return sup_norm() == 0.0; }

CylinderPotential::CylinderPotential(std::map<int, ModeProfile> modes, bool real, double realness_tol)
    : modes_(std::move(modes)), real_(real) {
    bool first = true;
    for (const auto& [m, p] : modes_) {
        max_mode_ = std::max(max_mode_, std::abs(m));
        if (first) {
            support_min_ = p.x_min();
            support_max_ = p.x_max();
            first = false;
        } else {
            support_min_ = std::min(support_min_, p.x_min());
            support_max_ = std::max(support_max_, p.x_max());
        }
    }
    if (real_) {
        for (const auto& [m, p] : modes_) {
            const ModeProfile q = mode(-m);
            const double scale = std::max(1.0, p.sup_norm());
            const int probes = 257;
            for (int i = 0; i <= probes; ++i) {
                const double x = support_min_ + (support_max_ - support_min_) * i / probes;
                if (std::abs(q(x) - std::conj(p(x))) > realness_tol * scale)
                    throw std::invalid_argument("CylinderPotential: realness flag set but V_{-m} != conj(V_m)");
            }
        }
    }
}

ModeProfile CylinderPotential::mode(int m) const {
    auto it = modes_.find(m);
    if (it != modes_.end()) return it->second;
    return ModeProfile::zero(support_min_, support_max_);
}

bool CylinderPotential::has_mode(int m) const {
    auto it = modes_.find(m);
    return it != modes_.end() && !it->second.is_zero();
}

CylinderPotential CylinderPotential::oscillatory_part() const {
    auto modes = modes_;
    modes.erase(0);
    CylinderPotential out(std::move(modes), real_);
    out.support_min_ = support_min_;
    out.support_max_ = support_max_;
    return out;
}

bool CylinderPotential::all_steps() const {
    return std::all_of(modes_.begin(), modes_.end(), [](const auto& kv) { return kv.second.is_step(); });
}

ModeProfile fourier_mode(const AngularSamples& samples, int m) {
    const auto n_theta = samples.values.cols();
    if (n_theta < 4 * std::abs(m) + 4)
        throw std::invalid_argument("fourier_mode: theta grid has " + std::to_string(n_theta) +
                                    " points, need at least " + std::to_string(4 * std::abs(m) + 4));
    CVectorXd phase(n_theta);
    for (Eigen::Index j = 0; j < n_theta; ++j) {
        const double theta = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n_theta);
        phase[j] = std::polar(1.0 / static_cast<double>(n_theta), -m * theta);
    }
    CVectorXd coeff = samples.values * phase;
    if (samples.kind == ProfileKind::Step) return ModeProfile::step(samples.breakpoints, std::move(coeff));
    // trapezoid noise at the endpoints must not trip the compact-support check
    const double scale = std::max(1.0, coeff.cwiseAbs().maxCoeff());
    for (Eigen::Index i : {Eigen::Index{0}, coeff.size() - 1})
        if (std::abs(coeff[i]) <= 1e-13 * scale) coeff[i] = 0.0;
    return ModeProfile::sampled(samples.x_min, samples.x_max, std::move(coeff));
}

ModeProfile average_v0(const CylinderPotential& pot) { return pot.mode(0); }

DecayFit mode_decay_exponent(const CylinderPotential& pot) {
    if (pot.max_mode() < 2) throw std::invalid_argument("mode_decay_exponent: needs max_mode >= 2");
    std::vector<double> xs, ys;
    for (int m = 1; m <= pot.max_mode(); ++m) {
        const double norm = std::max(pot.mode(m).sup_norm(), pot.mode(-m).sup_norm());
        if (norm > 0.0) {
            xs.push_back(std::log(static_cast<double>(m)));
            ys.push_back(std::log(norm));
        }
    }
    if (xs.size() < 2) return {std::numeric_limits<double>::infinity(), 0.0};
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    return {-slope, std::exp(intercept)};
}

ModeProfile to_steps(const ModeProfile& p, int n_steps) {
    if (n_steps < 1) throw std::invalid_argument("to_steps: n_steps must be >= 1");
    const double a = p.x_min();
    const double b = p.x_max();
    const double w = (b - a) / n_steps;
    std::vector<double> bps(static_cast<std::size_t>(n_steps) + 1);
    for (int i = 0; i <= n_steps; ++i) bps[static_cast<std::size_t>(i)] = a + (b - a) * i / n_steps;
    bps.back() = b;
    if (p.is_step()) {
        const auto& old = p.breakpoints();
        const bool aligned = std::all_of(old.begin(), old.end(), [&](double x) {
            const double r = (x - a) / w;
            return std::abs(r - std::round(r)) < 1e-9;
        });
        if (aligned && static_cast<int>(old.size()) - 1 == n_steps) return p;
    }
    CVectorXd vals(n_steps);
    for (int i = 0; i < n_steps; ++i) vals[i] = p(a + (i + 0.5) * w);
    return ModeProfile::step(std::move(bps), std::move(vals));
}

double l2_norm_squared(const ModeProfile& p) {
    double acc = 0.0;
    if (p.is_step()) {
        for (int i = 0; i < p.intervals(); ++i)
            acc += std::norm(p.values()[i]) * (p.breakpoints()[i + 1] - p.breakpoints()[i]);
        return acc;
    }
    const int n = p.intervals();
    const double h = (p.x_max() - p.x_min()) / n;
    for (int i = 0; i <= n; ++i) acc += (i == 0 || i == n ? 0.5 : 1.0) * std::norm(p.values()[i]);
    return acc * h;
}

double smooth_bump(double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - x * x));
}

CylinderPotential example10() {
    auto chi = ModeProfile::step({-1.0, 1.0}, CVectorXd::Ones(1));
    std::map<int, ModeProfile> modes{{-1, chi}, {1, chi}, {0, ModeProfile::zero(-1.0, 1.0)}};
    return CylinderPotential(std::move(modes), true);
}

CylinderPotential well_bump(double depth, double bumpscale, int grid_n) {
    CVectorXd v0(grid_n + 1), v1(grid_n + 1);
    for (int i = 0; i <= grid_n; ++i) {
        const double x = -1.0 + 2.0 * i / grid_n;
        const double b = smooth_bump(x);
        v0[i] = -depth * b;
        v1[i] = bumpscale * b * b;
    }
    auto p1 = ModeProfile::sampled(-1.0, 1.0, v1);
    std::map<int, ModeProfile> modes{
        {0, ModeProfile::sampled(-1.0, 1.0, v0)}, {1, p1}, {-1, p1}};
    return CylinderPotential(std::move(modes), true);
}

CylinderPotential square_well(double height, double half_width) {
    std::map<int, ModeProfile> modes{
        {0, ModeProfile::step({-half_width, half_width}, CVectorXd::Constant(1, height))}};
    return CylinderPotential(std::move(modes), true);
}

CylinderPotential zero_potential(double half_width) {
    std::map<int, ModeProfile> modes{{0, ModeProfile::zero(-half_width, half_width)}};
    return CylinderPotential(std::move(modes), true);
}

}  // namespace cylres
