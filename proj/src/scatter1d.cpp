#include "cylres/scatter1d.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace cylres {

namespace {

constexpr Complex kI(0.0, 1.0);

void require_step(const ModeProfile& pot, const char* who) {
    if (!pot.is_step()) throw std::invalid_argument(std::string(who) + ": needs a step profile");
}

// cos(mu w) and sin(mu w)/mu as even functions of mu
void even_trig(Complex mu2, double w, Complex& c, Complex& s) {
    const Complex mu = std::sqrt(mu2);
    const Complex t = mu * w;
    if (std::abs(t) < 1e-3) {
        const Complex t2 = t * t;
        c = 1.0 - t2 / 2.0 + t2 * t2 / 24.0;
        s = w * (1.0 - t2 / 6.0 + t2 * t2 / 120.0);
    } else {
        c = std::cos(t);
        s = std::sin(t) / mu;
    }
}

constexpr std::array<double, 8> kGaussNodes{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                            0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                              0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};

}  // namespace

Eigen::Matrix2cd slab_propagator(Complex mu2, double w) {
    Complex c, s;
    even_trig(mu2, w, c, s);
    Eigen::Matrix2cd m;
    m << c, s, -mu2 * s, c;
    return m;
}

Eigen::Matrix2cd transfer_matrix(Complex lambda, const ModeProfile& pot) {
    require_step(pot, "transfer_matrix");
    Eigen::Matrix2cd t = Eigen::Matrix2cd::Identity();
    const auto& bps = pot.breakpoints();
    for (int i = 0; i < pot.intervals(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        t = slab_propagator(lambda * lambda - pot.values()[i], bps[k + 1] - bps[k]) * t;
    }
    return t;
}

JostData jost_data(Complex lambda, const ModeProfile& pot) {
    const Eigen::Matrix2cd t = transfer_matrix(lambda, pot);
    const double a = pot.x_min(), b = pot.x_max();
    Eigen::Vector2cd left(std::exp(-kI * lambda * a), -kI * lambda * std::exp(-kI * lambda * a));
    Eigen::Vector2cd right(std::exp(kI * lambda * b), kI * lambda * std::exp(kI * lambda * b));
    const Eigen::Vector2cd fm = t * left;
    // det t = 1, so the inverse is the adjugate
    Eigen::Matrix2cd tinv;
    tinv << t(1, 1), -t(0, 1), -t(1, 0), t(0, 0);
    const Eigen::Vector2cd fp = tinv * right;
    JostData d;
    d.lambda = lambda;
    d.fminus_value = fm[0];
    d.fminus_deriv = fm[1];
    d.fplus_value = fp[0];
    d.fplus_deriv = fp[1];
    d.wronskian = fm[0] * right[1] - fm[1] * right[0];
    return d;
}

Complex jost_wronskian(Complex lambda, const ModeProfile& pot) { return jost_data(lambda, pot).wronskian; }

JostSolutions::JostSolutions(Complex lambda, const ModeProfile& pot) : lambda_(lambda) {
    require_step(pot, "JostSolutions");
    bps_ = pot.breakpoints();
    const int n = pot.intervals();
    for (int i = 0; i < n; ++i) mu2_.push_back(lambda * lambda - pot.values()[i]);
    const double a = bps_.front(), b = bps_.back();
    minus_nodes_.resize(static_cast<std::size_t>(n) + 1);
    plus_nodes_.resize(static_cast<std::size_t>(n) + 1);
    minus_nodes_[0] = Eigen::Vector2cd(std::exp(-kI * lambda * a), -kI * lambda * std::exp(-kI * lambda * a));
    for (int i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        minus_nodes_[k + 1] = slab_propagator(mu2_[k], bps_[k + 1] - bps_[k]) * minus_nodes_[k];
    }
    plus_nodes_[static_cast<std::size_t>(n)] =
        Eigen::Vector2cd(std::exp(kI * lambda * b), kI * lambda * std::exp(kI * lambda * b));
    for (int i = n - 1; i >= 0; --i) {
        const auto k = static_cast<std::size_t>(i);
        plus_nodes_[k] = slab_propagator(mu2_[k], -(bps_[k + 1] - bps_[k])) * plus_nodes_[k + 1];
    }
    const auto& fm = minus_nodes_.back();
    const auto& fp = plus_nodes_.back();
    wronskian_ = fm[0] * fp[1] - fm[1] * fp[0];
}

Complex JostSolutions::propagate(const std::vector<Eigen::Vector2cd>& nodes, double x) const {
    auto it = std::upper_bound(bps_.begin(), bps_.end(), x);
    auto k = static_cast<std::size_t>(std::clamp<long>(std::distance(bps_.begin(), it) - 1, 0,
                                                       static_cast<long>(mu2_.size()) - 1));
    return (slab_propagator(mu2_[k], x - bps_[k]) * nodes[k])[0];
}

Complex JostSolutions::fminus(double x) const {
    if (x <= bps_.front()) return std::exp(-kI * lambda_ * x);
    if (x >= bps_.back()) {
        const auto& s = minus_nodes_.back();
        const Complex c = std::cos(lambda_ * (x - bps_.back()));
        const Complex sn = std::abs(lambda_) < 1e-14 ? Complex(x - bps_.back()) : std::sin(lambda_ * (x - bps_.back())) / lambda_;
        return c * s[0] + sn * s[1];
    }
    return propagate(minus_nodes_, x);
}

Complex JostSolutions::fplus(double x) const {
    if (x >= bps_.back()) return std::exp(kI * lambda_ * x);
    if (x <= bps_.front()) {
        const auto& s = plus_nodes_.front();
        const double d = x - bps_.front();
        const Complex c = std::cos(lambda_ * d);
        const Complex sn = std::abs(lambda_) < 1e-14 ? Complex(d) : std::sin(lambda_ * d) / lambda_;
        return c * s[0] + sn * s[1];
    }
    return propagate(plus_nodes_, x);
}

std::vector<Resonance1D> find_resonances_1d(const ModeProfile& pot, const Rect& rect, double tol, ZeroOptions opt) {
    require_step(pot, "find_resonances_1d");
    opt.tol = tol;
    const auto report = locate_zeros([&pot](Complex l) { return jost_wronskian(l, pot); }, rect, opt);
    if (!report.complete) throw NumericalError("find_resonances_1d: zero search incomplete");
    std::vector<Resonance1D> out;
    for (const auto& z : report.zeros) out.push_back({z.location, z.multiplicity});
    return out;
}

ResonanceState::ResonanceState(const ModeProfile& pot, Complex lambda0)
    : lambda0_(lambda0), jost_(lambda0, pot), a_(pot.x_min()), b_(pot.x_max()) {
    const double scale = std::max(1.0, std::abs(lambda0));
    auto w = [&pot](Complex l) { return jost_wronskian(l, pot); };
    wprime_ = contour_derivative(w, lambda0, 1e-2 * scale);
    if (std::abs(jost_.wronskian()) > 1e-8 * std::max(1.0, std::abs(wprime_)) * scale)
        throw std::invalid_argument("resonance_state: lambda0 is not a zero of the Wronskian");
    if (std::abs(wprime_) < 1e-10 * scale) throw std::invalid_argument("resonance_state: zero is not simple");
    // f_+ = c f_- ; compare states at the right edge using the larger component
    const Eigen::Vector2cd fm = jost_.fminus_state_right();
    const Eigen::Vector2cd fp = jost_.fplus_state_right();
    c_ = std::abs(fm[0]) >= std::abs(fm[1]) ? fp[0] / fm[0] : fp[1] / fm[1];
    // residue of -f_- f_+ / W equals i u u
    scale_ = std::sqrt(kI / (c_ * wprime_));
    grid_ = pot.breakpoints();
    values_.resize(static_cast<Eigen::Index>(grid_.size()));
    for (std::size_t i = 0; i < grid_.size(); ++i) values_[static_cast<Eigen::Index>(i)] = (*this)(grid_[i]);
}

Complex ResonanceState::integrate_against(const std::function<Complex(double)>& g, double lo, double hi,
                                          int panels) const {
    // knots at the slab breakpoints so every panel sees a smooth integrand
    std::vector<double> knots{lo};
    for (double x : grid_)
        if (x > lo && x < hi) knots.push_back(x);
    knots.push_back(hi);
    Complex acc = 0.0;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const double len = knots[k + 1] - knots[k];
        const int m = std::max(1, static_cast<int>(std::ceil(panels * len / (hi - lo))));
        const double h = len / m;
        for (int p = 0; p < m; ++p) {
            const double mid = knots[k] + (p + 0.5) * h;
            for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
                const double x = mid + 0.5 * h * kGaussNodes[q];
                acc += 0.5 * h * kGaussWeights[q] * (*this)(x) * g(x);
            }
        }
    }
    return acc;
}

Complex ResonanceState::integral_u_squared() const {
    if (!(lambda0_.imag() > 0.0)) throw std::invalid_argument("integral_u_squared: needs Im lambda0 > 0");
    const int panels = 64;
    Complex acc = integrate_against([this](double x) { return (*this)(x); }, a_, b_, panels);
    const Complex cp = c_plus(), cm = c_minus();
    acc += cp * cp * std::exp(2.0 * kI * lambda0_ * b_) * kI / (2.0 * lambda0_);
    acc += cm * cm * std::exp(-2.0 * kI * lambda0_ * a_) * kI / (2.0 * lambda0_);
    return acc;
}

Complex resolvent_kernel(const ModeProfile& pot, Complex lambda, double x, double xp) {
    const JostSolutions js(lambda, pot);
    const double scale = std::max(1.0, std::abs(lambda));
    if (std::abs(js.wronskian()) < 1e-12 * scale) throw NumericalError("resolvent_kernel: lambda is at a pole");
    const double lo = std::min(x, xp), hi = std::max(x, xp);
    return -js.fminus(lo) * js.fplus(hi) / js.wronskian();
}

double cutoff_resolvent_hs_norm(const ModeProfile& pot, Complex lambda, double lo, double hi, int n) {
    if (!(hi > lo)) throw std::invalid_argument("cutoff_resolvent_hs_norm: empty interval");
    const JostSolutions js(lambda, pot);
    const double scale = std::max(1.0, std::abs(lambda));
    if (std::abs(js.wronskian()) < 1e-12 * scale) throw NumericalError("cutoff_resolvent_hs_norm: lambda is at a pole");
    if (n <= 0) n = std::max(200, static_cast<int>(std::ceil(16.0 * std::abs(lambda) * (hi - lo))));
    std::vector<Complex> fm(static_cast<std::size_t>(n) + 1), fp(static_cast<std::size_t>(n) + 1);
    const double h = (hi - lo) / n;
    for (int i = 0; i <= n; ++i) {
        const double x = lo + i * h;
        fm[static_cast<std::size_t>(i)] = js.fminus(x);
        fp[static_cast<std::size_t>(i)] = js.fplus(x);
    }
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double wi = (i == 0 || i == n) ? 0.5 : 1.0;
        for (int j = 0; j <= n; ++j) {
            const double wj = (j == 0 || j == n) ? 0.5 : 1.0;
            const auto si = static_cast<std::size_t>(std::min(i, j));
            const auto sj = static_cast<std::size_t>(std::max(i, j));
            acc += wi * wj * std::norm(fm[si] * fp[sj]);
        }
    }
    return std::sqrt(acc * h * h) / std::abs(js.wronskian());
}

}  // namespace cylres
