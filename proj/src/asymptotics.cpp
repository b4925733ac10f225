#include "cylres/asymptotics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace cylres {

namespace {

constexpr Complex kI(0.0, 1.0);

// derivative samples: centred inside, second-order one-sided at the ends
CVectorXd grid_derivative(const CVectorXd& f, double h) {
    const auto n = f.size();
    CVectorXd d(n);
    if (n < 3) {
        d.setZero();
        return d;
    }
    for (Eigen::Index i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return d;
}

CVectorXd samples_on(const ModeProfile& p, const ModeProfile& grid) {
    if (p.kind() == ProfileKind::Sampled && p.x_min() == grid.x_min() && p.x_max() == grid.x_max() &&
        p.intervals() == grid.intervals())
        return p.values();
    CVectorXd out(grid.intervals() + 1);
    for (int i = 0; i <= grid.intervals(); ++i) out[i] = p(grid.grid_point(i));
    return out;
}

}  // namespace

std::string to_string(OrderTag t) {
    switch (t) {
        case OrderTag::Zeroth: return "0th";
        case OrderTag::Corrected: return "corrected";
        case OrderTag::ExampleThreshold: return "example-threshold";
        case OrderTag::ExampleLogL: return "example-logl";
    }
    return "unknown";
}

Prediction threshold_prediction(Complex lambda0, int l, int multiplicity) {
    if (multiplicity < 1) throw std::invalid_argument("threshold_prediction: multiplicity must be >= 1");
    Prediction p;
    p.l = l;
    p.z_pred = lambda0;
    p.order = OrderTag::Zeroth;
    p.error_exponent = 2.0 / multiplicity;
    p.threshold_regime = std::abs(lambda0) < 1e-14;
    return p;
}

Complex correction_integral(const ResonanceState& u, const CylinderPotential& pot) {
    Complex total = 0.0;
    for (const auto& [k, vk] : pot.modes()) {
        if (k == 0 || vk.is_zero()) continue;
        const ModeProfile vmk = pot.mode(-k);
        if (vmk.is_zero()) continue;
        const double k2 = static_cast<double>(k) * k;
        if (vk.is_step() || vmk.is_step()) {
            // no classical derivative; only the k^2 V_-k V_k term survives
            const double lo = std::min(vk.x_min(), vmk.x_min()), hi = std::max(vk.x_max(), vmk.x_max());
            total += u.integrate_against([&](double x) { return vmk(x) * vk(x) * u(x); }, lo, hi);
            continue;
        }
        const int n = vk.intervals();
        const double h = (vk.x_max() - vk.x_min()) / n;
        const CVectorXd a = vk.values();
        const CVectorXd b = samples_on(vmk, vk);
        const CVectorXd da = grid_derivative(a, h), db = grid_derivative(b, h);
        Complex acc = 0.0;
        for (int i = 0; i <= n; ++i) {
            const Complex ux = u(vk.grid_point(i));
            const double w = (i == 0 || i == n) ? 0.5 : 1.0;
            acc += w * (k2 * b[i] * a[i] + db[i] * da[i]) * ux * ux;
        }
        total += acc * h / k2;
    }
    return total;
}

Prediction leading_correction(const ResonanceState& u, const CylinderPotential& pot, int l) {
    if (l < 1) throw std::invalid_argument("leading_correction: l must be >= 1");
    Prediction p;
    p.l = l;
    p.order = OrderTag::Corrected;
    p.error_exponent = 3.0;
    const double l2 = static_cast<double>(l) * l;
    p.z_pred = u.lambda0() - kI / (4.0 * l2) * correction_integral(u, pot);
    p.threshold_regime = std::abs(u.lambda0()) < 1e-14;
    for (const auto& [k, m] : pot.modes())
        if (k != 0 && m.is_step() && !m.is_zero()) {
            p.warnings.emplace_back("step-profile modes: the smooth correction formula does not apply");
            break;
        }
    return p;
}

Complex lambert_w(int nu, Complex w) {
    const double e = std::exp(1.0);
    if (w == 0.0) {
        if (nu == 0) return 0.0;
        throw std::invalid_argument("lambert_w: branch " + std::to_string(nu) + " is singular at 0");
    }
    if (std::abs(w + 1.0 / e) < 1e-15 && (nu == 0 || nu == -1)) return -1.0;

    const Complex logw = std::log(w);
    const bool on_cut = w.imag() == 0.0 && w.real() < 0.0 && w.real() > -1.0 / e;
    auto on_branch = [&](Complex W) {
        // W_0 and W_-1 are both real on (-1/e, 0); W = -1 separates them
        if (on_cut && (nu == 0 || nu == -1) && std::abs(W.imag()) <= 1e-14 * std::abs(W))
            return nu == 0 ? W.real() >= -1.0 : W.real() <= -1.0;
        const double k = (W + std::log(W) - logw).imag() / (2.0 * kPi);
        return static_cast<int>(std::lround(k)) == nu;
    };
    auto halley = [&](Complex W) {
        for (int it = 0; it < 50; ++it) {
            const Complex ew = std::exp(W);
            const Complex f = W * ew - w;
            const Complex wp1 = W + 1.0;
            const Complex den = ew * wp1 - (W + 2.0) * f / (2.0 * wp1);
            if (den == 0.0) return W;
            const Complex step = f / den;
            W -= step;
            if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(W))) break;
        }
        return W;
    };
    // Newton on W + log W = log w + 2 pi i nu; keeps the branch for large |nu|
    auto log_newton = [&](Complex W) {
        const Complex rhs = logw + Complex(0.0, 2.0 * kPi * nu);
        for (int it = 0; it < 50; ++it) {
            const Complex step = (W + std::log(W) - rhs) / (1.0 + 1.0 / W);
            W -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(W))) break;
        }
        return W;
    };

    std::vector<Complex> guesses;
    const Complex l1 = logw + Complex(0.0, 2.0 * kPi * nu);
    if (nu != 0 || std::abs(w) > 2.0) guesses.push_back(l1 - std::log(l1));
    const Complex p = std::sqrt(2.0 * (e * w + 1.0));
    guesses.push_back(-1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p);
    guesses.push_back(-1.0 - p - p * p / 3.0 - 11.0 / 72.0 * p * p * p);
    if (nu == 0) guesses.push_back(std::log(1.0 + w));
    if (nu == 0 || nu == -1) guesses.push_back(Complex(-1.0, nu == 0 ? 1.0 : -1.0));
    guesses.push_back(l1 - std::log(l1));

    const double bound = 1e-13 * std::max(1.0, std::abs(w));
    for (Complex g : guesses) {
        if (!std::isfinite(std::abs(g)) || g == 0.0) continue;
        Complex W = g;
        if (nu != 0) W = log_newton(W);
        W = halley(W);
        if (!std::isfinite(std::abs(W)) || W == 0.0) continue;
        if (std::abs(W * std::exp(W) - w) < bound && on_branch(W)) return W;
    }
    throw NumericalError("lambert_w: no convergence on branch " + std::to_string(nu) + " for w = (" +
                         std::to_string(w.real()) + ", " + std::to_string(w.imag()) + ")");
}

Prediction example_near_threshold(int l) {
    if (l < 2) throw std::invalid_argument("example_near_threshold: l must be >= 2");
    const double s = std::sqrt(2.0 * l);
    Prediction p;
    p.l = l;
    p.order = OrderTag::ExampleThreshold;
    p.error_exponent = 2.0;
    p.z_pred = (Complex(-1.0, -1.0) + std::exp(2.0 * kI * s)) / (4.0 * l * s);
    return p;
}

Complex example_logl_argument(int l, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("example_logl: sign must be +1 or -1");
    const double s = std::sqrt(2.0 * l);
    return (-kI * std::exp(2.0 * kI * s) + static_cast<double>(sign) * Complex(1.0, -1.0)) / (4.0 * l * s);
}

Prediction example_logl(int l, int nu, int sign) {
    if (l < 8) throw std::invalid_argument("example_logl: l must be >= 8");
    Prediction p;
    p.l = l;
    p.order = OrderTag::ExampleLogL;
    p.error_exponent = 0.5;
    p.z_pred = 0.5 * kI * lambert_w(nu, example_logl_argument(l, sign));
    return p;
}

Complex g_function(int l, Complex z) {
    if (z == 0.0) throw std::invalid_argument("g_function: z must be nonzero");
    const double s = std::sqrt(2.0 * l);
    const Complex d = 8.0 * l * z * s;
    const Complex first = 1.0 - std::exp(2.0 * kI * (s + z)) / d;
    const Complex second = Complex(1.0, 1.0) * std::exp(2.0 * kI * z) / d;
    return first * first - second * second;
}

IdentityResidual sumis0_residual(const CylinderPotential& pot, const std::vector<double>& xs) {
    if (pot.max_mode() < 2) throw std::invalid_argument("sumis0_residual: needs at least two mode pairs");
    const int M = pot.max_mode();
    IdentityResidual r;
    std::vector<Complex> v(static_cast<std::size_t>(2 * M + 1));
    for (double x : xs) {
        for (int m = -M; m <= M; ++m) v[static_cast<std::size_t>(m + M)] = pot.mode(m)(x);
        auto at = [&](int m) { return v[static_cast<std::size_t>(m + M)]; };
        Complex sum = 0.0;
        double scale = 0.0;
        for (int m = -M; m <= M; ++m)
            for (int j = -M; j <= M; ++j) {
                const int c = -m - j;
                if (m == 0 || j == 0 || c == 0 || std::abs(c) > M) continue;
                const Complex t = at(m) * at(j) * at(c) / static_cast<double>(j * (j + m));
                sum += t;
                scale += std::abs(t);
            }
        r.absolute = std::max(r.absolute, std::abs(sum));
        r.relative = std::max(r.relative, scale > 0.0 ? std::abs(sum) / scale : 0.0);
    }
    return r;
}

BandClassification classify_hit(const ResonanceHit& hit, const std::vector<Resonance1D>& resonances_1d,
                                const BandParams& params) {
    const Complex z = hit.point.z;
    const double l = hit.point.l;
    BandClassification c;
    c.nearest_center = 0.0;
    c.distance = resonances_1d.empty() ? std::abs(z) : std::numeric_limits<double>::infinity();
    for (const auto& r : resonances_1d)
        if (std::abs(z - r.lambda) < c.distance) {
            c.distance = std::abs(z - r.lambda);
            c.nearest_center = r.lambda;
            c.center_multiplicity = r.multiplicity;
        }
    const double m = c.center_multiplicity;
    c.scaled["general"] = c.distance * std::pow(l, params.delta / m);
    c.scaled["smooth"] = c.distance * std::pow(l, 2.0 / m);
    c.scaled["corrected"] = c.distance * std::pow(l, 2.0);
    c.annulus_scaled = std::abs(z) * std::pow(l, params.delta);
    c.re_scaled = std::abs(z.real()) * l * l * l;
    return c;
}

}  // namespace cylres
