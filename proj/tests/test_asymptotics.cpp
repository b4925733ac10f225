#include <doctest.h>

#include <random>

#include "cylres/asymptotics.hpp"

using namespace cylres;

namespace {

constexpr Complex I(0.0, 1.0);

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

Complex simpson_c(const std::function<Complex(double)>& f, double a, double b, int n) {
    return Complex(simpson([&](double x) { return f(x).real(); }, a, b, n),
                   simpson([&](double x) { return f(x).imag(); }, a, b, n));
}

}  // namespace

TEST_CASE("Lambert W against reference values") {
    // 30-digit references
    struct Ref {
        int nu;
        Complex w, W;
    };
    const Ref refs[] = {
        {0, 1.0, 0.567143290409783873},
        {-1, -0.1, -3.57715206395729714},
        {1, Complex(1.0, 1.0), Complex(-1.3428489407008043, 5.24724937429140121)},
        {-2, Complex(-3.0, 0.5), Complex(-0.961651914810703138, -7.89796730444186514)},
        {2, Complex(0.0, 1e-3), Complex(-9.63563269459803414, 11.8851207020088818)},
        {0, Complex(-0.3, 0.2), Complex(-0.262533712437773232, 0.388394796424373811)},
    };
    for (const auto& r : refs) CHECK(std::abs(lambert_w(r.nu, r.w) - r.W) < 1e-13 * std::max(1.0, std::abs(r.W)));
    CHECK(lambert_w(0, 0.0) == Complex(0.0));
    CHECK_THROWS_AS(lambert_w(1, 0.0), std::invalid_argument);
}

TEST_CASE("Lambert W residual and branch across the plane") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> lr(-3.0, 3.0), ang(-kPi, kPi);
    for (int nu = -2; nu <= 2; ++nu)
        for (int i = 0; i < 60; ++i) {
            const Complex w = std::polar(std::pow(10.0, lr(rng)), ang(rng));
            const Complex W = lambert_w(nu, w);
            CHECK(std::abs(W * std::exp(W) - w) < 1e-13 * std::max(1.0, std::abs(w)));
            CHECK(std::lround((W + std::log(W) - std::log(w)).imag() / (2 * kPi)) == nu);
        }
}

TEST_CASE("example closed forms") {
    // (i/2) W_1 references
    const std::pair<int, Complex> logl[] = {{8, Complex(-1.6149107602302925, -2.9991669412692236)},
                                            {16, Complex(-0.92226139165006172, -3.8431486791615838)},
                                            {32, Complex(-1.7126253381686064, -4.7950011101666474)},
                                            {64, Complex(-1.4746679749769451, -5.60981215193899)}};
    for (const auto& [l, z] : logl) {
        const auto p = example_logl(l, 1, 1);
        CHECK(std::abs(p.z_pred - z) < 1e-12);
        CHECK(p.order == OrderTag::ExampleLogL);
        CHECK(std::abs(g_function(l, p.z_pred)) < 1e-12);
    }
    const std::pair<int, Complex> thr[] = {{8, Complex(-0.0089492190141297932, -8.3138698254829861e-5)},
                                           {64, Complex(-0.00062297165635759071, -0.00055042400566151254)}};
    for (const auto& [l, z] : thr) CHECK(std::abs(example_near_threshold(l).z_pred - z) < 1e-16);
    CHECK_THROWS_AS(example_logl(16, 1, 0), std::invalid_argument);
}

TEST_CASE("zeroth-order prediction") {
    const auto p = threshold_prediction(Complex(0.0, 1.5), 16, 2);
    CHECK(p.z_pred == Complex(0.0, 1.5));
    CHECK(p.error_exponent == doctest::Approx(1.0));
    CHECK(threshold_prediction(0.0, 16).threshold_regime);
    CHECK_THROWS_AS(threshold_prediction(0.0, 16, 0), std::invalid_argument);
}

TEST_CASE("correction integral for step modes") {
    CVectorXd half(1);
    half << 0.5;
    const auto bar = ModeProfile::step({-1.0, 1.0}, half);
    const auto v0 = square_well(-4.0).mode(0);
    std::map<int, ModeProfile> m{{0, v0}, {1, bar}, {-1, bar}};
    const CylinderPotential pot(m, true);
    const auto bs = find_resonances_1d(v0, Rect{Complex(-0.1, 1.3), Complex(0.1, 2.0)}, 1e-13);
    REQUIRE(bs.size() == 1);
    const ResonanceState u(v0, bs[0].lambda);
    const Complex ref = 2.0 * 0.25 * simpson_c([&](double x) { return u(x) * u(x); }, -1.0, 1.0, 4000);
    CHECK(std::abs(correction_integral(u, pot) - ref) < 1e-9 * std::abs(ref));
    const auto pred = leading_correction(u, pot, 10);
    CHECK(std::abs(pred.z_pred - (bs[0].lambda - I / 400.0 * ref)) < 1e-10);
    CHECK_FALSE(pred.warnings.empty());
}

TEST_CASE("correction integral for smooth modes") {
    const int n = 2048;
    const double s = 0.7;
    CVectorXd b(n + 1);
    for (int i = 0; i <= n; ++i) b[i] = s * smooth_bump(-1.0 + 2.0 * i / n);
    const auto v1 = ModeProfile::sampled(-1.0, 1.0, b);
    const auto v0 = square_well(-4.0).mode(0);
    std::map<int, ModeProfile> m{{0, v0}, {1, v1}, {-1, v1}};
    const CylinderPotential pot(m, true);
    const auto bs = find_resonances_1d(v0, Rect{Complex(-0.1, 1.3), Complex(0.1, 2.0)}, 1e-13);
    REQUIRE(bs.size() == 1);
    const ResonanceState u(v0, bs[0].lambda);
    auto db = [&](double x) {
        const double q = 1.0 - x * x;
        return q <= 0.0 ? 0.0 : s * smooth_bump(x) * (-2.0 * x / (q * q));
    };
    // sum over k = +-1 of (V_-k V_k + V_-k' V_k') u^2
    const Complex ref = 2.0 * simpson_c([&](double x) {
        const double v = s * smooth_bump(x), d = db(x);
        return (v * v + d * d) * u(x) * u(x);
    }, -1.0, 1.0, 20000);
    CHECK(std::abs(correction_integral(u, pot) - ref) < 1e-5 * std::abs(ref));
    CHECK(leading_correction(u, pot, 10).warnings.empty());
}

TEST_CASE("triple-product identity") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    std::map<int, ModeProfile> m;
    for (int k = -3; k <= 3; ++k) {
        CVectorXd v(2);
        v << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
        m.emplace(k, ModeProfile::step({-1.0, 0.0, 1.0}, v));
    }
    const auto r = sumis0_residual(CylinderPotential(m, false), {-0.5, 0.5});
    CHECK(r.relative < 1e-14);
    CHECK_THROWS_AS(sumis0_residual(example10(), {0.0}), std::invalid_argument);
}

TEST_CASE("hit classification") {
    ResonanceHit hit{SurfacePoint(16, Complex(0.01, 0.02))};
    const auto c = classify_hit(hit, {Resonance1D{Complex(0.0, 1.0), 1}, Resonance1D{0.0, 2}});
    CHECK(c.nearest_center == Complex(0.0));
    CHECK(c.center_multiplicity == 2);
    CHECK(c.annulus_scaled == doctest::Approx(std::abs(hit.point.z) * 256.0));
    CHECK(c.re_scaled == doctest::Approx(0.01 * 4096.0));
    CHECK(c.scaled.at("smooth") == doctest::Approx(std::abs(hit.point.z) * 16.0));
}
