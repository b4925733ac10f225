#include <doctest.h>

#include <cmath>

#include "cylres/potential.hpp"

using namespace cylres;

TEST_CASE("step profile evaluation and support") {
    CVectorXd v(3);
    v << 1.0, Complex(2.0, 1.0), -3.0;
    const auto p = ModeProfile::step({-1.0, 0.0, 0.5, 1.0}, v);
    CHECK(p.is_step());
    CHECK(p.intervals() == 3);
    CHECK(p(-0.5) == Complex(1.0));
    CHECK(p(0.25) == Complex(2.0, 1.0));
    CHECK(p(0.75) == Complex(-3.0));
    CHECK(p(1.5) == Complex(0.0));
    CHECK(p(-2.0) == Complex(0.0));
    CHECK(p.sup_norm() == doctest::Approx(3.0));
    CHECK(l2_norm_squared(p) == doctest::Approx(1.0 * 1.0 + 0.5 * 5.0 + 0.5 * 9.0));
}

TEST_CASE("malformed profiles are rejected") {
    CVectorXd v(2);
    v << 1.0, 2.0;
    CHECK_THROWS_AS(ModeProfile::step({0.0, 0.0, 1.0}, v), std::invalid_argument);
    CHECK_THROWS_AS(ModeProfile::step({0.0, 1.0}, v), std::invalid_argument);
    CVectorXd s(5);
    s << 1.0, 1.0, 1.0, 1.0, 1.0;
    CHECK_THROWS_AS(ModeProfile::sampled(-1.0, 1.0, s), std::invalid_argument);
}

TEST_CASE("sampled profile interpolates a cubic exactly") {
    const int n = 40;
    CVectorXd s(n + 1);
    auto f = [](double x) { return (1.0 - x * x) * (0.5 + x); };
    for (int i = 0; i <= n; ++i) s[i] = f(-1.0 + 2.0 * i / n);
    const auto p = ModeProfile::sampled(-1.0, 1.0, s);
    for (double x : {-0.93, -0.31, 0.0, 0.4444, 0.97}) CHECK(std::abs(p(x) - f(x)) < 1e-13);
}

TEST_CASE("to_steps samples midpoints") {
    const int n = 64;
    CVectorXd s(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double x = -1.0 + 2.0 * i / n;
        s[i] = 1.0 - x * x;
    }
    const auto st = to_steps(ModeProfile::sampled(-1.0, 1.0, s), 4);
    REQUIRE(st.intervals() == 4);
    CHECK(st.values()[0].real() == doctest::Approx(0.4375));
    CHECK(st.values()[1].real() == doctest::Approx(0.9375));
    CHECK(st.values()[2].real() == doctest::Approx(0.9375));
    CHECK(st.values()[3].real() == doctest::Approx(0.4375));
}

TEST_CASE("angular Fourier coefficients by DFT") {
    AngularSamples a;
    a.kind = ProfileKind::Step;
    a.x_min = -1.0;
    a.x_max = 1.0;
    a.breakpoints = {-1.0, 0.0, 1.0};
    const int nt = 16;
    a.values.resize(2, nt);
    for (int j = 0; j < nt; ++j) {
        const double th = 2.0 * kPi * j / nt;
        a.values(0, j) = 3.0 + 4.0 * std::cos(2.0 * th);
        a.values(1, j) = 2.0 * std::sin(th);
    }
    const auto v0 = fourier_mode(a, 0), v2 = fourier_mode(a, 2), vm2 = fourier_mode(a, -2), v1 = fourier_mode(a, 1);
    CHECK(std::abs(v0.values()[0] - 3.0) < 1e-14);
    CHECK(std::abs(v2.values()[0] - 2.0) < 1e-14);
    CHECK(std::abs(vm2.values()[0] - 2.0) < 1e-14);
    CHECK(std::abs(v1.values()[1] - Complex(0.0, -1.0)) < 1e-14);
    CHECK_THROWS_AS(fourier_mode(a, 4), std::invalid_argument);
}

TEST_CASE("builtin potentials") {
    const auto ex = example10();
    CHECK(ex.is_real());
    CHECK(ex.max_mode() == 1);
    CHECK(ex.mode(0).is_zero());
    CHECK(ex.mode(1)(0.3) == Complex(1.0));
    CHECK(ex.mode(-1)(-0.99) == Complex(1.0));
    CHECK(ex.mode(1)(1.01) == Complex(0.0));

    CHECK(smooth_bump(0.0) == doctest::Approx(1.0));
    CHECK(smooth_bump(0.5) == doctest::Approx(std::exp(-1.0 / 3.0)));
    CHECK(smooth_bump(1.0) == 0.0);

    const auto wb = well_bump();
    CHECK(wb.is_real());
    CHECK(wb.mode(0)(0.25).real() == doctest::Approx(-6.0 * smooth_bump(0.25)));
    CHECK(wb.mode(1)(0.25).real() == doctest::Approx(smooth_bump(0.25) * smooth_bump(0.25)));
    CHECK(wb.mode(0).intervals() == 512);

    const auto sq = square_well(-4.0, 1.0);
    CHECK(sq.mode(0)(0.0) == Complex(-4.0));
    CHECK(sq.oscillatory_part().mode(0).is_zero());
    CHECK(zero_potential().mode(0).is_zero());
}

TEST_CASE("realness flag is checked against V_-m = conj V_m") {
    CVectorXd a(1), b(1);
    a << Complex(1.0, 1.0);
    b << Complex(1.0, 1.0);
    std::map<int, ModeProfile> modes{{1, ModeProfile::step({-1.0, 1.0}, a)}, {-1, ModeProfile::step({-1.0, 1.0}, b)}};
    CHECK_THROWS_AS(CylinderPotential(modes, true), std::invalid_argument);
    CHECK_NOTHROW(CylinderPotential(modes, false));
}

TEST_CASE("mode decay exponent of a power law") {
    std::map<int, ModeProfile> modes;
    for (int m = 1; m <= 6; ++m) {
        CVectorXd v(1);
        v << 5.0 * std::pow(m, -3.0);
        modes.emplace(m, ModeProfile::step({-1.0, 1.0}, v));
        modes.emplace(-m, ModeProfile::step({-1.0, 1.0}, v));
    }
    const auto fit = mode_decay_exponent(CylinderPotential(modes, true));
    CHECK(fit.exponent == doctest::Approx(3.0));
    CHECK(fit.constant == doctest::Approx(5.0));
}
