#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cylres/potential.hpp"
#include "cylres/scatter1d.hpp"

using namespace cylres;

namespace {

constexpr Complex I(0.0, 1.0);

// closed form for a square well of height h on [-1, 1]
Complex square_wronskian(Complex lam, double h) {
    const Complex mu = std::sqrt(lam * lam - h);
    const Complex s = std::abs(mu) < 1e-8 ? 2.0 : std::sin(2.0 * mu) / mu;
    return std::exp(2.0 * I * lam) * (2.0 * I * lam * std::cos(2.0 * mu) + (lam * lam + mu * mu) * s);
}

double bisect(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a);
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b), fm = f(m);
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("free Wronskian and kernel") {
    const auto free = ModeProfile::zero(-1.0, 1.0);
    for (Complex lam : {Complex(1.0, 0.0), Complex(-2.5, 0.7), Complex(0.3, -1.1)}) {
        CHECK(std::abs(jost_wronskian(lam, free) - 2.0 * I * lam) < 1e-13 * std::abs(lam));
        const Complex k = resolvent_kernel(free, lam, -0.4, 1.7);
        CHECK(std::abs(k - I / (2.0 * lam) * std::exp(I * lam * 2.1)) < 1e-13 * std::abs(k));
    }
}

TEST_CASE("square well against the closed form") {
    for (double h : {-4.0, 4.0, 1.5}) {
        const auto v = square_well(h).mode(0);
        for (Complex lam : {Complex(0.7, 0.2), Complex(-3.1, -0.6), Complex(2.0, 1.5), Complex(0.0, 0.4)}) {
            const Complex ref = square_wronskian(lam, h);
            CHECK(std::abs(jost_wronskian(lam, v) - ref) < 1e-12 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("transfer matrix is unimodular") {
    const auto v = to_steps(well_bump().mode(0), 64);
    const auto t = transfer_matrix(Complex(1.3, -0.4), v);
    CHECK(std::abs(t.determinant() - 1.0) < 1e-12);
}

TEST_CASE("bound states of the square well") {
    const double h = -4.0;
    // even: q tan q = kappa, odd: -q cot q = kappa, with q^2 + kappa^2 = 4
    const double k_even = bisect([](double k) { const double q = std::sqrt(4 - k * k); return q * std::tan(q) - k; }, 1.24, 1.999);
    const double k_odd = bisect([](double k) { const double q = std::sqrt(4 - k * k); return -q / std::tan(q) - k; }, 1e-6, 1.236);
    auto res = find_resonances_1d(square_well(h).mode(0), Rect{Complex(-0.3, 0.05), Complex(0.3, 3.0)}, 1e-12);
    REQUIRE(res.size() == 2);
    std::sort(res.begin(), res.end(), [](const auto& a, const auto& b) { return a.lambda.imag() < b.lambda.imag(); });
    CHECK(std::abs(res[0].lambda - I * k_odd) < 1e-10);
    CHECK(std::abs(res[1].lambda - I * k_even) < 1e-10);
    CHECK(res[0].multiplicity == 1);
}

TEST_CASE("resonance state normalisation") {
    const auto v = square_well(-4.0).mode(0);
    const double k_even = bisect([](double k) { const double q = std::sqrt(4 - k * k); return q * std::tan(q) - k; }, 1.24, 1.999);
    const ResonanceState u(v, I * k_even);
    CHECK(std::abs(u.integral_u_squared() - 1.0 / (2.0 * k_even)) < 1e-10);
    CHECK(std::abs(u(3.0) - u.c_plus() * std::exp(I * I * k_even * 3.0)) < 1e-12);
    CHECK(std::abs(u(-3.0) - u.c_minus() * std::exp(-I * I * k_even * -3.0)) < 1e-12);
    CHECK(std::abs(u(0.4) - u(-0.4)) < 1e-12);
}

TEST_CASE("resolvent kernel symmetry and Green's identity") {
    const auto v = to_steps(well_bump().mode(0), 32);
    const Complex lam(1.7, 0.3);
    CHECK(std::abs(resolvent_kernel(v, lam, -0.3, 0.8) - resolvent_kernel(v, lam, 0.8, -0.3)) < 1e-13);
    // kernel jump: d/dx R(x, x') across x = x' equals -1
    const double xp = 0.123, h = 1e-6;
    const Complex right = (resolvent_kernel(v, lam, xp + 2 * h, xp) - resolvent_kernel(v, lam, xp + h, xp)) / h;
    const Complex left = (resolvent_kernel(v, lam, xp - h, xp) - resolvent_kernel(v, lam, xp - 2 * h, xp)) / h;
    CHECK(std::abs(right - left + 1.0) < 1e-4);
}

TEST_CASE("free cutoff resolvent Hilbert-Schmidt norm") {
    const auto free = ModeProfile::zero(-1.0, 1.0);
    for (double lam : {5.0, 40.0}) CHECK(lam * cutoff_resolvent_hs_norm(free, lam, -1.0, 1.0) == doctest::Approx(1.0));
}
