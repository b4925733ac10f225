#include "cylres/channels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace cylres {

void ChannelWindow::validate() const {
    if (K < 1) throw std::invalid_argument("ChannelWindow: K must be >= 1");
    if (l - K < 0) throw std::invalid_argument("ChannelWindow: l - K must be >= 0");
    if (slabs < 1) throw std::invalid_argument("ChannelWindow: slabs must be >= 1");
}

std::string to_string(Method m) {
    switch (m) {
        case Method::Direct: return "direct";
        case Method::Predicted0: return "predicted-0th";
        case Method::PredictedCorrected: return "predicted-corrected";
        case Method::ExampleClosedForm: return "example-closed-form";
    }
    return "unknown";
}

Precision precision_from_env() {
    const char* v = std::getenv("CYLRES_PRECISION");
    return (v != nullptr && std::string(v) == "extended") ? Precision::Extended : Precision::Double;
}

CylinderPotential common_step_grid(const CylinderPotential& pot, int slabs) {
    std::vector<double> bps;
    std::map<int, ModeProfile> stepped;
    for (const auto& [m, p] : pot.modes()) {
        ModeProfile s = p.is_step() ? p : to_steps(p, slabs);
        bps.insert(bps.end(), s.breakpoints().begin(), s.breakpoints().end());
        stepped.emplace(m, std::move(s));
    }
    if (bps.empty()) return pot;
    std::sort(bps.begin(), bps.end());
    const double scale = std::max(1.0, std::max(std::abs(bps.front()), std::abs(bps.back())));
    std::vector<double> grid{bps.front()};
    for (double x : bps)
        if (x - grid.back() > 1e-12 * scale) grid.push_back(x);
    if (grid.size() < 2) throw std::invalid_argument("common_step_grid: degenerate support");
    std::map<int, ModeProfile> out;
    for (const auto& [m, s] : stepped) {
        CVectorXd vals(static_cast<Eigen::Index>(grid.size() - 1));
        for (std::size_t i = 0; i + 1 < grid.size(); ++i)
            vals[static_cast<Eigen::Index>(i)] = s(0.5 * (grid[i] + grid[i + 1]));
        out.emplace(m, ModeProfile::step(grid, std::move(vals)));
    }
    return CylinderPotential(std::move(out), pot.is_real(), 1e-9);
}

CMatrixXd coupling_matrix(const CylinderPotential& pot, const ChannelWindow& window, int slab, Tower tower) {
    window.validate();
    const std::vector<double>* grid = nullptr;
    for (const auto& [m, p] : pot.modes()) {
        if (!p.is_step()) throw std::invalid_argument("coupling_matrix: all modes must be step profiles");
        if (grid == nullptr) {
            grid = &p.breakpoints();
        } else if (p.breakpoints() != *grid) {
            throw std::invalid_argument("coupling_matrix: modes do not share a slab grid");
        }
    }
    const int slabs = grid == nullptr ? 0 : static_cast<int>(grid->size()) - 1;
    if (slab < 0 || slab >= slabs) throw std::out_of_range("coupling_matrix: slab index out of range");
    const int n = window.size();
    CMatrixXd c = CMatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int m = tower == Tower::Plus ? i - j : j - i;
            auto it = pot.modes().find(m);
            if (it != pot.modes().end()) c(i, j) = it->second.values()[slab];
        }
    return c;
}

ChannelSystem::ChannelSystem(const CylinderPotential& pot, const ChannelWindow& window, Tower tower)
    : window_(window), tower_(tower), precision_(precision_from_env()) {
    window_.validate();
    const CylinderPotential grid = common_step_grid(pot, window_.slabs);
    if (grid.modes().empty()) {
        // no modes at all: one empty slab keeps the basis bookkeeping uniform
        a_ = pot.support_min();
        b_ = pot.support_max();
        widths_.push_back(b_ - a_);
        couplings_.push_back(CMatrixXd::Zero(window_.size(), window_.size()));
        return;
    }
    const auto& bps = grid.modes().begin()->second.breakpoints();
    a_ = bps.front();
    b_ = bps.back();
    for (std::size_t s = 0; s + 1 < bps.size(); ++s) {
        CMatrixXd c = coupling_matrix(grid, window_, static_cast<int>(s), tower_);
        const double w = bps[s + 1] - bps[s];
        if (!couplings_.empty() && couplings_.back() == c) {
            widths_.back() += w;
        } else {
            widths_.push_back(w);
            couplings_.push_back(std::move(c));
        }
    }
}

namespace {

template <typename Real>
using Mat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
Real inf_norm(const Mat<Real>& m) {
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

// c = cosh(sqrt(A) h), s = sinh(sqrt(A) h) / sqrt(A), both even in sqrt(A):
// Taylor series on a scaled step, then the double-angle formulas.
template <typename Real>
void even_propagator(const Mat<Real>& a, Real h, Mat<Real>& c, Mat<Real>& s) {
    const auto n = a.rows();
    int squarings = 0;
    Real hs = h;
    while (inf_norm<Real>(a) * hs * hs > Real(0.5)) {
        hs /= 2;
        ++squarings;
    }
    const Mat<Real> x = a * (hs * hs);
    const Real eps = std::numeric_limits<Real>::epsilon();
    c = Mat<Real>::Identity(n, n);
    s = Mat<Real>::Identity(n, n);
    Mat<Real> power = Mat<Real>::Identity(n, n);
    Real fc = 1, fs = 1;  // 1/(2m)!, 1/(2m+1)!
    for (int m = 1; m < 30; ++m) {
        power = power * x;
        fc /= static_cast<Real>((2 * m - 1) * (2 * m));
        fs /= static_cast<Real>((2 * m) * (2 * m + 1));
        c += fc * power;
        s += fs * power;
        if (inf_norm<Real>(power) * fc < eps) break;
    }
    s *= hs;
    for (int i = 0; i < squarings; ++i) {
        const Mat<Real> as = a * s;
        Mat<Real> c2 = c * c + as * s;
        s = Real(2) * c * s;
        c = std::move(c2);
    }
}

// Running product kept as mantissa * 2^exponent so long propagations cannot overflow.
template <typename Real>
struct ScaledProduct {
    std::complex<Real> mantissa{1};
    long exponent = 0;

    void multiply(std::complex<Real> v) {
        mantissa *= v;
        int e = 0;
        std::frexp(std::abs(mantissa), &e);
        mantissa = std::complex<Real>(std::ldexp(mantissa.real(), -e), std::ldexp(mantissa.imag(), -e));
        exponent += e;
    }
};

template <typename Real>
void orthonormalize(Mat<Real>& y, ScaledProduct<Real>& det) {
    Eigen::HouseholderQR<Mat<Real>> qr(y);
    const auto n = y.cols();
    for (Eigen::Index i = 0; i < n; ++i) det.multiply(qr.matrixQR()(i, i));
    y = qr.householderQ() * Mat<Real>::Identity(y.rows(), n);
}

}  // namespace

template <typename Real>
std::complex<Real> ChannelSystem::determinant_t(std::complex<Real> z) const {
    using C = std::complex<Real>;
    const int n = window_.size();
    const C I(0, 1);
    std::vector<C> tau(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) tau[static_cast<std::size_t>(i)] = tau_chart<Real>(window_.l, z, window_.channel(i));

    // outgoing data: exp(-i tau x) left of the support, exp(i tau x) right of it
    Mat<Real> y = Mat<Real>::Zero(2 * n, n);
    Mat<Real> right = Mat<Real>::Zero(2 * n, n);
    const Real a = static_cast<Real>(a_), b = static_cast<Real>(b_);
    for (int i = 0; i < n; ++i) {
        const C t = tau[static_cast<std::size_t>(i)];
        const C el = std::exp(-I * t * a), er = std::exp(I * t * b);
        y(i, i) = el;
        y(n + i, i) = -I * t * el;
        right(i, i) = er;
        right(n + i, i) = I * t * er;
    }

    ScaledProduct<Real> det;
    Mat<Real> c, s;
    Real since_qr = 0;
    for (std::size_t k = 0; k < widths_.size(); ++k) {
        Mat<Real> gen = couplings_[k].template cast<C>();
        for (int i = 0; i < n; ++i) gen(i, i) -= tau[static_cast<std::size_t>(i)] * tau[static_cast<std::size_t>(i)];
        const Real rate = std::sqrt(inf_norm<Real>(gen));
        const Real w = static_cast<Real>(widths_[k]);
        const int pieces = std::max(1, static_cast<int>(std::ceil(w * rate / Real(2.5))));
        const Real h = w / pieces;
        even_propagator<Real>(gen, h, c, s);
        const Mat<Real> gs = gen * s;
        for (int p = 0; p < pieces; ++p) {
            const Mat<Real> u = y.topRows(n);
            const Mat<Real> du = y.bottomRows(n);
            y.topRows(n) = c * u + s * du;
            y.bottomRows(n) = gs * u + c * du;
            since_qr += h * rate;
            if (since_qr >= Real(2)) {
                orthonormalize(y, det);
                since_qr = 0;
            }
        }
    }

    Mat<Real> m(2 * n, 2 * n);
    m << y, right;
    det.multiply(Eigen::PartialPivLU<Mat<Real>>(m).determinant());
    if (det.mantissa == C(0)) return C(0);
    const long limit = std::numeric_limits<double>::max_exponent - 8;
    if (det.exponent > limit || det.exponent < -limit)
        throw NumericalError("matching_determinant: value outside double range (overflow guard); use a smaller K "
                             "or CYLRES_PRECISION=extended with a narrower window");
    const int e = static_cast<int>(det.exponent);
    return C(std::ldexp(det.mantissa.real(), e), std::ldexp(det.mantissa.imag(), e));
}

template std::complex<double> ChannelSystem::determinant_t<double>(std::complex<double>) const;
template std::complex<long double> ChannelSystem::determinant_t<long double>(std::complex<long double>) const;

Complex ChannelSystem::determinant(Complex z, Precision precision) const {
    if (precision == Precision::Extended) {
        const auto v = determinant_t<long double>(std::complex<long double>(z.real(), z.imag()));
        return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
    }
    return determinant_t<double>(z);
}

AnalyticFn ChannelSystem::as_function() const {
    return [this](Complex z) { return determinant(z); };
}

Complex matching_determinant(const CylinderPotential& pot, const SurfacePoint& p, const ChannelWindow& window,
                             Tower tower) {
    ChannelWindow w = window;
    w.l = p.l;
    return ChannelSystem(pot, w, tower).determinant(p.z);
}

namespace {

void require_in_chart(const Rect& r, int l) {
    const double rad = chart_radius(l);
    const std::array<Complex, 4> corners{r.lo, r.hi, Complex(r.lo.real(), r.hi.imag()), Complex(r.hi.real(), r.lo.imag())};
    for (Complex c : corners)
        if (!(std::abs(c) < rad)) throw std::invalid_argument("find_cylinder_resonances: search region leaves the chart");
}

ZeroOptions zero_options(const ResonanceSearch& opt) {
    ZeroOptions zo;
    zo.tol = opt.tol;
    zo.threads = opt.threads;
    zo.max_step = opt.max_step;
    return zo;
}

}  // namespace

std::vector<ResonanceHit> find_cylinder_resonances(const CylinderPotential& pot, const Rect& search,
                                                   const ChannelWindow& window, const ResonanceSearch& opt) {
    window.validate();
    require_in_chart(search, window.l);
    std::vector<Tower> towers{Tower::Plus};
    if (!pot.is_real()) towers.push_back(Tower::Minus);
    const int factor = pot.is_real() ? 2 : 1;
    std::vector<ResonanceHit> hits;
    for (Tower t : towers) {
        const ChannelSystem sys(pot, window, t);
        const auto report = locate_zeros(sys.as_function(), search, zero_options(opt));
        if (!report.complete) throw NumericalError("find_cylinder_resonances: zero search incomplete");
        for (const auto& zh : report.zeros) {
            ResonanceHit h{SurfacePoint(window.l, zh.location)};
            h.multiplicity = zh.multiplicity;
            h.tower_factor = factor;
            h.tower = t;
            h.residual = zh.residual;
            h.K = window.K;
            h.slabs = window.slabs;
            h.threshold_regime = std::abs(zh.location) < opt.exclude_radius;
            hits.push_back(h);
        }
    }
    return hits;
}

int disk_winding(const ChannelSystem& sys, Complex center, double radius, const ResonanceSearch& opt) {
    ZeroOptions zo = zero_options(opt);
    for (int attempt = 0;; ++attempt) {
        try {
            const double r = radius * (1.0 + 1e-3 * attempt);
            return winding_count(sys.as_function(), Contour::circle(center, r, 8), zo);
        } catch (const ZeroOnContour&) {
            if (attempt == 5) throw;
        }
    }
}

Complex richardson(Complex coarse, Complex fine, int order) {
    const double f = std::ldexp(1.0, order);
    return (f * fine - coarse) / (f - 1.0);
}

TruncationStudy truncation_study(const CylinderPotential& pot, int l, const Rect& search, Complex target,
                                 const std::vector<int>& k_list, const std::vector<int>& slab_list,
                                 const ResonanceSearch& opt) {
    if (k_list.size() < 2 || slab_list.size() < 2)
        throw std::invalid_argument("truncation_study: needs at least two K values and two slab counts");
    TruncationStudy st;
    auto locate = [&](int K, int slabs) {
        ChannelWindow w{l, K, slabs};
        TruncationRow row{K, slabs, false, Complex(std::nan(""), std::nan(""))};
        const auto hits = find_cylinder_resonances(pot, search, w, opt);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& h : hits)
            if (h.tower == Tower::Plus && std::abs(h.point.z - target) < best) {
                best = std::abs(h.point.z - target);
                row.z = h.point.z;
                row.found = true;
            }
        return row;
    };
    for (int K : k_list)
        for (int s : slab_list) st.rows.push_back(locate(K, s));
    auto at = [&](int K, int s) {
        for (const auto& r : st.rows)
            if (r.K == K && r.slabs == s) return r;
        return TruncationRow{K, s, false, {}};
    };
    bool all_found = std::all_of(st.rows.begin(), st.rows.end(), [](const TruncationRow& r) { return r.found; });
    for (std::size_t i = 0; i + 1 < k_list.size(); ++i)
        st.k_differences.push_back(std::abs(at(k_list[i + 1], slab_list.back()).z - at(k_list[i], slab_list.back()).z));
    for (std::size_t i = 0; i + 1 < slab_list.size(); ++i)
        st.slab_differences.push_back(std::abs(at(k_list.back(), slab_list[i + 1]).z - at(k_list.back(), slab_list[i]).z));
    auto decreasing = [](const std::vector<double>& d) {
        for (std::size_t i = 0; i + 1 < d.size(); ++i)
            if (!(d[i + 1] < d[i])) return false;
        return true;
    };
    // a decoupled window gives bitwise-identical K rows, which counts as converged
    auto settled = [&](const std::vector<double>& d) {
        return decreasing(d) || std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; });
    };
    st.monotone = all_found && settled(st.k_differences) && settled(st.slab_differences);
    if (st.monotone) {
        const double scale = std::max(1.0, std::abs(st.rows.back().z));
        const double last = std::max(st.k_differences.back(), st.slab_differences.back());
        st.converged_digits = last == 0.0 ? 15 : std::clamp(static_cast<int>(std::floor(-std::log10(last / scale))), 0, 15);
    }
    return st;
}

}  // namespace cylres
