#include "cylres/zeros.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <limits>
#include <mutex>
#include <random>
#include <thread>
#include <tuple>

namespace cylres {

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    const int workers = std::clamp(threads, 1, std::max(1, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

Complex Contour::Segment::at(double t) const {
    if (!arc) return a + t * (b - a);
    return center + std::polar(radius, theta0 + t * (theta1 - theta0));
}

double Contour::Segment::length() const {
    return arc ? radius * std::abs(theta1 - theta0) : std::abs(b - a);
}

Contour Contour::rectangle(const Rect& r) {
    if (!(r.width() > 0.0 && r.height() > 0.0)) throw std::invalid_argument("Contour: degenerate rectangle");
    const std::array<Complex, 4> c{r.lo, Complex(r.hi.real(), r.lo.imag()), r.hi, Complex(r.lo.real(), r.hi.imag())};
    Contour out;
    for (int i = 0; i < 4; ++i) {
        Segment s;
        s.a = c[static_cast<std::size_t>(i)];
        s.b = c[static_cast<std::size_t>((i + 1) % 4)];
        out.segments_.push_back(s);
    }
    return out;
}

Contour Contour::circle(Complex center, double radius, int arcs) {
    if (!(radius > 0.0) || arcs < 1) throw std::invalid_argument("Contour: bad circle");
    Contour out;
    for (int i = 0; i < arcs; ++i) {
        Segment s;
        s.arc = true;
        s.center = center;
        s.radius = radius;
        s.theta0 = 2.0 * kPi * i / arcs;
        s.theta1 = 2.0 * kPi * (i + 1) / arcs;
        out.segments_.push_back(s);
    }
    return out;
}

int ZeroReport::total_multiplicity() const {
    int s = 0;
    for (const auto& z : zeros) s += z.multiplicity;
    return s;
}

namespace {

constexpr double kMaxPhaseStep = kPi / 3.0;

class PhaseTracker {
public:
    PhaseTracker(const AnalyticFn& f, const ZeroOptions& opt, std::atomic<long>& evals)
        : f_(f), opt_(opt), evals_(evals) {}

    Complex eval(Complex z) const {
        ++evals_;
        const Complex v = f_(z);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NumericalError("zeros: non-finite function value at z = (" + std::to_string(z.real()) + ", " +
                                 std::to_string(z.imag()) + ")");
        return v;
    }

    /// Continuous change of arg f along one segment.
    double segment_phase(const Contour::Segment& seg) const {
        int n = opt_.initial_samples;
        if (opt_.max_step > 0.0) n = std::max(n, static_cast<int>(std::ceil(seg.length() / opt_.max_step)));
        std::vector<Complex> vals(static_cast<std::size_t>(n) + 1);
        parallel_for(n + 1, opt_.threads, [&](int i) {
            vals[static_cast<std::size_t>(i)] = eval(seg.at(static_cast<double>(i) / n));
        });
        double total = 0.0;
        for (int i = 0; i < n; ++i)
            total += refine(seg, static_cast<double>(i) / n, vals[static_cast<std::size_t>(i)],
                            static_cast<double>(i + 1) / n, vals[static_cast<std::size_t>(i) + 1], 0);
        return total;
    }

private:
    double refine(const Contour::Segment& seg, double t0, Complex f0, double t1, Complex f1, int depth) const {
        if (f0 == 0.0 || f1 == 0.0) throw ZeroOnContour("zeros: function vanishes on the contour");
        const double d = std::arg(f1 / f0);
        if (std::abs(d) < kMaxPhaseStep) return d;
        if (depth >= opt_.max_bisections || evals_.load() > opt_.max_evaluations)
            throw ZeroOnContour("zeros: phase step stays above pi/3 after refinement; zero on or near contour");
        const double tm = 0.5 * (t0 + t1);
        const Complex fm = eval(seg.at(tm));
        return refine(seg, t0, f0, tm, fm, depth + 1) + refine(seg, tm, fm, t1, f1, depth + 1);
    }

    const AnalyticFn& f_;
    const ZeroOptions& opt_;
    std::atomic<long>& evals_;
};

int to_winding(double phase) {
    const double w = phase / (2.0 * kPi);
    const double r = std::round(w);
    if (std::abs(w - r) > 0.05) throw NumericalError("zeros: accumulated phase is not a multiple of 2 pi");
    return static_cast<int>(r);
}

using EdgeKey = std::tuple<double, double, double, double>;

class Engine {
public:
    Engine(const AnalyticFn& f, const ZeroOptions& opt) : f_(f), opt_(opt), tracker_(f, opt, evals_) {}

    long evaluations() const { return evals_.load(); }
    bool over_budget() const { return evals_.load() > opt_.max_evaluations; }

    /// Windings of several rectangles, sharing edge evaluations through the cache.
    std::vector<int> windings(const std::vector<Rect>& rects) {
        std::vector<std::pair<Complex, Complex>> missing;
        for (const auto& r : rects)
            for (const auto& [a, b] : edges(r))
                if (!cached(a, b) && std::find_if(missing.begin(), missing.end(), [&](const auto& e) {
                                         return (e.first == a && e.second == b) || (e.first == b && e.second == a);
                                     }) == missing.end())
                    missing.emplace_back(a, b);
        std::vector<double> phases(missing.size());
        for (std::size_t i = 0; i < missing.size(); ++i) {
            Contour::Segment s;
            s.a = missing[i].first;
            s.b = missing[i].second;
            phases[i] = tracker_.segment_phase(s);
        }
        for (std::size_t i = 0; i < missing.size(); ++i)
            cache_[key(missing[i].first, missing[i].second)] = phases[i];
        std::vector<int> out;
        out.reserve(rects.size());
        for (const auto& r : rects) {
            double total = 0.0;
            for (const auto& [a, b] : edges(r)) total += lookup(a, b);
            out.push_back(to_winding(total));
        }
        return out;
    }

    Complex eval(Complex z) const { return tracker_.eval(z); }

private:
    static std::array<std::pair<Complex, Complex>, 4> edges(const Rect& r) {
        const Complex c1(r.hi.real(), r.lo.imag());
        const Complex c3(r.lo.real(), r.hi.imag());
        return {{{r.lo, c1}, {c1, r.hi}, {r.hi, c3}, {c3, r.lo}}};
    }
    static EdgeKey key(Complex a, Complex b) { return {a.real(), a.imag(), b.real(), b.imag()}; }
    bool cached(Complex a, Complex b) const { return cache_.count(key(a, b)) || cache_.count(key(b, a)); }
    double lookup(Complex a, Complex b) const {
        if (auto it = cache_.find(key(a, b)); it != cache_.end()) return it->second;
        return -cache_.at(key(b, a));
    }

    const AnalyticFn& f_;
    const ZeroOptions& opt_;
    std::atomic<long> evals_{0};
    PhaseTracker tracker_;
    std::map<EdgeKey, double> cache_;
};

struct Cell {
    Rect rect;
    int winding;
    int depth;
};

/// Newton iteration with a centred-difference derivative; `order` > 1 gives
/// the modified step for a cluster of that multiplicity.
bool newton(const Engine& eng, Complex& z, const Rect& cell, double tol, int order) {
    const double h0 = std::max(1e-4 * cell.diameter(), 1e-9 * std::max(1.0, std::abs(z)));
    Complex fz = eng.eval(z);
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 60; ++it) {
        if (fz == 0.0) return true;
        const double h = h0;
        const Complex fp = (eng.eval(z + h) - eng.eval(z - h)) / (2.0 * h);
        if (fp == 0.0 || !std::isfinite(std::abs(fp))) return false;
        Complex dz = static_cast<double>(order) * fz / fp;
        if (!std::isfinite(std::abs(dz))) return false;
        const double cap = 0.5 * cell.diameter();
        if (std::abs(dz) > cap) dz *= cap / std::abs(dz);
        z -= dz;
        const Rect grown = Rect::around(cell.center(), 0.5 * cell.width() + tol, 0.5 * cell.height() + tol);
        if (!grown.contains(z)) return false;
        fz = eng.eval(z);
        const double step = std::abs(dz);
        if (step < 1e-3 * tol) return true;
        // stagnation at the rounding floor
        if (step < tol && step > 0.5 * prev) return true;
        prev = step;
    }
    return false;
}

bool muller(const Engine& eng, Complex& z, const Rect& cell, double tol) {
    Complex x0 = cell.center() + 0.25 * cell.width();
    Complex x1 = cell.center() - Complex(0.0, 0.25 * cell.height());
    Complex x2 = cell.center();
    Complex f0 = eng.eval(x0), f1 = eng.eval(x1), f2 = eng.eval(x2);
    for (int it = 0; it < 80; ++it) {
        const Complex h1 = x1 - x0, h2 = x2 - x1;
        const Complex d1 = (f1 - f0) / h1, d2 = (f2 - f1) / h2;
        const Complex a = (d2 - d1) / (h2 + h1);
        const Complex b = a * h2 + d2;
        const Complex disc = std::sqrt(b * b - 4.0 * a * f2);
        const Complex den = std::abs(b + disc) > std::abs(b - disc) ? b + disc : b - disc;
        if (den == 0.0) return false;
        const Complex dx = -2.0 * f2 / den;
        if (!std::isfinite(std::abs(dx))) return false;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        x2 += dx;
        f2 = eng.eval(x2);
        if (std::abs(dx) < 1e-3 * tol || f2 == 0.0) {
            z = x2;
            const Rect grown = Rect::around(cell.center(), 0.5 * cell.width() + tol, 0.5 * cell.height() + tol);
            return grown.contains(z);
        }
    }
    return false;
}

std::array<Rect, 4> split(const Rect& r, Complex at) {
    const Complex c1(r.hi.real(), r.lo.imag());
    const Complex c3(r.lo.real(), r.hi.imag());
    return {Rect{r.lo, at},
            Rect{Complex(at.real(), r.lo.imag()), Complex(c1.real(), at.imag())},
            Rect{at, r.hi},
            Rect{Complex(r.lo.real(), at.imag()), Complex(at.real(), c3.imag())}};
}

}  // namespace

int winding_count(const AnalyticFn& f, const Contour& contour, const ZeroOptions& opt) {
    std::atomic<long> evals{0};
    PhaseTracker tracker(f, opt, evals);
    double total = 0.0;
    for (const auto& s : contour.segments()) total += tracker.segment_phase(s);
    return to_winding(total);
}

namespace {

// Raised when child windings contradict the parent: a phase wrap slipped between samples.
class InconsistentWinding : public NumericalError {
public:
    using NumericalError::NumericalError;
};

ZeroReport locate_once(const AnalyticFn& f, const Rect& rect, const ZeroOptions& opt) {
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    Engine eng(f, opt);
    ZeroReport report;

    // outer contour, perturbed on failure
    Rect outer = rect;
    int outer_winding = 0;
    for (int attempt = 0;; ++attempt) {
        try {
            outer_winding = eng.windings({outer}).front();
            break;
        } catch (const ZeroOnContour&) {
            if (attempt == 5) throw NumericalError("locate_zeros: zero on contour after 5 perturbations");
            const double s = 1e-3 * rect.diameter();
            outer = Rect{rect.lo + Complex(s * unit(rng), s * unit(rng)), rect.hi + Complex(s * unit(rng), s * unit(rng))};
        }
    }
    report.region = outer;
    report.total_winding = outer_winding;
    if (outer_winding < 0) throw NumericalError("locate_zeros: negative winding (function has poles?)");

    std::vector<Cell> stack;
    if (outer_winding > 0) stack.push_back({outer, outer_winding, 0});
    while (!stack.empty()) {
        Cell cell = stack.back();
        stack.pop_back();
        report.depth = std::max(report.depth, cell.depth);
        if (eng.over_budget()) {
            report.complete = false;
            break;
        }
        if (cell.winding == 1) {
            Complex z = cell.rect.center();
            bool ok = newton(eng, z, cell.rect, opt.tol, 1);
            if (!ok) {
                z = cell.rect.center();
                ok = muller(eng, z, cell.rect, opt.tol);
            }
            if (ok && outer.contains(z)) {
                report.zeros.push_back({z, 1, std::abs(eng.eval(z))});
                continue;
            }
        }
        const bool tiny = cell.rect.diameter() < 10.0 * opt.tol || cell.depth >= opt.max_depth;
        if (tiny) {
            Complex z = cell.rect.center();
            Complex trial = z;
            if (newton(eng, trial, cell.rect, opt.tol, cell.winding) && outer.contains(trial)) z = trial;
            report.zeros.push_back({z, cell.winding, std::abs(eng.eval(z))});
            continue;
        }
        // split, nudging the split point when a child edge runs through a zero
        std::vector<Cell> children;
        for (int attempt = 0;; ++attempt) {
            const double s = 1e-3 * attempt;
            const Complex at = cell.rect.center() +
                               Complex(s * cell.rect.width() * unit(rng), s * cell.rect.height() * unit(rng));
            const auto parts = split(cell.rect, at);
            try {
                const auto w = eng.windings({parts[0], parts[1], parts[2], parts[3]});
                int sum = 0;
                children.clear();
                for (std::size_t i = 0; i < 4; ++i) {
                    sum += w[i];
                    if (w[i] < 0) throw InconsistentWinding("locate_zeros: negative winding in subcell");
                    if (w[i] > 0) children.push_back({parts[i], w[i], cell.depth + 1});
                }
                if (sum != cell.winding) throw InconsistentWinding("locate_zeros: subcell windings do not add up");
                break;
            } catch (const ZeroOnContour&) {
                if (attempt == 5) {
                    report.complete = false;
                    children.clear();
                    break;
                }
            }
        }
        // reverse so the lowest-index child is processed first
        for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(*it);
    }

    std::sort(report.zeros.begin(), report.zeros.end(), [](const ZeroHit& a, const ZeroHit& b) {
        if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
        return a.location.imag() < b.location.imag();
    });
    report.evaluations = eng.evaluations();
    if (report.total_multiplicity() != report.total_winding) report.complete = false;
    return report;
}

}  // namespace

ZeroReport locate_zeros(const AnalyticFn& f, const Rect& rect, const ZeroOptions& opt) {
    if (!(opt.tol > 0.0)) throw std::invalid_argument("locate_zeros: tol must be positive");
    ZeroOptions o = opt;
    for (int pass = 0;; ++pass) {
        try {
            return locate_once(f, rect, o);
        } catch (const InconsistentWinding&) {
            if (pass == 2) throw;
            o.initial_samples *= 4;
            if (o.max_step > 0.0) o.max_step /= 4.0;
        }
    }
}

std::optional<Complex> refine_zero(const AnalyticFn& f, Complex guess, double radius, double tol) {
    ZeroOptions opt;
    opt.tol = tol;
    const Engine eng(f, opt);
    Complex z = guess;
    const Rect cell = Rect::around(guess, radius, radius);
    if (newton(eng, z, cell, tol, 1)) return z;
    z = guess;
    if (muller(eng, z, cell, tol)) return z;
    return std::nullopt;
}

Complex contour_derivative(const AnalyticFn& f, Complex z, double radius, int points) {
    Complex acc = 0.0;
    for (int k = 0; k < points; ++k) {
        const Complex w = std::polar(1.0, 2.0 * kPi * k / points);
        acc += f(z + radius * w) / w;
    }
    return acc / (static_cast<double>(points) * radius);
}

}  // namespace cylres
