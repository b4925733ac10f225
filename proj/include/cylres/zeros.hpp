#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <vector>

#include "cylres/types.hpp"

namespace cylres {

/// Must be safe to call concurrently from several threads.
using AnalyticFn = std::function<Complex(Complex)>;

struct Rect {
    Complex lo;  ///< (x_min, y_min)
    Complex hi;  ///< (x_max, y_max)

    Complex center() const { return 0.5 * (lo + hi); }
    double width() const { return hi.real() - lo.real(); }
    double height() const { return hi.imag() - lo.imag(); }
    double diameter() const { return std::abs(hi - lo); }
    bool contains(Complex z) const {
        return z.real() > lo.real() && z.real() < hi.real() && z.imag() > lo.imag() && z.imag() < hi.imag();
    }
    Rect shifted(Complex c) const { return {lo + c, hi + c}; }
    static Rect around(Complex c, double half_width, double half_height) {
        return {c - Complex(half_width, half_height), c + Complex(half_width, half_height)};
    }
};

/// Closed, positively oriented path built from straight segments and circular arcs.
class Contour {
public:
    struct Segment {
        bool arc = false;
        Complex a, b;               // line endpoints
        Complex center;             // arc data
        double radius = 0.0;
        double theta0 = 0.0, theta1 = 0.0;

        Complex at(double t) const;
        double length() const;
    };

    static Contour rectangle(const Rect& r);
    static Contour circle(Complex center, double radius, int arcs = 4);

    const std::vector<Segment>& segments() const { return segments_; }

private:
    std::vector<Segment> segments_;
};

/// Thrown when the phase of f cannot be followed along a contour because
/// f (nearly) vanishes there.
class ZeroOnContour : public NumericalError {
public:
    explicit ZeroOnContour(const std::string& what) : NumericalError(what) {}
};

struct ZeroOptions {
    double tol = 1e-10;
    double max_step = 0.0;      ///< initial sample spacing on edges; 0 picks from edge length
    int initial_samples = 8;    ///< minimum samples per edge
    int max_bisections = 24;    ///< adaptive refinement depth per sample interval
    int max_depth = 48;         ///< quadtree depth
    long max_evaluations = 2'000'000;
    int threads = 1;
};

int winding_count(const AnalyticFn& f, const Contour& contour, const ZeroOptions& opt = {});

struct ZeroHit {
    Complex location;
    int multiplicity;
    double residual;
};

struct ZeroReport {
    std::vector<ZeroHit> zeros;  ///< sorted by (Re, Im)
    int total_winding = 0;
    int depth = 0;
    long evaluations = 0;
    bool complete = true;
    Rect region{};               ///< rectangle actually used (after any perturbation)

    int total_multiplicity() const;
};

ZeroReport locate_zeros(const AnalyticFn& f, const Rect& rect, const ZeroOptions& opt = {});

/// Newton (fallback Muller) polish of a simple zero near `guess`; the iterate
/// must stay within the square of half-width `radius`.
std::optional<Complex> refine_zero(const AnalyticFn& f, Complex guess, double radius, double tol);

/// Derivative of an analytic function by the trapezoid rule on a small circle.
Complex contour_derivative(const AnalyticFn& f, Complex z, double radius, int points = 16);

/// Calls fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace cylres
