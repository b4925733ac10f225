// Acceptance suite: runs the default experiments and re-derives every
// criterion from the emitted rows and tables with the tolerances below.
// Usage: acceptance [N ...]   (no arguments: all ten criteria)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "cylres/asymptotics.hpp"
#include "cylres/experiments.hpp"

using namespace cylres;

namespace {

constexpr double kExcludeRadius = 1e-6;
constexpr double kThresholdBoundFactor = 3.0;
constexpr double kPoleDiskRadius = 0.2;
constexpr double kCorrectionRatio = 2.5;
constexpr double kCorrectionImprovement = 5.0;
constexpr double kLogLRegion = 0.9;
constexpr double kLogLExponent = 0.4;
constexpr double kIdentityTol = 1e-12;
constexpr double kLambertTol = 1e-13;
constexpr double kZeroEngineTol = 1e-9;
constexpr double kDecayBand = 0.2;
constexpr double kMirrorTol = 1e-8;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Run {
    ExperimentResult result;
    double seconds = 0.0;
};

std::map<std::string, Run> cache;

const Run& run(const std::string& name) {
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
    const auto t0 = std::chrono::steady_clock::now();
    Run r{run_experiment(default_config(name)), 0.0};
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return cache.emplace(name, std::move(r)).first->second;
}

std::vector<ResultRow> rows(const Run& r, int l, const std::string& method) {
    std::vector<ResultRow> out;
    for (const auto& row : r.result.rows)
        if (row.l == l && row.method == method) out.push_back(row);
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

Outcome guard(const Run& r, double budget) {
    if (r.result.partial) return {false, "run aborted: " + r.result.error};
    if (r.seconds > budget) return {false, "runtime " + num(r.seconds) + " s over " + num(budget) + " s"};
    return {true, ""};
}

Outcome example_threshold() {
    const auto& r = run("example-threshold");
    if (auto g = guard(r, 120); !g.pass) return g;
    std::vector<double> scaled;
    for (int l : {8, 16, 32, 64}) {
        const Complex pred = example_near_threshold(l).z_pred;
        for (const std::string tower : {"direct", "direct-minus"}) {
            int count = 0;
            double err = std::numeric_limits<double>::infinity();
            for (const auto& row : rows(r, l, tower))
                if (std::abs(row.z) > kExcludeRadius && std::abs(row.z) < 1.0) {
                    count += row.multiplicity;
                    err = std::min(err, std::abs(row.z - pred));
                }
            if (count != 1) return {false, tower + " count " + std::to_string(count) + " at l=" + std::to_string(l)};
            if (tower == "direct") scaled.push_back(err * l * l);
        }
    }
    std::string detail = "|z - z_pred| l^2 =";
    bool ok = true;
    for (double s : scaled) {
        detail += " " + num(s);
        ok = ok && s <= kThresholdBoundFactor * scaled.front();
    }
    return {ok, detail + ", one zero per tower"};
}

Outcome pole_count() {
    const auto& r = run("near-threshold");
    if (auto g = guard(r, 180); !g.pass) return g;
    for (int l : {16, 32, 64})
        for (const char* tower : {"direct", "direct-minus"}) {
            const auto hits = rows(r, l, tower);
            std::map<int, int> by_k;
            for (const auto& h : hits) by_k[h.K] = h.multiplicity;
            for (int K : {3, 4, 5})
                if (!by_k.count(K) || by_k[K] != 1)
                    return {false, "winding " + std::to_string(by_k.count(K) ? by_k[K] : -1) + " at l=" + std::to_string(l) +
                                       ", K=" + std::to_string(K) + ", " + tower};
        }
    return {true, "winding 1 per tower over the disk of radius " + num(kPoleDiskRadius) + " for K = 3, 4, 5"};
}

Outcome leading_correction() {
    const auto& r = run("leading-correction");
    if (auto g = guard(r, 300); !g.pass) return g;
    std::vector<double> corr, zeroth;
    for (int l : {16, 32, 64}) {
        const auto d = rows(r, l, "direct"), c = rows(r, l, "predicted-corrected"), z0 = rows(r, l, "predicted-0th");
        if (d.size() != 1 || c.size() != 1 || z0.size() != 1) return {false, "missing rows at l=" + std::to_string(l)};
        const double l3 = std::pow(l, 3.0);
        corr.push_back(std::abs(d[0].z - c[0].z) * l3);
        zeroth.push_back(std::abs(d[0].z - z0[0].z) * l3);
    }
    bool ok = true;
    std::string detail = "corrected l^3 error";
    for (std::size_t i = 0; i < corr.size(); ++i) {
        detail += " " + num(corr[i]);
        if (i + 1 < corr.size()) ok = ok && std::max(corr[i], corr[i + 1]) < kCorrectionRatio * std::min(corr[i], corr[i + 1]);
        ok = ok && kCorrectionImprovement * corr[i] <= zeroth[i];
    }
    detail += "; zeroth-order";
    for (double z : zeroth) detail += " " + num(z);
    return {ok, detail};
}

Outcome re_decay() {
    const auto& r = run("polesequence");
    if (auto g = guard(r, 300); !g.pass) return g;
    double prev = std::numeric_limits<double>::infinity();
    bool ok = true;
    std::string detail = "|Re z| l^3 =";
    for (int l : {16, 32, 64}) {
        const auto d = rows(r, l, "direct");
        if (d.size() != 1) return {false, "missing row at l=" + std::to_string(l)};
        const double v = std::abs(d[0].z.real()) * std::pow(l, 3.0);
        ok = ok && v < prev;
        prev = v;
        detail += " " + num(v);
    }
    return {ok, detail};
}

Outcome logl_pole() {
    const auto& r = run("example-logl");
    if (auto g = guard(r, 300); !g.pass) return g;
    bool ok = true;
    std::string detail;
    for (int l : {32, 64}) {
        const Complex pred = example_logl(l, 1, 1).z_pred;
        const double region = kLogLRegion * std::log(static_cast<double>(l));
        double best = std::numeric_limits<double>::infinity();
        for (const auto& row : rows(r, l, "direct"))
            if (std::abs(row.z) < region) best = std::min(best, std::abs(row.z - pred));
        const double reach = std::pow(l, -kLogLExponent);
        ok = ok && best < reach;
        detail += "l=" + std::to_string(l) + ": nearest " + num(best) + " vs " + num(reach) + " (|z_pred| " +
                  num(std::abs(pred)) + ", region " + num(region) + ") ";
    }
    return {ok, detail};
}

Outcome annulus_free() {
    const auto& r = run("resonance-free-scan");
    if (auto g = guard(r, 120); !g.pass) return g;
    const auto& t = r.result.tables.at("annuli");
    bool ok = t.size() == 2;
    std::string detail = "annulus windings";
    for (const auto& e : t) {
        const int wp = e.at("annulus_winding_plus"), wm = e.at("annulus_winding_minus");
        ok = ok && wp == 0 && wm == 0;
        detail += " l=" + std::to_string(e.at("l").get<int>()) + ": " + std::to_string(wp) + "/" + std::to_string(wm);
    }
    return {ok, detail};
}

Outcome identities() {
    const auto& r = run("identity-suite");
    if (auto g = guard(r, 60); !g.pass) return g;
    const auto& t = r.result.tables;
    const double s0 = t.at("sumis0").at("max_relative");
    const double lw = t.at("lambert_w").at("max_residual");
    const int lw_branch = t.at("lambert_w").at("wrong_branch"), lw_points = t.at("lambert_w").at("points");
    const double sa = t.at("surface_algebra").at("max_relative");
    const int sa_points = t.at("surface_algebra").at("points");
    const double fw = t.at("free_resolvent").at("wronskian_rel"), fk = t.at("free_resolvent").at("kernel_rel");
    const bool ok = s0 < kIdentityTol && lw < kLambertTol && lw_branch == 0 && lw_points == 500 && sa < kIdentityTol &&
                    sa_points == 1000 && fw < kIdentityTol && fk < kIdentityTol;
    return {ok, "triple product " + num(s0) + ", Lambert " + num(lw) + " over " + std::to_string(lw_points) +
                    " points, surface " + num(sa) + ", free W " + num(fw) + ", kernel " + num(fk)};
}

Outcome zero_engine() {
    const auto& r = run("identity-suite");
    if (auto g = guard(r, 60); !g.pass) return g;
    const auto& t = r.result.tables;
    const double planted = t.at("planted").at("max_error");
    bool ok = planted < kZeroEngineTol && t.at("planted").at("polynomials") == 20 && t.at("well_scans").size() == 2;
    std::string detail = "planted roots " + num(planted);
    for (const auto& w : t.at("well_scans")) {
        const int a = w.at("engine_count"), b = w.at("scan_count");
        const double d = w.at("max_distance");
        ok = ok && a == b && d < kZeroEngineTol;
        detail += ", " + w.at("well").get<std::string>() + " " + std::to_string(a) + "/" + std::to_string(b) + " zeros to " + num(d);
    }
    return {ok, detail};
}

Outcome resolvent_decay() {
    const auto& r = run("decoupled-check");
    if (auto g = guard(r, 60); !g.pass) return g;
    const auto& sweep = r.result.tables.at("resolvent_sweep");
    double sup = 0.0, at100 = std::numeric_limits<double>::quiet_NaN();
    double lo = 1e300, hi = 0.0;
    for (const auto& e : sweep) {
        const double lam = e.at("lambda"), v = e.at("scaled_norm");
        if (!std::isfinite(v)) return {false, "non-finite value at lambda " + num(lam)};
        sup = std::max(sup, v);
        lo = std::min(lo, lam);
        hi = std::max(hi, lam);
        if (lam == 100.0) at100 = v;
    }
    const bool ok = lo == 5.0 && hi == 100.0 && std::isfinite(at100) && std::abs(sup - at100) <= kDecayBand * at100;
    return {ok, "sup " + num(sup) + ", value at 100 " + num(at100)};
}

Outcome mirror() {
    const auto& r = run("example-threshold");
    if (auto g = guard(r, 60); !g.pass) return g;
    const auto plus = rows(r, 16, "direct"), minus = rows(r, 16, "direct-minus");
    if (plus.empty() || plus.size() != minus.size()) return {false, "tower sizes differ"};
    auto gap = [](const std::vector<ResultRow>& a, const std::vector<ResultRow>& b) {
        double worst = 0.0;
        for (const auto& x : a) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& y : b) best = std::min(best, std::abs(-std::conj(x.z) - y.z));
            worst = std::max(worst, best);
        }
        return worst;
    };
    const double g = std::max(gap(plus, minus), gap(minus, plus));
    return {g < kMirrorTol, "max |(-conj z_+) - z_-| = " + num(g) + " at l=16"};
}

struct Entry {
    int id;
    const char* name;
    std::function<Outcome()> check;
};

const std::vector<Entry> kCriteria{{1, "example near-threshold", example_threshold},
                                   {2, "pole count", pole_count},
                                   {3, "leading correction", leading_correction},
                                   {4, "re-decay", re_decay},
                                   {5, "example log-l pole", logl_pole},
                                   {6, "resonance-free annulus", annulus_free},
                                   {7, "identity suite", identities},
                                   {8, "zero-engine oracle", zero_engine},
                                   {9, "1-D resolvent decay", resolvent_decay},
                                   {10, "conjugate symmetry", mirror}};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
    int failures = 0;
    for (const auto& c : kCriteria) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
