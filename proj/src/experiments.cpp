#include "cylres/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "cylres/asymptotics.hpp"
#include "cylres/channels.hpp"
#include "cylres/scatter1d.hpp"
#include "cylres/surface.hpp"
#include "cylres/zeros.hpp"

namespace cylres {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Json cjson(Complex z) { return Json::array({z.real(), z.imag()}); }

double param(const ExperimentConfig& cfg, const char* key, double fallback) {
    return cfg.params.contains(key) ? cfg.params.at(key).get<double>() : fallback;
}

std::vector<int> int_list(const ExperimentConfig& cfg, const char* key, std::vector<int> fallback) {
    return cfg.params.contains(key) ? cfg.params.at(key).get<std::vector<int>>() : fallback;
}

ResonanceSearch search_options(const ExperimentConfig& cfg) {
    ResonanceSearch s;
    s.tol = cfg.tol;
    s.threads = 1;
    return s;
}

std::string tower_method(Tower t) { return t == Tower::Plus ? "direct" : "direct-minus"; }

/// Zeros of D inside the open disk |z - c| < r, located on the enclosing square.
std::vector<ZeroHit> zeros_in_disk(const ChannelSystem& sys, Complex c, double r, double tol) {
    const Rect box = Rect::around(c, r, r);
    const double rad = chart_radius(sys.window().l);
    for (Complex corner : {box.lo, box.hi, Complex(box.lo.real(), box.hi.imag()), Complex(box.hi.real(), box.lo.imag())})
        if (!(std::abs(corner) < rad)) throw std::invalid_argument("search square leaves the chart");
    ZeroOptions zo;
    zo.tol = tol;
    const auto rep = locate_zeros(sys.as_function(), box, zo);
    if (!rep.complete) throw NumericalError("zero search incomplete");
    std::vector<ZeroHit> out;
    for (const auto& h : rep.zeros)
        if (std::abs(h.location - c) < r) out.push_back(h);
    return out;
}

/// The bound state i*beta of a one-dimensional well, required to be simple.
Complex bound_state(const ModeProfile& v0, double tol) {
    const auto res = find_resonances_1d(v0, Rect{Complex(-0.25, 0.05), Complex(0.25, 8.0)}, tol);
    const Resonance1D* best = nullptr;
    for (const auto& r : res)
        if (std::abs(r.lambda.real()) < 1e-8 && (best == nullptr || r.lambda.imag() > best->lambda.imag())) best = &r;
    if (best == nullptr) throw NumericalError("no bound state on the positive imaginary axis");
    if (best->multiplicity != 1) throw NumericalError("bound state is not simple");
    return Complex(0.0, best->lambda.imag());
}

CylinderPotential angle_independent(const CylinderPotential& pot) {
    std::map<int, ModeProfile> modes{{0, average_v0(pot)}};
    return CylinderPotential(std::move(modes), pot.is_real());
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------- experiments

void free_baseline(const ExperimentConfig& cfg, ExperimentResult& out) {
    const auto pot = load_potential(cfg.potential);
    const double inner = param(cfg, "inner", 0.05), outer = param(cfg, "outer", 1.0);
    const auto n = static_cast<int>(cfg.l_values.size());
    std::vector<int> annulus(static_cast<std::size_t>(n)), inside(static_cast<std::size_t>(n));
    parallel_for(n, cfg.threads, [&](int i) {
        const int l = cfg.l_values[static_cast<std::size_t>(i)];
        const ChannelSystem sys(pot, ChannelWindow{l, cfg.K, cfg.slabs});
        const int w_in = disk_winding(sys, 0.0, inner, search_options(cfg));
        annulus[static_cast<std::size_t>(i)] = disk_winding(sys, 0.0, outer, search_options(cfg)) - w_in;
        inside[static_cast<std::size_t>(i)] = w_in;
    });
    bool pass = true;
    Json table = Json::array();
    for (int i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        pass = pass && annulus[k] == 0;
        table.push_back({{"l", cfg.l_values[k]}, {"annulus_winding", annulus[k]}, {"threshold_winding", inside[k]}});
    }
    out.tables["windings"] = table;
    out.criteria.push_back({"free_annulus_empty", pass, "winding of D over " + fmt(inner) + " < |z| < " + fmt(outer)});
}

void decoupled_check(const ExperimentConfig& cfg, ExperimentResult& out) {
    const auto pot = load_potential(cfg.potential);
    const auto flat = angle_independent(pot);
    const ModeProfile v0 = to_steps(average_v0(pot), cfg.slabs);
    const double ftol = param(cfg, "factorization_tol", 1e-9);
    const int points = static_cast<int>(param(cfg, "points", 20));
    const double radius = param(cfg, "disk_radius", 0.2);

    // D against the product of one-dimensional Wronskians
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double worst = 0.0;
    for (int l : cfg.l_values) {
        const ChannelWindow w{l, cfg.K, cfg.slabs};
        const ChannelSystem sys(flat, w);
        for (int p = 0; p < points; ++p) {
            Complex z;
            do z = Complex(unit(rng), unit(rng));
            while (std::abs(z) >= 1.0);
            Complex prod = 1.0;
            for (int i = 0; i < w.size(); ++i) prod *= jost_wronskian(tau_chart<double>(l, z, w.channel(i)), v0);
            worst = std::max(worst, std::abs(sys.determinant(z) - prod) / std::abs(prod));
        }
    }
    out.tables["factorization_max_rel_error"] = worst;
    out.criteria.push_back({"decoupled_factorization", worst < ftol, "max relative error " + fmt(worst)});

    // the one-dimensional bound state reappears in every chart at z = i beta
    const Complex ib = bound_state(v0, 1e-12);
    bool pole_ok = true;
    Json poles = Json::array();
    for (int l : cfg.l_values) {
        const auto t0 = Clock::now();
        const ChannelSystem sys(flat, ChannelWindow{l, cfg.K, cfg.slabs});
        const int wind = disk_winding(sys, ib, radius, search_options(cfg));
        const auto z = refine_zero(sys.as_function(), ib, 0.5 * radius, 1e-13);
        const double err = z ? std::abs(*z - ib) : kNaN;
        pole_ok = pole_ok && wind == 1 && z && err < 1e-8;
        const double dt = seconds_since(t0);
        out.rows.push_back({"decoupled-check", l, "direct", z.value_or(Complex(kNaN, kNaN)), wind, err, err, cfg.K,
                            cfg.slabs, dt});
        out.rows.push_back({"decoupled-check", l, to_string(Method::Predicted0), ib, 1, kNaN, kNaN, cfg.K, cfg.slabs, 0.0});
        poles.push_back({{"l", l}, {"winding", wind}, {"distance", err}});
    }
    out.tables["bound_state"] = cjson(ib);
    out.tables["decoupled_poles"] = poles;
    out.criteria.push_back({"decoupled_pole_count", pole_ok, "winding 1 around i*beta and zero at i*beta"});

    // lambda * ||chi R chi||_HS over [lambda_min, lambda_max]
    const double lmin = param(cfg, "lambda_min", 5.0), lmax = param(cfg, "lambda_max", 100.0);
    const double lstep = param(cfg, "lambda_step", 2.5), band = param(cfg, "decay_band", 0.2);
    const int samples = static_cast<int>(std::floor((lmax - lmin) / lstep + 1e-9)) + 1;
    std::vector<double> lam(static_cast<std::size_t>(samples)), val(static_cast<std::size_t>(samples));
    parallel_for(samples, cfg.threads, [&](int i) {
        const double x = i == samples - 1 ? lmax : lmin + i * lstep;
        lam[static_cast<std::size_t>(i)] = x;
        val[static_cast<std::size_t>(i)] = x * cutoff_resolvent_hs_norm(v0, x, v0.x_min(), v0.x_max());
    });
    const double sup = *std::max_element(val.begin(), val.end());
    const double at_max = val.back();
    const bool finite = std::all_of(val.begin(), val.end(), [](double v) { return std::isfinite(v); });
    const bool decay_ok = finite && std::abs(sup - at_max) <= band * at_max;
    Json sweep = Json::array();
    for (int i = 0; i < samples; ++i)
        sweep.push_back({{"lambda", lam[static_cast<std::size_t>(i)]}, {"scaled_norm", val[static_cast<std::size_t>(i)]}});
    out.tables["resolvent_sweep"] = sweep;
    out.tables["resolvent_sup"] = sup;
    out.tables["resolvent_at_max"] = at_max;
    out.criteria.push_back({"resolvent_decay", decay_ok,
                            "sup " + fmt(sup) + " vs value " + fmt(at_max) + " at lambda = " + fmt(lmax)});
}

void near_threshold(const ExperimentConfig& cfg, ExperimentResult& out) {
    const auto pot = load_potential(cfg.potential);
    const ModeProfile v0 = to_steps(average_v0(pot), cfg.slabs);
    const Complex ib = bound_state(v0, 1e-12);
    const double radius = param(cfg, "radius", 0.2);
    const auto ks = int_list(cfg, "K_list", {3, 4, 5});
    struct Job {
        int l, K;
        Tower tower;
        int winding = 0;
        std::optional<Complex> z;
        double seconds = 0.0;
    };
    std::vector<Job> jobs;
    for (int l : cfg.l_values)
        for (int K : ks)
            for (Tower t : {Tower::Plus, Tower::Minus}) jobs.push_back(Job{l, K, t, 0, std::nullopt, 0.0});
    parallel_for(static_cast<int>(jobs.size()), cfg.threads, [&](int i) {
        auto& j = jobs[static_cast<std::size_t>(i)];
        const auto t0 = Clock::now();
        const ChannelSystem sys(pot, ChannelWindow{j.l, j.K, cfg.slabs}, j.tower);
        j.winding = disk_winding(sys, ib, radius, search_options(cfg));
        j.z = refine_zero(sys.as_function(), ib, 0.5 * radius, 1e-12);
        j.seconds = seconds_since(t0);
    });
    bool pass = true;
    Json table = Json::array();
    for (int l : cfg.l_values) {
        int reference = -1;
        for (const auto& j : jobs) {
            if (j.l != l) continue;
            pass = pass && j.winding == 1;
            if (reference < 0) reference = j.winding;
            pass = pass && j.winding == reference;
            const double err = j.z ? std::abs(*j.z - ib) : kNaN;
            out.rows.push_back({"near-threshold", l, tower_method(j.tower), j.z.value_or(Complex(kNaN, kNaN)),
                                j.winding, err, err * l * l, j.K, cfg.slabs, j.seconds});
            table.push_back({{"l", l}, {"K", j.K}, {"tower", j.tower == Tower::Plus ? "+" : "-"}, {"winding", j.winding}});
        }
        out.rows.push_back({"near-threshold", l, to_string(Method::Predicted0), ib, 1, kNaN, kNaN, cfg.K, cfg.slabs, 0.0});
    }
    out.tables["bound_state"] = cjson(ib);
    out.tables["windings"] = table;
    out.criteria.push_back({"pole_count", pass, "winding over |z - i*beta| = " + fmt(radius) +
                                                    " is 1 per tower for every K and l"});
}

void threshold_zero(const ExperimentConfig& cfg, ExperimentResult& out) {
    const auto pot = load_potential(cfg.potential);
    const double scale = param(cfg, "radius_scale", 1.0);
    // vanishing order of the one-dimensional Wronskian at the origin
    const ModeProfile v0 = average_v0(pot).is_step() ? average_v0(pot) : to_steps(average_v0(pot), cfg.slabs);
    const int order = winding_count([&](Complex l) { return jost_wronskian(l, v0); }, Contour::circle(0.0, 1e-3));
    const auto n = static_cast<int>(cfg.l_values.size());
    std::vector<std::array<int, 2>> wind(static_cast<std::size_t>(n));
    std::vector<std::array<std::vector<ZeroHit>, 2>> hits(static_cast<std::size_t>(n));
    std::vector<double> secs(static_cast<std::size_t>(n));
    parallel_for(n, cfg.threads, [&](int i) {
        const auto k = static_cast<std::size_t>(i);
        const auto t0 = Clock::now();
        const int l = cfg.l_values[k];
        const double r = scale / l;
        for (int t = 0; t < 2; ++t) {
            const ChannelSystem sys(pot, ChannelWindow{l, cfg.K, cfg.slabs}, t == 0 ? Tower::Plus : Tower::Minus);
            wind[k][static_cast<std::size_t>(t)] = disk_winding(sys, 0.0, r, search_options(cfg));
            hits[k][static_cast<std::size_t>(t)] = zeros_in_disk(sys, 0.0, r, cfg.tol);
        }
        secs[k] = seconds_since(t0);
    });
    bool pass = order >= 1;
    Json table = Json::array();
    for (int i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const int l = cfg.l_values[k];
        pass = pass && wind[k][0] + wind[k][1] >= 2 * order;
        for (int t = 0; t < 2; ++t)
            for (const auto& h : hits[k][static_cast<std::size_t>(t)])
                out.rows.push_back({"threshold-zero", l, tower_method(t == 0 ? Tower::Plus : Tower::Minus), h.location,
                                    h.multiplicity, kNaN, kNaN, cfg.K, cfg.slabs, secs[k]});
        table.push_back({{"l", l}, {"radius", scale / l}, {"winding_plus", wind[k][0]}, {"winding_minus", wind[k][1]}});
    }
    out.tables["wronskian_order_at_0"] = order;
    out.tables["windings"] = table;
    out.criteria.push_back({"threshold_count", pass,
                            "zeros in |z| < " + fmt(scale) + "/l at least twice the order " + std::to_string(order)});
}

struct SmoothPole {
    int l = 0;
    Complex lam[2], z[2], corr[2];
    Complex lam_r, z_r, corr_r;
    double seconds = 0.0;
};

std::vector<SmoothPole> smooth_pole_sequence(const ExperimentConfig& cfg, const CylinderPotential& pot) {
    if (cfg.slabs % 2 != 0) throw std::invalid_argument("slabs must be even for the extrapolation");
    const std::array<int, 2> counts{cfg.slabs / 2, cfg.slabs};
    const double refine_tol = param(cfg, "refine_tol", 1e-13);
    std::vector<SmoothPole> out(cfg.l_values.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i].l = cfg.l_values[i];
    for (std::size_t s = 0; s < 2; ++s) {
        const ModeProfile v0 = to_steps(average_v0(pot), counts[s]);
        const Complex lam = bound_state(v0, 1e-13);
        const ResonanceState u(v0, lam);
        for (auto& p : out) {
            p.lam[s] = lam;
            p.corr[s] = leading_correction(u, pot, p.l).z_pred;
        }
    }
    parallel_for(static_cast<int>(out.size()), cfg.threads, [&](int i) {
        auto& p = out[static_cast<std::size_t>(i)];
        const auto t0 = Clock::now();
        for (std::size_t s = 0; s < 2; ++s) {
            const ChannelSystem sys(pot, ChannelWindow{p.l, cfg.K, counts[s]});
            const auto z = refine_zero(sys.as_function(), p.lam[s], 0.1, refine_tol);
            if (!z) throw NumericalError("no zero of D near the bound state at l = " + std::to_string(p.l));
            p.z[s] = *z;
        }
        p.seconds = seconds_since(t0);
    });
    for (auto& p : out) {
        p.lam_r = richardson(p.lam[0], p.lam[1]);
        p.z_r = richardson(p.z[0], p.z[1]);
        p.corr_r = richardson(p.corr[0], p.corr[1]);
    }
    return out;
}

void leading_correction_exp(const ExperimentConfig& cfg, ExperimentResult& out) {
    const auto pot = load_potential(cfg.potential);
    const double ratio_limit = param(cfg, "ratio_limit", 2.5), improvement = param(cfg, "improvement", 5.0);
    const auto seq = smooth_pole_sequence(cfg, pot);
    std::vector<double> corr_scaled, zeroth_scaled;
    Json table = Json::array();
    for (const auto& p : seq) {
        const double l3 = std::pow(static_cast<double>(p.l), 3);
        const double e_corr = std::abs(p.z_r - p.corr_r), e_0 = std::abs(p.z_r - p.lam_r);
        corr_scaled.push_back(e_corr * l3);
        zeroth_scaled.push_back(e_0 * l3);
        out.rows.push_back({"leading-correction", p.l, "direct", p.z_r, 1, kNaN, kNaN, cfg.K, cfg.slabs, p.seconds});
        out.rows.push_back({"leading-correction", p.l, to_string(Method::Predicted0), p.lam_r, 1, e_0, e_0 * l3, cfg.K,
                            cfg.slabs, 0.0});
        out.rows.push_back({"leading-correction", p.l, to_string(Method::PredictedCorrected), p.corr_r, 1, e_corr,
                            e_corr * l3, cfg.K, cfg.slabs, 0.0});
        table.push_back({{"l", p.l},
                         {"direct", {{"coarse", cjson(p.z[0])}, {"fine", cjson(p.z[1])}, {"extrapolated", cjson(p.z_r)}}},
                         {"lambda0", {{"coarse", cjson(p.lam[0])}, {"fine", cjson(p.lam[1])}, {"extrapolated", cjson(p.lam_r)}}},
                         {"corrected",
                          {{"coarse", cjson(p.corr[0])}, {"fine", cjson(p.corr[1])}, {"extrapolated", cjson(p.corr_r)}}},
                         {"corrected_error_l3", e_corr * l3},
                         {"zeroth_error_l3", e_0 * l3}});
    }
    bool scaling = corr_scaled.size() >= 2;
    std::string detail = "error*l^3:";
    for (std::size_t i = 0; i < corr_scaled.size(); ++i) {
        detail += " " + fmt(corr_scaled[i]);
        if (i + 1 < corr_scaled.size()) {
            const double hi = std::max(corr_scaled[i], corr_scaled[i + 1]);
            const double lo = std::min(corr_scaled[i], corr_scaled[i + 1]);
            scaling = scaling && hi < ratio_limit * lo;
        }
    }
    bool improves = !corr_scaled.empty();
    for (std::size_t i = 0; i < corr_scaled.size(); ++i) improves = improves && improvement * corr_scaled[i] <= zeroth_scaled[i];
    out.tables["sequence"] = table;
    out.criteria.push_back({"correction_scaling", scaling, detail + " (consecutive ratio limit " + fmt(ratio_limit) + ")"});
    out.criteria.push_back({"correction_improvement", improves,
                            "corrected error at least " + fmt(improvement) + "x below the zeroth-order error"});
}

void polesequence(const ExperimentConfig& cfg, ExperimentResult& out) {
    const auto pot = load_potential(cfg.potential);
    const auto seq = smooth_pole_sequence(cfg, pot);
    bool decreasing = seq.size() >= 2;
    double prev = std::numeric_limits<double>::infinity();
    std::string detail = "|Re z|*l^3:";
    Json table = Json::array();
    for (const auto& p : seq) {
        const double l3 = std::pow(static_cast<double>(p.l), 3);
        const double re = std::abs(p.z_r.real());
        decreasing = decreasing && re * l3 < prev;
        prev = re * l3;
        detail += " " + fmt(re * l3);
        out.rows.push_back({"polesequence", p.l, "direct", p.z_r, 1, re, re * l3, cfg.K, cfg.slabs, p.seconds});
        table.push_back({{"l", p.l}, {"re", p.z_r.real()}, {"re_l3", re * l3},
                         {"re_coarse", p.z[0].real()}, {"re_fine", p.z[1].real()}});
    }
    out.tables["real_parts"] = table;
    out.criteria.push_back({"re_decay", decreasing, detail});
}

void example_threshold(const ExperimentConfig& cfg, ExperimentResult& out) {
    const auto pot = load_potential(cfg.potential);
    const double rho = param(cfg, "rho", 1.0), exclude = param(cfg, "exclude", 1e-6);
    const double bound_factor = param(cfg, "bound_factor", 3.0);
    const int mirror_l = static_cast<int>(param(cfg, "mirror_l", 16));
    const double mirror_tol = param(cfg, "mirror_tol", 1e-8);
    std::vector<int> ls = cfg.l_values;
    const bool mirror_extra = std::find(ls.begin(), ls.end(), mirror_l) == ls.end();
    if (mirror_extra) ls.push_back(mirror_l);
    const auto n = static_cast<int>(ls.size());
    struct Run {
        std::array<int, 2> count{};
        std::array<std::vector<ZeroHit>, 2> zeros;
        double seconds = 0.0;
    };
    std::vector<Run> runs(static_cast<std::size_t>(n));
    parallel_for(n, cfg.threads, [&](int i) {
        auto& r = runs[static_cast<std::size_t>(i)];
        const int l = ls[static_cast<std::size_t>(i)];
        const auto t0 = Clock::now();
        for (std::size_t t = 0; t < 2; ++t) {
            const ChannelSystem sys(pot, ChannelWindow{l, cfg.K, cfg.slabs}, t == 0 ? Tower::Plus : Tower::Minus);
            r.count[t] = disk_winding(sys, 0.0, rho, search_options(cfg)) - disk_winding(sys, 0.0, exclude, search_options(cfg));
            r.zeros[t] = zeros_in_disk(sys, 0.0, rho, cfg.tol);
        }
        r.seconds = seconds_since(t0);
    });

    bool counts_ok = true;
    std::vector<double> scaled;
    Json table = Json::array();
    for (std::size_t i = 0; i < cfg.l_values.size(); ++i) {
        const int l = ls[i];
        const auto& r = runs[i];
        const Complex pred = example_near_threshold(l).z_pred;
        counts_ok = counts_ok && r.count[0] == 1 && r.count[1] == 1;
        double best = kNaN;
        for (std::size_t t = 0; t < 2; ++t)
            for (const auto& h : r.zeros[t]) {
                if (std::abs(h.location) <= exclude) continue;
                const double err = std::abs(h.location - pred);
                if (t == 0 && (std::isnan(best) || err < best)) best = err;
                out.rows.push_back({"example-threshold", l, tower_method(t == 0 ? Tower::Plus : Tower::Minus), h.location,
                                    h.multiplicity, err, err * l * l, cfg.K, cfg.slabs, r.seconds});
            }
        out.rows.push_back({"example-threshold", l, to_string(Method::ExampleClosedForm), pred, 1, kNaN, kNaN, cfg.K,
                            cfg.slabs, 0.0});
        scaled.push_back(best * l * l);
        table.push_back({{"l", l}, {"count_plus", r.count[0]}, {"count_minus", r.count[1]}, {"prediction", cjson(pred)},
                         {"error_l2", best * l * l}});
    }
    bool bounded = !scaled.empty() && std::all_of(scaled.begin(), scaled.end(), [](double v) { return std::isfinite(v); });
    for (double v : scaled) bounded = bounded && v <= bound_factor * scaled.front();
    out.tables["threshold_zeros"] = table;
    out.criteria.push_back({"example_threshold", counts_ok && bounded,
                            std::string("one zero per tower: ") + (counts_ok ? "yes" : "no") +
                                "; error*l^2 within " + fmt(bound_factor) + "x of the first l: " + (bounded ? "yes" : "no")});

    // mirror pairing z <-> -conj(z) between the two towers
    const auto& m = runs[static_cast<std::size_t>(std::find(ls.begin(), ls.end(), mirror_l) - ls.begin())];
    auto farthest = [](const std::vector<ZeroHit>& from, const std::vector<ZeroHit>& to, bool mirror) {
        double worst = 0.0;
        for (const auto& a : from) {
            double best = std::numeric_limits<double>::infinity();
            const Complex image = mirror ? -std::conj(a.location) : a.location;
            for (const auto& b : to) best = std::min(best, std::abs(image - b.location));
            worst = std::max(worst, best);
        }
        return worst;
    };
    const double mirror_gap = std::max(farthest(m.zeros[0], m.zeros[1], true), farthest(m.zeros[1], m.zeros[0], true));
    const double same_gap = std::max(farthest(m.zeros[0], m.zeros[1], false), farthest(m.zeros[1], m.zeros[0], false));
    const bool mirror_ok = !m.zeros[0].empty() && m.zeros[0].size() == m.zeros[1].size() && mirror_gap < mirror_tol;
    Json mt;
    mt["l"] = mirror_l;
    mt["plus"] = Json::array();
    mt["minus"] = Json::array();
    for (const auto& h : m.zeros[0]) mt["plus"].push_back(cjson(h.location));
    for (const auto& h : m.zeros[1]) mt["minus"].push_back(cjson(h.location));
    mt["mirror_gap"] = mirror_gap;
    mt["identity_gap"] = same_gap;
    out.tables["tower_mirror"] = mt;
    out.criteria.push_back({"tower_mirror", mirror_ok,
                            "max |(-conj z_plus) - z_minus| = " + fmt(mirror_gap) + " at l = " + std::to_string(mirror_l) +
                                " (towers coincide to " + fmt(same_gap) + ")"});
}

void example_logl_exp(const ExperimentConfig& cfg, ExperimentResult& out) {
    const auto pot = load_potential(cfg.potential);
    const double region = param(cfg, "region_scale", 0.9), expo = param(cfg, "radius_exponent", 0.4);
    const int nu = static_cast<int>(param(cfg, "nu", 1)), sign = static_cast<int>(param(cfg, "sign", 1));
    const auto n = static_cast<int>(cfg.l_values.size());
    struct Run {
        std::vector<ZeroHit> zeros, local;
        Complex pred;
        double seconds = 0.0;
        bool local_done = false;
    };
    std::vector<Run> runs(static_cast<std::size_t>(n));
    parallel_for(n, cfg.threads, [&](int i) {
        auto& r = runs[static_cast<std::size_t>(i)];
        const int l = cfg.l_values[static_cast<std::size_t>(i)];
        const auto t0 = Clock::now();
        const ChannelSystem sys(pot, ChannelWindow{l, cfg.K, cfg.slabs});
        r.pred = example_logl(l, nu, sign).z_pred;
        r.zeros = zeros_in_disk(sys, 0.0, region * std::log(static_cast<double>(l)), cfg.tol);
        // diagnostic: the neighbourhood of the closed form, wherever it lies in the chart
        const double reach = std::pow(static_cast<double>(l), -expo);
        if (std::abs(r.pred) + reach * std::sqrt(2.0) < chart_radius(l)) {
            r.local = zeros_in_disk(sys, r.pred, reach, cfg.tol);
            r.local_done = true;
        }
        r.seconds = seconds_since(t0);
    });
    bool pass = n > 0;
    Json table = Json::array();
    for (int i = 0; i < n; ++i) {
        const auto& r = runs[static_cast<std::size_t>(i)];
        const int l = cfg.l_values[static_cast<std::size_t>(i)];
        const double reach = std::pow(static_cast<double>(l), -expo);
        const double rad = region * std::log(static_cast<double>(l));
        double best = std::numeric_limits<double>::infinity();
        for (const auto& h : r.zeros) {
            const double err = std::abs(h.location - r.pred);
            best = std::min(best, err);
            out.rows.push_back({"example-logl", l, "direct", h.location, h.multiplicity, err, err / reach, cfg.K,
                                cfg.slabs, r.seconds});
        }
        out.rows.push_back({"example-logl", l, to_string(Method::ExampleClosedForm), r.pred, 1, kNaN, kNaN, cfg.K,
                            cfg.slabs, 0.0});
        pass = pass && best < reach;
        double local_best = std::numeric_limits<double>::infinity();
        Json local = Json::array();
        for (const auto& h : r.local) {
            local_best = std::min(local_best, std::abs(h.location - r.pred));
            local.push_back(cjson(h.location));
        }
        table.push_back({{"l", l},
                         {"prediction", cjson(r.pred)},
                         {"prediction_abs", std::abs(r.pred)},
                         {"region_radius", rad},
                         {"reach", reach},
                         {"zeros_in_region", r.zeros.size()},
                         {"nearest_in_region", std::isfinite(best) ? Json(best) : Json(nullptr)},
                         {"local_search_done", r.local_done},
                         {"local_zeros", local},
                         {"nearest_local", std::isfinite(local_best) ? Json(local_best) : Json(nullptr)}});
    }
    out.tables["logl"] = table;
    out.criteria.push_back({"logl_pole", pass, "a zero within l^-" + fmt(expo) + " of the closed form inside |z| < " +
                                                   fmt(region) + " log l"});
}

void resonance_free_scan(const ExperimentConfig& cfg, ExperimentResult& out) {
    const auto pot = load_potential(cfg.potential);
    const double inner_factor = param(cfg, "inner_factor", 3.0), outer_scale = param(cfg, "outer_scale", 0.5);
    const double delta = param(cfg, "delta", 2.0);
    const auto n = static_cast<int>(cfg.l_values.size());
    struct Run {
        std::array<int, 2> annulus{};
        std::vector<ZeroHit> zeros;
        double inner = 0.0, outer = 0.0, seconds = 0.0;
    };
    std::vector<Run> runs(static_cast<std::size_t>(n));
    parallel_for(n, cfg.threads, [&](int i) {
        auto& r = runs[static_cast<std::size_t>(i)];
        const int l = cfg.l_values[static_cast<std::size_t>(i)];
        const auto t0 = Clock::now();
        r.inner = inner_factor * std::abs(example_near_threshold(l).z_pred);
        r.outer = outer_scale * std::log(static_cast<double>(l));
        for (std::size_t t = 0; t < 2; ++t) {
            const ChannelSystem sys(pot, ChannelWindow{l, cfg.K, cfg.slabs}, t == 0 ? Tower::Plus : Tower::Minus);
            r.annulus[t] = disk_winding(sys, 0.0, r.outer, search_options(cfg)) -
                           disk_winding(sys, 0.0, r.inner, search_options(cfg));
            if (t == 0) r.zeros = zeros_in_disk(sys, 0.0, r.outer, cfg.tol);
        }
        r.seconds = seconds_since(t0);
    });
    bool pass = n > 0;
    Json table = Json::array();
    for (int i = 0; i < n; ++i) {
        const auto& r = runs[static_cast<std::size_t>(i)];
        const int l = cfg.l_values[static_cast<std::size_t>(i)];
        pass = pass && r.annulus[0] == 0 && r.annulus[1] == 0;
        Json cls = Json::array();
        for (const auto& h : r.zeros) {
            ResonanceHit hit{SurfacePoint(l, h.location)};
            hit.multiplicity = h.multiplicity;
            hit.tower_factor = 2;
            const auto c = classify_hit(hit, {Resonance1D{0.0, 1}}, BandParams{delta});
            cls.push_back({{"z", cjson(h.location)}, {"annulus_scaled", c.annulus_scaled}, {"re_l3", c.re_scaled}});
            const Complex pred = example_near_threshold(l).z_pred;
            const double err = std::abs(h.location - pred);
            out.rows.push_back({"resonance-free-scan", l, "direct", h.location, h.multiplicity, err, err * l * l, cfg.K,
                                cfg.slabs, r.seconds});
        }
        table.push_back({{"l", l},
                         {"inner", r.inner},
                         {"outer", r.outer},
                         {"annulus_winding_plus", r.annulus[0]},
                         {"annulus_winding_minus", r.annulus[1]},
                         {"classified", cls}});
    }
    out.tables["annuli"] = table;
    out.criteria.push_back({"annulus_free", pass, "no zeros in " + fmt(inner_factor) + "|z_pred| < |z| < " +
                                                      fmt(outer_scale) + " log l"});
}

// Grid scan of |f| followed by Newton polishing of every local minimum.
std::vector<Complex> scan_zeros(const AnalyticFn& f, const Rect& rect, int nx, int ny) {
    const double hx = rect.width() / nx, hy = rect.height() / ny;
    const Rect grown{rect.lo - Complex(2 * hx, 2 * hy), rect.hi + Complex(2 * hx, 2 * hy)};
    const int gx = nx + 4, gy = ny + 4;
    std::vector<double> mag(static_cast<std::size_t>((gx + 1) * (gy + 1)));
    auto at = [&](int i, int j) -> double& { return mag[static_cast<std::size_t>(j * (gx + 1) + i)]; };
    for (int j = 0; j <= gy; ++j)
        for (int i = 0; i <= gx; ++i) at(i, j) = std::abs(f(grown.lo + Complex(i * hx, j * hy)));
    std::vector<Complex> out;
    for (int j = 1; j < gy; ++j)
        for (int i = 1; i < gx; ++i) {
            bool minimum = true;
            for (int dj = -1; dj <= 1 && minimum; ++dj)
                for (int di = -1; di <= 1; ++di)
                    if ((di || dj) && at(i + di, j + dj) <= at(i, j)) minimum = false;
            if (!minimum) continue;
            Complex z = grown.lo + Complex(i * hx, j * hy);
            bool converged = false;
            for (int it = 0; it < 60; ++it) {
                const double h = 1e-6;
                const Complex d = (f(z + h) - f(z - h)) / (2.0 * h);
                const Complex step = f(z) / d;
                z -= step;
                if (!std::isfinite(std::abs(z))) break;
                if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(z))) {
                    converged = true;
                    break;
                }
            }
            if (!converged || !rect.contains(z)) continue;
            if (std::none_of(out.begin(), out.end(), [&](Complex w) { return std::abs(w - z) < 1e-8; })) out.push_back(z);
        }
    return out;
}

void identity_suite(const ExperimentConfig& cfg, ExperimentResult& out) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // triple-product identity on random step potentials
    {
        const int count = static_cast<int>(param(cfg, "sumis0_potentials", 20));
        const int modes = static_cast<int>(param(cfg, "sumis0_modes", 8));
        std::vector<double> xs;
        for (int i = 0; i <= 32; ++i) xs.push_back(-1.0 + 2.0 * i / 32.0);
        double worst = 0.0, worst_abs = 0.0;
        for (int p = 0; p < count; ++p) {
            std::map<int, ModeProfile> table;
            for (int m = -modes; m <= modes; ++m) {
                CVectorXd v(4);
                for (int s = 0; s < 4; ++s) v[s] = Complex(gauss(rng), gauss(rng));
                table.emplace(m, ModeProfile::step({-1.0, -0.5, 0.0, 0.5, 1.0}, v));
            }
            const auto r = sumis0_residual(CylinderPotential(table, false), xs);
            worst = std::max(worst, r.relative);
            worst_abs = std::max(worst_abs, r.absolute);
        }
        out.tables["sumis0"] = {{"max_relative", worst}, {"max_absolute", worst_abs}};
        out.criteria.push_back({"sumis0", worst < 1e-12, "max relative residual " + fmt(worst)});
    }

    // Lambert W on five branches
    {
        const int per = static_cast<int>(param(cfg, "lambert_points", 100));
        std::uniform_real_distribution<double> logr(-3.0, 3.0), ang(-kPi, kPi);
        double worst = 0.0;
        int wrong_branch = 0;
        for (int nu = -2; nu <= 2; ++nu)
            for (int i = 0; i < per; ++i) {
                const Complex w = std::polar(std::pow(10.0, logr(rng)), ang(rng));
                const Complex W = lambert_w(nu, w);
                worst = std::max(worst, std::abs(W * std::exp(W) - w) / std::max(1.0, std::abs(w)));
                const double k = (W + std::log(W) - std::log(w)).imag() / (2.0 * kPi);
                if (std::lround(k) != nu) ++wrong_branch;
            }
        out.tables["lambert_w"] = {{"max_residual", worst}, {"wrong_branch", wrong_branch}, {"points", 5 * per}};
        out.criteria.push_back({"lambert_w", worst < 1e-13 && wrong_branch == 0,
                                "max residual " + fmt(worst) + ", branch mismatches " + std::to_string(wrong_branch)});
    }

    // tau_k^2 - tau_j^2 = j^2 - k^2 across random chart points
    {
        const int count = static_cast<int>(param(cfg, "surface_points", 1000));
        std::uniform_int_distribution<int> lpick(1, 40);
        double worst = 0.0;
        for (int i = 0; i < count; ++i) {
            const int l = lpick(rng);
            Complex z;
            do z = chart_radius(l) * Complex(unit(rng), unit(rng));
            while (std::abs(z) >= 0.99 * chart_radius(l));
            const SurfacePoint p(l, z);
            std::uniform_int_distribution<int> kpick(0, 2 * l + 5);
            const int j = kpick(rng), k = kpick(rng);
            const Complex tj = tau(p, j), tk = tau(p, k);
            const double scale = std::max({1.0, std::norm(tj), std::norm(tk)});
            worst = std::max(worst, std::abs(tk * tk - tj * tj - static_cast<double>(j * j - k * k)) / scale);
        }
        out.tables["surface_algebra"] = {{"max_relative", worst}, {"points", count}};
        out.criteria.push_back({"surface_algebra", worst < 1e-12, "max relative residual " + fmt(worst)});
    }

    // free one-dimensional Wronskian and kernel
    {
        const ModeProfile free = ModeProfile::zero(-1.0, 1.0);
        double worst_w = 0.0, worst_k = 0.0;
        for (int i = 0; i < 50; ++i) {
            const Complex lam(5.0 * unit(rng), 2.0 * unit(rng));
            worst_w = std::max(worst_w, std::abs(jost_wronskian(lam, free) - 2.0 * Complex(0, 1) * lam) / std::abs(2.0 * lam));
            const double x = 3.0 * unit(rng), xp = 3.0 * unit(rng);
            const Complex exact = Complex(0, 1) / (2.0 * lam) * std::exp(Complex(0, 1) * lam * std::abs(x - xp));
            worst_k = std::max(worst_k, std::abs(resolvent_kernel(free, lam, x, xp) - exact) / std::abs(exact));
        }
        out.tables["free_resolvent"] = {{"wronskian_rel", worst_w}, {"kernel_rel", worst_k}};
        out.criteria.push_back({"free_resolvent", worst_w < 1e-12 && worst_k < 1e-12,
                                "relative errors " + fmt(worst_w) + " (W), " + fmt(worst_k) + " (kernel)"});
    }

    // zero engine against planted roots and against a grid scan of |W|
    {
        const int polys = static_cast<int>(param(cfg, "planted", 20));
        const int degree = static_cast<int>(param(cfg, "degree", 7));
        const Rect box{Complex(-1.2377, -1.2291), Complex(1.2413, 1.2339)};
        double worst = 0.0;
        bool counts = true;
        for (int p = 0; p < polys; ++p) {
            std::vector<Complex> roots;
            for (int i = 0; i < degree; ++i) roots.emplace_back(unit(rng), unit(rng));
            const AnalyticFn f = [roots](Complex z) {
                Complex v = 1.0;
                for (Complex r : roots) v *= z - r;
                return v;
            };
            ZeroOptions zo;
            zo.tol = 1e-12;
            const auto rep = locate_zeros(f, box, zo);
            counts = counts && rep.complete && rep.total_multiplicity() == degree && rep.zeros.size() == roots.size();
            for (Complex r : roots) {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& h : rep.zeros) best = std::min(best, std::abs(h.location - r));
                worst = std::max(worst, best);
            }
        }
        const Rect wbox{Complex(-6.013, -2.507), Complex(5.991, 2.493)};
        const std::array<std::pair<std::string, ModeProfile>, 2> wells{
            {{"square_well", square_well(-4.0).mode(0)}, {"well_bump", to_steps(average_v0(well_bump()), 256)}}};
        double scan_worst = 0.0;
        bool scan_counts = true;
        Json scans = Json::array();
        for (const auto& [name, v0] : wells) {
            const AnalyticFn w = [&v0](Complex l) { return jost_wronskian(l, v0); };
            ZeroOptions zo;
            zo.tol = 1e-12;
            const auto rep = locate_zeros(w, wbox, zo);
            const auto scan = scan_zeros(w, wbox, 240, 100);
            scan_counts = scan_counts && rep.complete && rep.total_multiplicity() == static_cast<int>(scan.size());
            double local = 0.0;
            for (const auto& h : rep.zeros) {
                double best = std::numeric_limits<double>::infinity();
                for (Complex s : scan) best = std::min(best, std::abs(s - h.location));
                local = std::max(local, best);
                out.rows.push_back({"identity-suite", 0, "direct-1d", h.location, h.multiplicity, best, best, 0, v0.intervals(), 0.0});
            }
            scan_worst = std::max(scan_worst, local);
            scans.push_back({{"well", name}, {"engine_count", rep.total_multiplicity()}, {"scan_count", scan.size()},
                             {"max_distance", local}});
        }
        out.tables["planted"] = {{"max_error", worst}, {"polynomials", polys}, {"degree", degree}};
        out.tables["well_scans"] = scans;
        out.criteria.push_back({"zero_engine", counts && worst < 1e-9 && scan_counts && scan_worst < 1e-9,
                                "planted roots to " + fmt(worst) + ", scan agreement to " + fmt(scan_worst)});
    }
}

using Runner = void (*)(const ExperimentConfig&, ExperimentResult&);

struct Entry {
    const char* name;
    Runner run;
};

const std::array<Entry, 10> kExperiments{{{"free-baseline", free_baseline},
                                          {"decoupled-check", decoupled_check},
                                          {"near-threshold", near_threshold},
                                          {"threshold-zero", threshold_zero},
                                          {"leading-correction", leading_correction_exp},
                                          {"polesequence", polesequence},
                                          {"example-threshold", example_threshold},
                                          {"example-logl", example_logl_exp},
                                          {"resonance-free-scan", resonance_free_scan},
                                          {"identity-suite", identity_suite}}};

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& e : kExperiments) v.emplace_back(e.name);
        return v;
    }();
    return names;
}

bool is_experiment(const std::string& name) {
    const auto& n = experiment_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

ExperimentConfig default_config(const std::string& experiment) {
    if (!is_experiment(experiment)) throw std::invalid_argument("unknown experiment '" + experiment + "'");
    ExperimentConfig c;
    c.experiment = experiment;
    if (experiment == "free-baseline") {
        c.potential = "zero";
        c.l_values = {10};
        c.K = 3;
        c.slabs = 16;
        c.params = {{"inner", 0.05}, {"outer", 1.0}};
    } else if (experiment == "decoupled-check") {
        c.potential = "well_bump";
        c.l_values = {10};
        c.K = 3;
        c.params = {{"points", 20}, {"factorization_tol", 1e-9}, {"disk_radius", 0.2}, {"lambda_min", 5.0},
                    {"lambda_max", 100.0}, {"lambda_step", 2.5}, {"decay_band", 0.2}};
    } else if (experiment == "near-threshold") {
        c.potential = "well_bump";
        c.l_values = {16, 32, 64};
        c.params = {{"K_list", {3, 4, 5}}, {"radius", 0.2}};
    } else if (experiment == "threshold-zero") {
        c.potential = "example10";
        c.l_values = {8, 16, 32, 64};
        c.params = {{"radius_scale", 1.0}};
    } else if (experiment == "leading-correction") {
        c.potential = "well_bump";
        c.l_values = {16, 32, 64};
        c.params = {{"refine_tol", 1e-13}, {"ratio_limit", 2.5}, {"improvement", 5.0}};
    } else if (experiment == "polesequence") {
        c.potential = "well_bump";
        c.l_values = {16, 32, 64};
        c.params = {{"refine_tol", 1e-13}};
    } else if (experiment == "example-threshold") {
        c.potential = "example10";
        c.l_values = {8, 16, 32, 64};
        c.params = {{"rho", 1.0}, {"exclude", 1e-6}, {"bound_factor", 3.0}, {"mirror_l", 16}, {"mirror_tol", 1e-8}};
    } else if (experiment == "example-logl") {
        c.potential = "example10";
        c.l_values = {32, 64};
        c.params = {{"region_scale", 0.9}, {"radius_exponent", 0.4}, {"nu", 1}, {"sign", 1}};
    } else if (experiment == "resonance-free-scan") {
        c.potential = "example10";
        c.l_values = {16, 32};
        c.params = {{"inner_factor", 3.0}, {"outer_scale", 0.5}, {"delta", 2.0}};
    } else if (experiment == "identity-suite") {
        c.potential = "zero";
        c.l_values = {};
        c.params = {{"sumis0_potentials", 20}, {"sumis0_modes", 8}, {"lambert_points", 100},
                    {"surface_points", 1000}, {"planted", 20}, {"degree", 7}};
    }
    return c;
}

void ExperimentConfig::validate() const {
    if (!is_experiment(experiment)) throw std::invalid_argument("unknown experiment '" + experiment + "'");
    if (K < 1) throw std::invalid_argument("config: K must be >= 1");
    if (slabs < 2) throw std::invalid_argument("config: slabs must be >= 2");
    if (!(tol > 0.0)) throw std::invalid_argument("config: tol must be positive");
    if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
    for (int l : l_values)
        if (l < 1 || l < K) throw std::invalid_argument("config: every l must satisfy l >= max(1, K)");
    (void)load_potential(potential);
}

Json ExperimentConfig::to_json() const {
    return {{"experiment", experiment}, {"potential", potential}, {"l", l_values}, {"K", K},   {"slabs", slabs},
            {"tol", tol},               {"threads", threads},     {"seed", seed},  {"params", params}};
}

ExperimentConfig load_config(const std::string& experiment, const Json& overrides) {
    ExperimentConfig c = default_config(experiment);
    if (!overrides.is_object()) throw std::invalid_argument("config: expected a JSON object");
    if (overrides.contains("experiment") && overrides.at("experiment").get<std::string>() != experiment)
        throw std::invalid_argument("config: file is for experiment '" + overrides.at("experiment").get<std::string>() + "'");
    for (const auto& [key, value] : overrides.items()) {
        if (key == "experiment") continue;
        if (key == "potential") c.potential = value;
        else if (key == "l") c.l_values = value.get<std::vector<int>>();
        else if (key == "K") c.K = value.get<int>();
        else if (key == "slabs") c.slabs = value.get<int>();
        else if (key == "tol") c.tol = value.get<double>();
        else if (key == "threads") c.threads = value.get<int>();
        else if (key == "seed") c.seed = value.get<std::uint64_t>();
        else if (key == "params") {
            if (!value.is_object()) throw std::invalid_argument("config: params must be an object");
            for (const auto& [pk, pv] : value.items()) c.params[pk] = pv;
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    c.validate();
    return c;
}

bool ExperimentResult::all_pass() const {
    return !partial && !criteria.empty() &&
           std::all_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return c.pass; });
}

const Criterion* ExperimentResult::criterion(const std::string& name) const {
    for (const auto& c : criteria)
        if (c.name == name) return &c;
    return nullptr;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult res;
    res.experiment = cfg.experiment;
    const auto t0 = Clock::now();
    try {
        for (const auto& e : kExperiments)
            if (cfg.experiment == e.name) e.run(cfg, res);
    } catch (const std::exception& ex) {
        res.partial = true;
        res.error = ex.what();
    }
    res.timings["total_seconds"] = seconds_since(t0);
    Json rows = Json::array();
    for (const auto& r : res.rows) rows.push_back(r.wall_time);
    res.timings["row_seconds"] = rows;
    return res;
}

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols{"experiment", "l",     "method",       "z_re", "z_im", "multiplicity",
                                               "error",      "scaled_error", "K", "slabs", "wall_time"};
    return cols;
}

void write_results_csv(const ExperimentResult& result, std::ostream& os) {
    CsvWriter w(os, csv_columns());
    for (const auto& r : result.rows)
        w.row({r.experiment, std::to_string(r.l), r.method, format_double(r.z.real()), format_double(r.z.imag()),
               std::to_string(r.multiplicity), format_double(r.error), format_double(r.scaled_error),
               std::to_string(r.K), std::to_string(r.slabs), "nan"});
}

Json summary_json(const ExperimentResult& result, const ExperimentConfig& cfg) {
    Json s;
    s["schema"] = 1;
    s["experiment"] = result.experiment;
    Json pass = Json::object();
    Json crit = Json::array();
    for (const auto& c : result.criteria) {
        pass[c.name] = c.pass;
        crit.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    s["pass"] = pass;
    s["all_pass"] = result.all_pass();
    s["criteria"] = crit;
    s["partial"] = result.partial;
    if (result.partial) s["error"] = result.error;
    s["tables"] = result.tables;
    s["timings"] = result.timings;
    s["config"] = cfg.to_json();
    return s;
}

void write_outputs(const ExperimentResult& result, const ExperimentConfig& cfg, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const auto base = std::filesystem::path(dir);
    {
        std::ofstream csv(base / "results.csv", std::ios::binary);
        if (!csv) throw std::runtime_error("cannot write " + (base / "results.csv").string());
        write_results_csv(result, csv);
    }
    std::ofstream js(base / "summary.json");
    if (!js) throw std::runtime_error("cannot write " + (base / "summary.json").string());
    js << summary_json(result, cfg).dump(2) << '\n';
}

}  // namespace cylres
