#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cylres/experiments.hpp"
#include "cylres/io.hpp"

using namespace cylres;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("cylres-test-" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(CYLRES_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path write_json(const fs::path& dir, const std::string& name, const Json& j) {
    const auto p = dir / name;
    std::ofstream(p) << j.dump();
    return p;
}

}  // namespace

TEST_CASE("CSV quoting round trip") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    std::ostringstream os;
    CsvWriter w(os, {"a", "b"});
    w.row({"x,y", "line\nbreak"});
    w.row({"", "\"q\""});
    const auto rec = parse_csv(os.str());
    REQUIRE(rec.size() == 3);
    CHECK(rec[1][0] == "x,y");
    CHECK(rec[1][1] == "line\nbreak");
    CHECK(rec[2][0].empty());
    CHECK(rec[2][1] == "\"q\"");
    CHECK_THROWS_AS(w.row({"only one"}), std::invalid_argument);
}

TEST_CASE("number formatting round trips") {
    for (double v : {0.1, -1.0 / 3.0, 6.02214076e23, 5e-324}) CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(format_double(-HUGE_VAL) == "-inf");
}

TEST_CASE("potential descriptions") {
    CHECK(load_potential("example10").mode(1)(0.0) == Complex(1.0));
    const auto wb = load_potential(Json{{"builtin", "well_bump"}, {"depth", 3.0}, {"grid_n", 64}});
    CHECK(wb.mode(0).intervals() == 64);
    CHECK(wb.mode(0)(0.0).real() == doctest::Approx(-3.0));
    CHECK_THROWS_AS(load_potential("nope"), std::invalid_argument);

    const Json inline_step = {{"support", {-1.0, 1.0}},
                              {"grid_n", 2},
                              {"kind", "step"},
                              {"real", true},
                              {"modes", {{{"m", 0}, {"re", {-1.0, 2.0}}}, {{"m", 1}, {"re", {0.5, 0.5}}}, {{"m", -1}, {"re", {0.5, 0.5}}}}}};
    const auto p = load_potential(inline_step);
    CHECK(p.mode(0)(0.5) == Complex(2.0));
    CHECK(p.max_mode() == 1);
    const auto back = load_potential(potential_to_json(p));
    CHECK(back.mode(-1)(-0.5) == Complex(0.5));
    CHECK(back.is_real());

    Json bad = inline_step;
    bad["modes"][0]["re"] = {1.0};
    CHECK_THROWS_AS(load_potential(bad), std::invalid_argument);
    bad = inline_step;
    bad["support"] = {1.0, -1.0};
    CHECK_THROWS_AS(load_potential(bad), std::invalid_argument);
}

TEST_CASE("configuration defaults and overrides") {
    CHECK(experiment_names().size() == 10);
    for (const auto& name : experiment_names()) CHECK_NOTHROW(default_config(name).validate());
    CHECK_THROWS_AS(default_config("bogus"), std::invalid_argument);

    const auto c = load_config("example-threshold", Json{{"l", {8, 16}}, {"params", {{"rho", 0.5}}}});
    CHECK(c.l_values == std::vector<int>{8, 16});
    CHECK(c.params.at("rho").get<double>() == 0.5);
    CHECK(c.params.at("exclude").get<double>() == 1e-6);
    CHECK_THROWS_AS(load_config("example-threshold", Json{{"colour", 1}}), std::invalid_argument);
    CHECK_THROWS_AS(load_config("example-threshold", Json{{"l", {3}}}), std::invalid_argument);
    CHECK_THROWS_AS(load_config("example-threshold", Json{{"tol", 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(load_config("example-threshold", Json{{"potential", "nope"}}), std::invalid_argument);
}

TEST_CASE("free baseline through the library") {
    const auto cfg = default_config("free-baseline");
    const auto r = run_experiment(cfg);
    CHECK_FALSE(r.partial);
    CHECK(r.rows.empty());
    REQUIRE(r.criterion("free_annulus_empty") != nullptr);
    CHECK(r.all_pass());
    const auto s = summary_json(r, cfg);
    CHECK(s.at("schema") == 1);
    CHECK(s.at("pass").at("free_annulus_empty") == true);
    std::ostringstream os;
    write_results_csv(r, os);
    CHECK(os.str() == "experiment,l,method,z_re,z_im,multiplicity,error,scaled_error,K,slabs,wall_time\r\n");
}

TEST_CASE("cli listing and usage errors") {
    const auto dir = scratch("usage");
    CHECK(run_cli("--list", dir / "list.txt") == 0);
    const auto listing = slurp(dir / "list.txt");
    for (const auto& name : experiment_names()) CHECK(listing.find(name) != std::string::npos);
    CHECK(listing.find("well_bump") != std::string::npos);

    CHECK(run_cli("bogus --config default", dir / "bogus.txt") == 1);
    CHECK(slurp(dir / "bogus.txt").find("Usage") != std::string::npos);
    CHECK(run_cli("free-baseline", dir / "noconfig.txt") == 1);
    CHECK(run_cli("free-baseline --config " + (dir / "missing.json").string(), dir / "missing.txt") == 1);
    const auto bad = write_json(dir, "bad.json", Json{{"K", 0}});
    CHECK(run_cli("free-baseline --config " + bad.string(), dir / "bad.txt") == 1);
}

TEST_CASE("cli exit codes follow the criteria") {
    const auto dir = scratch("codes");
    CHECK(run_cli("identity-suite --config default --out " + (dir / "id").string(), dir / "id.txt") == 0);
    const auto summary = Json::parse(slurp(dir / "id" / "summary.json"));
    CHECK(summary.at("schema") == 1);
    CHECK(summary.at("all_pass") == true);
    CHECK(summary.at("pass").size() == 5);

    // a bound state at about 1.86i sits inside |z| < 2.5
    const auto cfg = write_json(dir, "fail.json", Json{{"potential", "well_bump"}, {"params", {{"outer", 2.5}}}});
    CHECK(run_cli("free-baseline --config " + cfg.string() + " --out " + (dir / "fail").string(), dir / "fail.txt") == 2);
    CHECK(Json::parse(slurp(dir / "fail" / "summary.json")).at("pass").at("free_annulus_empty") == false);
}

TEST_CASE("cli flags partial output on execution errors") {
    const auto dir = scratch("partial");
    // the search square would leave the chart
    const auto cfg = write_json(dir, "deep.json", Json{{"l", {32}}, {"params", {{"region_scale", 3.0}}}});
    CHECK(run_cli("example-logl --config " + cfg.string() + " --out " + (dir / "out").string(), dir / "log.txt") == 1);
    const auto summary = Json::parse(slurp(dir / "out" / "summary.json"));
    CHECK(summary.at("partial") == true);
    CHECK(summary.at("error").get<std::string>().find("chart") != std::string::npos);
}

TEST_CASE("results do not depend on the thread count") {
    const auto dir = scratch("determinism");
    const auto cfg = write_json(dir, "ex.json", Json{{"l", {8, 16}}, {"params", {{"mirror_l", 8}}}});
    const auto a = dir / "t1", b = dir / "t4";
    const int ca = run_cli("example-threshold --config " + cfg.string() + " --threads 1 --out " + a.string(), dir / "a.txt");
    const int cb = run_cli("example-threshold --config " + cfg.string() + " --threads 4 --out " + b.string(), dir / "b.txt");
    CHECK(ca == cb);
    CHECK(ca != 1);
    const auto csv = slurp(a / "results.csv");
    CHECK(csv.size() > 100);
    CHECK(csv == slurp(b / "results.csv"));
    CHECK(parse_csv(csv).front() == csv_columns());
}
