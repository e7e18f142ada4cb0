#include "cgloop/cli.hpp"

#include "cgloop/characters.hpp"
#include "cgloop/series_io.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cgloop;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "cgloop");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("partition: series JSON decomposes into chi_11 + chi_13") {
    const Result r = cli({"partition", "--n", "1", "--phase", "dilute", "--order", "40", "--backend", "exact",
                          "--format", "json"});
    REQUIRE(r.code == 0);
    const GenSeries z = series_from_json(nlohmann::json::parse(r.out));
    CHECK(z.backend() == Backend::exact);
    const Decomposition d = decompose(z, kac_table(3, 4), 40);
    REQUIRE(d.terms.size() == 2);
    CHECK(*d.terms[0].exact == 1);
    CHECK(*d.terms[1].exact == 1);
}

TEST_CASE("default backend follows the exact registry") {
    CHECK(nlohmann::json::parse(cli({"partition", "--n", "0", "--order", "10"}).out)["backend"] == "exact");
    CHECK(nlohmann::json::parse(cli({"partition", "--n", "1.5", "--order", "10"}).out)["backend"] == "floating");
    CHECK(nlohmann::json::parse(cli({"partition", "--n", "1", "--n-prime", "0.5", "--order", "10"}).out)["backend"] ==
          "floating");
    const Result bad = cli({"partition", "--n", "1.5", "--order", "10", "--backend", "exact"});
    CHECK(bad.code == exit_domain);
    CHECK(bad.err.find("domain error") != std::string::npos);
}

TEST_CASE("duality reports a small residual") {
    const Result r = cli({"duality", "--n", "1", "--phase", "dense", "--ratio", "1", "--order", "64"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["residual"].get<double>() < 1e-8);
    CHECK(j["pass"] == true);
    const Result strict =
        cli({"duality", "--n", "1.5", "--ratio", "0.7", "--n-prime", "0.3", "--tolerance", "1e-30"});
    CHECK(strict.code == exit_identity);
    CHECK(cli({"duality", "--n", "1", "--ratio", "5", "--order", "8"}).code == exit_tail);
    CHECK(cli({"duality", "--n", "1"}).code == exit_usage);
}

TEST_CASE("crossing: single-row CSV") {
    const Result r = cli({"crossing", "--q", "0.5", "--order", "64", "--format", "csv"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"q", "P", "tail_bound"});
    const double p = std::stod(rows[1][1]);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
}

TEST_CASE("CSV and JSON encode identical values") {
    const Result c = cli({"crossing", "--q", "0.37", "--format", "csv"});
    const Result j = cli({"crossing", "--q", "0.37", "--format", "json"});
    const auto rows = parse_csv(c.out);
    const auto obj = nlohmann::json::parse(j.out);
    CHECK(std::stod(rows[1][1]) == obj["P"].get<double>());
    CHECK(std::stod(rows[1][0]) == obj["q"].get<double>());

    const Result sc = cli({"partition", "--n", "1.2", "--order", "12", "--format", "csv"});
    const Result sj = cli({"partition", "--n", "1.2", "--order", "12", "--format", "json"});
    const auto srows = parse_csv(sc.out);
    const auto sobj = nlohmann::json::parse(sj.out);
    REQUIRE(srows.size() == sobj["terms"].size() + 1);
    for (std::size_t i = 0; i < sobj["terms"].size(); ++i) {
        CHECK(std::stod(srows[i + 1][0]) == sobj["terms"][i]["exponent"].get<double>());
        CHECK(std::stod(srows[i + 1][1]) == sobj["terms"][i]["coefficient"].get<double>());
    }
}

TEST_CASE("output is deterministic") {
    const std::vector<std::string> args{"sweep", "--what", "crossing", "--grid", "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9",
                                        "--format", "csv"};
    const Result a = cli(args);
    const Result b = cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("sweeps") {
    const Result r = cli({"sweep", "--what", "crossing", "--grid", "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9", "--format",
                          "csv"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 10);
    for (std::size_t i = 2; i < rows.size(); ++i) {
        CHECK(std::stod(rows[i][0]) > std::stod(rows[i - 1][0]));
        CHECK(std::stod(rows[i][1]) < std::stod(rows[i - 1][1]));
    }

    const Result d = cli({"sweep", "--what", "duality", "--n", "1", "--grid", "0.5,1,2", "--grid-kind", "ratio"});
    REQUIRE(d.code == 0);
    const auto dj = nlohmann::json::parse(d.out);
    REQUIRE(dj.size() == 3);
    for (const auto& row : dj)
        CHECK(row["residual"].get<double>() < 1e-8);
    CHECK(dj[1]["ratio"] == 1.0);

    const Result s = cli({"sweep", "--what", "saw", "--phase", "dilute", "--grid", "0.3,0.2,0.15", "--grid-kind",
                          "ratio"});
    REQUIRE(s.code == 0);
    const auto sj = nlohmann::json::parse(s.out);
    double prev_gap = 1.0;
    for (const auto& row : sj) {
        const double gap = std::fabs(row["asymptote_ratio"].get<double>() - 1.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(cli({"sweep", "--what", "crossing", "--grid", "0.5,1.5"}).code == exit_domain);
}

TEST_CASE("characters command") {
    const Result r = cli({"characters", "--n", "1.7320508075688772", "--phase", "dense", "--parity", "even",
                          "--order", "40"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["model"]["p"] == 5);
    REQUIRE(j["terms"].size() == 3);
    CHECK(j["terms"][1]["coefficient"] == 2);
    CHECK(cli({"characters", "--n", "1.5", "--order", "20"}).code == exit_domain);
}

TEST_CASE("other commands") {
    const Result saw = cli({"saw", "--phase", "dense", "--order", "20"});
    REQUIRE(saw.code == 0);
    CHECK(nlohmann::json::parse(saw.out)["terms"][0]["exponent"] == "-1/24");

    const Result lc = cli({"logcft", "--phase", "dilute", "--q", "0.3"});
    REQUIRE(lc.code == 0);
    const auto lj = nlohmann::json::parse(lc.out);
    CHECK(lj["dZdn"].get<double>() ==
          doctest::Approx(lj["wrap_term"].get<double>() + lj["central_charge_term"].get<double>() +
                          lj["coupling_term"].get<double>()));

    const Result b = cli({"boundary", "--g", "1.5", "--alpha1", "0.3", "--alpha2", "0.1", "--width", "1"});
    REQUIRE(b.code == 0);
    const auto bj = nlohmann::json::parse(b.out);
    CHECK(std::fabs(bj["e1_finite"].get<double>() - bj["e1_zeta"].get<double>()) < 1e-6);

    const Result cr = cli({"crossed", "--n", "1", "--ratio", "1"});
    REQUIRE(cr.code == 0);
    CHECK(nlohmann::json::parse(cr.out)["Z"].get<double>() == doctest::Approx(1.30169218).epsilon(1e-8));
    CHECK(cli({"crossed", "--n", "1", "--backend", "exact"}).code == exit_domain);
}

TEST_CASE("usage and domain errors") {
    CHECK(cli({"frobnicate"}).code == exit_usage);
    CHECK(cli({}).code == exit_usage);
    CHECK(cli({"partition"}).code == exit_usage);
    CHECK(cli({"partition", "--n", "1", "--order", "4"}).code == exit_usage);
    CHECK(cli({"partition", "--n", "1", "--q", "0.5", "--ratio", "1"}).code == exit_usage);
    CHECK(cli({"partition", "--n", "3"}).code == exit_domain);
    CHECK(cli({"crossing", "--q", "1.5"}).code == exit_domain);
    CHECK(cli({"partition", "--n", "1", "--format", "xml"}).code == exit_usage);
    CHECK(cli({"--help"}).code == exit_ok);
}

TEST_CASE("configs run directly") {
    RunConfig cfg;
    cfg.command = "crossing";
    cfg.q = 0.5;
    cfg.format = "csv";
    std::ostringstream out, err;
    CHECK(run(cfg, out, err) == exit_ok);
    CHECK(out.str().rfind("q,P,tail_bound\n", 0) == 0);
    cfg.command = "nothing";
    CHECK(run(cfg, out, err) == exit_usage);
}

TEST_CASE("output directory from the environment") {
    const auto dir = std::filesystem::temp_directory_path() / "cgloop_cli_test";
    std::filesystem::create_directories(dir);
    setenv("CGLOOP_OUTPUT_DIR", dir.c_str(), 1);
    const Result r = cli({"crossing", "--q", "0.5", "--format", "csv", "--output", "p.csv"});
    unsetenv("CGLOOP_OUTPUT_DIR");
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(dir / "p.csv");
    std::string header;
    std::getline(f, header);
    CHECK(header == "q,P,tail_bound");
    std::filesystem::remove_all(dir);
}

TEST_CASE("tool binary exit codes") {
    const char* tool = std::getenv("CGLOOP_TOOL");
    if (!tool)
        return;
    auto status = [&](const std::string& args) {
        const std::string cmd = std::string(tool) + " " + args + " >/dev/null 2>&1";
        const int raw = std::system(cmd.c_str());
        return WEXITSTATUS(raw);
    };
    CHECK(status("unknown-command") == exit_usage);
    CHECK(status("partition --n 3") == exit_domain);
    CHECK(status("duality --n 1 --ratio 1") == exit_ok);
    CHECK(status("duality --n 1 --ratio 5 --order 8") == exit_tail);
}
