#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "helikon/cli.hpp"
#include "helikon/parallel.hpp"

using namespace helikon;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run call(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "helikon-test-cli";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string l;
    while (std::getline(is, l)) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("usage errors exit 1") {
    CHECK(call({}).code == 1);
    CHECK(call({"solve"}).code == 1);
    CHECK(call({"solve", "--k", "0.4"}).code == 1);
    CHECK(call({"solve", "--k", "1", "--tol-v", "-1"}).code == 1);
    CHECK(call({"frobnicate"}).code == 1);
    CHECK(call({"mesh", "--res", "7", "--k", "1", "--theta", "1.9", "--b", "0.6"}).code == 1);
    CHECK(call({"verify", "--only", "nonsense"}).code == 1);
    CHECK(call({"verify", "--only", "theta", "--inject", "nonsense"}).code == 1);
    CHECK(call({"--help"}).code == 0);
}

TEST_CASE("solve writes the solution document") {
    const auto r = call({"solve", "--k", "1", "--threads", "2"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    for (const auto* key : {"k", "theta", "b", "a", "residuals", "residues", "axis_turning", "iterations", "version"})
        CHECK(doc.contains(key));
    CHECK(doc["residuals"].contains("horiz"));
    CHECK(doc["residuals"].contains("vert"));
    CHECK(doc["residuals"].contains("cross_check"));
    CHECK(doc["residues"]["E1"].size() == 2);
    CHECK(doc["b"].get<double>() > 0.5);

    const auto tight = nlohmann::json::parse(call({"solve", "--k", "1", "--tol-v", "1e-9"}).out);
    CHECK(std::abs(tight["theta"].get<double>() - doc["theta"].get<double>()) < 1e-7);
    CHECK(std::abs(tight["b"].get<double>() - doc["b"].get<double>()) < 1e-7);
}

TEST_CASE("solve without a root exits 2 with the scan table") {
    const auto r = call({"solve", "--k", "1", "--theta-bracket", "1.3", "1.4", "--tol-h", "1e-300"});
    CHECK(r.code == 2);
    CHECK(nlohmann::json::parse(r.err).contains("scan"));
}

TEST_CASE("sweep CSV") {
    const auto p = scratch("sweep.csv");
    REQUIRE(call({"sweep", "--k", "1", "--theta-n", "2", "--b-n", "2", "--threads", "3", "-o", p.string()}).code == 0);
    const auto text = slurp(p);
    const auto ls = lines(text);
    REQUIRE(ls.size() == 6);
    CHECK(ls[0].rfind("# helikon", 0) == 0);
    CHECK(ls[1] == "k,theta,b,horiz_residual,vert_residual,quad_err,flag");
    CHECK(call({"sweep", "--k", "1", "--theta-n", "2", "--b-n", "2", "--threads", "1"}).out == text);
}

TEST_CASE("mesh pipeline") {
    const auto sol = scratch("sol.json");
    REQUIRE(call({"solve", "--k", "1", "-o", sol.string()}).code == 0);
    const auto obj = scratch("h1.obj");
    REQUIRE(call({"mesh", "--from", sol.string(), "--res", "32", "--copies", "3", "-o", obj.string(), "--threads", "2"}).code == 0);
    const auto rep = nlohmann::json::parse(slurp(scratch("h1.report.json")));
    CHECK(rep["symmetry"]["axis_max_xy"].get<double>() < 1e-5);
    CHECK(rep["intersections"]["pairs"].get<int>() == 0);
    CHECK(rep["copies"].get<int>() == 3);
    CHECK(rep.contains("version"));

    // Unsolved parameters are refused unless forced.
    const auto bad = scratch("bad.obj");
    CHECK(call({"mesh", "--k", "1", "--theta", "1.5", "--b", "0.7", "--res", "16", "-o", bad.string()}).code == 2);
    CHECK(call({"mesh", "--k", "1", "--theta", "1.5", "--b", "0.7", "--res", "16", "--force", "--no-intersections", "-o",
                bad.string()})
              .code == 0);

    const auto ply = scratch("helicoid.ply");
    REQUIRE(call({"mesh", "--helicoid", "--k", "1", "-o", ply.string()}).code == 0);
    const auto hrep = nlohmann::json::parse(slurp(scratch("helicoid.report.json")));
    CHECK(hrep["max_closed_form_error"].get<double>() < 1e-8);
}

TEST_CASE("verify filtering and negative control") {
    const auto ok = call({"verify", "--only", "theta"});
    CHECK(ok.code == 0);
    const auto doc = nlohmann::json::parse(ok.out);
    CHECK(doc["checks"].size() == 3);
    CHECK(doc["all_pass"].get<bool>());
    const auto bad = call({"verify", "--only", "theta", "--inject", "quasi-factor-sign"});
    CHECK(bad.code == 2);
    const auto bdoc = nlohmann::json::parse(bad.out);
    CHECK_FALSE(bdoc["all_pass"].get<bool>());
    CHECK(bdoc["checks"][1]["status"] == "fail");
}

TEST_CASE("thread count resolution") {
    CHECK(resolve_threads(3) == 3);
    setenv("HELIKON_THREADS", "5", 1);
    CHECK(resolve_threads(0) == 5);
    CHECK(resolve_threads(2) == 2);
    unsetenv("HELIKON_THREADS");
    CHECK(resolve_threads(0) >= 1);
}
