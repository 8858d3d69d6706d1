#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "ksat/experiments.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int status;
    std::string out;
};

Run ksatlab(const std::string& args)
{
    const std::string cmd = std::string(KSATLAB_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    for (std::size_t got; (got = std::fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, got);
    const int raw = pclose(p);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch()
{
    const fs::path dir = fs::temp_directory_path() / ("ksatlab-cli-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("bounds subcommand")
{
    const Run r = ksatlab("bounds --k 10 --format json");
    REQUIRE(r.status == 0);
    const auto j = ksat::Json::parse(r.out);
    CHECK(j["r_upper"].get<double>() == doctest::Approx(708.9360).epsilon(2e-6));
    CHECK(j["r_bp"].get<double>() == doctest::Approx(708.7429).epsilon(2e-6));
    CHECK(j.contains("caveat"));
    CHECK(ksatlab("bounds --k 2").status == 2);
}

TEST_CASE("gen is byte-identical for a fixed seed")
{
    const fs::path dir = scratch();
    for (const char* model : {"uniform", "two-step", "planted", "degrees"}) {
        CAPTURE(model);
        const std::string base = std::string("gen --k 3 --n 30 --r 4.2 --seed 9 --model ") + model;
        REQUIRE(ksatlab(base + " --out " + (dir / "a").string() + " --meta " + (dir / "am").string()).status == 0);
        REQUIRE(ksatlab(base + " --out " + (dir / "b").string() + " --meta " + (dir / "bm").string()).status == 0);
        CHECK(slurp(dir / "a") == slurp(dir / "b"));
        CHECK(slurp(dir / "am") == slurp(dir / "bm"));
        CHECK(!slurp(dir / "a").empty());
    }
    CHECK(ksatlab("gen --k 3 --n 30 --r 4.2 --seed 9").out != ksatlab("gen --k 3 --n 30 --r 4.2 --seed 10").out);
    fs::remove_all(dir);
}

TEST_CASE("density rounds to the nearest clause count")
{
    CHECK(ksatlab("gen --k 3 --n 10 --r 4.25 --seed 1").out.rfind("p cnf 10 43\n", 0) == 0);
    CHECK(ksatlab("gen --k 3 --n 10 --r 4.24 --seed 1").out.rfind("p cnf 10 42\n", 0) == 0);
    CHECK(ksatlab("gen --k 3 --n 10 --m 5 --r 4 --seed 1").status == 2);
}

TEST_CASE("census round trip and cap")
{
    const fs::path dir = scratch();
    const std::string f = (dir / "f.cnf").string();
    REQUIRE(ksatlab("gen --k 3 --n 12 --m 40 --seed 4 --out " + f).status == 0);
    const Run r = ksatlab("census --in " + f + " --format json");
    REQUIRE(r.status == 0);
    const auto j = ksat::Json::parse(r.out);
    CHECK(j["n"] == 12);
    CHECK(j["marginals"].size() == 12);
    CHECK(ksatlab("census --in " + f + " --format json").out == r.out);
    REQUIRE(ksatlab("gen --k 3 --n 25 --m 40 --seed 4 --out " + f).status == 0);
    CHECK(ksatlab("census --in " + f + " --cap 20").status == 2);
    fs::remove_all(dir);
}

TEST_CASE("usage errors exit with 2")
{
    CHECK(ksatlab("gen --k 3 --n 10 --m 5 --bogus").status == 2);
    CHECK(ksatlab("no-such-command").status == 2);
    CHECK(ksatlab("gen --k 3 --n 10 --m 5 --model nope").status == 2);
}

TEST_CASE("experiment output is deterministic")
{
    const std::string args = "experiment skew --n 12 --m 40 --trials 5 --seed 3 --threads 2 --format json";
    const Run a = ksatlab(args), b = ksatlab(args);
    REQUIRE(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("\"summary\"") != std::string::npos);
}

TEST_CASE("moments and saddle reports")
{
    const Run m = ksatlab("moments --k 10 --n 2000 --seed 1 --format json --grid 2000");
    CHECK(m.status == 0);
    const auto j = ksat::Json::parse(m.out);
    CHECK(j.contains("first_moment"));
    CHECK(j.contains("offdiag"));
    const Run s = ksatlab("saddle --k 3 --n 50 --r 3 --seed 1 --format json");
    REQUIRE(s.status == 0);
    const auto sj = ksat::Json::parse(s.out);
    CHECK(sj["ratio"].get<double>() == doctest::Approx(1).epsilon(0.1));
}
