#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sdde/cli.hpp"

using namespace sdde;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("nonneg_sdde_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int counter;
};
int TempDir::counter = 0;

int run(const std::string& cmd, const std::string& spec, const CliFlags& flags,
        std::string* out_text = nullptr) {
    std::ostringstream out, err;
    int code = run_command(cmd, spec, flags, out, err);
    if (out_text) *out_text = out.str() + err.str();
    return code;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("spec parsing") {
    SUBCASE("valid delay-equation spec") {
        auto spec = parse_model_spec(
            R"({"kind":"sdde","lambda":1,"atoms":[[1,0.2]],)"
            R"("driver":{"gamma":{"shape":3,"rate":6}}})");
        CHECK(spec.kind == "sdde");
        REQUIRE(spec.measure.has_value());
        CHECK(spec.measure->lambda0() == 1.0);
        REQUIRE(spec.measure->atoms().size() == 1);
        CHECK(spec.measure->atoms()[0].second == 0.2);
        CHECK(mean_rate(spec.driver) == doctest::Approx(0.5));
    }
    SUBCASE("missing kind") {
        CHECK_THROWS_AS(parse_model_spec(R"({"lambda":1})"), SpecError);
    }
    SUBCASE("rational pair maps ascending coefficients") {
        auto spec = parse_model_spec(R"({"kind":"carma","P":[2,3,1],"Q":[1.5,1]})");
        REQUIRE(spec.carma.has_value());
        CHECK(spec.carma->p() == 2);
        CHECK(spec.carma->ar().coeff(0) == 2.0);
        CHECK(spec.carma->ar().coeff(1) == 3.0);
        CHECK(spec.carma->ma().coeff(0) == 1.5);
    }
    SUBCASE("unknown keys carry a json pointer") {
        try {
            parse_model_spec(R"({"kind":"sdde","lambda":1,"driver":{"gamma":)"
                             R"({"shape":3,"rate":6,"scale":2}}})");
            FAIL("expected a schema error");
        } catch (const SpecError& e) {
            CHECK(std::string(e.what()).find("/driver/gamma") != std::string::npos);
            CHECK(std::string(e.what()).find("scale") != std::string::npos);
        }
        CHECK_THROWS_AS(parse_model_spec(R"({"kind":"sdde","lambda":1,"foo":2})"), SpecError);
    }
    SUBCASE("invalid json") {
        CHECK_THROWS_AS(parse_model_spec("{"), SpecError);
    }
    SUBCASE("carma payload variants are mutually exclusive") {
        CHECK_THROWS_AS(
            parse_model_spec(R"({"kind":"carma","P":[2,3,1],"Q":[1.5,1],"ar_roots":[-1]})"),
            SpecError);
        CHECK_THROWS_AS(parse_model_spec(R"({"kind":"carma"})"), SpecError);
    }
    SUBCASE("normalized form round-trips") {
        for (const std::string& text :
             {std::string(R"({"kind":"sdde","lambda":1,"atoms":[[1,0.2]],)"
                          R"("driver":{"compound_poisson":{"rate":2,"jump":)"
                          R"({"exponential":{"mean":0.5}}}},"seed":9})"),
              std::string(R"({"kind":"carma","ar_roots":[-1,-2],"ma_roots":[-1.5],)"
                          R"("driver":{"inverse_gaussian":{"mean":1,"shape":2}}})"),
              std::string(R"({"kind":"msdde","entries":[)"
                          R"([{"lambda":2},{"lambda":-1}],)"
                          R"([{"lambda":-1},{"lambda":2,"atoms":[[0.5,0.2]]}]]})")}) {
            auto spec = parse_model_spec(text);
            auto again = parse_model_spec(spec.normalized.dump());
            CHECK(again.normalized == spec.normalized);
        }
    }
}

TEST_CASE("check command exit codes and verdict bundle") {
    TempDir dir;
    CliFlags flags;
    flags.out = dir.path.string();

    SUBCASE("non-negative regime") {
        std::string text;
        int code = run("check", R"({"kind":"sdde","lambda":1,"atoms":[[1,0.2]]})", flags, &text);
        CHECK(code == 0);
        CHECK(text.find("non-negative") != std::string::npos);
        auto bundle = nlohmann::json::parse(slurp(dir.path / "verdict.json"));
        CHECK(bundle["schema"] == 1);
        CHECK(bundle["verdict"] == "non-negative");
        CHECK(bundle["mass_check"] == true);
        CHECK(bundle["existence"]["verdict"] == true);
    }
    SUBCASE("negative regime reports the monotonicity failure") {
        std::string text;
        int code = run("check", R"({"kind":"sdde","lambda":1,"atoms":[[1,-0.8]]})", flags, &text);
        CHECK(code == 1);
        auto bundle = nlohmann::json::parse(slurp(dir.path / "verdict.json"));
        CHECK(bundle["verdict"] == "negative");
        CHECK(bundle["complete_monotonicity"]["failure"]["n"] == 2);
        double v = bundle["complete_monotonicity"]["failure"]["scaled_value"].get<double>();
        CHECK(v == doctest::Approx(-1.36).epsilon(1e-9));
    }
    SUBCASE("non-stationary model") {
        int code = run("check", R"({"kind":"sdde","lambda":1,"atoms":[[1,1.5]]})", flags);
        CHECK(code == 1);
        auto bundle = nlohmann::json::parse(slurp(dir.path / "verdict.json"));
        CHECK(bundle["verdict"] == "non-stationary");
    }
    SUBCASE("invalid input") {
        CHECK(run("check", "not json", flags) == 2);
        CHECK(run("bogus", R"({"kind":"sdde","lambda":1})", flags) == 2);
        CHECK(run("check", R"({"kind":"msdde","entries":[[{"lambda":1},{"lambda":0}],)"
                           R"([{"lambda":0},{"lambda":1}]]})",
                  flags) == 2);
    }
    SUBCASE("carma verdict") {
        int code = run("check", R"({"kind":"carma","P":[2,3,1],"Q":[1.5,1]})", flags);
        CHECK(code == 0);
        auto bundle = nlohmann::json::parse(slurp(dir.path / "verdict.json"));
        CHECK(bundle["verdict"] == "non-negative");
        CHECK(bundle["arms"]["ordering"] == true);
    }
}

TEST_CASE("kernel and simulate outputs are deterministic") {
    TempDir a, b;
    std::string spec = R"({"kind":"sdde","lambda":1,"atoms":[[1,0.2]],)"
                       R"("driver":{"gamma":{"shape":3,"rate":6}},"T":20,"seed":5})";
    CliFlags fa, fb;
    fa.out = a.path.string();
    fb.out = b.path.string();
    CHECK(run("kernel", spec, fa) == 0);
    CHECK(run("kernel", spec, fb) == 0);
    CHECK(slurp(a.path / "kernel.csv") == slurp(b.path / "kernel.csv"));
    CHECK(run("simulate", spec, fa) == 0);
    CHECK(run("simulate", spec, fb) == 0);
    std::string pa = slurp(a.path / "path.csv");
    CHECK(pa == slurp(b.path / "path.csv"));
    CHECK(pa.substr(0, 4) == "t,x\n");

    // a different seed changes the path
    fb.seed = 6;
    CHECK(run("simulate", spec, fb) == 0);
    CHECK(pa != slurp(b.path / "path.csv"));
}

TEST_CASE("region command emits the pinned header") {
    TempDir dir;
    CliFlags flags;
    flags.out = dir.path.string();
    std::string spec = R"({"kind":"carma","region":)"
                       R"({"ar_roots":[-1,-4,-4],"beta_min":-3,"beta_max":-2}})";
    CHECK(run("region", spec, flags) == 0);
    std::string csv = slurp(dir.path / "region.csv");
    CHECK(csv.substr(0, csv.find('\n')) == "beta,ball_tsai,cor34,thm31");
    CHECK(csv.find("\n-3,1,") != std::string::npos);

    // omitted bounds fall back to the default sweep [-4, -0.01]
    CHECK(run("region", R"({"kind":"carma","region":{"ar_roots":[-1,-4,-4]}})", flags) == 0);
    csv = slurp(dir.path / "region.csv");
    int lines = 0;
    for (char c : csv) lines += (c == '\n');
    CHECK(lines == 401);
    CHECK(csv.substr(0, csv.find('\n')) == "beta,ball_tsai,cor34,thm31");
}

TEST_CASE("multivariate check command") {
    TempDir dir;
    CliFlags flags;
    flags.out = dir.path.string();
    std::string good = R"({"kind":"msdde","entries":[)"
                       R"([{"lambda":2,"atoms":[[1,0.1]]},{"lambda":-1}],)"
                       R"([{"lambda":-1},{"lambda":2}]]})";
    CHECK(run("mcheck", good, flags) == 0);
    auto bundle = nlohmann::json::parse(slurp(dir.path / "verdict.json"));
    CHECK(bundle["verdict"] == "non-negative");
    CHECK(bundle["m_matrix"]["is_m"] == true);

    std::string bad = R"({"kind":"msdde","entries":[)"
                      R"([{"lambda":2},{"lambda":-1,"atoms":[[1,-0.3]]}],)"
                      R"([{"lambda":-1},{"lambda":2}]]})";
    CHECK(run("mcheck", bad, flags) == 1);
    CHECK(run("mcheck", R"({"kind":"sdde","lambda":1})", flags) == 2);
}

TEST_CASE("flags override spec fields") {
    TempDir dir;
    CliFlags flags;
    flags.out = dir.path.string();
    flags.grid_step = 0.5;
    std::string spec = R"({"kind":"carma","region":)"
                       R"({"ar_roots":[-1,-4,-4],"beta_min":-3,"beta_max":-1}})";
    CHECK(run("region", spec, flags) == 0);
    std::string csv = slurp(dir.path / "region.csv");
    int lines = 0;
    for (char c : csv) lines += (c == '\n');
    CHECK(lines == 6);  // header plus five rows at the overridden step
}

}  // TEST_SUITE
