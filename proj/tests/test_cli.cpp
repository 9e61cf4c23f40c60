#include "sobspec/app.hpp"
#include "sobspec/io.hpp"

#include "support.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifndef SOBSPEC_CLI_PATH
#error "SOBSPEC_CLI_PATH must point at the CLI binary"
#endif
#ifndef SOBSPEC_GOLDEN_PATH
#error "SOBSPEC_GOLDEN_PATH must point at the golden fixture"
#endif

using namespace sobspec;
using namespace sobspec::testing;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& tag) {
    auto p = fs::temp_directory_path() / ("sobspec_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int cli(const std::string& args, const std::string& env = {}) {
    std::string cmd = env + (env.empty() ? "" : " ") + "\"" SOBSPEC_CLI_PATH "\" " + args + " >/dev/null 2>&1";
    int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

class Io : public Precise {};

BandedMatrix<Real> sample_matrix() {
    BandedMatrix<Real> A("A", 5, 5, 1, 2, 4);
    for (std::size_t i = 0; i < 5; ++i) {
        auto [lo, hi] = A.row_range(i);
        for (std::size_t j = lo; j < hi; ++j) A.ref(i, j) = sqrt(Real(static_cast<long>(3 + i + 7 * j))) / 3;
    }
    return A;
}

TEST_F(Io, JsonRoundTrip) {
    auto A = sample_matrix();
    SquaredTable sq{{{0, 0}, {Rational(1, 3), 1}}, {{1, 0}, {Rational(7, 2), -1}}};
    std::string text = write_matrix_json(A, 256, sq);
    auto f = read_matrix_json(text);
    EXPECT_EQ(f.matrix.name(), "A");
    EXPECT_EQ(f.matrix.exact_size(), 4u);
    EXPECT_EQ(f.matrix.upper_bw(), 2u);
    EXPECT_EQ(f.squared.at({1, 0}).sign, -1);
    EXPECT_EQ(write_matrix_json(f.matrix, f.precision_bits, f.squared), text);
    EXPECT_LE(max_abs_diff(A, f.matrix, 5), Real("1e-74"));
}

TEST_F(Io, CsvRoundTrip) {
    auto A = sample_matrix();
    for (unsigned bits : {64u, 256u, 512u}) {
        std::string text = [&] {
            PrecisionScope p(bits);
            BandedMatrix<Real> B = A;
            return write_matrix_csv(B, bits);
        }();
        auto f = read_matrix_csv(text);
        EXPECT_EQ(f.precision_bits, bits);
        EXPECT_EQ(write_matrix_csv(f.matrix, f.precision_bits), text) << bits;
    }
}

TEST_F(Io, MalformedInputs) {
    EXPECT_THROW(read_matrix_json("{"), invalid_parameter);
    EXPECT_THROW(read_matrix_json(R"({"name":"A"})"), invalid_parameter);
    EXPECT_THROW(read_matrix_csv("i,j,value\n"), invalid_parameter);
    EXPECT_THROW(read_matrix_csv("# nrows=2 ncols=2 lower_bw=0 upper_bw=0 exact_size=2\ni,j,value\n0,x\n"),
                 invalid_parameter);
    EXPECT_THROW(read_matrix_csv("# nrows=2 ncols=2 lower_bw=0 upper_bw=0 exact_size=2\ni,j,value\n0,1,2\n"),
                 index_error);
}

TEST_F(Io, RationalLiterals) {
    EXPECT_EQ(parse_rational("-1"), -1);
    EXPECT_EQ(parse_rational("2.50"), Rational(5, 2));
    EXPECT_EQ(parse_rational("-3e-2"), Rational(-3, 100));
    EXPECT_EQ(parse_rational("7/3"), Rational(7, 3));
    EXPECT_THROW(parse_rational("abc"), invalid_parameter);
    EXPECT_THROW(parse_rational("1/0"), invalid_parameter);
    EXPECT_THROW(parse_rational("1e"), invalid_parameter);
    EXPECT_THROW(parse_real("x1"), invalid_parameter);
}

class App : public Precise {
protected:
    std::ostringstream out, err;
    RunConfig base(const fs::path& dir) const {
        RunConfig cfg;
        cfg.out = dir.string();
        cfg.size = 8;
        return cfg;
    }
};

TEST_F(App, GenerateWritesEveryMatrixWithExactSize) {
    auto dir = scratch("gen");
    ASSERT_EQ(run_generate(base(dir), out, err), exit_code::ok) << err.str();
    for (const char* name : {"J", "J1", "J2", "L", "L1", "Q", "R", "T", "H"}) {
        auto f = read_matrix_json(slurp(dir / (std::string(name) + ".json")));
        EXPECT_EQ(f.matrix.nrows(), 8u) << name;
        EXPECT_EQ(f.matrix.exact_size(), 8u) << name;
        EXPECT_FALSE(f.squared.empty()) << name;
    }
    auto H = read_matrix_json(slurp(dir / "H.json"));
    EXPECT_REL(H.matrix(0, 0), q(5, 2), tol());
    EXPECT_EQ(H.squared.at({0, 0}).square, Rational(25, 4));
    auto ledger = nlohmann::json::parse(slurp(dir / "ledger.json"));
    EXPECT_EQ(ledger["sequences"]["t"].size(), 8u);
    EXPECT_REL(Real(ledger["sequences"]["e"][0].get<std::string>()), Real(5), tol());
    fs::remove_all(dir);
}

TEST_F(App, GenerateIsDeterministic) {
    auto d1 = scratch("det1"), d2 = scratch("det2");
    for (auto fmt : {OutputFormat::json, OutputFormat::csv}) {
        auto c1 = base(d1), c2 = base(d2);
        c1.format = c2.format = fmt;
        ASSERT_EQ(run_generate(c1, out, err), 0);
        ASSERT_EQ(run_generate(c2, out, err), 0);
    }
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(d1)) {
        EXPECT_EQ(slurp(e.path()), slurp(d2 / e.path().filename())) << e.path();
        ++files;
    }
    EXPECT_EQ(files, 9u * 3 + 2);  // json, csv, squared csv per matrix plus two ledgers
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_F(App, GeneratedCsvRoundTrips) {
    auto dir = scratch("csv");
    auto cfg = base(dir);
    cfg.format = OutputFormat::csv;
    ASSERT_EQ(run_generate(cfg, out, err), 0);
    for (const char* name : {"J", "Q", "H"}) {
        std::string text = slurp(dir / (std::string(name) + ".csv"));
        auto f = read_matrix_csv(text);
        EXPECT_EQ(write_matrix_csv(f.matrix, f.precision_bits), text) << name;
    }
    fs::remove_all(dir);
}

TEST_F(App, GenerateWithoutMassGivesSquaredJacobi) {
    auto dir = scratch("nomass");
    auto cfg = base(dir);
    cfg.M = cfg.N = "0";
    ASSERT_EQ(run_generate(cfg, out, err), 0);
    auto H = read_matrix_json(slurp(dir / "H.json")).matrix;
    auto J = read_matrix_json(slurp(dir / "J.json")).matrix;
    auto A = J.plus_identity(Real(1));
    auto A2 = multiply(A, A);
    EXPECT_LE(relative_residual(H, A2, A2.exact_size()), tol());
    fs::remove_all(dir);
}

TEST_F(App, InvalidParameters) {
    auto dir = scratch("bad");
    auto cfg = base(dir);
    cfg.alpha = "-2";
    EXPECT_EQ(run_generate(cfg, out, err), exit_code::invalid_parameters);
    EXPECT_NE(err.str().find("alpha"), std::string::npos);
    cfg = base(dir);
    cfg.size = 2;
    EXPECT_EQ(run_generate(cfg, out, err), exit_code::invalid_parameters);
    cfg = base(dir);
    cfg.c = "3";
    EXPECT_EQ(run_verify(cfg, out, err), exit_code::invalid_parameters);
    cfg = base(dir);
    cfg.precision = 32;
    EXPECT_EQ(run_verify(cfg, out, err), exit_code::invalid_parameters);
    cfg = base(dir);
    cfg.guard = 1;
    EXPECT_EQ(run_verify(cfg, out, err), exit_code::invalid_parameters);
    fs::remove_all(dir);
}

TEST_F(App, NumericalFailures) {
    auto dir = scratch("num");
    auto cfg = base(dir);
    cfg.guard = 2;
    EXPECT_EQ(run_verify(cfg, out, err), exit_code::numerical_failure);
    // Legendre recurrence declared with a support that stops short of 1.
    cfg = base(dir);
    cfg.measure = "custom";
    cfg.mu0 = "2";
    for (long n = 0; n < 20; ++n) {
        cfg.beta.push_back("0");
        cfg.gamma.push_back(std::to_string(n * n) + "/" + std::to_string(4 * n * n - 1));
    }
    cfg.lower = "-1";
    cfg.upper = "1/2";
    cfg.c = "0.7";
    EXPECT_EQ(run_verify(cfg, out, err), exit_code::numerical_failure);
    fs::remove_all(dir);
}

TEST_F(App, VerifyWritesReport) {
    auto dir = scratch("verify");
    auto cfg = base(dir);
    cfg.size = 20;
    ASSERT_EQ(run_verify(cfg, out, err), exit_code::ok) << err.str();
    auto rep = nlohmann::json::parse(slurp(dir / "report.json"));
    EXPECT_TRUE(rep["pass"].get<bool>());
    EXPECT_EQ(rep["residuals"].size(), 8u);
    for (const auto& r : rep["residuals"]) EXPECT_LE(Real(r["value"].get<std::string>()), tol());
    fs::remove_all(dir);
}

TEST_F(App, VerifyExitReflectsTolerance) {
    auto dir = scratch("tol");
    auto cfg = base(dir);
    cfg.size = 40;
    cfg.precision = 64;
    EXPECT_EQ(run_verify(cfg, out, err), exit_code::verification_failure);
    EXPECT_TRUE(fs::exists(dir / "report.json"));
    EXPECT_FALSE(nlohmann::json::parse(slurp(dir / "report.json"))["pass"].get<bool>());
    cfg.tolerance = "1e-12";
    EXPECT_EQ(run_verify(cfg, out, err), exit_code::ok);
    fs::remove_all(dir);
}

TEST_F(App, ReproducePaper) {
    RunConfig cfg;
    cfg.command = Command::reproduce_paper;
    cfg.golden = SOBSPEC_GOLDEN_PATH;
    EXPECT_EQ(run(cfg, out, err), exit_code::ok) << out.str() << err.str();
    EXPECT_NE(out.str().find("J: oracle 36/36, float 36/36"), std::string::npos) << out.str();
    EXPECT_NE(out.str().find("J2sq: oracle 25/25, float 25/25"), std::string::npos);
    cfg.golden = "/nonexistent.json";
    EXPECT_EQ(run(cfg, out, err), exit_code::invalid_parameters);
}

TEST(Cli, ExitCodes) {
    auto dir = scratch("cli");
    const std::string out = " --out \"" + dir.string() + "\"";
    EXPECT_EQ(cli("--help"), 0);
    EXPECT_EQ(cli(""), exit_code::invalid_parameters);
    EXPECT_EQ(cli("generate --measure laguerre --alpha 0 --c -1 --M 1 --N 1 --size 8" + out), 0);
    EXPECT_TRUE(fs::exists(dir / "H.json"));
    EXPECT_EQ(cli("generate --alpha -2" + out), exit_code::invalid_parameters);
    EXPECT_EQ(cli("generate --format xml" + out), exit_code::invalid_parameters);
    EXPECT_EQ(cli("verify --size 20" + out), 0);
    EXPECT_EQ(cli("verify --size 12 --guard 2" + out), exit_code::numerical_failure);
    EXPECT_EQ(cli("verify --size 40 --precision 64" + out), exit_code::verification_failure);
    EXPECT_EQ(cli("reproduce-paper"), 0);
    EXPECT_EQ(cli("verify" + out, "SOBSPEC_SIZE=2"), exit_code::invalid_parameters);
    EXPECT_EQ(cli("verify" + out, "SOBSPEC_SIZE=10 SOBSPEC_TOLERANCE=1e-40"), 0);

    std::ofstream(dir / "bad.toml") << "size = [unterminated\n";
    EXPECT_EQ(cli("verify --config \"" + (dir / "bad.toml").string() + "\"" + out), exit_code::invalid_parameters);
    EXPECT_EQ(cli("verify --config /nonexistent.toml" + out), exit_code::invalid_parameters);
    std::ofstream(dir / "good.toml") << "size = 10\nM = \"2\"\nN = \"0\"\n";
    EXPECT_EQ(cli("verify --config \"" + (dir / "good.toml").string() + "\"" + out), 0);
    fs::remove_all(dir);
}

}  // namespace
