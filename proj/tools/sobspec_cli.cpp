// sobspec: generate, verify and reproduce the Sobolev factorization chain.

#include "sobspec/app.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#ifndef SOBSPEC_GOLDEN_PATH
#define SOBSPEC_GOLDEN_PATH ""
#endif

int main(int argc, char** argv) {
    using namespace sobspec;
    RunConfig cfg;
    cfg.golden = SOBSPEC_GOLDEN_PATH;

    CLI::App app{"Sobolev-type orthogonal polynomials: matrix chain generator and verifier"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI configuration file");

    std::string format = "json";
    std::string lower, upper;
    auto env = [](CLI::Option* o, const char* name) { return o->envname(std::string("SOBSPEC_") + name); };
    env(app.add_option("--measure", cfg.measure, "laguerre or custom")->capture_default_str(), "MEASURE");
    env(app.add_option("--alpha", cfg.alpha, "Laguerre parameter, > -1")->capture_default_str(), "ALPHA");
    env(app.add_option("--c", cfg.c, "point mass location, outside the support")->capture_default_str(), "C");
    env(app.add_option("--M", cfg.M, "mass on f(c)g(c)")->capture_default_str(), "M");
    env(app.add_option("--N", cfg.N, "mass on f'(c)g'(c)")->capture_default_str(), "N");
    env(app.add_option("--size", cfg.size, "reported block size (>= 3)")->capture_default_str(), "SIZE");
    env(app.add_option("--precision", cfg.precision, "working precision in bits (>= 64)")->capture_default_str(),
        "PRECISION");
    env(app.add_option("--guard", cfg.guard, "extra truncation rows (>= 2)")->capture_default_str(), "GUARD");
    env(app.add_option("--out", cfg.out, "output directory")->capture_default_str(), "OUT");
    env(app.add_option("--format", format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}))
            ->capture_default_str(),
        "FORMAT");
    env(app.add_option("--tolerance", cfg.tolerance, "residual tolerance")->capture_default_str(), "TOLERANCE");
    env(app.add_option("--golden", cfg.golden, "golden fixture (reproduce-paper)")->capture_default_str(), "GOLDEN");
    app.add_option("--beta", cfg.beta, "custom measure: recurrence beta_0, beta_1, ...");
    app.add_option("--gamma", cfg.gamma, "custom measure: recurrence gamma_0, gamma_1, ... (gamma_0 ignored)");
    app.add_option("--mu0", cfg.mu0, "custom measure: total mass");
    app.add_option("--lower", lower, "custom measure: lower support bound");
    app.add_option("--upper", upper, "custom measure: upper support bound");

    std::map<CLI::App*, Command> commands;
    commands[app.add_subcommand("generate", "write matrices and scalar ledgers")->fallthrough()] = Command::generate;
    commands[app.add_subcommand("verify", "check the factorization identities")->fallthrough()] = Command::verify;
    commands[app.add_subcommand("reproduce-paper", "compare against the golden fixture")->fallthrough()] =
        Command::reproduce_paper;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_code::invalid_parameters;
    }

    for (auto& [sub, cmd] : commands)
        if (sub->parsed()) cfg.command = cmd;
    cfg.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
    if (!lower.empty()) cfg.lower = lower;
    if (!upper.empty()) cfg.upper = upper;
    return run(cfg, std::cout, std::cerr);
}
