#ifndef SOBSPEC_APP_HPP
#define SOBSPEC_APP_HPP

// Command implementations behind the sobspec CLI. Each run_* returns the
// process exit status and writes diagnostics to `err`.

#include "sobspec/errors.hpp"
#include "sobspec/golden.hpp"
#include "sobspec/io.hpp"
#include "sobspec/matrix_factory.hpp"
#include "sobspec/precision.hpp"
#include "sobspec/rational_oracle.hpp"
#include "sobspec/sobolev.hpp"
#include "sobspec/spectral_core.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace sobspec {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int invalid_parameters = 2;
inline constexpr int numerical_failure = 3;
inline constexpr int verification_failure = 4;
}  // namespace exit_code

enum class OutputFormat { json, csv };
enum class Command { generate, verify, reproduce_paper };

struct RunConfig {
    Command command = Command::generate;
    std::string measure = "laguerre";
    std::string alpha = "0";
    std::string c = "-1";
    std::string M = "1";
    std::string N = "1";
    // custom measure only
    std::vector<std::string> beta, gamma;
    std::string mu0;
    std::optional<std::string> lower, upper;

    std::size_t size = 20;
    unsigned precision = default_precision_bits;
    std::size_t guard = default_guard;
    OutputFormat format = OutputFormat::json;
    std::string tolerance = "1e-30";
    std::string out = ".";
    std::string golden;

    void validate() const {
        if (size < 3) throw invalid_parameter("size must be at least 3");
        if (precision < 64) throw invalid_parameter("precision must be at least 64 bits");
        if (guard < 2) throw invalid_parameter("guard must be at least 2");
        if (measure != "laguerre" && measure != "custom")
            throw invalid_parameter("measure must be 'laguerre' or 'custom'");
    }
};

/// Exact value of a decimal ("-1.25", "3e-2") or fraction ("7/3") literal.
inline Rational parse_rational(const std::string& s) {
    auto bad = [&]() { return invalid_parameter("not a number: '" + s + "'"); };
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rational p = parse_rational(s.substr(0, slash));
        Rational q = parse_rational(s.substr(slash + 1));
        if (q == 0) throw bad();
        return p / q;
    }
    std::size_t k = 0;
    bool neg = false;
    if (k < s.size() && (s[k] == '+' || s[k] == '-')) neg = s[k++] == '-';
    std::string digits;
    long scale = 0;
    bool dot = false, any = false;
    for (; k < s.size() && s[k] != 'e' && s[k] != 'E'; ++k) {
        if (s[k] == '.' && !dot) {
            dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(s[k]))) {
            digits += s[k];
            any = true;
            if (dot) --scale;
        } else {
            throw bad();
        }
    }
    if (!any) throw bad();
    if (k < s.size()) {
        try {
            std::size_t used = 0;
            scale += std::stol(s.substr(k + 1), &used);
            if (used != s.size() - k - 1) throw bad();
        } catch (const std::logic_error&) {
            throw bad();
        }
    }
    if (scale > 10000 || scale < -10000) throw bad();
    Rational v{BigInt(digits)};
    BigInt ten = pow(BigInt(10), static_cast<unsigned>(scale < 0 ? -scale : scale));
    v = scale < 0 ? Rational(v / ten) : Rational(v * ten);
    return neg ? Rational(-v) : v;
}

inline Real parse_real(const std::string& s) {
    if (s.find('/') != std::string::npos) return from_rational<Real>(parse_rational(s));
    try {
        return Real(s);
    } catch (const std::runtime_error&) {
        throw invalid_parameter("not a number: '" + s + "'");
    }
}

/// Float spec of the config at the active precision.
inline SobolevSpec<Real> build_spec(const RunConfig& cfg) {
    if (cfg.measure == "laguerre")
        return SobolevSpec<Real>(MeasureSpec<Real>::laguerre(parse_real(cfg.alpha)), parse_real(cfg.c),
                                 parse_real(cfg.M), parse_real(cfg.N));
    std::vector<Real> beta, gamma;
    for (const auto& b : cfg.beta) beta.push_back(parse_real(b));
    for (const auto& g : cfg.gamma) gamma.push_back(parse_real(g));
    if (cfg.mu0.empty()) throw invalid_parameter("custom measure requires mu0");
    if (beta.size() < cfg.size + cfg.guard + 2)
        throw invalid_parameter("custom measure: need at least size + guard + 2 = " +
                                std::to_string(cfg.size + cfg.guard + 2) + " recurrence coefficients");
    Support<Real> sup;
    if (cfg.lower) sup.lower = parse_real(*cfg.lower);
    if (cfg.upper) sup.upper = parse_real(*cfg.upper);
    if (!sup.lower && !sup.upper) throw invalid_parameter("custom measure requires a support bound");
    return SobolevSpec<Real>(MeasureSpec<Real>::custom(beta, gamma, parse_real(cfg.mu0), sup), parse_real(cfg.c),
                             parse_real(cfg.M), parse_real(cfg.N));
}

/// Exact counterpart of the config when the oracle can represent it:
/// integer alpha >= 0, or a custom measure with rational coefficients.
inline std::optional<oracle::ExactSpec> exact_spec(const RunConfig& cfg, const SobolevSpec<Real>& spec) {
    try {
        Rational c = parse_rational(cfg.c), M = parse_rational(cfg.M), N = parse_rational(cfg.N);
        int s = side_sign(side_for(spec.base.support(), spec.c));
        if (cfg.measure == "laguerre") {
            Rational a = parse_rational(cfg.alpha);
            if (denominator(a) != 1 || a < 0) return std::nullopt;
            auto e = oracle::ExactSpec::laguerre(numerator(a).convert_to<long>(), c, M, N);
            e.side_sign = s;
            return e;
        }
        std::vector<Rational> beta, gamma;
        for (const auto& b : cfg.beta) beta.push_back(parse_rational(b));
        for (const auto& g : cfg.gamma) gamma.push_back(parse_rational(g));
        Rational mu0 = parse_rational(cfg.mu0);
        gamma[0] = 0;
        oracle::ExactSpec e;
        e.moments = [beta, gamma, mu0](std::size_t count) {
            return oracle::moments_from_recurrence(beta, gamma, mu0, count);
        };
        e.c = c;
        e.M = M;
        e.N = N;
        e.side_sign = s;
        return e;
    } catch (const invalid_parameter&) {
        return std::nullopt;
    }
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw invalid_parameter("cannot write " + p.string());
    out << text;
    if (!out) throw invalid_parameter("write failed: " + p.string());
}

namespace detail {

inline nlohmann::json decimals(std::size_t n, unsigned digits, const std::function<Real(std::size_t)>& f) {
    auto a = nlohmann::json::array();
    for (std::size_t k = 0; k < n; ++k) a.push_back(to_decimal(f(k), digits));
    return a;
}

inline std::string json_config(const RunConfig& cfg) {
    nlohmann::json j;
    j["measure"] = cfg.measure;
    if (cfg.measure == "laguerre") j["alpha"] = cfg.alpha;
    j["c"] = cfg.c;
    j["M"] = cfg.M;
    j["N"] = cfg.N;
    j["size"] = cfg.size;
    j["guard"] = cfg.guard;
    j["precision_bits"] = cfg.precision;
    return j.dump();
}

}  // namespace detail

/// Scalar sequences of the construction for n < size, as named columns.
inline std::vector<std::pair<std::string, std::function<Real(std::size_t)>>> ledger_columns(
    const RecurrenceTable<Real>& rec, const SobolevLedger<Real>& led) {
    const auto& ch = led.christoffel();
    return {
        {"beta", [&](std::size_t n) { return rec.beta(n); }},
        {"gamma", [&](std::size_t n) { return rec.gamma(n); }},
        {"norm_sq", [&](std::size_t n) { return rec.norm_sq(n); }},
        {"K_cc", [&](std::size_t n) { return ch.kernel_cc(n); }},
        {"d", [&](std::size_t n) { return ch.d(n); }},
        {"e", [&](std::size_t n) { return ch.e(n); }},
        {"r2", [&](std::size_t n) { return ch.r2(n); }},
        {"norm2_sq", [&](std::size_t n) { return ch.norm2_sq(n); }},
        {"kappa", [&](std::size_t n) { return ch.kappa(n); }},
        {"tau", [&](std::size_t n) { return ch.tau(n); }},
        {"S_c", [&](std::size_t n) { return led.Sc(n); }},
        {"S_prime_c", [&](std::size_t n) { return led.Sdc(n); }},
        {"normS_sq", [&](std::size_t n) { return led.normS_sq(n); }},
        {"t", [&](std::size_t n) { return led.t(n); }},
        {"gamma_nn", [&](std::size_t n) { return led.gamma_nn(n); }},
        {"gamma_n1", [&](std::size_t n) { return led.gamma_n1(n); }},
        {"gamma_n2", [&](std::size_t n) { return led.gamma_n2(n); }},
        {"a", [&](std::size_t n) { return led.a(n); }},
        {"b", [&](std::size_t n) { return led.b(n); }},
        {"c", [&](std::size_t n) { return led.cdiag(n); }},
    };
}

/// Runs `body` and maps library errors to exit codes.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const invalid_parameter& e) {
        err << "error: invalid parameter: " << e.what() << "\n";
        return exit_code::invalid_parameters;
    } catch (const index_error& e) {
        err << "error: invalid parameter: " << e.what() << "\n";
        return exit_code::invalid_parameters;
    } catch (const domain_error& e) {
        err << "error: invalid parameter: " << e.what() << "\n";
        return exit_code::invalid_parameters;
    } catch (const not_positive_definite& e) {
        err << "error: not positive definite: " << e.what() << "\n";
        return exit_code::numerical_failure;
    } catch (const internal_consistency& e) {
        err << "error: " << e.what() << " (increase --guard)\n";
        return exit_code::numerical_failure;
    } catch (const error& e) {
        err << "error: numerical failure: " << e.what() << "\n";
        return exit_code::numerical_failure;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::invalid_parameters;
    }
}

inline int run_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        cfg.validate();
        PrecisionScope ps(cfg.precision);
        auto spec = build_spec(cfg);
        auto chain = build_chain(spec, cfg.size, cfg.guard);
        const std::size_t n = cfg.size + cfg.guard;
        auto rec = spec.base.recurrence(n + 2);
        SobolevLedger<Real> led(rec, spec, n);

        std::optional<oracle::ExactPipeline> pipe;
        if (auto es = exact_spec(cfg, spec)) {
            std::size_t degree = std::min(cfg.size - 1, oracle::default_degree_cap);
            pipe.emplace(*es, degree);
        }

        std::filesystem::path dir(cfg.out);
        std::filesystem::create_directories(dir);
        const std::vector<std::string> names{"J", "J1", "J2", "L", "L1", "Q", "R", "T", "H"};
        for (const auto& name : names) {
            auto A = chain_matrix(chain, name).leading(cfg.size, cfg.size);
            A.rename(name);
            SquaredTable sq;
            if (pipe)
                for (std::size_t i = 0; i <= pipe->degree(); ++i) {
                    auto [lo, hi] = A.row_range(i);
                    for (std::size_t j = lo; j < std::min(hi, pipe->degree() + 1); ++j) sq[{i, j}] = pipe->entry(name, i, j);
                }
            if (cfg.format == OutputFormat::json) {
                write_text(dir / (name + ".json"), write_matrix_json(A, cfg.precision, sq));
            } else {
                write_text(dir / (name + ".csv"), write_matrix_csv(A, cfg.precision));
                if (!sq.empty()) write_text(dir / (name + ".squared.csv"), write_squared_csv(sq));
            }
        }

        const unsigned digits = roundtrip_digits(cfg.precision);
        auto cols = ledger_columns(rec, led);
        if (cfg.format == OutputFormat::json) {
            nlohmann::json j;
            j["size"] = cfg.size;
            j["precision_bits"] = cfg.precision;
            for (const auto& [key, f] : cols) j["sequences"][key] = detail::decimals(cfg.size, digits, f);
            write_text(dir / "ledger.json", j.dump(1) + "\n");
        } else {
            std::string text = "n";
            for (const auto& col : cols) text += "," + col.first;
            text += "\n";
            for (std::size_t k = 0; k < cfg.size; ++k) {
                text += std::to_string(k);
                for (const auto& col : cols) text += "," + to_decimal(col.second(k), digits);
                text += "\n";
            }
            write_text(dir / "ledger.csv", text);
        }
        out << "wrote " << names.size() << " matrices and ledger to " << dir.string() << "\n";
        return exit_code::ok;
    });
}

inline int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        cfg.validate();
        PrecisionScope ps(cfg.precision);
        Real tol = parse_real(cfg.tolerance);
        if (!(tol > 0)) throw invalid_parameter("tolerance must be positive");
        auto spec = build_spec(cfg);
        auto chain = build_chain(spec, cfg.size, cfg.guard);
        auto rep = verify_identities(chain);
        Real qqt = qqt_defect(chain, std::min<std::size_t>(5, cfg.size));
        const bool pass = rep.passes(tol);

        nlohmann::json j;
        j["config"] = nlohmann::json::parse(detail::json_config(cfg));
        j["block"] = rep.block;
        j["tolerance"] = cfg.tolerance;
        for (const auto& r : rep.residuals)
            j["residuals"].push_back(
                {{"name", r.name}, {"identity", r.identity}, {"value", to_decimal(r.value, 6)}, {"pass", r.value <= tol}});
        j["qqt_defect_5x5"] = to_decimal(qqt, 6);
        j["pass"] = pass;
        std::filesystem::path dir(cfg.out);
        std::filesystem::create_directories(dir);
        write_text(dir / "report.json", j.dump(1) + "\n");

        for (const auto& r : rep.residuals)
            out << (r.value <= tol ? "PASS " : "FAIL ") << r.name << " " << to_decimal(r.value, 3) << "\n";
        out << "QQ^T - I (5x5, diagnostic) " << to_decimal(qqt, 3) << "\n";
        if (!pass) {
            err << "verification failed: max residual " << to_decimal(rep.max(), 3) << " exceeds " << cfg.tolerance
                << "\n";
            return exit_code::verification_failure;
        }
        return exit_code::ok;
    });
}

/// Compares the fixture against the oracle (exactly) and the float chain
/// (to `tolerance`) for alpha = 0, c = -1, M = N = 1.
inline int run_reproduce_paper(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        if (cfg.precision < 64) throw invalid_parameter("precision must be at least 64 bits");
        if (cfg.golden.empty()) throw invalid_parameter("no golden fixture path given");
        PrecisionScope ps(cfg.precision);
        Real tol = parse_real(cfg.tolerance);
        auto golden = load_golden(cfg.golden);
        SobolevSpec<Real> spec(MeasureSpec<Real>::laguerre(Real(0)), Real(-1), Real(1), Real(1));
        auto chain = build_chain(spec, 20, default_guard);
        oracle::ExactPipeline pipe(oracle::ExactSpec::laguerre(0, Rational(-1), Rational(1), Rational(1)), 6);
        bool all = true;
        for (const auto& [name, entries] : golden.matrices) {
            auto f = squared_entry_compare(chain_matrix(chain, name), entries, tol, name);
            auto o = oracle_entry_compare(pipe, name, entries);
            all = all && f.all_pass() && o.all_pass();
            out << name << ": oracle " << o.passed << "/" << o.total() << ", float " << f.passed << "/" << f.total()
                << "\n";
            for (const auto& v : o.verdicts)
                if (!v.pass) out << "  oracle mismatch at (" << v.i << "," << v.j << ")\n";
            for (const auto& v : f.verdicts)
                if (!v.pass)
                    out << "  float mismatch at (" << v.i << "," << v.j << "): rel " << to_decimal(v.rel_error, 3)
                        << ", sign " << v.computed_sign << " expected " << v.expected_sign << "\n";
        }
        for (const auto& e : golden.errata)
            out << "note: " << e.matrix << "(" << e.i << "," << e.j << ") printed with sign " << e.printed_sign
                << ", fixture uses " << e.sign << ": " << e.reason << "\n";
        return all ? exit_code::ok : exit_code::verification_failure;
    });
}

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    switch (cfg.command) {
        case Command::generate: return run_generate(cfg, out, err);
        case Command::verify: return run_verify(cfg, out, err);
        case Command::reproduce_paper: return run_reproduce_paper(cfg, out, err);
    }
    return exit_code::invalid_parameters;
}

}  // namespace sobspec

#endif  // SOBSPEC_APP_HPP
