#ifndef SOBSPEC_GOLDEN_HPP
#define SOBSPEC_GOLDEN_HPP

// Squared-rational reference entries and their comparison against computed
// matrices. An entry x is stored as (x^2, sign(x)), which keeps every value
// of the form q * sqrt(r) exact.

#include "sobspec/banded_matrix.hpp"
#include "sobspec/errors.hpp"
#include "sobspec/matrix_factory.hpp"
#include "sobspec/precision.hpp"
#include "sobspec/rational_oracle.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace sobspec {

struct GoldenEntry {
    std::size_t i = 0, j = 0;
    oracle::SquaredEntry value;
};

struct GoldenErratum {
    std::string matrix;
    std::size_t i = 0, j = 0;
    int printed_sign = 0;
    int sign = 0;
    std::string reason;
};

struct GoldenFixture {
    nlohmann::json configuration;
    std::map<std::string, std::vector<GoldenEntry>> matrices;
    std::vector<GoldenErratum> errata;
};

inline GoldenFixture parse_golden(const nlohmann::json& doc) {
    GoldenFixture g;
    try {
        g.configuration = doc.at("configuration");
        for (const auto& [name, rows] : doc.at("matrices").items()) {
            auto& out = g.matrices[name];
            for (const auto& r : rows) {
                GoldenEntry e;
                e.i = r.at(0).get<std::size_t>();
                e.j = r.at(1).get<std::size_t>();
                e.value.square = Rational(BigInt(r.at(2).get<std::string>()), BigInt(r.at(3).get<std::string>()));
                e.value.sign = r.at(4).get<int>();
                out.push_back(e);
            }
        }
        if (doc.contains("errata"))
            for (const auto& r : doc.at("errata"))
                g.errata.push_back({r.at("matrix").get<std::string>(), r.at("i").get<std::size_t>(),
                                    r.at("j").get<std::size_t>(), r.at("printed_sign").get<int>(),
                                    r.at("sign").get<int>(), r.at("reason").get<std::string>()});
    } catch (const nlohmann::json::exception& ex) {
        throw invalid_parameter(std::string("golden fixture: ") + ex.what());
    }
    return g;
}

inline GoldenFixture load_golden(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_parameter("golden fixture: cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& ex) {
        throw invalid_parameter("golden fixture " + path + ": " + ex.what());
    }
    return parse_golden(doc);
}

template <class T = Real>
struct EntryVerdict {
    std::size_t i = 0, j = 0;
    bool pass = false;
    T rel_error{0};
    int expected_sign = 0;
    int computed_sign = 0;
};

template <class T = Real>
struct CompareReport {
    std::string matrix;
    std::size_t passed = 0;
    std::vector<EntryVerdict<T>> verdicts;

    std::size_t total() const { return verdicts.size(); }
    bool all_pass() const { return passed == verdicts.size(); }
};

/// Float entries against squared rationals: |x^2 - q| <= tol * q and
/// sign(x) == sign. A zero reference requires |x| <= tol.
template <class T>
CompareReport<T> squared_entry_compare(const BandedMatrix<T>& A, const std::vector<GoldenEntry>& ref, const T& tol,
                                       std::string label = {}) {
    using std::abs;
    CompareReport<T> rep;
    rep.matrix = label.empty() ? A.name() : std::move(label);
    for (const auto& g : ref) {
        EntryVerdict<T> v;
        v.i = g.i;
        v.j = g.j;
        v.expected_sign = g.value.sign;
        if (g.i >= A.nrows() || g.j >= A.ncols()) {
            rep.verdicts.push_back(v);
            continue;
        }
        const T x = A(g.i, g.j);
        if (g.value.square == 0) {
            v.rel_error = abs(x);
            v.computed_sign = (v.rel_error <= tol) ? 0 : (x > 0 ? 1 : -1);
        } else {
            const T q = from_rational<T>(g.value.square);
            v.rel_error = T(abs(x * x - q) / q);
            v.computed_sign = x > 0 ? 1 : (x < 0 ? -1 : 0);
        }
        v.pass = v.rel_error <= tol && v.computed_sign == v.expected_sign;
        if (v.pass) ++rep.passed;
        rep.verdicts.push_back(v);
    }
    return rep;
}

/// Oracle entries against squared rationals: exact equality.
inline CompareReport<Real> oracle_entry_compare(const oracle::ExactPipeline& pipe, const std::string& name,
                                                const std::vector<GoldenEntry>& ref) {
    CompareReport<Real> rep;
    rep.matrix = name;
    for (const auto& g : ref) {
        EntryVerdict<Real> v;
        v.i = g.i;
        v.j = g.j;
        v.expected_sign = g.value.sign;
        auto e = pipe.entry(name, g.i, g.j);
        v.computed_sign = e.sign;
        v.pass = (e == g.value);
        if (!v.pass) v.rel_error = 1;
        if (v.pass) ++rep.passed;
        rep.verdicts.push_back(v);
    }
    return rep;
}

/// Float matrix of the chain matching a fixture name; "J2sq" is (J2 - cI)^2.
template <class T>
BandedMatrix<T> chain_matrix(const FactorizationChain<T>& ch, const std::string& name) {
    if (name == "J") return ch.J;
    if (name == "J1") return ch.J1;
    if (name == "J2") return ch.J2;
    if (name == "L") return ch.L;
    if (name == "L1") return ch.L1;
    if (name == "Q") return ch.Q;
    if (name == "R") return ch.R;
    if (name == "T") return ch.Tm;
    if (name == "H") return ch.H;
    if (name == "J2sq") {
        auto B = ch.shifted_J2();
        return multiply(B, B, "J2sq");
    }
    throw invalid_parameter("unknown matrix " + name);
}

}  // namespace sobspec

#endif  // SOBSPEC_GOLDEN_HPP
