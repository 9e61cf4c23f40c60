#ifndef SOBSPEC_IO_HPP
#define SOBSPEC_IO_HPP

// JSON and CSV serialization of banded matrices. Values are scientific
// decimals with floor((bits - 1) * log10 2) significant digits, the largest
// count for which text -> binary -> text reproduces the text at `bits`.

#include "sobspec/banded_matrix.hpp"
#include "sobspec/errors.hpp"
#include "sobspec/golden.hpp"
#include "sobspec/precision.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace sobspec {

inline unsigned roundtrip_digits(unsigned bits) {
    return static_cast<unsigned>(std::floor((bits - 1) * 0.30102999566398120));
}

/// Squared-rational side data for a matrix, keyed by (i, j).
using SquaredTable = std::map<std::pair<std::size_t, std::size_t>, oracle::SquaredEntry>;

struct MatrixFile {
    BandedMatrix<Real> matrix;
    unsigned precision_bits = default_precision_bits;
    SquaredTable squared;
};

inline nlohmann::json matrix_to_json(const BandedMatrix<Real>& A, unsigned bits, const SquaredTable& squared = {}) {
    const unsigned digits = roundtrip_digits(bits);
    nlohmann::json doc;
    doc["name"] = A.name();
    doc["nrows"] = A.nrows();
    doc["ncols"] = A.ncols();
    doc["lower_bw"] = A.lower_bw();
    doc["upper_bw"] = A.upper_bw();
    doc["exact_size"] = A.exact_size();
    doc["precision_bits"] = bits;
    auto entries = nlohmann::json::array();
    for (std::size_t i = 0; i < A.nrows(); ++i) {
        auto [lo, hi] = A.row_range(i);
        for (std::size_t j = lo; j < hi; ++j) entries.push_back({i, j, to_decimal(A(i, j), digits)});
    }
    doc["entries"] = std::move(entries);
    if (!squared.empty()) {
        auto sq = nlohmann::json::array();
        for (const auto& [ij, e] : squared)
            sq.push_back({ij.first, ij.second, numerator(e.square).str(), denominator(e.square).str(), e.sign});
        doc["squared"] = std::move(sq);
    }
    return doc;
}

inline std::string write_matrix_json(const BandedMatrix<Real>& A, unsigned bits, const SquaredTable& squared = {}) {
    return matrix_to_json(A, bits, squared).dump(1) + "\n";
}

inline MatrixFile read_matrix_json(const std::string& text) {
    MatrixFile f;
    try {
        auto doc = nlohmann::json::parse(text);
        f.precision_bits = doc.value("precision_bits", default_precision_bits);
        PrecisionScope ps(f.precision_bits);
        f.matrix = BandedMatrix<Real>(doc.at("name").get<std::string>(), doc.at("nrows").get<std::size_t>(),
                                      doc.at("ncols").get<std::size_t>(), doc.at("lower_bw").get<std::size_t>(),
                                      doc.at("upper_bw").get<std::size_t>(), doc.at("exact_size").get<std::size_t>());
        for (const auto& e : doc.at("entries"))
            f.matrix.ref(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()) = Real(e.at(2).get<std::string>());
        if (doc.contains("squared"))
            for (const auto& e : doc.at("squared")) {
                oracle::SquaredEntry s;
                s.square = Rational(BigInt(e.at(2).get<std::string>()), BigInt(e.at(3).get<std::string>()));
                s.sign = e.at(4).get<int>();
                f.squared[{e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()}] = s;
            }
    } catch (const nlohmann::json::exception& ex) {
        throw invalid_parameter(std::string("matrix json: ") + ex.what());
    } catch (const std::runtime_error& ex) {
        throw invalid_parameter(std::string("matrix json: ") + ex.what());
    }
    return f;
}

/// CSV: a `# key=value ...` metadata line, an `i,j,value` header, then one
/// row per band entry. Squared forms go to a separate table (see below).
inline std::string write_matrix_csv(const BandedMatrix<Real>& A, unsigned bits) {
    const unsigned digits = roundtrip_digits(bits);
    std::ostringstream out;
    out << "# name=" << A.name() << " nrows=" << A.nrows() << " ncols=" << A.ncols() << " lower_bw=" << A.lower_bw()
        << " upper_bw=" << A.upper_bw() << " exact_size=" << A.exact_size() << " precision_bits=" << bits << "\n";
    out << "i,j,value\n";
    for (std::size_t i = 0; i < A.nrows(); ++i) {
        auto [lo, hi] = A.row_range(i);
        for (std::size_t j = lo; j < hi; ++j) out << i << ',' << j << ',' << to_decimal(A(i, j), digits) << '\n';
    }
    return out.str();
}

/// `i,j,num,den,sign` rows.
inline std::string write_squared_csv(const SquaredTable& squared) {
    std::ostringstream out;
    out << "i,j,num,den,sign\n";
    for (const auto& [ij, e] : squared)
        out << ij.first << ',' << ij.second << ',' << numerator(e.square) << ',' << denominator(e.square) << ','
            << e.sign << '\n';
    return out.str();
}

inline MatrixFile read_matrix_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw invalid_parameter("matrix csv: missing metadata line");
    std::map<std::string, std::string> meta;
    {
        std::istringstream ls(line.substr(2));
        std::string kv;
        while (ls >> kv) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw invalid_parameter("matrix csv: bad metadata token " + kv);
            meta[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
    }
    auto num = [&](const char* key) -> std::size_t {
        auto it = meta.find(key);
        if (it == meta.end()) throw invalid_parameter(std::string("matrix csv: missing ") + key);
        try {
            return static_cast<std::size_t>(std::stoull(it->second));
        } catch (const std::exception&) {
            throw invalid_parameter(std::string("matrix csv: bad ") + key);
        }
    };
    MatrixFile f;
    f.precision_bits = meta.count("precision_bits") ? static_cast<unsigned>(num("precision_bits"))
                                                    : default_precision_bits;
    PrecisionScope ps(f.precision_bits);
    f.matrix = BandedMatrix<Real>(meta.count("name") ? meta["name"] : "", num("nrows"), num("ncols"), num("lower_bw"),
                                  num("upper_bw"), num("exact_size"));
    if (!std::getline(in, line) || line != "i,j,value") throw invalid_parameter("matrix csv: missing header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto c1 = line.find(',');
        auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) throw invalid_parameter("matrix csv: bad row " + line);
        try {
            f.matrix.ref(std::stoull(line.substr(0, c1)), std::stoull(line.substr(c1 + 1, c2 - c1 - 1))) =
                Real(line.substr(c2 + 1));
        } catch (const sobspec::error&) {
            throw;
        } catch (const std::exception& ex) {
            throw invalid_parameter("matrix csv: bad row " + line + ": " + ex.what());
        }
    }
    return f;
}

}  // namespace sobspec

#endif  // SOBSPEC_IO_HPP
