#pragma once

#include "qwork/errors.hpp"
#include "qwork/state.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace qwork::io {

using nlohmann::json;

namespace detail {

inline Complex parse_complex(const json& e) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ParseError("complex entries must be [re, im] number pairs");
    const double re = e[0].get<double>(), im = e[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) throw ParseError("non-finite entry");
    return {re, im};
}

inline Eigen::Index parse_dim(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_number_integer()) throw ParseError(std::string("missing integer field '") + key + "'");
    const auto v = doc[key].get<std::int64_t>();
    if (v <= 0 || v > 64) throw ParseError(std::string("field '") + key + "' out of range");
    return static_cast<Eigen::Index>(v);
}

inline std::vector<Complex> parse_entries(const json& doc, const char* key, std::size_t expected) {
    if (!doc.contains(key) || !doc[key].is_array()) throw ParseError(std::string("missing array field '") + key + "'");
    const auto& arr = doc[key];
    if (arr.size() != expected)
        throw ParseError(std::string("field '") + key + "' needs " + std::to_string(expected) + " entries, got " +
                         std::to_string(arr.size()));
    std::vector<Complex> out;
    out.reserve(expected);
    for (const auto& e : arr) out.push_back(parse_complex(e));
    return out;
}

inline json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

}  // namespace detail

/// {"dimA", "dimB", "amplitudes": [[re, im], ...]} row-major, index i * dimB + j.
inline json to_json(const PureState& psi) {
    json amps = json::array();
    for (Eigen::Index i = 0; i < psi.dim_a(); ++i)
        for (Eigen::Index j = 0; j < psi.dim_b(); ++j) amps.push_back(detail::complex_json(psi.amplitudes()(i, j)));
    return {{"dimA", psi.dim_a()}, {"dimB", psi.dim_b()}, {"amplitudes", std::move(amps)}};
}

/// {"dim", "matrix": [[re, im], ...]} row-major.
inline json to_json(const DensityMatrix& rho) {
    json m = json::array();
    for (Eigen::Index i = 0; i < rho.dim(); ++i)
        for (Eigen::Index j = 0; j < rho.dim(); ++j) m.push_back(detail::complex_json(rho.matrix()(i, j)));
    return {{"dim", rho.dim()}, {"matrix", std::move(m)}};
}

using StateFile = std::variant<PureState, DensityMatrix>;

/// Schema errors raise ParseError; physically invalid content (zero state,
/// non-Hermitian matrix, ...) raises InvalidState.
inline StateFile state_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("state document must be a JSON object");
    if (doc.contains("amplitudes")) {
        const auto da = detail::parse_dim(doc, "dimA"), db = detail::parse_dim(doc, "dimB");
        const auto entries = detail::parse_entries(doc, "amplitudes", static_cast<std::size_t>(da * db));
        return pure_state_from_amplitudes(da, db, entries);
    }
    if (doc.contains("matrix")) {
        const auto d = detail::parse_dim(doc, "dim");
        const auto entries = detail::parse_entries(doc, "matrix", static_cast<std::size_t>(d * d));
        ComplexMatrix m(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) m(i, j) = entries[static_cast<std::size_t>(i * d + j)];
        return DensityMatrix::from_matrix(std::move(m));
    }
    throw ParseError("state document needs either 'amplitudes' or 'matrix'");
}

inline StateFile parse_state(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {  // parse_error, or out_of_range on numeric overflow
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    return state_from_json(doc);
}

inline StateFile read_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open state file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_state(ss.str());
}

inline void write_json_file(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << doc.dump(2) << '\n';
}

}  // namespace qwork::io
