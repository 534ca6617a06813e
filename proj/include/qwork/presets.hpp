#pragma once

#include "qwork/entanglement.hpp"
#include "qwork/errors.hpp"
#include "qwork/state.hpp"

#include <array>
#include <cmath>
#include <string>

namespace qwork::presets {

/// (|00> + |11>) / sqrt 2
inline PureState phi_me() {
    ComplexMatrix a = ComplexMatrix::Identity(2, 2);
    return PureState::from_matrix(a);
}

/// (|00> + |11> + |22>) / sqrt 3
inline PureState omega_max() { return PureState::from_matrix(ComplexMatrix::Identity(3, 3)); }

/// sqrt r |00> + sqrt s |11> + sqrt(1-r-s) |22>
inline PureState omega_max_weighted(double r, double s) {
    if (r < 0.0 || s < 0.0 || r + s > 1.0 + 1e-12)
        throw InvalidParameter("weights need r, s >= 0 and r + s <= 1");
    ComplexMatrix a = ComplexMatrix::Zero(3, 3);
    a(0, 0) = std::sqrt(r);
    a(1, 1) = std::sqrt(s);
    a(2, 2) = std::sqrt(std::max(0.0, 1.0 - r - s));
    return PureState::from_matrix(std::move(a));
}

/// sqrt r |00> + sqrt s |11> + sqrt(1-r-s) |12>; Alice's |2> never occurs.
inline PureState omega_tilde(double r, double s) {
    if (r < 0.0 || s < 0.0 || r + s > 1.0 + 1e-12)
        throw InvalidParameter("weights need r, s >= 0 and r + s <= 1");
    ComplexMatrix a = ComplexMatrix::Zero(3, 3);
    a(0, 0) = std::sqrt(r);
    a(1, 1) = std::sqrt(s);
    a(1, 2) = std::sqrt(std::max(0.0, 1.0 - r - s));
    return PureState::from_matrix(std::move(a));
}

/// (|00> + |11> + |12>) / sqrt 3
inline PureState omega() { return omega_tilde(1.0 / 3.0, 1.0 / 3.0); }

inline PureState basis_product(Eigen::Index dim, Eigen::Index i, Eigen::Index j) {
    ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
    a(i, j) = 1.0;
    return PureState::from_matrix(std::move(a));
}

/// |00> in d x d.
inline PureState prod00(Eigen::Index dim) { return basis_product(dim, 0, 0); }

/// x |omega><omega| + (1-x) |Omega><Omega|, or a |Omega><Omega| + (1-a) |01><01|.
/// The components are not orthogonal; the mixture is formed as written.
inline DensityMatrix family_state(MixedFamily family, double param) {
    if (!(param >= 0.0 && param <= 1.0)) throw InvalidParameter("family parameter must lie in [0, 1]");
    if (family == MixedFamily::FigB) {
        const std::array weights{param, 1.0 - param};
        const std::array states{omega(), omega_max()};
        return DensityMatrix::mixture(weights, states);
    }
    const std::array weights{param, 1.0 - param};
    const std::array states{omega_max(), basis_product(3, 0, 1)};
    return DensityMatrix::mixture(weights, states);
}

/// Named presets: omega_max, omega, omega_tilde:r,s, omega_max_weighted:r,s,
/// phi_me, prod00 (qubits), prod00_3 (qutrits).
inline PureState by_name(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    auto two_params = [&]() -> std::pair<double, double> {
        if (colon == std::string::npos) return {1.0 / 3.0, 1.0 / 3.0};
        const std::string args = spec.substr(colon + 1);
        const auto comma = args.find(',');
        if (comma == std::string::npos) throw ParseError("preset '" + name + "' expects two parameters r,s");
        try {
            return {std::stod(args.substr(0, comma)), std::stod(args.substr(comma + 1))};
        } catch (const std::exception&) {
            throw ParseError("could not parse preset parameters '" + args + "'");
        }
    };
    if (name == "omega_max") return omega_max();
    if (name == "omega") return omega();
    if (name == "phi_me") return phi_me();
    if (name == "prod00") return prod00(2);
    if (name == "prod00_3") return prod00(3);
    if (name == "omega_tilde") {
        const auto [r, s] = two_params();
        return omega_tilde(r, s);
    }
    if (name == "omega_max_weighted") {
        const auto [r, s] = two_params();
        return omega_max_weighted(r, s);
    }
    throw ParseError("unknown preset '" + spec + "'");
}

}  // namespace qwork::presets
