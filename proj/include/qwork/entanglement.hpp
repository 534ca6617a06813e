#pragma once

#include "qwork/errors.hpp"
#include "qwork/state.hpp"

#include <Eigen/LU>

#include <cmath>
#include <string>
#include <vector>

namespace qwork {

/// Concurrence monotones of a d x d pure state. `raw[k-1]` is the k-th
/// elementary symmetric polynomial of the reduced-density eigenvalues, so
/// raw[0] is always one and raw[d-1] is det(rho_A).
struct MonotoneVector {
    Eigen::Index dim = 0;
    std::vector<double> lambdas;  // reduced-density eigenvalues, descending
    std::vector<double> raw;
    double g_concurrence = 0.0;
};

struct CriterionReport {
    Eigen::Index schmidt_rank = 0;
    double g_concurrence = 0.0;
    bool passes = false;
    double tolerance = tol::rank;
    double column_gram_deviation = 0.0;
};

enum class MixedFamily {
    FigB,  // x |omega><omega| + (1 - x) |Omega><Omega|
    FigC,  // a |Omega><Omega| + (1 - a) |01><01|
};

namespace detail {

inline void require_square(const PureState& psi, const char* what) {
    if (psi.dim_a() != psi.dim_b())
        throw UnsupportedShape(std::string(what) + ": requires dimA == dimB");
}

/// e_1..e_n of the given values by the usual one-pass recurrence.
inline std::vector<double> elementary_symmetric(const std::vector<double>& x) {
    std::vector<double> e(x.size() + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t k = i + 1; k >= 1; --k) e[k] += e[k - 1] * x[i];
    return {e.begin() + 1, e.end()};
}

inline std::vector<double> schmidt_weights(const PureState& psi) {
    const auto s = schmidt(psi).coefficients;
    std::vector<double> w(static_cast<std::size_t>(s.size()));
    for (Eigen::Index k = 0; k < s.size(); ++k) w[static_cast<std::size_t>(k)] = s(k) * s(k);
    return w;
}

}  // namespace detail

/// d (det rho_A)^{1/d}, using det rho_A = |det A| ^ 2 for the coefficient matrix A.
inline double g_concurrence(const PureState& psi) {
    detail::require_square(psi, "g_concurrence");
    const auto d = static_cast<double>(psi.dim_a());
    const double det = std::norm(psi.amplitudes().partialPivLu().determinant());
    if (det <= 0.0) return 0.0;
    return std::min(d * std::pow(det, 1.0 / d), 1.0);
}

inline MonotoneVector concurrence_monotones(const PureState& psi) {
    detail::require_square(psi, "concurrence_monotones");
    MonotoneVector out;
    out.dim = psi.dim_a();
    out.lambdas = detail::schmidt_weights(psi);
    out.raw = detail::elementary_symmetric(out.lambdas);
    out.g_concurrence = g_concurrence(psi);
    return out;
}

/// sqrt(2 (1 - Tr rho_A^2)).
inline double concurrence(const PureState& psi) {
    detail::require_square(psi, "concurrence");
    const ComplexMatrix& a = psi.amplitudes();
    const ComplexMatrix rho = a * a.adjoint();
    const double purity = rho.cwiseAbs2().sum();
    return std::sqrt(std::max(0.0, 2.0 * (1.0 - purity)));
}

/// Closed-form G-concurrence of the two mixed families, valid for their
/// defining decompositions only.
inline double g_concurrence_family(MixedFamily family, double param) {
    if (!(param >= 0.0 && param <= 1.0))
        throw InvalidParameter("family parameter must lie in [0, 1], got " + std::to_string(param));
    return family == MixedFamily::FigB ? 1.0 - param : param;
}

inline CriterionReport criterion_check(const PureState& psi, double tolerance = tol::rank) {
    detail::require_square(psi, "criterion_check");
    const auto d = psi.dim_a();
    CriterionReport rep;
    rep.tolerance = tolerance;
    rep.schmidt_rank = schmidt(psi).rank(tolerance);
    rep.g_concurrence = g_concurrence(psi);
    rep.passes = rep.schmidt_rank == d;

    const ComplexMatrix gram = psi.amplitudes().adjoint() * psi.amplitudes();
    const double c = gram.trace().real() / static_cast<double>(d);
    rep.column_gram_deviation = (gram - c * ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    return rep;
}

}  // namespace qwork
