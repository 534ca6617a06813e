#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>

namespace qwork {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double structural = 1e-10;     // hermiticity, orthonormality, trace
inline constexpr double user_unitary = 1e-8;    // unitaries handed in by callers
inline constexpr double probability_drift = 1e-12;
inline constexpr double distribution_sum = 1e-9;
inline constexpr double rank = 1e-7;            // squared singular values
}  // namespace tol

/// Largest entry of |U^dagger U - I|; zero for an exact unitary.
inline double unitarity_deviation(const ComplexMatrix& u) {
    if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
    const ComplexMatrix gram = u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols());
    return gram.cwiseAbs().maxCoeff();
}

inline bool is_unitary(const ComplexMatrix& u, double tolerance = tol::structural) {
    return u.rows() == u.cols() && unitarity_deviation(u) <= tolerance;
}

inline bool is_hermitian(const ComplexMatrix& m, double tolerance = tol::structural) {
    return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

/// P = P^dagger = P^2.
inline bool is_projector(const ComplexMatrix& m, double tolerance = tol::structural) {
    return is_hermitian(m, tolerance) && (m * m - m).cwiseAbs().maxCoeff() <= tolerance;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

/// Unit phase that rotates the first entry with modulus above `cutoff` onto
/// the positive real axis; 1 for a zero vector.
template <typename Derived>
Complex leading_phase(const Eigen::MatrixBase<Derived>& v, double cutoff = 1e-12) {
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        const double mag = std::abs(v(k));
        if (mag > cutoff) return std::conj(v(k)) / mag;
    }
    return {1.0, 0.0};
}

}  // namespace qwork
