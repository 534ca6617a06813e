#pragma once

#include "qwork/errors.hpp"
#include "qwork/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace qwork {

enum class Side { A, B };

/// Bipartite pure state sum_ij a_ij |i>_A |j>_B, held as the dimA x dimB
/// coefficient matrix. Always unit norm once constructed.
class PureState {
  public:
    static PureState from_matrix(ComplexMatrix amplitudes) {
        if (amplitudes.size() == 0) throw InvalidState("pure state has no amplitudes");
        if (!amplitudes.allFinite()) throw InvalidState("pure state has non-finite amplitudes");
        const double norm = amplitudes.norm();
        if (norm == 0.0) throw InvalidState("all-zero amplitudes cannot be normalized");
        const bool renormalized = std::abs(norm * norm - 1.0) > tol::structural;
        if (renormalized) amplitudes /= norm;
        return PureState(std::move(amplitudes), renormalized);
    }

    Eigen::Index dim_a() const noexcept { return amps_.rows(); }
    Eigen::Index dim_b() const noexcept { return amps_.cols(); }
    const ComplexMatrix& amplitudes() const noexcept { return amps_; }
    bool renormalized() const noexcept { return renormalized_; }

    /// Component (i, j) lands at index i * dimB + j.
    ComplexVector vector() const {
        ComplexVector v(amps_.size());
        for (Eigen::Index i = 0; i < dim_a(); ++i)
            for (Eigen::Index j = 0; j < dim_b(); ++j) v(i * dim_b() + j) = amps_(i, j);
        return v;
    }

    /// Same state seen with the parties exchanged.
    PureState swapped() const { return PureState(amps_.transpose(), false); }

  private:
    PureState(ComplexMatrix amps, bool renormalized) : amps_(std::move(amps)), renormalized_(renormalized) {}

    ComplexMatrix amps_;
    bool renormalized_;
};

/// Row-major entries (index i * dimB + j), normalized on the way in.
inline PureState pure_state_from_amplitudes(Eigen::Index dim_a, Eigen::Index dim_b,
                                            std::span<const Complex> entries) {
    if (dim_a <= 0 || dim_b <= 0) throw InvalidState("dimensions must be positive");
    if (static_cast<Eigen::Index>(entries.size()) != dim_a * dim_b)
        throw InvalidState("expected " + std::to_string(dim_a * dim_b) + " amplitudes, got " +
                           std::to_string(entries.size()));
    ComplexMatrix amps(dim_a, dim_b);
    for (Eigen::Index i = 0; i < dim_a; ++i)
        for (Eigen::Index j = 0; j < dim_b; ++j) amps(i, j) = entries[i * dim_b + j];
    return PureState::from_matrix(std::move(amps));
}

inline double fidelity(const ComplexVector& a, const ComplexVector& b) {
    return std::norm(a.dot(b));
}

inline double fidelity(const PureState& a, const PureState& b) {
    if (a.dim_a() != b.dim_a() || a.dim_b() != b.dim_b()) throw UnsupportedShape("fidelity: shape mismatch");
    return std::norm(a.amplitudes().cwiseProduct(b.amplitudes().conjugate()).sum());
}

class DensityMatrix {
  public:
    /// Validates hermiticity, unit trace and positivity to `tolerance`.
    static DensityMatrix from_matrix(ComplexMatrix m, double tolerance = tol::structural) {
        if (m.rows() != m.cols() || m.rows() == 0) throw InvalidState("density matrix must be square and non-empty");
        if (!m.allFinite()) throw InvalidState("density matrix has non-finite entries");
        if (!is_hermitian(m, tolerance)) throw InvalidState("density matrix is not Hermitian");
        if (std::abs(m.trace() - Complex(1.0, 0.0)) > tolerance)
            throw InvalidState("density matrix trace differs from one");
        const ComplexMatrix h = 0.5 * (m + m.adjoint());
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h, Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() < -tolerance) throw InvalidState("density matrix has a negative eigenvalue");
        return DensityMatrix(h);
    }

    static DensityMatrix from_pure(const PureState& psi) {
        const ComplexVector v = psi.vector();
        return DensityMatrix(v * v.adjoint());
    }

    /// Convex combination of pure projectors; weights must be non-negative and sum to one.
    static DensityMatrix mixture(std::span<const double> weights, std::span<const PureState> states) {
        if (weights.size() != states.size() || states.empty()) throw InvalidState("mixture: weight/state count mismatch");
        const Eigen::Index n = states.front().amplitudes().size();
        ComplexMatrix m = ComplexMatrix::Zero(n, n);
        double total = 0.0;
        for (std::size_t k = 0; k < states.size(); ++k) {
            if (weights[k] < 0.0) throw InvalidState("mixture: negative weight");
            if (states[k].amplitudes().size() != n) throw InvalidState("mixture: dimension mismatch");
            const ComplexVector v = states[k].vector();
            m += weights[k] * (v * v.adjoint());
            total += weights[k];
        }
        if (std::abs(total - 1.0) > tol::structural) throw InvalidState("mixture: weights do not sum to one");
        return from_matrix(std::move(m));
    }

    Eigen::Index dim() const noexcept { return m_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return m_; }

    RealVector eigenvalues() const {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(m_, Eigen::EigenvaluesOnly);
        return eig.eigenvalues();
    }

    double purity() const { return (m_ * m_).trace().real(); }

  private:
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}

    ComplexMatrix m_;
};

/// rho_A = A A^dagger, rho_B = A^T A^*.
inline DensityMatrix reduced_density(const PureState& psi, Side side) {
    const ComplexMatrix& a = psi.amplitudes();
    ComplexMatrix r = side == Side::A ? ComplexMatrix(a * a.adjoint()) : ComplexMatrix(a.transpose() * a.conjugate());
    return DensityMatrix::from_matrix(std::move(r));
}

struct SchmidtDecomposition {
    RealVector coefficients;  // descending
    ComplexMatrix basis_a;    // column k is |k~>_A
    ComplexMatrix basis_b;    // column k is |k~>_B

    Eigen::Index rank(double tolerance = tol::rank) const {
        return (coefficients.array().square() > tolerance).count();
    }

    /// sum_k c_k |k~>_A |k~>_B as a coefficient matrix.
    ComplexMatrix reconstruct() const {
        return basis_a * coefficients.cast<Complex>().asDiagonal() * basis_b.transpose();
    }
};

namespace detail {

inline bool lexicographically_less(const ComplexVector& x, const ComplexVector& y) {
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        if (x(k).real() != y(k).real()) return x(k).real() < y(k).real();
        if (x(k).imag() != y(k).imag()) return x(k).imag() < y(k).imag();
    }
    return false;
}

}  // namespace detail

/// SVD of the coefficient matrix A = U S V^dagger, so |k~>_A = U e_k and
/// |k~>_B = V^* e_k. Each A-side vector is phased so its first nonzero entry
/// is real positive; equal coefficients are ordered by their A-side vectors.
inline SchmidtDecomposition schmidt(const PureState& psi) {
    if (psi.dim_a() != psi.dim_b())
        throw UnsupportedShape("schmidt: requires dimA == dimB, got " + std::to_string(psi.dim_a()) + "x" +
                               std::to_string(psi.dim_b()));
    const Eigen::Index d = psi.dim_a();
    Eigen::JacobiSVD<ComplexMatrix> svd(psi.amplitudes(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    ComplexMatrix u = svd.matrixU();
    ComplexMatrix b = svd.matrixV().conjugate();
    RealVector s = svd.singularValues();

    for (Eigen::Index k = 0; k < d; ++k) {
        const Complex ph = leading_phase(u.col(k));
        u.col(k) *= ph;
        b.col(k) *= std::conj(ph);
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        if (std::abs(s(x) - s(y)) > 1e-12) return s(x) > s(y);
        return detail::lexicographically_less(u.col(x), u.col(y));
    });

    SchmidtDecomposition out{RealVector(d), ComplexMatrix(d, d), ComplexMatrix(d, d)};
    for (Eigen::Index k = 0; k < d; ++k) {
        const auto src = order[static_cast<std::size_t>(k)];
        out.coefficients(k) = s(src);
        out.basis_a.col(k) = u.col(src);
        out.basis_b.col(k) = b.col(src);
    }
    return out;
}

/// A -> uA A uB^T. Both unitaries are checked to 1e-8.
inline PureState apply_local_unitary(const PureState& psi, const ComplexMatrix& ua, const ComplexMatrix& ub) {
    if (ua.rows() != psi.dim_a() || ub.rows() != psi.dim_b())
        throw UnsupportedShape("apply_local_unitary: unitary dimension mismatch");
    if (!is_unitary(ua, tol::user_unitary)) throw InvalidUnitary("Alice's operator is not unitary");
    if (!is_unitary(ub, tol::user_unitary)) throw InvalidUnitary("Bob's operator is not unitary");
    return PureState::from_matrix(ua * psi.amplitudes() * ub.transpose());
}

}  // namespace qwork
