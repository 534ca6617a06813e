#pragma once

#include "qwork/errors.hpp"
#include "qwork/linalg.hpp"
#include "qwork/state.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace qwork {

struct QutritAngles {
    double theta = 0.0;
    double phi = 0.0;
    double chi1 = 0.0;
    double chi2 = 0.0;
};

/// Rank-one projective measurement {|m_i><m_i|}; column i of `vectors()` is |m_i>.
class MeasurementBasis {
  public:
    static MeasurementBasis from_vectors(ComplexMatrix vectors, std::optional<QutritAngles> params = std::nullopt) {
        if (vectors.rows() != vectors.cols() || vectors.rows() == 0)
            throw UnsupportedShape("measurement basis must hold dim vectors of length dim");
        if (!is_unitary(vectors, tol::structural)) throw InvalidState("measurement vectors are not orthonormal");
        return MeasurementBasis(std::move(vectors), params);
    }

    Eigen::Index dim() const noexcept { return v_.rows(); }
    const ComplexMatrix& vectors() const noexcept { return v_; }
    ComplexVector vector(Eigen::Index i) const { return v_.col(i); }
    ComplexMatrix projector(Eigen::Index i) const { return v_.col(i) * v_.col(i).adjoint(); }
    const std::optional<QutritAngles>& params() const noexcept { return params_; }

  private:
    MeasurementBasis(ComplexMatrix v, std::optional<QutritAngles> p) : v_(std::move(v)), params_(p) {}

    ComplexMatrix v_;
    std::optional<QutritAngles> params_;
};

inline MeasurementBasis computational_basis(Eigen::Index dim) {
    return MeasurementBasis::from_vectors(ComplexMatrix::Identity(dim, dim));
}

/// cos(t)|0> + sin(t)|1>, -sin(t)|0> + cos(t)|1>.
inline MeasurementBasis qubit_basis(double theta) {
    ComplexMatrix v(2, 2);
    v << std::cos(theta), -std::sin(theta),
         std::sin(theta), std::cos(theta);
    return MeasurementBasis::from_vectors(std::move(v));
}

/// Two-angle qutrit family with phases chi1, chi2 on |0> and |1>:
///   |m0> = e^{i chi1} sin t cos p |0> + e^{i chi2} sin t sin p |1> + cos t |2>
///   |m1> = e^{i chi1} cos t cos p |0> + e^{i chi2} cos t sin p |1> - sin t |2>
/// |m2> is the normalized complement conj(m0 x m1) with its first nonzero
/// component made real positive.
inline MeasurementBasis qutrit_basis(double theta, double phi, double chi1 = 0.0, double chi2 = 0.0) {
    const Complex e1 = std::polar(1.0, chi1);
    const Complex e2 = std::polar(1.0, chi2);
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);

    Eigen::Vector3cd m0(e1 * st * cp, e2 * st * sp, ct);
    Eigen::Vector3cd m1(e1 * ct * cp, e2 * ct * sp, -st);
    // Eigen's cross() already conjugates for complex scalars.
    Eigen::Vector3cd m2 = m0.cross(m1);
    m2.normalize();
    m2 *= leading_phase(m2);

    ComplexMatrix v(3, 3);
    v.col(0) = m0;
    v.col(1) = m1;
    v.col(2) = m2;
    return MeasurementBasis::from_vectors(std::move(v), QutritAngles{theta, phi, chi1, chi2});
}

/// Probabilities over a rows x cols outcome grid (cols == 1 for a single
/// party). Entries are non-negative and sum to one.
class OutcomeDistribution {
  public:
    static OutcomeDistribution joint(Eigen::Index rows, Eigen::Index cols, std::vector<double> probs) {
        if (rows <= 0 || cols <= 0 || static_cast<Eigen::Index>(probs.size()) != rows * cols)
            throw InvalidDistribution("distribution shape does not match its entries");
        double total = 0.0;
        for (double& p : probs) {
            if (!std::isfinite(p)) throw InvalidDistribution("non-finite probability");
            if (p < -tol::distribution_sum) throw InvalidDistribution("negative probability " + std::to_string(p));
            p = std::max(p, 0.0);
            total += p;
        }
        if (std::abs(total - 1.0) > tol::distribution_sum)
            throw InvalidDistribution("probabilities sum to " + std::to_string(total));
        return OutcomeDistribution(rows, cols, std::move(probs));
    }

    static OutcomeDistribution marginal(std::vector<double> probs) {
        const auto n = static_cast<Eigen::Index>(probs.size());
        return joint(n, 1, std::move(probs));
    }

    Eigen::Index rows() const noexcept { return rows_; }
    Eigen::Index cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return p_.size(); }
    const std::vector<double>& probabilities() const noexcept { return p_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return p_[static_cast<std::size_t>(i * cols_ + j)]; }

    /// Distribution of the row index (party A).
    OutcomeDistribution marginal_a() const {
        std::vector<double> m(static_cast<std::size_t>(rows_), 0.0);
        for (Eigen::Index i = 0; i < rows_; ++i)
            for (Eigen::Index j = 0; j < cols_; ++j) m[static_cast<std::size_t>(i)] += (*this)(i, j);
        return OutcomeDistribution(rows_, 1, std::move(m));
    }

    /// Distribution of the column index (party B).
    OutcomeDistribution marginal_b() const {
        std::vector<double> m(static_cast<std::size_t>(cols_), 0.0);
        for (Eigen::Index i = 0; i < rows_; ++i)
            for (Eigen::Index j = 0; j < cols_; ++j) m[static_cast<std::size_t>(j)] += (*this)(i, j);
        return OutcomeDistribution(cols_, 1, std::move(m));
    }

  private:
    OutcomeDistribution(Eigen::Index r, Eigen::Index c, std::vector<double> p) : rows_(r), cols_(c), p_(std::move(p)) {}

    Eigen::Index rows_;
    Eigen::Index cols_;
    std::vector<double> p_;
};

namespace detail {

inline OutcomeDistribution finalize_joint(Eigen::Index rows, Eigen::Index cols, std::vector<double> p) {
    double total = 0.0;
    for (double& x : p) {
        x = std::clamp(x, 0.0, 1.0);
        total += x;
    }
    if (std::abs(total - 1.0) > tol::probability_drift)
        for (double& x : p) x /= total;
    return OutcomeDistribution::joint(rows, cols, std::move(p));
}

}  // namespace detail

/// p_ij = <m_i m_j| rho |m_i m_j> for rho on dimA x dimB.
inline OutcomeDistribution joint_distribution(const DensityMatrix& rho, const MeasurementBasis& basis_a,
                                              const MeasurementBasis& basis_b) {
    const Eigen::Index da = basis_a.dim(), db = basis_b.dim();
    if (rho.dim() != da * db)
        throw UnsupportedShape("joint_distribution: rho has dim " + std::to_string(rho.dim()) + ", bases need " +
                               std::to_string(da * db));
    std::vector<double> p(static_cast<std::size_t>(da * db));
    ComplexVector v(da * db);
    for (Eigen::Index i = 0; i < da; ++i) {
        for (Eigen::Index j = 0; j < db; ++j) {
            for (Eigen::Index k = 0; k < da; ++k) v.segment(k * db, db) = basis_a.vectors()(k, i) * basis_b.vectors().col(j);
            p[static_cast<std::size_t>(i * db + j)] = v.dot(rho.matrix() * v).real();
        }
    }
    return detail::finalize_joint(da, db, std::move(p));
}

/// Pure-state shortcut: p_ij = |(M_A^dagger A M_B^*)_ij|^2.
inline OutcomeDistribution joint_distribution(const PureState& psi, const MeasurementBasis& basis_a,
                                              const MeasurementBasis& basis_b) {
    if (psi.dim_a() != basis_a.dim() || psi.dim_b() != basis_b.dim())
        throw UnsupportedShape("joint_distribution: state and basis dimensions differ");
    const ComplexMatrix amp = basis_a.vectors().adjoint() * psi.amplitudes() * basis_b.vectors().conjugate();
    std::vector<double> p(static_cast<std::size_t>(amp.size()));
    for (Eigen::Index i = 0; i < amp.rows(); ++i)
        for (Eigen::Index j = 0; j < amp.cols(); ++j) p[static_cast<std::size_t>(i * amp.cols() + j)] = std::norm(amp(i, j));
    return detail::finalize_joint(amp.rows(), amp.cols(), std::move(p));
}

}  // namespace qwork
