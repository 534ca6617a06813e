#pragma once

#include "qwork/linalg.hpp"
#include "qwork/rng.hpp"
#include "qwork/state.hpp"

#include <Eigen/QR>

#include <random>

namespace qwork {

inline ComplexMatrix random_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, SplitMix64& rng) {
    std::normal_distribution<double> normal;
    ComplexMatrix g(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = Complex(normal(rng), normal(rng));
    return g;
}

inline ComplexVector random_unit_vector(Eigen::Index dim, SplitMix64& rng) {
    ComplexVector v = random_gaussian_matrix(dim, 1, rng).col(0);
    return v / v.norm();
}

/// Haar unitary: QR of a complex Ginibre matrix with the R diagonal phases
/// absorbed into Q.
inline ComplexMatrix random_unitary(Eigen::Index dim, SplitMix64& rng) {
    const ComplexMatrix g = random_gaussian_matrix(dim, dim, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < dim; ++k) {
        const double mag = std::abs(r(k, k));
        if (mag > 0.0) q.col(k) *= r(k, k) / mag;
    }
    return q;
}

/// Uniformly random pure state on dimA x dimB.
inline PureState random_pure_state(Eigen::Index dim_a, Eigen::Index dim_b, SplitMix64& rng) {
    return PureState::from_matrix(random_gaussian_matrix(dim_a, dim_b, rng));
}

/// Random d x d state whose coefficient matrix has rank exactly `rank`
/// (product of d x rank and rank x d Gaussian factors).
inline PureState random_state_of_rank(Eigen::Index dim, Eigen::Index rank, SplitMix64& rng) {
    return PureState::from_matrix(random_gaussian_matrix(dim, rank, rng) * random_gaussian_matrix(rank, dim, rng));
}

}  // namespace qwork
