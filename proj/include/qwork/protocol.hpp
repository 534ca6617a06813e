#pragma once

#include "qwork/entanglement.hpp"
#include "qwork/errors.hpp"
#include "qwork/measurement.hpp"
#include "qwork/parallel.hpp"
#include "qwork/rng.hpp"
#include "qwork/state.hpp"

#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace qwork {

enum class Direction { AMeasures, BMeasures };

inline std::string_view to_string(Direction d) { return d == Direction::AMeasures ? "A_measures" : "B_measures"; }

inline Direction parse_direction(std::string_view s) {
    if (s == "A_measures" || s == "A") return Direction::AMeasures;
    if (s == "B_measures" || s == "B") return Direction::BMeasures;
    throw ParseError("unknown direction '" + std::string(s) + "'");
}

/// One unitary per measurer outcome, steering the partner to |reference>.
struct CorrectionSet {
    Eigen::Index dim = 0;
    std::vector<ComplexMatrix> unitaries;
    Eigen::Index reference_index = 0;
    std::vector<bool> covered;  // false where the outcome has (numerically) zero probability

    static CorrectionSet from_unitaries(std::vector<ComplexMatrix> us, Eigen::Index reference_index = 0) {
        if (us.empty()) throw InvalidConfig("correction set is empty");
        const Eigen::Index d = us.front().rows();
        if (static_cast<Eigen::Index>(us.size()) != d) throw InvalidConfig("need exactly one correction per outcome");
        if (reference_index < 0 || reference_index >= d) throw InvalidConfig("reference index out of range");
        for (const auto& u : us) {
            if (u.rows() != d || u.cols() != d) throw InvalidConfig("correction dimension mismatch");
            if (!is_unitary(u, tol::structural)) throw InvalidUnitary("correction is not unitary");
        }
        return {d, std::move(us), reference_index, std::vector<bool>(static_cast<std::size_t>(d), true)};
    }
};

struct ProtocolConfig {
    Direction direction = Direction::AMeasures;
    MeasurementBasis basis = computational_basis(2);
    std::optional<CorrectionSet> corrections;  // nullopt means derive them with auto_corrections
    double success_fidelity_threshold = 1.0 - 1e-6;
    std::uint64_t seed = 42;
    std::size_t rounds = 100000;
    std::size_t threads = 0;  // 0: hardware concurrency
    double tolerance = tol::rank;
};

struct ProtocolStats {
    std::size_t rounds_requested = 0;  // N0
    std::size_t successes = 0;         // N1
    std::vector<std::size_t> outcome_counts;
    std::vector<double> outcome_probabilities;
    std::vector<double> per_outcome_fidelity;
    double success_ratio = 0.0;
    bool feasible = false;
    std::string generator = std::string(SplitMix64::name);
    std::uint64_t seed = 0;
};

namespace detail {

inline ComplexMatrix measurer_view(const PureState& psi, Direction dir) {
    return dir == Direction::AMeasures ? psi.amplitudes() : ComplexMatrix(psi.amplitudes().transpose());
}

/// Row i holds the unnormalized partner state after outcome i.
inline ComplexMatrix conditional_partner_states(const PureState& psi, const MeasurementBasis& basis, Direction dir) {
    const ComplexMatrix a = measurer_view(psi, dir);
    if (a.rows() != basis.dim()) throw InvalidConfig("measurement basis does not match the measurer's dimension");
    return basis.vectors().adjoint() * a;
}

/// Unitary U with U b proportional to e_ref: a Householder reflection onto
/// the phase-aligned target, with the first nonzero entry of U (row-major)
/// made real positive.
inline ComplexMatrix steering_unitary(const ComplexVector& b, Eigen::Index ref) {
    const Eigen::Index d = b.size();
    const double mag = std::abs(b(ref));
    const Complex alpha = mag > 1e-300 ? b(ref) / mag : Complex(1.0, 0.0);
    ComplexVector w = ComplexVector::Zero(d);
    w(ref) = alpha;
    const ComplexVector v = b - w;
    ComplexMatrix h = ComplexMatrix::Identity(d, d);
    const double vv = v.squaredNorm();
    if (vv > 1e-28) h -= (2.0 / vv) * (v * v.adjoint());
    ComplexMatrix u = std::conj(alpha) * h;
    const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = u;
    u *= leading_phase(rows.reshaped());
    return u;
}

}  // namespace detail

/// Outcome probabilities of the measurer in `basis`.
inline std::vector<double> measurer_probabilities(const PureState& psi, const MeasurementBasis& basis,
                                                  Direction dir = Direction::AMeasures) {
    const ComplexMatrix rows = detail::conditional_partner_states(psi, basis, dir);
    std::vector<double> p(static_cast<std::size_t>(rows.rows()));
    for (Eigen::Index i = 0; i < rows.rows(); ++i) p[static_cast<std::size_t>(i)] = rows.row(i).squaredNorm();
    return p;
}

inline CorrectionSet auto_corrections(const PureState& psi, const MeasurementBasis& basis, Eigen::Index reference_index = 0,
                                      Direction dir = Direction::AMeasures, double tolerance = tol::rank) {
    const ComplexMatrix rows = detail::conditional_partner_states(psi, basis, dir);
    const Eigen::Index d = rows.cols();
    if (reference_index < 0 || reference_index >= d) throw InvalidConfig("reference index out of range");
    CorrectionSet out;
    out.dim = d;
    out.reference_index = reference_index;
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        const double p = rows.row(i).squaredNorm();
        if (p > tolerance) {
            const ComplexVector b = rows.row(i).transpose() / std::sqrt(p);
            out.unitaries.push_back(detail::steering_unitary(b, reference_index));
            out.covered.push_back(true);
        } else {
            out.unitaries.push_back(ComplexMatrix::Identity(d, d));
            out.covered.push_back(false);
        }
    }
    return out;
}

/// {I, O1, O2}: O1 is the cyclic shift |1> -> |0>, |2> -> |1>, |0> -> |2>,
/// O2 is the permutation |2> -> |0>, |0> -> |1>, |1> -> |2>.
inline CorrectionSet qutrit_shift_corrections() {
    ComplexMatrix o1(3, 3), o2(3, 3);
    o1 << 0, 1, 0,
          0, 0, 1,
          1, 0, 0;
    o2 << 0, 0, 1,
          1, 0, 0,
          0, 1, 0;
    return CorrectionSet::from_unitaries({ComplexMatrix::Identity(3, 3), o1, o2}, 0);
}

/// The second shift matrix exactly as tabulated alongside O1. It is not
/// unitary and is kept only so its defect can be checked.
inline ComplexMatrix qutrit_o2_as_tabulated() {
    ComplexMatrix m(3, 3);
    m << 0, 0, 1,
         1, 1, 0,
         0, 1, -1;
    return m;
}

/// Operational form of the full-Schmidt-rank test: measure the measurer's
/// half in its Schmidt basis and require every outcome to occur.
inline bool feasibility(const PureState& psi, double tolerance = tol::rank, Direction dir = Direction::AMeasures) {
    if (psi.dim_a() != psi.dim_b()) throw UnsupportedShape("feasibility requires dimA == dimB");
    const auto sch = schmidt(psi);
    const auto basis = MeasurementBasis::from_vectors(dir == Direction::AMeasures ? sch.basis_a : sch.basis_b);
    for (double p : measurer_probabilities(psi, basis, dir))
        if (!(p > tolerance)) return false;
    return true;
}

/// Monte Carlo over `rounds`: round k draws the measurer's outcome from its
/// own stream SplitMix64::derive(seed, k), so totals do not depend on how the
/// rounds are split across threads.
inline ProtocolStats run_protocol(const PureState& psi, const ProtocolConfig& cfg) {
    if (cfg.rounds == 0) throw InvalidConfig("rounds must be at least one");
    if (!(cfg.success_fidelity_threshold > 0.0 && cfg.success_fidelity_threshold <= 1.0))
        throw InvalidConfig("success threshold must lie in (0, 1]");

    const ComplexMatrix partners = detail::conditional_partner_states(psi, cfg.basis, cfg.direction);
    const Eigen::Index outcomes = partners.rows();
    const Eigen::Index partner_dim = partners.cols();
    const CorrectionSet corr = cfg.corrections ? *cfg.corrections
                                               : auto_corrections(psi, cfg.basis, 0, cfg.direction, cfg.tolerance);
    if (corr.dim != partner_dim || static_cast<Eigen::Index>(corr.unitaries.size()) != outcomes)
        throw InvalidConfig("correction set does not match the partner dimension");

    ProtocolStats st;
    st.rounds_requested = cfg.rounds;
    st.seed = cfg.seed;
    st.outcome_counts.assign(static_cast<std::size_t>(outcomes), 0);
    st.outcome_probabilities.resize(static_cast<std::size_t>(outcomes));
    std::vector<double> fid(static_cast<std::size_t>(outcomes), 0.0);
    std::vector<double> cumulative(static_cast<std::size_t>(outcomes));
    double acc = 0.0;
    st.feasible = true;
    for (Eigen::Index i = 0; i < outcomes; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double p = partners.row(i).squaredNorm();
        st.outcome_probabilities[k] = p;
        acc += p;
        cumulative[k] = acc;
        if (p > cfg.tolerance) {
            const ComplexVector corrected = corr.unitaries[k] * (partners.row(i).transpose() / std::sqrt(p));
            fid[k] = std::norm(corrected(corr.reference_index));
        }
        if (!(p > cfg.tolerance) || fid[k] < cfg.success_fidelity_threshold) st.feasible = false;
    }
    const double total = acc;

    auto sample = [&](std::size_t round) -> std::size_t {
        SplitMix64 rng = SplitMix64::derive(cfg.seed, round);
        const double u = rng.uniform() * total;
        std::size_t last_nonzero = 0;
        for (std::size_t k = 0; k < cumulative.size(); ++k) {
            if (st.outcome_probabilities[k] > 0.0) {
                if (u < cumulative[k]) return k;
                last_nonzero = k;
            }
        }
        return last_nonzero;
    };

    const std::size_t threads = std::max<std::size_t>(
        1, std::min(cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency()), cfg.rounds / 4096 + 1));
    std::vector<std::vector<std::size_t>> tallies(threads, std::vector<std::size_t>(static_cast<std::size_t>(outcomes), 0));
    const std::size_t chunk = (cfg.rounds + threads - 1) / threads;
    detail::parallel_for(threads, [&](std::size_t t) {
        const std::size_t end = std::min(cfg.rounds, (t + 1) * chunk);
        for (std::size_t r = t * chunk; r < end; ++r) ++tallies[t][sample(r)];
    });
    for (const auto& t : tallies)
        for (std::size_t k = 0; k < t.size(); ++k) st.outcome_counts[k] += t[k];

    st.per_outcome_fidelity.assign(static_cast<std::size_t>(outcomes), 0.0);
    for (std::size_t k = 0; k < st.outcome_counts.size(); ++k) {
        if (st.outcome_counts[k] == 0) continue;
        st.per_outcome_fidelity[k] = fid[k];
        if (fid[k] >= cfg.success_fidelity_threshold) st.successes += st.outcome_counts[k];
    }
    st.success_ratio = static_cast<double>(st.successes) / static_cast<double>(st.rounds_requested);
    return st;
}

}  // namespace qwork
