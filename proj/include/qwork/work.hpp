#pragma once

#include "qwork/entanglement.hpp"
#include "qwork/entropy.hpp"
#include "qwork/errors.hpp"
#include "qwork/measurement.hpp"
#include "qwork/parallel.hpp"
#include "qwork/presets.hpp"
#include "qwork/rng.hpp"
#include "qwork/state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace qwork {

enum class AveragingMode {
    GridAverage,         // qutrit: mean of zeta over (theta, phi) in [0, pi/2]^2
    ThetaAveragePhiMax,  // qutrit: max over phi, then mean over theta
    QubitCircle,         // qubit: mean over theta in [0, 2 pi)
};

inline std::string_view to_string(AveragingMode m) {
    switch (m) {
        case AveragingMode::GridAverage: return "GRID_AVERAGE";
        case AveragingMode::ThetaAveragePhiMax: return "THETA_AVERAGE_PHI_MAX";
        case AveragingMode::QubitCircle: return "QUBIT_CIRCLE";
    }
    return "?";
}

inline AveragingMode parse_averaging_mode(std::string_view s) {
    if (s == "GRID_AVERAGE") return AveragingMode::GridAverage;
    if (s == "THETA_AVERAGE_PHI_MAX") return AveragingMode::ThetaAveragePhiMax;
    if (s == "QUBIT_CIRCLE") return AveragingMode::QubitCircle;
    throw ParseError("unknown averaging mode '" + std::string(s) + "'");
}

inline Eigen::Index mode_dimension(AveragingMode m) { return m == AveragingMode::QubitCircle ? 2 : 3; }

inline constexpr std::size_t kMinGrid = 8;
inline constexpr double kConvergenceTolerance = 1e-4;

struct WorkScanResult {
    AveragingMode mode = AveragingMode::GridAverage;
    std::size_t grid_points = 0;  // per axis
    std::vector<double> zeta_grid;  // theta-major for the qutrit modes
    double work = 0.0;
    double work_doubled = 0.0;  // W on the 2x grid, when convergence was checked
    bool converged = false;
};

struct WorkUnits {
    double temperature = 0.0;  // K
    double bits = 0.0;
    double joules = 0.0;
};

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K, exact SI

/// 1/2 (2 - 2 H(A,B) + H(A) + H(B)), in bits.
inline double zeta(const OutcomeDistribution& joint) {
    const double hab = shannon_entropy(joint);
    const double ha = shannon_entropy(joint.marginal_a());
    const double hb = shannon_entropy(joint.marginal_b());
    return 0.5 * (2.0 - 2.0 * hab + ha + hb);
}

/// 1 - H(B|A): work Bob draws once he knows Alice's outcome.
inline double extractable_bits(const OutcomeDistribution& joint) { return 1.0 - conditional_entropy(joint); }

inline WorkUnits bits_to_joules(double bits, double temperature) {
    if (!(temperature > 0.0)) throw InvalidParameter("temperature must be positive");
    return {temperature, bits, bits * kBoltzmann * temperature * std::numbers::ln2};
}

/// Midpoint-rule measurement settings for one averaging mode.
class MeasurementGrid {
  public:
    MeasurementGrid(AveragingMode mode, std::size_t grid) : mode_(mode), grid_(grid) {
        if (grid < kMinGrid) throw InvalidParameter("grid must have at least 8 points per axis");
        if (mode == AveragingMode::QubitCircle) {
            const double h = 2.0 * std::numbers::pi / static_cast<double>(grid);
            for (std::size_t k = 0; k < grid; ++k) bases_.push_back(qubit_basis((static_cast<double>(k) + 0.5) * h));
        } else {
            const double h = 0.5 * std::numbers::pi / static_cast<double>(grid);
            for (std::size_t a = 0; a < grid; ++a)
                for (std::size_t b = 0; b < grid; ++b)
                    bases_.push_back(qutrit_basis((static_cast<double>(a) + 0.5) * h, (static_cast<double>(b) + 0.5) * h));
        }
    }

    AveragingMode mode() const noexcept { return mode_; }
    std::size_t grid() const noexcept { return grid_; }
    Eigen::Index dim() const noexcept { return mode_dimension(mode_); }
    const std::vector<MeasurementBasis>& bases() const noexcept { return bases_; }

    /// Fixed-order reduction of zeta values laid out like `bases()`.
    double reduce(const std::vector<double>& z) const {
        double sum = 0.0;
        if (mode_ == AveragingMode::ThetaAveragePhiMax) {
            for (std::size_t a = 0; a < grid_; ++a) {
                const auto row = z.begin() + static_cast<std::ptrdiff_t>(a * grid_);
                sum += *std::max_element(row, row + static_cast<std::ptrdiff_t>(grid_));
            }
            return sum / static_cast<double>(grid_);
        }
        for (double v : z) sum += v;
        return sum / static_cast<double>(z.size());
    }

  private:
    AveragingMode mode_;
    std::size_t grid_;
    std::vector<MeasurementBasis> bases_;
};

namespace detail {

inline Eigen::Index local_dim(const DensityMatrix& rho) {
    const auto d = static_cast<Eigen::Index>(std::lround(std::sqrt(static_cast<double>(rho.dim()))));
    if (d * d != rho.dim()) throw UnsupportedShape("density matrix is not on d x d");
    return d;
}

inline Eigen::Index local_dim(const PureState& psi) {
    if (psi.dim_a() != psi.dim_b()) throw UnsupportedShape("work requires dimA == dimB");
    return psi.dim_a();
}

/// Both parties measure in the same basis at every grid point.
template <typename State>
std::vector<double> zeta_values(const State& state, const MeasurementGrid& g) {
    if (local_dim(state) != g.dim())
        throw UnsupportedShape(std::string(to_string(g.mode())) + " requires local dimension " + std::to_string(g.dim()));
    const auto& bases = g.bases();
    std::vector<double> z(bases.size());
    parallel_for(
        bases.size(), [&](std::size_t k) { z[k] = zeta(joint_distribution(state, bases[k], bases[k])); }, 512);
    return z;
}

}  // namespace detail

/// W = average of zeta over the mode's measurement settings. With
/// `check_convergence`, W is recomputed on a doubled grid and `converged`
/// records |W(grid) - W(2 grid)| < 1e-4.
template <typename State>
WorkScanResult work(const State& state, AveragingMode mode, std::size_t grid = 64, bool check_convergence = true) {
    const Eigen::Index d = detail::local_dim(state);
    if (d != 2 && d != 3) throw UnsupportedShape("work is defined for qubits and qutrits only");
    if (d != mode_dimension(mode))
        throw UnsupportedShape(std::string(to_string(mode)) + " does not apply to local dimension " + std::to_string(d));
    const MeasurementGrid g(mode, grid);
    WorkScanResult out;
    out.mode = mode;
    out.grid_points = grid;
    out.zeta_grid = detail::zeta_values(state, g);
    out.work = g.reduce(out.zeta_grid);
    if (check_convergence) {
        const MeasurementGrid g2(mode, 2 * grid);
        out.work_doubled = g2.reduce(detail::zeta_values(state, g2));
        out.converged = std::abs(out.work - out.work_doubled) < kConvergenceTolerance;
    }
    return out;
}

template <typename State>
double work_on(const State& state, const MeasurementGrid& g) {
    return g.reduce(detail::zeta_values(state, g));
}

struct SeparableBound {
    double value = 0.0;
    AveragingMode mode = AveragingMode::GridAverage;
    std::size_t grid = 0;
    std::size_t restarts = 0;
    std::uint64_t seed = 0;
    ComplexVector state_a;  // maximizing |a>
    ComplexVector state_b;  // maximizing |b>
};

namespace detail {

/// zeta values for |a>|b> on every grid setting. Same formula as the generic
/// path, but the joint p_ij = q_a(i) q_b(j) is formed in place.
inline std::vector<double> product_zeta_values(const ComplexVector& a, const ComplexVector& b, const MeasurementGrid& g) {
    const Eigen::Index d = g.dim();
    if (a.size() != d || b.size() != d) throw UnsupportedShape("product state does not match the grid dimension");
    auto h = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
    std::vector<double> z(g.bases().size());
    std::array<double, 3> qa{}, qb{};
    for (std::size_t k = 0; k < z.size(); ++k) {
        const ComplexMatrix& m = g.bases()[k].vectors();
        for (Eigen::Index i = 0; i < d; ++i) {
            Complex sa = 0.0, sb = 0.0;
            for (Eigen::Index r = 0; r < d; ++r) {
                sa += std::conj(m(r, i)) * a(r);
                sb += std::conj(m(r, i)) * b(r);
            }
            qa[static_cast<std::size_t>(i)] = std::norm(sa);
            qb[static_cast<std::size_t>(i)] = std::norm(sb);
        }
        double hab = 0.0, ha = 0.0, hb = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            ha += h(qa[ii]);
            hb += h(qb[ii]);
            for (Eigen::Index j = 0; j < d; ++j) hab += h(qa[ii] * qb[static_cast<std::size_t>(j)]);
        }
        z[k] = 0.5 * (2.0 - 2.0 * hab + ha + hb);
    }
    return z;
}

inline std::pair<ComplexVector, ComplexVector> product_vectors(const std::vector<double>& x, Eigen::Index d) {
    ComplexVector a(d), b(d);
    for (Eigen::Index k = 0; k < d; ++k) {
        a(k) = Complex(x[static_cast<std::size_t>(2 * k)], x[static_cast<std::size_t>(2 * k + 1)]);
        b(k) = Complex(x[static_cast<std::size_t>(2 * d + 2 * k)], x[static_cast<std::size_t>(2 * d + 2 * k + 1)]);
    }
    const double na = a.norm(), nb = b.norm();
    if (na < 1e-12 || nb < 1e-12) throw InvalidState("degenerate product parameters");
    return {a / na, b / nb};
}

inline double product_work(const std::vector<double>& x, const MeasurementGrid& g) {
    const auto [a, b] = product_vectors(x, g.dim());
    return g.reduce(product_zeta_values(a, b, g));
}

struct SearchPoint {
    std::vector<double> x;
    double value = -std::numeric_limits<double>::infinity();
};

/// Rescales each half of the parameter vector (the |a> and |b> blocks) to
/// unit norm; W is invariant under this, and it keeps steps meaningful.
inline void normalize_product_params(std::vector<double>& x) {
    const std::size_t half = x.size() / 2;
    for (std::size_t off : {std::size_t{0}, half}) {
        double n2 = 0.0;
        for (std::size_t k = off; k < off + half; ++k) n2 += x[k] * x[k];
        if (n2 <= 0.0) continue;
        const double inv = 1.0 / std::sqrt(n2);
        for (std::size_t k = off; k < off + half; ++k) x[k] *= inv;
    }
}

/// Compass search: try +-step on each coordinate, keep any improvement,
/// halve the step when a full sweep fails. Stops at `min_step` or after
/// `max_evals` objective calls.
template <typename Objective>
SearchPoint compass_search(Objective&& f, SearchPoint start, double step, double min_step, std::size_t max_evals = 4000) {
    SearchPoint cur = std::move(start);
    normalize_product_params(cur.x);
    cur.value = f(cur.x);
    std::size_t evals = 1;
    while (step >= min_step && evals < max_evals) {
        bool improved = false;
        for (std::size_t k = 0; k < cur.x.size() && evals < max_evals; ++k) {
            for (double dir : {+1.0, -1.0}) {
                auto trial = cur.x;
                trial[k] += dir * step;
                normalize_product_params(trial);
                double v;
                ++evals;
                try {
                    v = f(trial);
                } catch (const InvalidState&) {
                    continue;
                }
                if (v > cur.value + 1e-12) {
                    cur.x = std::move(trial);
                    cur.value = v;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return cur;
}

}  // namespace detail

/// Largest W over pure product states |a>|b>. Multi-start compass search on
/// a coarse grid (at most 16 per axis), then the best candidates are polished
/// and scored on the requested grid. The first min(d, restarts) starts are the
/// computational products |kk>; the rest are seeded random unit vectors.
/// Restarts run in parallel on independent derived streams.
inline SeparableBound separable_bound(Eigen::Index d, AveragingMode mode, std::size_t restarts, std::uint64_t seed,
                                      std::size_t grid = 64) {
    if (d != 2 && d != 3) throw UnsupportedShape("separable_bound supports d in {2, 3}");
    if (d != mode_dimension(mode)) throw UnsupportedShape("averaging mode does not match dimension");
    if (restarts == 0) throw InvalidParameter("restarts must be positive");
    const MeasurementGrid coarse(mode, std::min<std::size_t>(grid, 16));
    const MeasurementGrid fine(mode, grid);
    const auto n = static_cast<std::size_t>(4 * d);

    std::vector<detail::SearchPoint> found(restarts);
    detail::parallel_for(restarts, [&](std::size_t r) {
        detail::SearchPoint start;
        start.x.assign(n, 0.0);
        if (r < static_cast<std::size_t>(d)) {
            start.x[2 * r] = 1.0;
            start.x[static_cast<std::size_t>(2 * d) + 2 * r] = 1.0;
        } else {
            SplitMix64 rng = SplitMix64::derive(seed, r);
            std::normal_distribution<double> normal;
            for (double& v : start.x) v = normal(rng);
        }
        auto objective = [&](const std::vector<double>& x) { return detail::product_work(x, coarse); };
        found[r] = detail::compass_search(objective, std::move(start), 0.5, 2e-3);
    });

    std::vector<std::size_t> order(restarts);
    for (std::size_t i = 0; i < restarts; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return found[i].value > found[j].value; });
    const std::size_t polish = std::min<std::size_t>(restarts, 4);

    std::vector<detail::SearchPoint> polished(polish);
    for (std::size_t k = 0; k < polish; ++k) {
        auto objective = [&](const std::vector<double>& x) { return detail::product_work(x, fine); };
        detail::SearchPoint start{found[order[k]].x, -std::numeric_limits<double>::infinity()};
        polished[k] = detail::compass_search(objective, std::move(start), 0.02, 2.5e-4);
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < polish; ++k)
        if (polished[k].value > polished[best].value) best = k;

    auto [a, b] = detail::product_vectors(polished[best].x, d);
    a *= leading_phase(a);
    b *= leading_phase(b);
    return {polished[best].value, mode, grid, restarts, seed, std::move(a), std::move(b)};
}

struct ScanRow {
    double param = 0.0;
    double g_concurrence = 0.0;
    double work = 0.0;
};

inline std::vector<ScanRow> scan_family(MixedFamily family, const std::vector<double>& params, AveragingMode mode,
                                        std::size_t grid = 64) {
    std::vector<ScanRow> rows;
    rows.reserve(params.size());
    for (double p : params) {
        const DensityMatrix rho = presets::family_state(family, p);
        rows.push_back({p, g_concurrence_family(family, p), work(rho, mode, grid, false).work});
    }
    return rows;
}

/// `steps` evenly spaced values from 0 to 1 inclusive.
inline std::vector<double> unit_interval_grid(std::size_t steps) {
    if (steps < 2) throw InvalidParameter("need at least two parameter steps");
    std::vector<double> v(steps);
    for (std::size_t k = 0; k < steps; ++k) v[k] = static_cast<double>(k) / static_cast<double>(steps - 1);
    return v;
}

inline std::string format_sig10(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

/// Header `param,g_concurrence,work,mode,grid`.
inline void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows, AveragingMode mode, std::size_t grid) {
    os << "param,g_concurrence,work,mode,grid\n";
    for (const auto& r : rows)
        os << format_sig10(r.param) << ',' << format_sig10(r.g_concurrence) << ',' << format_sig10(r.work) << ','
           << to_string(mode) << ',' << grid << '\n';
}

}  // namespace qwork
