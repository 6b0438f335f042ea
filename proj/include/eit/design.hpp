#pragma once

// Optimal electrode placement. The information matrix of the locally
// linearized inversion at a fixed estimate t* is
//
//   M(phi) = J(t*, phi)' J(t*, phi) + lambda R'R,
//
// and a design maximizes det M (D-optimal) or its smallest eigenvalue
// (E-optimal, reported only).

#include "eit/forward_map.hpp"
#include "eit/geometry.hpp"
#include "eit/inversion.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace eit {

using InformationMatrix = Eigen::Matrix<double, kNumParams, kNumParams>;

enum class Criterion { DOptimal, EOptimal };

[[nodiscard]] const char* to_string(Criterion c);

[[nodiscard]] InformationMatrix information_matrix(const ElectrodeConfig& cfg, const EllipseParams& t_star,
                                                   double lambda, const RegularizationSpec& reg = {});

/// det M via an LDLT factorization.
[[nodiscard]] double d_criterion(const ElectrodeConfig& cfg, const EllipseParams& t_star, double lambda,
                                 const RegularizationSpec& reg = {});

/// Smallest eigenvalue of M.
[[nodiscard]] double e_criterion(const ElectrodeConfig& cfg, const EllipseParams& t_star, double lambda,
                                 const RegularizationSpec& reg = {});

/// Same as d_criterion for an already assembled matrix.
[[nodiscard]] double determinant(const InformationMatrix& m);

struct DesignEvaluation {
    ElectrodeConfig phi;  ///< sorted
    double value;
};

struct DesignResult {
    ElectrodeConfig phi_opt;
    double objective_value = 0.0;
    Criterion criterion = Criterion::DOptimal;
    std::vector<DesignEvaluation> trace;
    std::uint64_t seed = 0;
};

enum class SearchStrategy {
    /// Compass search from Latin-hypercube starts.
    MultistartPattern,
    /// Gaussian-process surrogate with expected improvement.
    BayesianOptimization,
};

struct DesignOptions {
    SearchStrategy strategy = SearchStrategy::MultistartPattern;
    Criterion criterion = Criterion::DOptimal;
    int num_starts = 32;
    double initial_step = 0.25;
    double min_step = 1e-6;
    /// Initial design points of the surrogate search (after the uniform one).
    int bo_initial_points = 20;
    /// Random candidates scored by the acquisition function per iteration.
    int bo_candidates = 2000;
};

/// Search over sorted electrode angles parametrized by (phi1, gap1, gap2,
/// gap3), every gap at least kMinElectrodeGap. The uniform configuration is
/// evaluated first and returned unless something strictly better is found.
/// Every criterion evaluation counts against `budget` (>= 1).
[[nodiscard]] DesignResult optimize_design(const EllipseParams& t_star, double lambda, const RegularizationSpec& reg,
                                           std::uint64_t seed, int budget, const DesignOptions& options = {});

} // namespace eit
