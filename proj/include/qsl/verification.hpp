// verification.hpp: bound-validity checks, log-slope fits and the dual-path comparison

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qsl/bounds.hpp"
#include "qsl/propagator.hpp"
#include "qsl/scenarios.hpp"

namespace qsl {

inline constexpr double kDualPathTolerance = 1e-8;
inline constexpr double kBoundTolerance = 1e-7;
inline constexpr double kFloorTolerance = 1e-9;
// Purity deviations at or below this are treated as identically zero.
inline constexpr double kNegligibleDeviation = 1e-14;

struct BoundCheck {
    std::string label;       // e.g. "purity/liouville"
    double worst_excess = 0;  // max over t of |ln X(t)/X(0)| - B(t), or floor - P(t)
    double worst_time = 0;
    double tolerance = kBoundTolerance;

    bool ok() const noexcept { return worst_excess <= tolerance; }
};

struct ValidityReport {
    std::vector<BoundCheck> checks;

    bool ok() const noexcept;
    const BoundCheck* worst() const noexcept;
};

// Checks the trajectory against the bounds of `declared`, which may differ from
// the generator that produced it. Covers the three purity bounds, the
// Liouville bound on the purity deviation when a reference is present and
// nonzero, and the dephasing floor when the generator is dephasing.
ValidityReport check_bounds(const Trajectory& traj, const LindbladGenerator& declared,
                            std::size_t quadrature_steps = default_quadrature_steps());

struct LogSlopeFit {
    double slope = 0;
    double intercept = 0;
    double max_residual = 0;
    std::size_t points = 0;
};

// Least-squares line through (t, ln(values / values[0])), skipping points
// where values <= cutoff. Throws std::invalid_argument with fewer than two usable points.
LogSlopeFit fit_log_slope(std::span<const double> times, std::span<const double> values, double cutoff = 0.0);

// Generator for one propagation path, with any fault injection applied.
LindbladGenerator path_generator(const Scenario& scenario, Method method);

Trajectory run_scenario(const Scenario& scenario, Method method,
                        std::size_t quadrature_steps = default_quadrature_steps());

struct CompareReport {
    std::string scenario;
    double discrepancy = 0;
    ValidityReport superop;
    ValidityReport direct;

    bool paths_agree() const noexcept { return discrepancy < kDualPathTolerance; }
    bool bounds_hold() const noexcept { return superop.ok() && direct.ok(); }
    // 0, 4 on a path mismatch, 5 on a bound violation (mismatch wins).
    int exit_code() const noexcept;
};

CompareReport compare_scenario(const Scenario& scenario,
                               std::size_t quadrature_steps = default_quadrature_steps());

}  // namespace qsl
