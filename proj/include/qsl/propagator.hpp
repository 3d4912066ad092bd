// propagator.hpp: two independent time-evolution paths for Lindblad dynamics

#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "qsl/lindblad.hpp"

namespace qsl {

// Uniform grid of `steps` intervals. Each interval is integrated in `substeps`
// equal pieces; only grid points are recorded.
struct TimeGrid {
    double t_start = 0.0;
    double t_end = 5.0;
    std::size_t steps = 1000;
    std::size_t substeps = 1;

    double dt() const noexcept { return (t_end - t_start) / static_cast<double>(steps); }
    double time(std::size_t k) const noexcept { return t_start + static_cast<double>(k) * dt(); }
    std::vector<double> times() const;
    // Throws std::invalid_argument unless t_end > t_start and steps, substeps >= 1.
    void validate() const;
};

enum class Method { superop_expm, direct_rk4 };
std::string_view to_string(Method m);

struct Trajectory {
    TimeGrid grid;
    Method method = Method::superop_expm;
    std::vector<DensityMatrix> states;
    std::vector<double> purity;
    std::vector<double> purity_deviation;  // empty without a reference state
    // Filled by annotate_bounds().
    std::vector<double> bound_floor;
    std::vector<double> bound_ceiling;
    std::vector<double> eq12_floor;  // empty unless the generator is dephasing

    bool has_reference() const noexcept { return !purity_deviation.empty(); }
};

// |rho> <- expm(-i H dt)|rho>. Time-dependent generators use the fourth-order
// Magnus step with two Gauss-Legendre nodes per substep.
// Throws InvariantViolation if a recorded state is not a density matrix.
Trajectory evolve_superop(const LindbladGenerator& gen, const DensityMatrix& rho0, const TimeGrid& grid,
                          const std::optional<ComplexMatrix>& reference = std::nullopt);

// Classic RK4 on drho/dt = apply_generator(gen, rho, t).
Trajectory evolve_direct(const LindbladGenerator& gen, const DensityMatrix& rho0, const TimeGrid& grid,
                         const std::optional<ComplexMatrix>& reference = std::nullopt);

Trajectory evolve(Method method, const LindbladGenerator& gen, const DensityMatrix& rho0,
                  const TimeGrid& grid, const std::optional<ComplexMatrix>& reference = std::nullopt);

inline constexpr double kStationaryTolerance = 1e-9;

// True iff hs_norm(apply_generator(gen, rho_s, t)) < 1e-9 at every grid point.
bool verify_stationary(const LindbladGenerator& gen, const ComplexMatrix& rho_s, const TimeGrid& grid);

// Max entrywise |a_k - b_k| over all recorded states.
double max_discrepancy(const Trajectory& a, const Trajectory& b);

}  // namespace qsl
