// bounds.hpp: state-independent speed limits on log-purity and log-purity-deviation
//
// All bounds are cumulative: they bound |ln X(t_f) / X(t_i)| for X the purity
// or the purity deviation from a solution of the same dynamics.

#pragma once

#include <cstddef>
#include <string_view>
#include <utility>

#include "qsl/lindblad.hpp"
#include "qsl/propagator.hpp"

namespace qsl {

inline constexpr std::size_t kDefaultQuadratureSteps = 1000;

// QSL_QUADRATURE_STEPS if set to a positive integer, otherwise 1000.
std::size_t default_quadrature_steps();

enum class BoundTarget { purity, purity_deviation };
std::string_view to_string(BoundTarget target);

enum class BoundKind { hilbert_hs, hilbert_sp, liouville };

struct BoundReport {
    double t_initial = 0.0;
    double t_final = 0.0;
    double hilbert_hs = 0.0;
    double hilbert_sp = 0.0;
    double liouville = 0.0;
    BoundTarget applies_to = BoundTarget::purity;
    std::size_t quadrature_steps = kDefaultQuadratureSteps;

    double value(BoundKind kind) const noexcept;
    // liouville <= hilbert_sp <= hilbert_hs within tol
    bool ordered(double tol = 1e-9) const noexcept;
};

// Instantaneous rates at unit prefactor; every bound is rate * int prefactor(t) dt.
struct BoundRates {
    double hilbert_hs = 0.0;  // 4 sum ||A_k||_2^2
    double hilbert_sp = 0.0;  // 4 sum ||A_k||_sp^2
    double liouville = 0.0;   // ||H - H^dagger||_sp
};
BoundRates bound_rates(const LindbladGenerator& gen);

// Trapezoid rule for int_{t_i}^{t_f} prefactor(t) dt. Throws std::invalid_argument if t_f < t_i.
double integrate_prefactor(const LindbladGenerator& gen, double t_initial, double t_final,
                           std::size_t quadrature_steps);

double hilbert_hs_bound(const LindbladGenerator& gen, double t_initial, double t_final,
                        std::size_t quadrature_steps = default_quadrature_steps());
double hilbert_sp_bound(const LindbladGenerator& gen, double t_initial, double t_final,
                        std::size_t quadrature_steps = default_quadrature_steps());
double liouville_bound(const LindbladGenerator& gen, double t_initial, double t_final,
                       std::size_t quadrature_steps = default_quadrature_steps());

BoundReport evaluate_bounds(const LindbladGenerator& gen, double t_initial, double t_final,
                            BoundTarget target = BoundTarget::purity,
                            std::size_t quadrature_steps = default_quadrature_steps());

// [P_i e^{-B}, min(1, P_i e^{B})]. Throws std::invalid_argument unless P_i in (0, 1].
std::pair<double, double> purity_bound_interval(double bound, double purity_initial);
std::pair<double, double> purity_bound_interval(const BoundReport& report, double purity_initial,
                                                BoundKind kind = BoundKind::liouville);

// [PD_i e^{-B}, PD_i e^{B}]. Throws std::invalid_argument if PD_i < 0.
std::pair<double, double> purity_deviation_bound_interval(double bound, double deviation_initial);
std::pair<double, double> purity_deviation_bound_interval(const BoundReport& report,
                                                          double deviation_initial,
                                                          BoundKind kind = BoundKind::liouville);

inline constexpr double kDephasingTolerance = 1e-10;

// Jump operators normal and pairwise commuting. These make the maximally mixed
// state stationary whatever the Hamiltonian is.
bool is_dephasing(const LindbladGenerator& gen);
// Throws NotDephasing naming the first failing commutator.
void require_dephasing(const LindbladGenerator& gen);

// 1/N + (P_i - 1/N) exp(-liouville_bound). Throws NotDephasing, or
// std::invalid_argument if P_i < 1/N.
double dephasing_purity_floor(const LindbladGenerator& gen, double purity_initial, std::size_t dim,
                              double t_initial, double t_final,
                              std::size_t quadrature_steps = default_quadrature_steps());

// Cumulative int_{t_0}^{t_k} prefactor dt at every grid point, with at least
// `quadrature_steps` panels over the whole grid.
std::vector<double> cumulative_prefactor(const LindbladGenerator& gen, const TimeGrid& grid,
                                         std::size_t quadrature_steps = default_quadrature_steps());

// Fills bound_floor/bound_ceiling from the Liouville bound on the purity
// deviation (or the purity without a reference), and eq12_floor for dephasing generators.
void annotate_bounds(Trajectory& traj, const LindbladGenerator& gen,
                     std::size_t quadrature_steps = default_quadrature_steps());

}  // namespace qsl
