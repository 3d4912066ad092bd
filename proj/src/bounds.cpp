#include "qsl/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "qsl/errors.hpp"
#include "qsl/liouville.hpp"

namespace qsl {

std::size_t default_quadrature_steps() {
    if (const char* env = std::getenv("QSL_QUADRATURE_STEPS")) {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return kDefaultQuadratureSteps;
}

std::string_view to_string(BoundTarget target) {
    return target == BoundTarget::purity ? "purity" : "purity-deviation";
}

double BoundReport::value(BoundKind kind) const noexcept {
    switch (kind) {
        case BoundKind::hilbert_hs: return hilbert_hs;
        case BoundKind::hilbert_sp: return hilbert_sp;
        case BoundKind::liouville: return liouville;
    }
    return liouville;
}

bool BoundReport::ordered(double tol) const noexcept {
    return liouville <= hilbert_sp + tol && hilbert_sp <= hilbert_hs + tol;
}

BoundRates bound_rates(const LindbladGenerator& gen) {
    BoundRates rates;
    for (const auto& a : gen.jump_ops()) {
        rates.hilbert_hs += 4.0 * std::pow(hs_norm(a), 2);
        rates.hilbert_sp += 4.0 * std::pow(spectral_norm(a), 2);
    }
    rates.liouville = unit_skew_spectral_norm(gen);
    return rates;
}

double integrate_prefactor(const LindbladGenerator& gen, double t_initial, double t_final,
                           std::size_t quadrature_steps) {
    if (t_final < t_initial) {
        throw std::invalid_argument("bound interval is reversed: t_f=" + std::to_string(t_final) +
                                    " < t_i=" + std::to_string(t_initial));
    }
    if (gen.jump_ops().empty() || t_final == t_initial) return 0.0;
    if (gen.prefactor_function().is_constant()) return gen.prefactor(t_initial) * (t_final - t_initial);
    const std::size_t n = std::max<std::size_t>(quadrature_steps, 1);
    const double h = (t_final - t_initial) / static_cast<double>(n);
    double sum = 0.5 * (gen.prefactor(t_initial) + gen.prefactor(t_final));
    for (std::size_t k = 1; k < n; ++k) sum += gen.prefactor(t_initial + static_cast<double>(k) * h);
    return sum * h;
}

double hilbert_hs_bound(const LindbladGenerator& gen, double t_initial, double t_final,
                        std::size_t quadrature_steps) {
    const double integral = integrate_prefactor(gen, t_initial, t_final, quadrature_steps);
    return integral == 0.0 ? 0.0 : bound_rates(gen).hilbert_hs * integral;
}

double hilbert_sp_bound(const LindbladGenerator& gen, double t_initial, double t_final,
                        std::size_t quadrature_steps) {
    const double integral = integrate_prefactor(gen, t_initial, t_final, quadrature_steps);
    return integral == 0.0 ? 0.0 : bound_rates(gen).hilbert_sp * integral;
}

double liouville_bound(const LindbladGenerator& gen, double t_initial, double t_final,
                       std::size_t quadrature_steps) {
    const double integral = integrate_prefactor(gen, t_initial, t_final, quadrature_steps);
    return integral == 0.0 ? 0.0 : unit_skew_spectral_norm(gen) * integral;
}

BoundReport evaluate_bounds(const LindbladGenerator& gen, double t_initial, double t_final,
                            BoundTarget target, std::size_t quadrature_steps) {
    const double integral = integrate_prefactor(gen, t_initial, t_final, quadrature_steps);
    const BoundRates rates = bound_rates(gen);
    BoundReport r;
    r.t_initial = t_initial;
    r.t_final = t_final;
    r.hilbert_hs = rates.hilbert_hs * integral;
    r.hilbert_sp = rates.hilbert_sp * integral;
    r.liouville = rates.liouville * integral;
    r.applies_to = target;
    r.quadrature_steps = quadrature_steps;
    return r;
}

std::pair<double, double> purity_bound_interval(double bound, double purity_initial) {
    // Pure states computed in floating point can land a few ulps above one.
    if (!(purity_initial > 0.0 && purity_initial <= 1.0 + kTraceTolerance)) {
        throw std::invalid_argument("purity_bound_interval: initial purity " +
                                    std::to_string(purity_initial) + " outside (0, 1]");
    }
    return {purity_initial * std::exp(-bound), std::min(1.0, purity_initial * std::exp(bound))};
}

std::pair<double, double> purity_bound_interval(const BoundReport& report, double purity_initial,
                                                BoundKind kind) {
    return purity_bound_interval(report.value(kind), purity_initial);
}

std::pair<double, double> purity_deviation_bound_interval(double bound, double deviation_initial) {
    if (!(deviation_initial >= 0.0)) {
        throw std::invalid_argument("purity_deviation_bound_interval: negative initial deviation");
    }
    return {deviation_initial * std::exp(-bound), deviation_initial * std::exp(bound)};
}

std::pair<double, double> purity_deviation_bound_interval(const BoundReport& report,
                                                          double deviation_initial, BoundKind kind) {
    return purity_deviation_bound_interval(report.value(kind), deviation_initial);
}

namespace {

std::optional<std::string> dephasing_failure(const LindbladGenerator& gen) {
    const auto& jumps = gen.jump_ops();
    for (std::size_t j = 0; j < jumps.size(); ++j) {
        const double normality = max_abs(commutator(jumps[j], adjoint(jumps[j])));
        if (normality >= kDephasingTolerance)
            return "jump operator " + std::to_string(j) + " is not normal";
        for (std::size_t k = j + 1; k < jumps.size(); ++k) {
            if (max_abs(commutator(jumps[j], jumps[k])) >= kDephasingTolerance)
                return "jump operators " + std::to_string(j) + " and " + std::to_string(k) + " do not commute";
        }
    }
    return std::nullopt;
}

}  // namespace

bool is_dephasing(const LindbladGenerator& gen) { return !dephasing_failure(gen).has_value(); }

void require_dephasing(const LindbladGenerator& gen) {
    if (auto why = dephasing_failure(gen)) throw NotDephasing("not a dephasing generator: " + *why);
}

double dephasing_purity_floor(const LindbladGenerator& gen, double purity_initial, std::size_t dim,
                              double t_initial, double t_final, std::size_t quadrature_steps) {
    require_dephasing(gen);
    const double inv_n = 1.0 / static_cast<double>(dim);
    if (purity_initial < inv_n - 1e-12) {
        throw std::invalid_argument("dephasing_purity_floor: initial purity below 1/N");
    }
    const double b = liouville_bound(gen, t_initial, t_final, quadrature_steps);
    return inv_n + (purity_initial - inv_n) * std::exp(-b);
}

std::vector<double> cumulative_prefactor(const LindbladGenerator& gen, const TimeGrid& grid,
                                         std::size_t quadrature_steps) {
    std::vector<double> out(grid.steps + 1, 0.0);
    const std::size_t panels = std::max<std::size_t>(1, (quadrature_steps + grid.steps - 1) / grid.steps);
    for (std::size_t k = 0; k < grid.steps; ++k)
        out[k + 1] = out[k] + integrate_prefactor(gen, grid.time(k), grid.time(k + 1), panels);
    return out;
}

void annotate_bounds(Trajectory& traj, const LindbladGenerator& gen, std::size_t quadrature_steps) {
    const auto integral = cumulative_prefactor(gen, traj.grid, quadrature_steps);
    const double rate = unit_skew_spectral_norm(gen);
    const bool deviation = traj.has_reference();
    const double x0 = deviation ? traj.purity_deviation.front() : traj.purity.front();
    const std::size_t n = integral.size();
    traj.bound_floor.resize(n);
    traj.bound_ceiling.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double b = rate * integral[k];
        const auto [lo, hi] = deviation ? purity_deviation_bound_interval(b, std::max(x0, 0.0))
                                        : purity_bound_interval(b, x0);
        traj.bound_floor[k] = lo;
        traj.bound_ceiling[k] = hi;
    }
    traj.eq12_floor.clear();
    if (is_dephasing(gen)) {
        const double inv_n = 1.0 / static_cast<double>(gen.dim());
        const double p0 = traj.purity.front();
        traj.eq12_floor.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            traj.eq12_floor[k] = inv_n + (p0 - inv_n) * std::exp(-rate * integral[k]);
    }
}

}  // namespace qsl
