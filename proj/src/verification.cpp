#include "qsl/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qsl/liouville.hpp"

namespace qsl {

bool ValidityReport::ok() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.ok(); });
}

const BoundCheck* ValidityReport::worst() const noexcept {
    const BoundCheck* out = nullptr;
    for (const auto& c : checks)
        if (!out || c.worst_excess - c.tolerance > out->worst_excess - out->tolerance) out = &c;
    return out;
}

namespace {

// ln of a ratio of nonnegative quantities; a value that collapsed to zero
// counts as an infinitely fast decay.
double log_ratio(double x, double x0) {
    if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
    return std::log(x / x0);
}

BoundCheck log_check(std::string label, const std::vector<double>& values, const std::vector<double>& integral,
                     double rate, const TimeGrid& grid) {
    BoundCheck check{std::move(label), -std::numeric_limits<double>::infinity(), grid.t_start, kBoundTolerance};
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double excess = std::abs(log_ratio(values[k], values.front())) - rate * integral[k];
        if (excess > check.worst_excess) {
            check.worst_excess = excess;
            check.worst_time = grid.time(k);
        }
    }
    return check;
}

}  // namespace

ValidityReport check_bounds(const Trajectory& traj, const LindbladGenerator& declared,
                            std::size_t quadrature_steps) {
    ValidityReport report;
    const auto integral = cumulative_prefactor(declared, traj.grid, quadrature_steps);
    const BoundRates rates = bound_rates(declared);

    report.checks.push_back(log_check("purity/hilbert_hs", traj.purity, integral, rates.hilbert_hs, traj.grid));
    report.checks.push_back(log_check("purity/hilbert_sp", traj.purity, integral, rates.hilbert_sp, traj.grid));
    report.checks.push_back(log_check("purity/liouville", traj.purity, integral, rates.liouville, traj.grid));
    if (traj.has_reference() && traj.purity_deviation.front() > kNegligibleDeviation) {
        report.checks.push_back(
            log_check("purity_deviation/liouville", traj.purity_deviation, integral, rates.liouville, traj.grid));
    }
    if (is_dephasing(declared)) {
        const double inv_n = 1.0 / static_cast<double>(declared.dim());
        const double p0 = traj.purity.front();
        BoundCheck floor{"purity/dephasing_floor", -std::numeric_limits<double>::infinity(), traj.grid.t_start,
                         kFloorTolerance};
        for (std::size_t k = 0; k < traj.purity.size(); ++k) {
            const double f = inv_n + (p0 - inv_n) * std::exp(-rates.liouville * integral[k]);
            if (f - traj.purity[k] > floor.worst_excess) {
                floor.worst_excess = f - traj.purity[k];
                floor.worst_time = traj.grid.time(k);
            }
        }
        report.checks.push_back(floor);
    }
    return report;
}

LogSlopeFit fit_log_slope(std::span<const double> times, std::span<const double> values, double cutoff) {
    if (times.size() != values.size()) throw std::invalid_argument("fit_log_slope: length mismatch");
    if (values.empty() || !(values.front() > cutoff))
        throw std::invalid_argument("fit_log_slope: initial value at or below the cutoff");
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!(values[k] > cutoff)) continue;
        xs.push_back(times[k]);
        ys.push_back(std::log(values[k] / values.front()));
    }
    if (xs.size() < 2) throw std::invalid_argument("fit_log_slope: fewer than two usable points");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    LogSlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.points = xs.size();
    for (std::size_t k = 0; k < xs.size(); ++k)
        fit.max_residual = std::max(fit.max_residual, std::abs(ys[k] - fit.intercept - fit.slope * xs[k]));
    return fit;
}

LindbladGenerator path_generator(const Scenario& scenario, Method method) {
    LindbladGenerator gen = scenario.propagation_generator();
    if (method != Method::superop_expm || !scenario.fault.negate_superoperator_hamiltonian) return gen;
    std::vector<HamiltonianTerm> negated = gen.hamiltonian_terms();
    for (auto& term : negated) term.op *= -1.0;
    return LindbladGenerator(gen.dim(), std::move(negated), gen.jump_ops(), gen.prefactor_function());
}

Trajectory run_scenario(const Scenario& scenario, Method method, std::size_t quadrature_steps) {
    Trajectory traj = evolve(method, path_generator(scenario, method), scenario.initial_state, scenario.grid,
                             scenario.reference_matrix());
    annotate_bounds(traj, scenario.generator, quadrature_steps);
    return traj;
}

int CompareReport::exit_code() const noexcept {
    if (!paths_agree()) return 4;
    if (!bounds_hold()) return 5;
    return 0;
}

CompareReport compare_scenario(const Scenario& scenario, std::size_t quadrature_steps) {
    CompareReport report;
    report.scenario = scenario.name;
    const Trajectory a = run_scenario(scenario, Method::superop_expm, quadrature_steps);
    const Trajectory b = run_scenario(scenario, Method::direct_rk4, quadrature_steps);
    report.discrepancy = max_discrepancy(a, b);
    report.superop = check_bounds(a, scenario.generator, quadrature_steps);
    report.direct = check_bounds(b, scenario.generator, quadrature_steps);
    return report;
}

}  // namespace qsl
