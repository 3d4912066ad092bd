#include "qsl/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qsl/errors.hpp"
#include "qsl/liouville.hpp"

namespace qsl {

std::vector<double> TimeGrid::times() const {
    std::vector<double> t(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) t[k] = time(k);
    return t;
}

void TimeGrid::validate() const {
    if (!(t_end > t_start)) throw std::invalid_argument("TimeGrid: t_end must exceed t_start");
    if (steps < 1) throw std::invalid_argument("TimeGrid: steps must be >= 1");
    if (substeps < 1) throw std::invalid_argument("TimeGrid: substeps must be >= 1");
}

std::string_view to_string(Method m) {
    return m == Method::superop_expm ? "superop-expm" : "direct-rk4";
}

namespace {

class Recorder {
public:
    Recorder(Method method, const TimeGrid& grid, const std::optional<ComplexMatrix>& reference)
        : reference_(reference) {
        traj_.grid = grid;
        traj_.method = method;
        traj_.states.reserve(grid.steps + 1);
        traj_.purity.reserve(grid.steps + 1);
        if (reference_) traj_.purity_deviation.reserve(grid.steps + 1);
    }

    void record(ComplexMatrix rho, std::size_t step) {
        if (auto why = density_violation(rho)) {
            std::ostringstream os;
            os << to_string(traj_.method) << ": state at step " << step << " (t=" << traj_.grid.time(step)
               << ") is invalid: " << *why;
            throw InvariantViolation(os.str());
        }
        traj_.purity.push_back(purity(rho));
        if (reference_) traj_.purity_deviation.push_back(purity_deviation(rho, *reference_));
        traj_.states.emplace_back(std::move(rho));
    }

    Trajectory finish() { return std::move(traj_); }

private:
    Trajectory traj_;
    const std::optional<ComplexMatrix>& reference_;
};

void check_inputs(const LindbladGenerator& gen, const DensityMatrix& rho0, const TimeGrid& grid) {
    grid.validate();
    if (rho0.dim() != gen.dim()) throw DimensionError("evolve: state and generator dimensions differ");
}

// Liouville-space generator L = -i H, so that d|rho>/dt = L |rho>.
ComplexMatrix liouvillian(const LindbladGenerator& gen, double t) {
    ComplexMatrix l = build_superoperator(gen, t).matrix;
    l *= Complex(0.0, -1.0);
    return l;
}

}  // namespace

Trajectory evolve_superop(const LindbladGenerator& gen, const DensityMatrix& rho0, const TimeGrid& grid,
                          const std::optional<ComplexMatrix>& reference) {
    check_inputs(gen, rho0, grid);
    Recorder rec(Method::superop_expm, grid, reference);
    rec.record(rho0.matrix(), 0);

    const double h = grid.dt() / static_cast<double>(grid.substeps);
    LiouvilleVector v = vectorize(rho0.matrix());
    ComplexMatrix fixed_step;
    if (!gen.is_time_dependent()) fixed_step = expm(h * liouvillian(gen, grid.t_start));

    const double node_offset = std::sqrt(3.0) / 6.0;
    for (std::size_t k = 0; k < grid.steps; ++k) {
        for (std::size_t s = 0; s < grid.substeps; ++s) {
            if (gen.is_time_dependent()) {
                const double t0 = grid.time(k) + static_cast<double>(s) * h;
                const ComplexMatrix l1 = liouvillian(gen, t0 + (0.5 - node_offset) * h);
                const ComplexMatrix l2 = liouvillian(gen, t0 + (0.5 + node_offset) * h);
                ComplexMatrix omega = (0.5 * h) * (l1 + l2);
                omega += (std::sqrt(3.0) / 12.0 * h * h) * commutator(l2, l1);
                v = LiouvilleVector(matvec(expm(omega), v.values()));
            } else {
                v = LiouvilleVector(matvec(fixed_step, v.values()));
            }
        }
        rec.record(devectorize(v), k + 1);
    }
    return rec.finish();
}

Trajectory evolve_direct(const LindbladGenerator& gen, const DensityMatrix& rho0, const TimeGrid& grid,
                         const std::optional<ComplexMatrix>& reference) {
    check_inputs(gen, rho0, grid);
    Recorder rec(Method::direct_rk4, grid, reference);
    rec.record(rho0.matrix(), 0);

    const double h = grid.dt() / static_cast<double>(grid.substeps);
    ComplexMatrix rho = rho0.matrix();
    for (std::size_t k = 0; k < grid.steps; ++k) {
        for (std::size_t s = 0; s < grid.substeps; ++s) {
            const double t = grid.time(k) + static_cast<double>(s) * h;
            const ComplexMatrix k1 = apply_generator(gen, rho, t);
            const ComplexMatrix k2 = apply_generator(gen, rho + (0.5 * h) * k1, t + 0.5 * h);
            const ComplexMatrix k3 = apply_generator(gen, rho + (0.5 * h) * k2, t + 0.5 * h);
            const ComplexMatrix k4 = apply_generator(gen, rho + h * k3, t + h);
            ComplexMatrix incr = k1 + 2.0 * k2;
            incr += 2.0 * k3;
            incr += k4;
            incr *= h / 6.0;
            rho += incr;
        }
        rec.record(rho, k + 1);
    }
    return rec.finish();
}

Trajectory evolve(Method method, const LindbladGenerator& gen, const DensityMatrix& rho0,
                  const TimeGrid& grid, const std::optional<ComplexMatrix>& reference) {
    return method == Method::superop_expm ? evolve_superop(gen, rho0, grid, reference)
                                          : evolve_direct(gen, rho0, grid, reference);
}

bool verify_stationary(const LindbladGenerator& gen, const ComplexMatrix& rho_s, const TimeGrid& grid) {
    for (std::size_t k = 0; k <= grid.steps; ++k) {
        if (!(hs_norm(apply_generator(gen, rho_s, grid.time(k))) < kStationaryTolerance)) return false;
    }
    return true;
}

double max_discrepancy(const Trajectory& a, const Trajectory& b) {
    if (a.states.size() != b.states.size())
        throw DimensionError("max_discrepancy: trajectories have different lengths");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.states.size(); ++k)
        worst = std::max(worst, max_abs_diff(a.states[k].matrix(), b.states[k].matrix()));
    return worst;
}

}  // namespace qsl
