// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qsl/bounds.hpp"
#include "qsl/cli.hpp"
#include "qsl/liouville.hpp"
#include "qsl/propagator.hpp"
#include "qsl/scenarios.hpp"
#include "qsl/verification.hpp"

namespace {

using qsl::Complex;
using qsl::ComplexMatrix;

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

qsl::Scenario build(qsl::ScenarioSpec spec) { return qsl::build_scenario(spec); }

qsl::Trajectory run(const qsl::Scenario& s, qsl::Method m = qsl::Method::superop_expm) {
    return qsl::run_scenario(s, m);
}

// ---------------------------------------------------------------------------

Outcome ordering() {
    std::mt19937_64 rng(20240101);
    double worst = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
        const std::size_t jumps = 1 + static_cast<std::size_t>((trial / 3) % 3);
        const auto gen = oracle::random_generator(n, jumps, rng);
        const auto r = qsl::bound_rates(gen);
        worst = std::min({worst, r.hilbert_sp - r.liouville, r.hilbert_hs - r.hilbert_sp});
    }
    return {worst >= -1e-9, fmt("min slack %.3g over 1000 generators", worst)};
}

// Random dense generators with the steady state as reference, random
// dephasing generators with the maximally mixed reference, and a
// time-dependent prefactor variant checked on the purity alone.
Outcome validity() {
    std::mt19937_64 rng(777);
    const qsl::TimeGrid grid{0.0, 5.0, 1000, 1};
    double worst = -std::numeric_limits<double>::infinity();
    std::string worst_label;
    std::size_t checks = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
        const std::size_t jumps = 1 + static_cast<std::size_t>((trial / 3) % 3);
        const auto seed = static_cast<std::uint64_t>(1000 + trial);
        const auto rho0 = trial % 2 ? qsl::random_density(n, seed) : qsl::random_pure_state(n, seed);
        std::optional<ComplexMatrix> reference;
        qsl::LindbladGenerator gen = oracle::random_generator(n, jumps, rng, true);
        switch (trial % 4) {
            case 0:
            case 1:
                reference = qsl::steady_state(gen, 0.0).matrix();
                break;
            case 2: {
                std::normal_distribution<double> g(0.0, 0.6);
                std::vector<ComplexMatrix> ops;
                for (std::size_t k = 0; k < jumps; ++k) {
                    std::vector<Complex> d(n);
                    for (auto& z : d) z = Complex(g(rng), g(rng));
                    ops.push_back(ComplexMatrix::diagonal(d));
                }
                gen = qsl::LindbladGenerator(oracle::gaussian_hermitian(n, rng, 0.5), std::move(ops));
                reference = qsl::maximally_mixed(n).matrix();
                break;
            }
            case 3:
                gen = gen.with_prefactor(qsl::TimeFunction([](double t) { return 1.0 + 0.5 * std::sin(2.0 * t); },
                                                           false, "1 + 0.5 sin(2t)"));
                break;
        }
        const auto traj = qsl::evolve_superop(gen, rho0, grid, reference);
        const auto report = qsl::check_bounds(traj, gen);
        for (const auto& c : report.checks) {
            if (c.label == "purity/dephasing_floor") continue;
            ++checks;
            if (c.worst_excess > worst) {
                worst = c.worst_excess;
                worst_label = c.label;
            }
        }
    }
    return {worst <= 1e-7,
            fmt("worst excess %.3g (", worst) + worst_label + fmt(") over %.0f bound checks", static_cast<double>(checks))};
}

Outcome dual_path() {
    double worst = 0.0;
    std::string where;
    bool bounds = true;
    for (const auto& name : qsl::catalog_names()) {
        const auto report = qsl::compare_scenario(build(qsl::catalog_scenario(name)));
        bounds = bounds && report.bounds_hold();
        if (report.discrepancy >= worst) {
            worst = report.discrepancy;
            where = name;
        }
    }
    return {worst < 1e-8 && bounds,
            fmt("max discrepancy %.3g at ", worst) + where + (bounds ? ", all bounds hold" : ", bound violated")};
}

Outcome fig1() {
    Outcome out;
    double floor_slack = std::numeric_limits<double>::infinity();
    double attain = 0.0;
    double width_excess = -std::numeric_limits<double>::infinity();
    for (auto variant : {qsl::QubitVariant::text, qsl::QubitVariant::figure}) {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto traj = run(build(qsl::qubit_dephasing_random_scenario(variant, seed)));
            for (std::size_t k = 0; k < traj.purity.size(); ++k)
                floor_slack = std::min(floor_slack, traj.purity[k] - traj.eq12_floor[k]);
        }
        const auto s = build(qsl::qubit_dephasing_scenario(variant, 0.5, 0.5));
        const auto traj = run(s);
        for (std::size_t k = 0; k < traj.purity.size(); ++k)
            attain = std::max(attain, std::abs(traj.purity[k] - traj.eq12_floor[k]));
        for (double t : s.grid.times()) {
            if (t == 0.0) continue;
            const double hs = qsl::hilbert_hs_bound(s.generator, 0.0, t);
            const double lv = qsl::liouville_bound(s.generator, 0.0, t);
            // Envelope log-width is 2B for either bound.
            width_excess = std::max(width_excess, (2 * lv - 0.5 * 2 * hs) / (2 * hs));
        }
    }
    out.pass = floor_slack >= -1e-9 && attain <= 1e-8 && width_excess <= 1e-12;
    out.detail = fmt("min P - floor %.3g, a=b=1/2 gap %.3g, ", floor_slack, attain) +
                 fmt("max (W_L - W_HS/2)/W_HS %.3g", width_excess);
    return out;
}

Outcome ghz_tightness() {
    double worst = 0.0;
    double norm_err = 0.0;
    std::string norms;
    for (std::size_t m : {2, 3, 4}) {
        const auto s = build(qsl::ghz_local_scenario(m, 1.0));
        const auto traj = run(s);
        const auto fit = qsl::fit_log_slope(s.grid.times(), traj.purity_deviation);
        const double norm = qsl::unit_skew_spectral_norm(s.generator);
        worst = std::max(worst, std::abs(fit.slope + norm) / norm);
        norm_err = std::max(norm_err, std::abs(norm - 4.0 * static_cast<double>(m)));
        norms += fmt(" M=%.0f:%.6g(2Mg=%.0f)", static_cast<double>(m), norm, 2.0 * static_cast<double>(m));
    }
    return {worst <= 1e-6 && norm_err <= 1e-9,
            fmt("max rel slope error %.3g, |norm - 4gM| %.3g;", worst, norm_err) + norms};
}

Outcome global_dephasing() {
    double slope_err = 0.0;
    double residual = 0.0;
    bool spectrum_ok = true;
    std::string detail;
    for (std::size_t n : {2, 4, 8}) {
        const auto first = build(qsl::ghz_global_scenario(n, 1.0, 1));
        const auto sup = qsl::build_superoperator(first.generator, 0.0);
        ComplexMatrix k = qsl::skew_part(sup);
        for (auto& z : k.entries()) z *= Complex(0.0, 1.0);
        std::vector<double> sv;
        for (double l : qsl::hermitian_eigenvalues(k)) sv.push_back(std::abs(l));
        std::sort(sv.begin(), sv.end());
        const auto zeros = static_cast<std::size_t>(std::count_if(sv.begin(), sv.end(), [](double x) { return x < 1e-10; }));
        const double common = sv.back();
        const double spread = sv.back() - sv[zeros < sv.size() ? zeros : sv.size() - 1];
        spectrum_ok = spectrum_ok && zeros == n && spread <= 1e-10;
        detail += fmt(" N=%.0f: zeros %.0f, sigma %.12g;", static_cast<double>(n), static_cast<double>(zeros), common);
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto s = build(qsl::ghz_global_scenario(n, 1.0, seed));
            const auto traj = run(s);
            const auto fit = qsl::fit_log_slope(s.grid.times(), traj.purity_deviation);
            slope_err = std::max(slope_err, std::abs(fit.slope + common) / common);
            residual = std::max(residual, fit.max_residual);
        }
    }
    return {spectrum_ok && slope_err <= 1e-6 && residual <= 1e-6,
            fmt("max rel slope error %.3g, max fit residual %.3g;", slope_err, residual) + detail};
}

// The RK4 path with substeps keeps the chain runs inside the time budget; a
// step-halving probe on the stiffest case checks that the resolution suffices.
Outcome fig2() {
    double slack = std::numeric_limits<double>::infinity();
    double halving = 0.0;
    std::vector<std::vector<double>> envelopes;
    std::vector<double> bound;
    for (double v0 : {0.1, 10.0}) {
        envelopes.emplace_back();
        const std::size_t substeps = v0 > 1.0 ? 10 : 2;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            auto spec = qsl::interacting_chain_scenario(5, v0, 1.0, seed);
            spec.document["grid"]["substeps"] = substeps;
            const auto s = build(spec);
            const auto traj = run(s, qsl::Method::direct_rk4);
            const auto integral = qsl::cumulative_prefactor(s.generator, s.grid);
            const double rate = qsl::bound_rates(s.generator).liouville;
            for (std::size_t k = 0; k < traj.purity_deviation.size(); ++k) {
                const double ratio = traj.purity_deviation[k] / traj.purity_deviation.front();
                slack = std::min(slack, ratio - std::exp(-rate * integral[k]));
                if (envelopes.back().size() <= k) envelopes.back().push_back(ratio);
                envelopes.back()[k] = std::min(envelopes.back()[k], ratio);
                if (bound.size() <= k) bound.push_back(std::exp(-rate * integral[k]));
            }
            if (v0 > 1.0 && seed == 1) {
                auto fine = spec;
                fine.document["grid"]["substeps"] = 2 * substeps;
                halving = qsl::max_discrepancy(traj, run(build(fine), qsl::Method::direct_rk4));
            }
        }
    }
    // Reported only: how far apart the two V0 envelopes sit compared with their gap to the bound.
    double between = 0.0;
    double to_bound = 0.0;
    for (std::size_t k = 0; k < bound.size(); ++k) {
        between = std::max(between, std::abs(envelopes[0][k] - envelopes[1][k]));
        to_bound = std::max(to_bound, std::min(envelopes[0][k], envelopes[1][k]) - bound[k]);
    }
    return {slack >= -1e-7 && halving < 1e-8,
            fmt("min R/R0 - e^-B %.3g, substep-halving change %.3g, ", slack, halving) +
                fmt("envelope V0 gap %.3g vs gap to bound %.3g", between, to_bound)};
}

ComplexMatrix reduced_a(const ComplexMatrix& rho) {
    ComplexMatrix a(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t b = 0; b < 2; ++b) a(i, j) += rho(2 * i + b, 2 * j + b);
    return a;
}

Outcome fig3() {
    const auto classical_s = build(qsl::decorrelator_scenario(1.0, qsl::CorrelationFamily::bell_diagonal_mix, 1.0));
    const auto quantum_s = build(qsl::decorrelator_scenario(1.0, qsl::CorrelationFamily::bell_diagonal_mix, 0.0));
    const auto c = run(classical_s);
    const auto q = run(quantum_s);
    const double dt = classical_s.grid.dt();
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < c.purity_deviation.size(); ++k) {
        const double sc = std::log(c.purity_deviation[k + 1] / c.purity_deviation[k]) / dt;
        const double sq = std::log(q.purity_deviation[k + 1] / q.purity_deviation[k]) / dt;
        min_gap = std::min(min_gap, sq - sc);
    }
    const double norm = qsl::unit_skew_spectral_norm(classical_s.generator);
    const auto fit = qsl::fit_log_slope(classical_s.grid.times(), c.purity_deviation);
    const double slope_err = std::abs(fit.slope + norm) / norm;

    double distance = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto spec = qsl::decorrelator_scenario(1.0, qsl::CorrelationFamily::random, 0.0, seed);
        spec.document["grid"] = {{"t_start", 0.0}, {"t_end", 20.0}, {"steps", 2000}};
        const auto s = build(spec);
        const auto traj = run(s);
        const ComplexMatrix target = qsl::kron(reduced_a(s.initial_state.matrix()), qsl::maximally_mixed(2).matrix());
        ComplexMatrix diff = traj.states.back().matrix();
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) diff(i, j) -= target(i, j);
        distance = std::max(distance, qsl::hs_norm(diff));
    }
    return {min_gap > 0.0 && slope_err <= 1e-6 && distance <= 1e-6,
            fmt("min (quantum - classical) slope %.4g, classical slope rel error %.3g, ", min_gap, slope_err) +
                fmt("max HS distance at t=20 %.3g", distance)};
}

Outcome scaling() {
    double worst = 0.0;
    bool capped = true;
    for (std::size_t n : {2, 4, 8}) {
        for (std::uint64_t phase_seed = 1; phase_seed <= 5; ++phase_seed) {
            const auto s = build(qsl::nlevel_dephasing_scenario(n, 1.0, phase_seed));
            const ComplexMatrix& a = s.generator.jump_ops().front();
            double spread = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) spread = std::max(spread, std::norm(a(i, i) - a(j, j)));
            const auto r = qsl::bound_rates(s.generator);
            worst = std::max({worst, std::abs(r.hilbert_hs - 4.0 * static_cast<double>(n)), std::abs(r.hilbert_sp - 4.0),
                              std::abs(r.liouville - spread)});
            capped = capped && r.liouville <= 4.0 + 1e-9;
        }
    }
    return {worst <= 1e-9 && capped, fmt("max rate error %.3g over 15 channels", worst)};
}

Outcome negative_controls() {
    auto compare = [](const std::string& file) {
        qsl::cli::RunConfig config;
        config.command = "compare";
        config.scenario = std::string(QSL_FIXTURE_DIR) + "/" + file;
        std::ostringstream out;
        std::ostringstream err;
        return qsl::cli::cmd_compare(config, out, err);
    };
    const int corrupted = compare("corrupted_superoperator.json");
    const int violation = compare("bound_violation.json");
    return {corrupted == 4 && violation == 5,
            fmt("corrupted superoperator -> %.0f, bound violation -> %.0f", corrupted, violation)};
}

struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<Outcome()> body;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"bound ordering", 10, ordering},
        {"bound validity", 60, validity},
        {"dual-path agreement", 60, dual_path},
        {"qubit dephasing floor", 60, fig1},
        {"GHZ tightness", 60, ghz_tightness},
        {"global dephasing exactness", 60, global_dephasing},
        {"interacting chain", 300, fig2},
        {"decorrelation", 60, fig3},
        {"N-level dephasing rates", 60, scaling},
        {"negative controls", 60, negative_controls},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool pass = o.pass && seconds < c.budget_seconds;
        if (!pass) ++failures;
        std::printf("%s %2zu %-28s %s [%.1fs / %.0fs]\n", pass ? "PASS" : "FAIL", i + 1, c.name, o.detail.c_str(), seconds,
                    c.budget_seconds);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
