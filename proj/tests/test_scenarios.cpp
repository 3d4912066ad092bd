#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qsl/bounds.hpp"
#include "qsl/errors.hpp"
#include "qsl/liouville.hpp"
#include "qsl/scenarios.hpp"
#include "qsl/verification.hpp"

using namespace qsl;

TEST_CASE("GHZ states") {
    const std::vector<int> bits = {0, 0};
    const auto ghz = ghz_state(2, bits).matrix();
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            const bool corner = (i == 0 || i == 3) && (j == 0 || j == 3);
            CHECK(std::abs(ghz(i, j) - Complex(corner ? 0.5 : 0.0)) < 1e-15);
        }
    const std::vector<int> mixed_bits = {1, 0, 1};
    const auto g3 = ghz_state(3, mixed_bits);
    CHECK(purity(g3) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(g3.matrix()(5, 2) - 0.5) < 1e-15);  // |101> and |010>
    CHECK(purity(diagonal_projection(g3)) == doctest::Approx(0.5).epsilon(1e-14));
    const std::vector<int> short_bits = {0};
    CHECK_THROWS_AS(ghz_state(2, short_bits), std::invalid_argument);
}

TEST_CASE("two-qubit correlation families") {
    CHECK(purity(werner_state(1.0)) == doctest::Approx(0.25));
    CHECK(purity(werner_state(0.0)) == doctest::Approx(1.0));
    CHECK(purity(bell_diagonal_mix_state(1.0)) == doctest::Approx(0.5));
    CHECK(max_abs_diff(bell_diagonal_mix_state(0.0).matrix(), bell_psi_plus().matrix()) < 1e-15);
    CHECK_THROWS_AS(werner_state(1.5), std::invalid_argument);
}

TEST_CASE("pauli strings and matrix units") {
    CHECK(pauli_string("ZZ") == kron(oracle::pauli_z(), oracle::pauli_z()));
    CHECK(pauli_string("X", 2.0) == 2.0 * oracle::pauli_x());
    CHECK(matrix_unit(3, 1, 2)(1, 2) == Complex(1.0));
    CHECK_THROWS_AS(pauli_string("Q"), SchemaError);
    CHECK_THROWS_AS(matrix_unit(2, 2, 0), SchemaError);
}

TEST_CASE("every catalog scenario builds with a stationary reference") {
    for (const auto& name : catalog_names()) {
        CAPTURE(name);
        const Scenario s = build_scenario(catalog_scenario(name));
        REQUIRE(s.reference.has_value());
        CHECK(verify_stationary(s.generator, s.reference->matrix(s.generator.dim()), s.grid));
        CHECK_FALSE(catalog_description(name).empty());
        CHECK(s.metadata.contains("tight"));
    }
    CHECK_THROWS_AS(catalog_scenario("nope"), SchemaError);
    CHECK_THROWS_AS(catalog_scenario("ghz_local", {{"bogus", 1}}), SchemaError);
}

TEST_CASE("local GHZ dephasing") {
    const Scenario s2 = build_scenario(ghz_local_scenario(2, 1.0));
    CHECK(skew_spectral_norm(s2.generator, 0.0) == doctest::Approx(8.0).epsilon(1e-12));
    // A product state has no coherences, so its deviation from its own diagonal vanishes.
    ScenarioSpec product = ghz_local_scenario(3, 1.0);
    product.document["initial_state"] = matrix_to_json(matrix_unit(8, 0, 0));
    const Scenario p = build_scenario(product);
    const auto traj = run_scenario(p, Method::superop_expm);
    for (double r : traj.purity_deviation) CHECK(r == 0.0);
    CHECK_THROWS_AS(ghz_local_scenario(7, 1.0), std::invalid_argument);
}

TEST_CASE("global projector dephasing spectrum") {
    const Scenario s = build_scenario(ghz_global_scenario(4, 1.0));
    const auto skew = skew_part(build_superoperator(s.generator, 0.0));
    auto ev = hermitian_eigenvalues(Complex(0.0, 1.0) * skew);
    std::size_t zeros = 0;
    for (double e : ev) zeros += std::abs(e) < 1e-10;
    CHECK(zeros == 4);
    for (double e : ev)
        if (std::abs(e) >= 1e-10) CHECK(std::abs(std::abs(e) - 2.0) < 1e-10);
    ScenarioSpec diag = ghz_global_scenario(4, 1.0);
    diag.document["initial_state"] = {{"builder", "maximally_mixed"}, {"params", {{"dim", 4}}}};
    const auto traj = run_scenario(build_scenario(diag), Method::superop_expm);
    for (double r : traj.purity_deviation) CHECK(r == doctest::Approx(0.0));
}

TEST_CASE("interacting chain") {
    const Scenario weak = build_scenario(interacting_chain_scenario(3, 0.1, 1.0));
    const Scenario strong = build_scenario(interacting_chain_scenario(3, 10.0, 1.0));
    CHECK(weak.generator.is_time_dependent());
    CHECK(unit_skew_spectral_norm(weak.generator) == doctest::Approx(unit_skew_spectral_norm(strong.generator)).epsilon(1e-12));
    const auto h = weak.generator.hamiltonian(0.0);
    const auto z = oracle::pauli_z();
    const auto x = oracle::pauli_x();
    const auto i2 = ComplexMatrix::identity(2);
    ComplexMatrix expected = kron(kron(z, i2), i2) + kron(kron(i2, z), i2) + kron(kron(i2, i2), z);
    expected += 0.1 * (kron(kron(x, x), i2) + kron(kron(i2, x), x));
    CHECK(max_abs_diff(h, expected) < 1e-15);
    CHECK(max_abs_diff(weak.generator.hamiltonian(3.14159), weak.generator.hamiltonian(0.0)) > 0.1);
}

TEST_CASE("interacting chain with V0 = 0 follows the local dephasing dynamics") {
    // Diagonal states commute with sum sigma_z, so the chain reduces to pure dephasing.
    ScenarioSpec chain = interacting_chain_scenario(2, 0.0, 1.0);
    ScenarioSpec local = ghz_local_scenario(2, 1.0);
    chain.document["initial_state"] = {{"builder", "ghz"}, {"params", {{"M", 2}}}};
    chain.document["hamiltonian"] = nullptr;
    chain.document["reference_state"] = {{"kind", "diagonal_of_initial"}};
    const auto a = run_scenario(build_scenario(chain), Method::superop_expm);
    const auto b = run_scenario(build_scenario(local), Method::superop_expm);
    CHECK(max_discrepancy(a, b) < 1e-14);
}

TEST_CASE("decorrelator") {
    const Scenario s = build_scenario(decorrelator_scenario(1.0, CorrelationFamily::bell_diagonal_mix, 1.0));
    const auto ref = s.reference_matrix();
    REQUIRE(ref.has_value());
    const auto rho_a = partial_trace(s.initial_state, 2, 2, Subsystem::A);
    CHECK(max_abs_diff(*ref, kron(rho_a.matrix(), maximally_mixed(2).matrix())) < 1e-15);
    CHECK_THROWS_AS(decorrelator_scenario(1.0, CorrelationFamily::werner, -0.1), std::invalid_argument);
}

TEST_CASE("qubit dephasing variants") {
    const Scenario text = build_scenario(qubit_dephasing_scenario(QubitVariant::text, 0.3, Complex(0.2, 0.1)));
    CHECK(text.generator.hamiltonian(0.0) == oracle::pauli_z());
    const auto traj = run_scenario(text, Method::superop_expm);
    const double pd0 = 2.0 * 0.05;
    for (std::size_t k = 0; k < traj.purity_deviation.size(); k += 100)
        CHECK(traj.purity_deviation[k] == doctest::Approx(pd0 * std::exp(-text.grid.time(k))).epsilon(1e-10));

    const Scenario figure = build_scenario(qubit_dephasing_scenario(QubitVariant::figure, 0.5, 0.5));
    CHECK(figure.generator.hamiltonian(0.0) == oracle::pauli_x());
    CHECK(is_dephasing(figure.generator));

    const Scenario flat = build_scenario(qubit_dephasing_scenario(QubitVariant::text, 0.4, 0.0));
    for (double r : run_scenario(flat, Method::direct_rk4).purity_deviation) CHECK(r == 0.0);

    CHECK_THROWS_AS(qubit_dephasing_scenario(QubitVariant::text, 0.5, 0.6), std::invalid_argument);
}

TEST_CASE("scenario documents: builders, functions and errors") {
    const char* text = R"({
      "name": "doc",
      "dim": 2,
      "hamiltonian": [{"operator": {"builder": "pauli_string", "params": {"string": "X"}},
                       "modulation": {"function": "cos", "params": {"omega": 2.0}}}],
      "jump_ops": [[[[0.5, 0], [0, 0]], [[0, 0], [0, 0]]], [[[0, 0], [0, 0]], [[0, 0], [-0.5, 0]]]],
      "prefactor": {"function": "exponential", "params": {"amplitude": 2.0, "rate": 0.5}},
      "initial_state": [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]],
      "reference_state": "maximally_mixed",
      "grid": {"t_start": 0, "t_end": 1, "steps": 20}
    })";
    const Scenario s = build_scenario(parse_scenario(text));
    CHECK(s.name == "doc");
    CHECK(s.grid.steps == 20);
    CHECK(s.generator.prefactor(2.0) == doctest::Approx(2.0 * std::exp(-1.0)));
    CHECK(max_abs_diff(s.generator.hamiltonian(0.5), std::cos(1.0) * oracle::pauli_x()) < 1e-15);
    CHECK(s.generator.jump_ops().size() == 2);

    CHECK_THROWS_AS(parse_scenario("{not json"), SchemaError);
    CHECK_THROWS_AS(build_scenario(parse_scenario(R"({"dim": 2})")), SchemaError);
    CHECK_THROWS_AS(build_scenario(parse_scenario(R"({"dim": 2, "initial_state": {"builder": "nope"}})")), SchemaError);
    CHECK_THROWS_AS(build_scenario(parse_scenario(
                        R"({"dim": 2, "initial_state": [[[1,0],[0,0]],[[0,0],[1,0]]]})")),
                    SchemaError);  // trace 2
    CHECK_THROWS_AS(build_scenario(parse_scenario(
                        R"({"dim": 2, "hamiltonian": [[[0,0],[1,0]],[[0,0],[0,0]]],
                            "initial_state": {"builder": "maximally_mixed"}})")),
                    SchemaError);  // not Hermitian
    // A coherent reference is not stationary under dephasing.
    CHECK_THROWS_AS(build_scenario(parse_scenario(
                        R"({"dim": 2, "jump_ops": [{"builder": "pauli_string", "params": {"string": "Z"}}],
                            "initial_state": {"builder": "maximally_mixed"},
                            "reference_state": {"kind": "explicit", "state": [[0.5, 0.5], [0.5, 0.5]]}})")),
                    SchemaError);
}

TEST_CASE("time functions") {
    CHECK(make_time_function(Json(2.5))(7.0) == 2.5);
    CHECK(make_time_function(Json())(1.0) == 1.0);
    const auto step = make_time_function(Json::parse(R"({"function": "step", "params": {"before": 1, "after": 3, "at": 2}})"));
    CHECK(step(1.9) == 1.0);
    CHECK(step(2.0) == 3.0);
    CHECK_FALSE(step.is_constant());
    const auto c2 = make_time_function(Json::parse(R"({"function": "cos_squared", "params": {"amplitude": 2}})"));
    CHECK(c2(1.0) == doctest::Approx(2.0 * std::pow(std::cos(1.0), 2)));
    CHECK(make_time_function(Json::parse(R"({"function": "cos", "params": {"amplitude": 0}})")).is_constant());
    CHECK_THROWS_AS(make_time_function(Json::parse(R"({"function": "sinh"})")), SchemaError);
}

TEST_CASE("overrides") {
    Json doc = Json::parse(R"({"grid": {"steps": 10}, "jump_ops": [1, 2]})");
    apply_override(doc, {"grid.steps", "4"});
    apply_override(doc, {"jump_ops.1", "[1, 0]"});
    apply_override(doc, {"metadata.note", "hello"});
    CHECK(doc["grid"]["steps"] == 4);
    CHECK(doc["jump_ops"][1] == Json::parse("[1, 0]"));
    CHECK(doc["metadata"]["note"] == "hello");
    CHECK_THROWS_AS(apply_override(doc, {"jump_ops.5", "0"}), SchemaError);

    const std::vector<Override> o = {{"M", "2"}, {"steps", "3"}, {"grid.t_end", "1"}};
    const Scenario s = build_scenario(resolve_scenario("ghz_local", o));
    CHECK(s.generator.dim() == 4);
    CHECK(s.grid.steps == 3);
    CHECK(s.grid.t_end == 1.0);
}

TEST_CASE("scenarios tagged tight decay at the skew norm") {
    const std::vector<ScenarioSpec> specs = {catalog_scenario("fig1", {{"variant", "text"}, {"a", 0.6}, {"b", 0.3}}),
                                             catalog_scenario("ghz_local"), catalog_scenario("ghz_global"),
                                             catalog_scenario("fig3")};
    for (const auto& spec : specs) {
        const Scenario s = build_scenario(spec);
        REQUIRE(s.metadata.at("tight").get<bool>());
        const auto traj = run_scenario(s, Method::superop_expm);
        const auto fit = fit_log_slope(s.grid.times(), traj.purity_deviation);
        const double norm = unit_skew_spectral_norm(s.generator);
        INFO(s.name);
        CHECK(std::abs(fit.slope + norm) / norm < 1e-6);
    }
}

// Minimum of R(t)/R(0) over a few random initial states, per grid point.
static std::vector<double> chain_envelope(std::size_t m, double v0, std::size_t substeps) {
    std::vector<double> env;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        ScenarioSpec spec = interacting_chain_scenario(m, v0, 1.0, seed);
        spec.document["grid"]["substeps"] = substeps;
        const Scenario s = build_scenario(spec);
        const auto traj = evolve(Method::direct_rk4, s.generator, s.initial_state, s.grid, s.reference_matrix());
        if (env.empty()) env.assign(traj.purity_deviation.size(), 1.0);
        for (std::size_t k = 0; k < env.size(); ++k)
            env[k] = std::min(env[k], traj.purity_deviation[k] / traj.purity_deviation.front());
    }
    return env;
}

TEST_CASE("chain envelopes depend less on V0 than their distance to the bound") {
    for (std::size_t m : {3, 4}) {
        const auto weak = chain_envelope(m, 0.1, 2);
        const auto strong = chain_envelope(m, 10.0, 10);
        const Scenario s = build_scenario(interacting_chain_scenario(m, 0.1, 1.0));
        const double rate = bound_rates(s.generator).liouville;
        const auto times = s.grid.times();
        double between = 0.0;
        double to_bound = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double bound = std::exp(-rate * times[k]);
            between = std::max(between, std::abs(weak[k] - strong[k]));
            to_bound = std::max(to_bound, std::min(weak[k], strong[k]) - bound);
        }
        INFO("M=", m, " between=", between, " to_bound=", to_bound);
        CHECK(between < to_bound);
    }
}
