// scenarios.hpp: declarative scenario documents, operator/state builders and the built-in catalog
//
// A scenario document is a JSON object:
//   {
//     "name": "...", "dim": N,
//     "hamiltonian": <operator> | [ {"operator": <operator>, "modulation": <function>}, ... ],
//     "jump_ops": [ <operator>, ... ],
//     "prefactor": <function>,
//     "initial_state": <operator>,
//     "reference_state": "origin" | "maximally_mixed" | {"kind": ...},
//     "grid": {"t_start": 0, "t_end": 5, "steps": 1000, "substeps": 1},
//     "metadata": {...}
//   }
// where <operator> is either an array of rows of [re, im] pairs or
// {"builder": "<name>", "params": {...}}, and <function> is
// {"function": "<name>", "params": {...}}.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qsl/lindblad.hpp"
#include "qsl/propagator.hpp"

namespace qsl {

using Json = nlohmann::json;

struct ScenarioSpec {
    Json document;

    std::string name() const;
};

// Test fixtures that deliberately break one side of a run.
struct FaultInjection {
    // The superoperator path evolves under -H instead of H.
    bool negate_superoperator_hamiltonian = false;
    // Dynamics use this prefactor while bounds use the declared one.
    std::optional<TimeFunction> propagation_prefactor;

    bool any() const noexcept { return negate_superoperator_hamiltonian || propagation_prefactor.has_value(); }
};

struct Scenario {
    std::string name;
    LindbladGenerator generator;
    DensityMatrix initial_state;
    std::optional<ReferenceState> reference;
    TimeGrid grid;
    Json metadata;
    FaultInjection fault;

    // Generator the dynamics actually follow (differs only under a prefactor fault).
    LindbladGenerator propagation_generator() const;
    std::optional<ComplexMatrix> reference_matrix() const;
};

// Throws SchemaError on any malformed field, unknown builder, or a declared
// reference state that fails verify_stationary.
Scenario build_scenario(const ScenarioSpec& spec);

ScenarioSpec parse_scenario(std::string_view json_text);
ScenarioSpec load_scenario_file(const std::string& path);

// Values are parsed as JSON when possible ("4", "0.5", "[1,0]", "true") and
// otherwise taken as strings. Dotted keys address nested fields; numeric
// segments index arrays.
struct Override {
    std::string key;
    std::string value;
};
void apply_override(Json& document, const Override& override);
Json parse_override_value(std::string_view text);

// A catalog name or a path to a scenario document. For catalog entries, plain
// keys are builder parameters and dotted keys patch the generated document.
// For files, "seed" sets initial_state.params.seed, the grid keys (t_start,
// t_end, steps, substeps) set grid fields, and other keys are dotted paths.
ScenarioSpec resolve_scenario(std::string_view source, std::span<const Override> overrides);

TimeFunction make_time_function(const Json& description);
ComplexMatrix build_matrix(const Json& description, std::size_t dim_hint = 0);
Json matrix_to_json(const ComplexMatrix& m);

// Single-qubit operators: I X Y Z, '+' = [[0,1],[0,0]], '-' = [[0,0],[1,0]].
ComplexMatrix pauli(char symbol);
ComplexMatrix pauli_string(std::string_view symbols, Complex coeff = 1.0);
ComplexMatrix matrix_unit(std::size_t dim, std::size_t row, std::size_t col, Complex coeff = 1.0);

DensityMatrix ghz_state(std::size_t qubits, std::span<const int> bits);
DensityMatrix bell_psi_plus();
// lambda I/4 + (1 - lambda) |Psi+><Psi+|
DensityMatrix werner_state(double lambda);
// lambda Diag(|Psi+><Psi+|) + (1 - lambda) |Psi+><Psi+|
DensityMatrix bell_diagonal_mix_state(double lambda);

enum class QubitVariant { text, figure };  // H = sigma_z or H = sigma_x
enum class CorrelationFamily { werner, bell_diagonal_mix, random };

ScenarioSpec qubit_dephasing_scenario(QubitVariant variant, double a, Complex b, double gamma = 1.0);
ScenarioSpec qubit_dephasing_random_scenario(QubitVariant variant, std::uint64_t seed, double gamma = 1.0);
ScenarioSpec ghz_local_scenario(std::size_t qubits, double gamma, std::vector<int> bits = {});
ScenarioSpec ghz_global_scenario(std::size_t dim, double gamma, std::uint64_t seed = 1);
ScenarioSpec interacting_chain_scenario(std::size_t qubits, double v0, double gamma, std::uint64_t seed = 1);
ScenarioSpec decorrelator_scenario(double gamma, CorrelationFamily family, double lambda,
                                   std::uint64_t seed = 1);
ScenarioSpec nlevel_dephasing_scenario(std::size_t dim, double gamma, std::uint64_t phase_seed = 7,
                                       std::uint64_t seed = 1);

const std::vector<std::string>& catalog_names();
bool is_catalog_name(std::string_view name);
std::string catalog_description(std::string_view name);
// Parameters missing from `params` take the catalog defaults.
ScenarioSpec catalog_scenario(std::string_view name, const Json& params = Json::object());

}  // namespace qsl
