#include "qsl/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "qsl/errors.hpp"
#include "qsl/liouville.hpp"

namespace qsl {

namespace {

[[noreturn]] void schema_fail(const std::string& what) { throw SchemaError(what); }

const Json& params_of(const Json& desc) {
    static const Json empty = Json::object();
    if (!desc.contains("params")) return empty;
    const Json& p = desc.at("params");
    if (!p.is_object()) schema_fail("\"params\" must be an object");
    return p;
}

double number_param(const Json& params, const char* key, double fallback) {
    if (!params.contains(key)) return fallback;
    const Json& v = params.at(key);
    if (!v.is_number()) schema_fail(std::string("parameter \"") + key + "\" must be a number");
    return v.get<double>();
}

std::size_t count_param(const Json& params, const char* key, std::size_t fallback) {
    if (!params.contains(key)) return fallback;
    const Json& v = params.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        schema_fail(std::string("parameter \"") + key + "\" must be a non-negative integer");
    return v.get<std::size_t>();
}

std::string string_param(const Json& params, const char* key, const std::string& fallback) {
    if (!params.contains(key)) return fallback;
    const Json& v = params.at(key);
    if (!v.is_string()) schema_fail(std::string("parameter \"") + key + "\" must be a string");
    return v.get<std::string>();
}

Complex parse_complex(const Json& v) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    schema_fail("complex value must be a number or a [re, im] pair, got " + v.dump());
}

Complex complex_param(const Json& params, const char* key, Complex fallback) {
    return params.contains(key) ? parse_complex(params.at(key)) : fallback;
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

ComplexMatrix parse_matrix(const Json& rows) {
    if (!rows.is_array() || rows.empty()) schema_fail("matrix must be a non-empty array of rows");
    const std::size_t r = rows.size();
    const std::size_t c = rows[0].is_array() ? rows[0].size() : 0;
    std::vector<Complex> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != c) schema_fail("matrix rows must be arrays of equal length");
        for (const auto& entry : row) data.push_back(parse_complex(entry));
    }
    try {
        return ComplexMatrix(r, c, std::move(data));
    } catch (const std::exception& e) {
        schema_fail(std::string("invalid matrix: ") + e.what());
    }
}

std::vector<int> parse_bits(const Json& params, std::size_t qubits) {
    std::vector<int> bits(qubits, 0);
    if (!params.contains("bits")) return bits;
    const Json& b = params.at("bits");
    if (!b.is_array() || b.size() != qubits) schema_fail("ghz: \"bits\" must list one bit per qubit");
    for (std::size_t i = 0; i < qubits; ++i) {
        if (!b[i].is_number_integer() || (b[i] != 0 && b[i] != 1)) schema_fail("ghz: bits must be 0 or 1");
        bits[i] = b[i].get<int>();
    }
    return bits;
}

Json builder(const std::string& name, Json params) {
    return Json{{"builder", name}, {"params", std::move(params)}};
}

Json function_json(const std::string& name, Json params) {
    return Json{{"function", name}, {"params", std::move(params)}};
}

Json default_grid() { return Json{{"t_start", 0.0}, {"t_end", 5.0}, {"steps", 1000}}; }

std::size_t qubit_dim(std::size_t qubits) { return std::size_t{1} << qubits; }

std::string site_string(std::size_t qubits, std::size_t site, char symbol) {
    std::string s(qubits, 'I');
    s[site] = symbol;
    return s;
}

DensityMatrix to_state(ComplexMatrix m, const char* what) {
    try {
        return DensityMatrix(std::move(m));
    } catch (const std::invalid_argument& e) {
        schema_fail(std::string(what) + ": " + e.what());
    }
}

}  // namespace

std::string ScenarioSpec::name() const {
    if (document.is_object() && document.contains("name") && document.at("name").is_string())
        return document.at("name").get<std::string>();
    return "unnamed";
}

LindbladGenerator Scenario::propagation_generator() const {
    if (fault.propagation_prefactor) return generator.with_prefactor(*fault.propagation_prefactor);
    return generator;
}

std::optional<ComplexMatrix> Scenario::reference_matrix() const {
    if (!reference) return std::nullopt;
    return reference->matrix(generator.dim());
}

// ---------------------------------------------------------------------------
// Operators and states

ComplexMatrix pauli(char symbol) {
    using namespace std::complex_literals;
    switch (symbol) {
        case 'I': return ComplexMatrix::identity(2);
        case 'X': return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
        case 'Y': return ComplexMatrix::from_rows({{0.0, -1i}, {1i, 0.0}});
        case 'Z': return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
        case '+': return ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
        case '-': return ComplexMatrix::from_rows({{0.0, 0.0}, {1.0, 0.0}});
        default: schema_fail(std::string("pauli_string: unknown symbol '") + symbol + "'");
    }
}

ComplexMatrix pauli_string(std::string_view symbols, Complex coeff) {
    if (symbols.empty()) schema_fail("pauli_string: empty string");
    ComplexMatrix out = pauli(symbols.front());
    for (char c : symbols.substr(1)) out = kron(out, pauli(c));
    out *= coeff;
    return out;
}

ComplexMatrix matrix_unit(std::size_t dim, std::size_t row, std::size_t col, Complex coeff) {
    if (row >= dim || col >= dim) schema_fail("matrix_unit: index outside dimension");
    ComplexMatrix m(dim, dim);
    m(row, col) = coeff;
    return m;
}

DensityMatrix ghz_state(std::size_t qubits, std::span<const int> bits) {
    if (qubits < 2) throw std::invalid_argument("ghz_state: need at least two qubits");
    if (bits.size() != qubits) throw std::invalid_argument("ghz_state: bits length differs from qubit count");
    std::size_t index = 0;
    for (int b : bits) index = (index << 1) | static_cast<std::size_t>(b != 0);
    const std::size_t dim = qubit_dim(qubits);
    const std::size_t flipped = (dim - 1) ^ index;
    std::vector<Complex> psi(dim);
    psi[index] = 1.0;
    psi[flipped] = 1.0;
    return pure_state(psi);
}

DensityMatrix bell_psi_plus() {
    const std::vector<Complex> psi = {0.0, 1.0, 1.0, 0.0};
    return pure_state(psi);
}

DensityMatrix werner_state(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("werner_state: lambda outside [0, 1]");
    ComplexMatrix m = lambda * maximally_mixed(4).matrix();
    m += (1.0 - lambda) * bell_psi_plus().matrix();
    return DensityMatrix(std::move(m));
}

DensityMatrix bell_diagonal_mix_state(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("bell_diagonal_mix_state: lambda outside [0, 1]");
    const DensityMatrix bell = bell_psi_plus();
    ComplexMatrix m = lambda * diagonal_projection(bell).matrix();
    m += (1.0 - lambda) * bell.matrix();
    return DensityMatrix(std::move(m));
}

Json matrix_to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix build_matrix(const Json& desc, std::size_t dim_hint) {
    if (desc.is_array()) return parse_matrix(desc);
    if (!desc.is_object() || !desc.contains("builder") || !desc.at("builder").is_string())
        schema_fail("operator must be a matrix or {\"builder\": ..., \"params\": ...}, got " + desc.dump());
    const std::string name = desc.at("builder").get<std::string>();
    const Json& p = params_of(desc);
    try {
        if (name == "ghz") {
            const std::size_t m = count_param(p, "M", count_param(p, "qubits", 0));
            const auto bits = parse_bits(p, m);
            return ghz_state(m, bits).matrix();
        }
        if (name == "werner") return werner_state(number_param(p, "lambda", 0.0)).matrix();
        if (name == "bell_diagonal_mix") return bell_diagonal_mix_state(number_param(p, "lambda", 0.0)).matrix();
        if (name == "random_pure")
            return random_pure_state(count_param(p, "dim", dim_hint), count_param(p, "seed", 1)).matrix();
        if (name == "random_density")
            return random_density(count_param(p, "dim", dim_hint), count_param(p, "seed", 1)).matrix();
        if (name == "maximally_mixed") return maximally_mixed(count_param(p, "dim", dim_hint)).matrix();
        if (name == "pauli_string")
            return pauli_string(string_param(p, "string", ""), complex_param(p, "coeff", 1.0));
        if (name == "matrix_unit")
            return matrix_unit(count_param(p, "dim", dim_hint), count_param(p, "row", 0), count_param(p, "col", 0),
                               complex_param(p, "coeff", 1.0));
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception& e) {
        schema_fail("builder \"" + name + "\": " + e.what());
    }
    schema_fail("unknown builder \"" + name + "\"");
}

TimeFunction make_time_function(const Json& desc) {
    if (desc.is_null()) return TimeFunction::constant(1.0);
    if (desc.is_number()) return TimeFunction::constant(desc.get<double>());
    if (!desc.is_object() || !desc.contains("function") || !desc.at("function").is_string())
        schema_fail("time function must be a number or {\"function\": ..., \"params\": ...}");
    const std::string name = desc.at("function").get<std::string>();
    const Json& p = params_of(desc);
    const std::string text = desc.dump();
    if (name == "constant") return TimeFunction::constant(number_param(p, "value", 1.0));
    if (name == "cos") {
        const double amp = number_param(p, "amplitude", 1.0);
        const double omega = number_param(p, "omega", 1.0);
        const double phase = number_param(p, "phase", 0.0);
        const double offset = number_param(p, "offset", 0.0);
        return TimeFunction([=](double t) { return offset + amp * std::cos(omega * t + phase); },
                            amp == 0.0 || omega == 0.0, text);
    }
    if (name == "cos_squared") {
        const double amp = number_param(p, "amplitude", 1.0);
        const double omega = number_param(p, "omega", 1.0);
        return TimeFunction([=](double t) { return amp * std::pow(std::cos(omega * t), 2); },
                            amp == 0.0 || omega == 0.0, text);
    }
    if (name == "exponential") {
        const double amp = number_param(p, "amplitude", 1.0);
        const double rate = number_param(p, "rate", 1.0);
        return TimeFunction([=](double t) { return amp * std::exp(-rate * t); }, amp == 0.0 || rate == 0.0, text);
    }
    if (name == "step") {
        const double before = number_param(p, "before", 1.0);
        const double after = number_param(p, "after", 1.0);
        const double at = number_param(p, "at", 0.0);
        return TimeFunction([=](double t) { return t < at ? before : after; }, before == after, text);
    }
    schema_fail("unknown time function \"" + name + "\"");
}

// ---------------------------------------------------------------------------
// Document -> Scenario

namespace {

std::vector<HamiltonianTerm> parse_hamiltonian(const Json& doc, std::size_t dim) {
    std::vector<HamiltonianTerm> terms;
    if (!doc.contains("hamiltonian") || doc.at("hamiltonian").is_null()) return terms;
    const Json& h = doc.at("hamiltonian");
    const bool term_list = h.is_array() && !h.empty() && h[0].is_object();
    if (!term_list) {
        terms.push_back({build_matrix(h, dim), TimeFunction::constant(1.0)});
        return terms;
    }
    for (const auto& term : h) {
        if (!term.is_object() || !term.contains("operator"))
            schema_fail("hamiltonian terms must be objects with an \"operator\" field");
        terms.push_back({build_matrix(term.at("operator"), dim),
                         make_time_function(term.contains("modulation") ? term.at("modulation") : Json())});
    }
    return terms;
}

std::vector<ComplexMatrix> parse_jumps(const Json& doc, std::size_t dim) {
    std::vector<ComplexMatrix> jumps;
    if (!doc.contains("jump_ops") || doc.at("jump_ops").is_null()) return jumps;
    const Json& j = doc.at("jump_ops");
    if (!j.is_array()) schema_fail("\"jump_ops\" must be an array");
    for (const auto& op : j) jumps.push_back(build_matrix(op, dim));
    return jumps;
}

TimeGrid parse_grid(const Json& doc) {
    TimeGrid grid;
    if (!doc.contains("grid")) return grid;
    const Json& g = doc.at("grid");
    if (!g.is_object()) schema_fail("\"grid\" must be an object");
    grid.t_start = number_param(g, "t_start", grid.t_start);
    grid.t_end = number_param(g, "t_end", grid.t_end);
    grid.steps = count_param(g, "steps", grid.steps);
    grid.substeps = count_param(g, "substeps", grid.substeps);
    try {
        grid.validate();
    } catch (const std::invalid_argument& e) {
        schema_fail(e.what());
    }
    return grid;
}

std::optional<ReferenceState> parse_reference(const Json& doc, const LindbladGenerator& gen,
                                              const DensityMatrix& initial, const TimeGrid& grid) {
    if (!doc.contains("reference_state") || doc.at("reference_state").is_null()) return std::nullopt;
    Json r = doc.at("reference_state");
    if (r.is_string()) r = Json{{"kind", r}};
    if (!r.is_object() || !r.contains("kind") || !r.at("kind").is_string())
        schema_fail("\"reference_state\" must be a kind string or an object with \"kind\"");
    const std::string kind = r.at("kind").get<std::string>();
    const std::size_t dim = gen.dim();
    if (kind == "origin") return ReferenceState::origin();
    if (kind == "maximally_mixed") return ReferenceState::maximally_mixed();
    if (kind == "explicit") {
        if (!r.contains("state")) schema_fail("explicit reference_state needs \"state\"");
        return ReferenceState::explicit_state(to_state(build_matrix(r.at("state"), dim), "reference_state"));
    }
    if (kind == "diagonal_of_initial") return ReferenceState::explicit_state(diagonal_projection(initial));
    if (kind == "decorrelated") {
        if (!r.contains("dims") || !r.at("dims").is_array() || r.at("dims").size() != 2)
            schema_fail("decorrelated reference_state needs \"dims\": [dA, dB]");
        const auto dim_a = r.at("dims")[0].get<std::size_t>();
        const auto dim_b = r.at("dims")[1].get<std::size_t>();
        if (!r.contains("local_state")) schema_fail("decorrelated reference_state needs \"local_state\"");
        const DensityMatrix local = to_state(build_matrix(r.at("local_state"), dim_b), "local_state");
        if (local.dim() != dim_b) schema_fail("local_state dimension differs from dims[1]");
        try {
            const DensityMatrix rho_a = partial_trace(initial, dim_a, dim_b, Subsystem::A);
            return ReferenceState::explicit_state(DensityMatrix(kron(rho_a.matrix(), local.matrix())));
        } catch (const std::exception& e) {
            schema_fail(std::string("decorrelated reference_state: ") + e.what());
        }
    }
    if (kind == "steady_state") {
        try {
            return ReferenceState::explicit_state(steady_state(gen, grid.t_start));
        } catch (const std::exception& e) {
            schema_fail(std::string("steady_state reference: ") + e.what());
        }
    }
    schema_fail("unknown reference_state kind \"" + kind + "\"");
}

FaultInjection parse_fault(const Json& doc) {
    FaultInjection fault;
    if (!doc.contains("fault")) return fault;
    const Json& f = doc.at("fault");
    if (!f.is_object()) schema_fail("\"fault\" must be an object");
    if (f.contains("negate_superoperator_hamiltonian"))
        fault.negate_superoperator_hamiltonian = f.at("negate_superoperator_hamiltonian").get<bool>();
    if (f.contains("propagation_prefactor"))
        fault.propagation_prefactor = make_time_function(f.at("propagation_prefactor"));
    return fault;
}

}  // namespace

Scenario build_scenario(const ScenarioSpec& spec) {
    const Json& doc = spec.document;
    if (!doc.is_object()) schema_fail("scenario document must be a JSON object");
    if (!doc.contains("dim") || !doc.at("dim").is_number_integer() || doc.at("dim").get<long long>() < 1)
        schema_fail("scenario needs a positive integer \"dim\"");
    const auto dim = doc.at("dim").get<std::size_t>();

    auto terms = parse_hamiltonian(doc, dim);
    auto jumps = parse_jumps(doc, dim);
    TimeFunction prefactor = make_time_function(doc.contains("prefactor") ? doc.at("prefactor") : Json());

    std::optional<LindbladGenerator> gen;
    try {
        gen.emplace(dim, std::move(terms), std::move(jumps), std::move(prefactor));
    } catch (const std::invalid_argument& e) {
        schema_fail(std::string("generator: ") + e.what());
    }
    if (!doc.contains("initial_state")) schema_fail("scenario needs \"initial_state\"");
    DensityMatrix initial = to_state(build_matrix(doc.at("initial_state"), dim), "initial_state");
    if (initial.dim() != dim) schema_fail("initial_state dimension differs from \"dim\"");

    TimeGrid grid = parse_grid(doc);
    for (std::size_t k = 0; k <= grid.steps; ++k) {
        if (!gen->jump_ops().empty() && !(gen->prefactor_function()(grid.time(k)) >= 0.0))
            schema_fail("prefactor is negative on the time grid");
    }
    auto reference = parse_reference(doc, *gen, initial, grid);
    if (reference && reference->kind != ReferenceKind::origin &&
        !verify_stationary(*gen, reference->matrix(dim), grid)) {
        schema_fail("reference_state is not stationary under the generator");
    }

    Scenario s{spec.name(), std::move(*gen), std::move(initial), std::move(reference), grid,
               doc.contains("metadata") ? doc.at("metadata") : Json::object(), parse_fault(doc)};
    return s;
}

ScenarioSpec parse_scenario(std::string_view json_text) {
    try {
        return {Json::parse(json_text)};
    } catch (const Json::parse_error& e) {
        schema_fail(std::string("scenario JSON: ") + e.what());
    }
}

ScenarioSpec load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) schema_fail("cannot open scenario file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

Json parse_override_value(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error&) {
        return Json(std::string(text));
    }
}

void apply_override(Json& document, const Override& override) {
    Json* node = &document;
    std::string_view key = override.key;
    if (key.empty()) schema_fail("empty override key");
    while (true) {
        const auto dot = key.find('.');
        const std::string segment(key.substr(0, dot));
        const bool last = dot == std::string_view::npos;
        if (node->is_array()) {
            std::size_t index = 0;
            try {
                index = std::stoul(segment);
            } catch (const std::exception&) {
                schema_fail("override \"" + override.key + "\": \"" + segment + "\" is not an array index");
            }
            if (index >= node->size()) schema_fail("override \"" + override.key + "\": index out of range");
            node = &(*node)[index];
        } else {
            if (node->is_null()) *node = Json::object();
            if (!node->is_object()) schema_fail("override \"" + override.key + "\" descends into a non-object");
            node = &(*node)[segment];
        }
        if (last) break;
        key = key.substr(dot + 1);
    }
    *node = parse_override_value(override.value);
}

ScenarioSpec resolve_scenario(std::string_view source, std::span<const Override> overrides) {
    if (is_catalog_name(source)) {
        Json params = Json::object();
        std::vector<Override> patches;
        for (const auto& o : overrides) {
            if (o.key.find('.') == std::string::npos) {
                params[o.key] = parse_override_value(o.value);
            } else {
                patches.push_back(o);
            }
        }
        ScenarioSpec spec = catalog_scenario(source, params);
        for (const auto& o : patches) apply_override(spec.document, o);
        return spec;
    }
    ScenarioSpec spec = load_scenario_file(std::string(source));
    for (const auto& o : overrides) {
        if (o.key == "seed") {
            apply_override(spec.document, {"initial_state.params.seed", o.value});
        } else if (o.key == "t_start" || o.key == "t_end" || o.key == "steps" || o.key == "substeps") {
            apply_override(spec.document, {"grid." + o.key, o.value});
        } else {
            apply_override(spec.document, o);
        }
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Scenario families

ScenarioSpec qubit_dephasing_scenario(QubitVariant variant, double a, Complex b, double gamma) {
    if (!(a >= 0.0 && a <= 1.0) || std::norm(b) > a * (1.0 - a) + 1e-15)
        throw std::invalid_argument("qubit_dephasing_scenario: (a, b) is not a valid qubit state");
    ComplexMatrix rho = ComplexMatrix::from_rows({{a, b}, {std::conj(b), 1.0 - a}});
    ScenarioSpec spec = qubit_dephasing_random_scenario(variant, 1, gamma);
    spec.document["name"] = variant == QubitVariant::text ? "qubit_dephasing_text" : "qubit_dephasing_figure";
    spec.document["initial_state"] = matrix_to_json(rho);
    spec.document["metadata"]["tight"] = variant == QubitVariant::text && std::norm(b) > 0.0;
    return spec;
}

ScenarioSpec qubit_dephasing_random_scenario(QubitVariant variant, std::uint64_t seed, double gamma) {
    const bool text = variant == QubitVariant::text;
    Json doc;
    doc["name"] = text ? "fig1_text" : "fig1";
    doc["dim"] = 2;
    doc["hamiltonian"] = builder("pauli_string", {{"string", text ? "Z" : "X"}});
    // A = sqrt(gamma) sigma_z / 2
    doc["jump_ops"] = Json::array({builder("pauli_string", {{"string", "Z"}, {"coeff", 0.5 * std::sqrt(gamma)}})});
    doc["prefactor"] = function_json("constant", {{"value", 1.0}});
    doc["initial_state"] = builder("random_pure", {{"dim", 2}, {"seed", seed}});
    // sigma_z commutes with the dephasing, so the diagonal of the initial state
    // is stationary; with sigma_x only the maximally mixed state is.
    doc["reference_state"] = text ? Json{{"kind", "diagonal_of_initial"}} : Json{{"kind", "maximally_mixed"}};
    doc["grid"] = default_grid();
    doc["metadata"] = {{"family", "qubit_dephasing"},
                       {"variant", text ? "text" : "figure"},
                       {"tight", text},
                       {"notes", "A = sigma_z/2 reproduces the quoted rates 2 (Hilbert) and 1 (Liouville)"}};
    return {std::move(doc)};
}

ScenarioSpec ghz_local_scenario(std::size_t qubits, double gamma, std::vector<int> bits) {
    if (qubits < 2 || qubits > 6) throw std::invalid_argument("ghz_local_scenario: M must be in [2, 6]");
    if (bits.empty()) bits.assign(qubits, 0);
    if (bits.size() != qubits) throw std::invalid_argument("ghz_local_scenario: bits length differs from M");
    Json jumps = Json::array();
    for (std::size_t k = 0; k < qubits; ++k)
        jumps.push_back(builder("pauli_string", {{"string", site_string(qubits, k, 'Z')}, {"coeff", std::sqrt(gamma)}}));
    Json doc;
    doc["name"] = "ghz_local";
    doc["dim"] = qubit_dim(qubits);
    doc["hamiltonian"] = nullptr;
    doc["jump_ops"] = std::move(jumps);
    doc["prefactor"] = function_json("constant", {{"value", 1.0}});
    doc["initial_state"] = builder("ghz", {{"M", qubits}, {"bits", bits}});
    doc["reference_state"] = {{"kind", "diagonal_of_initial"}};
    doc["grid"] = default_grid();
    doc["metadata"] = {{"family", "ghz_local"},
                       {"M", qubits},
                       {"gamma", gamma},
                       {"tight", true},
                       {"notes", "skew norm computes to 4*gamma*M; the quoted 2*M*gamma is not reproduced"}};
    return {std::move(doc)};
}

ScenarioSpec ghz_global_scenario(std::size_t dim, double gamma, std::uint64_t seed) {
    if (dim < 2) throw std::invalid_argument("ghz_global_scenario: dimension must be >= 2");
    Json jumps = Json::array();
    for (std::size_t k = 0; k < dim; ++k)
        jumps.push_back(builder("matrix_unit", {{"dim", dim}, {"row", k}, {"col", k}, {"coeff", std::sqrt(gamma)}}));
    Json doc;
    doc["name"] = "ghz_global";
    doc["dim"] = dim;
    doc["hamiltonian"] = nullptr;
    doc["jump_ops"] = std::move(jumps);
    doc["prefactor"] = function_json("constant", {{"value", 1.0}});
    doc["initial_state"] = builder("random_density", {{"dim", dim}, {"seed", seed}});
    doc["reference_state"] = {{"kind", "diagonal_of_initial"}};
    doc["grid"] = default_grid();
    doc["metadata"] = {{"family", "ghz_global"},
                       {"gamma", gamma},
                       {"tight", true},
                       {"notes", "nonzero skew singular values compute to 2*gamma"}};
    return {std::move(doc)};
}

ScenarioSpec interacting_chain_scenario(std::size_t qubits, double v0, double gamma, std::uint64_t seed) {
    if (qubits < 2 || qubits > 6) throw std::invalid_argument("interacting_chain_scenario: M must be in [2, 6]");
    Json terms = Json::array();
    for (std::size_t i = 0; i < qubits; ++i)
        terms.push_back({{"operator", builder("pauli_string", {{"string", site_string(qubits, i, 'Z')}})}});
    for (std::size_t i = 0; i + 1 < qubits; ++i) {
        std::string bond(qubits, 'I');
        bond[i] = 'X';
        bond[i + 1] = 'X';
        terms.push_back({{"operator", builder("pauli_string", {{"string", bond}, {"coeff", v0}})},
                         {"modulation", function_json("cos", {{"amplitude", 1.0}, {"omega", 1.0}})}});
    }
    Json jumps = Json::array();
    for (std::size_t k = 0; k < qubits; ++k)
        jumps.push_back(builder("pauli_string", {{"string", site_string(qubits, k, 'Z')}, {"coeff", std::sqrt(gamma)}}));
    Json doc;
    doc["name"] = "interacting_chain";
    doc["dim"] = qubit_dim(qubits);
    doc["hamiltonian"] = std::move(terms);
    doc["jump_ops"] = std::move(jumps);
    doc["prefactor"] = function_json("constant", {{"value", 1.0}});
    doc["initial_state"] = builder("random_pure", {{"dim", qubit_dim(qubits)}, {"seed", seed}});
    doc["reference_state"] = {{"kind", "maximally_mixed"}};
    doc["grid"] = default_grid();
    doc["metadata"] = {{"family", "interacting_chain"}, {"M", qubits}, {"V0", v0}, {"gamma", gamma}, {"tight", false}};
    return {std::move(doc)};
}

ScenarioSpec decorrelator_scenario(double gamma, CorrelationFamily family, double lambda, std::uint64_t seed) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("decorrelator_scenario: lambda outside [0, 1]");
    Json doc;
    doc["name"] = "decorrelator";
    doc["dim"] = 4;
    doc["hamiltonian"] = nullptr;
    doc["jump_ops"] = Json::array({builder("pauli_string", {{"string", "I+"}, {"coeff", std::sqrt(gamma)}}),
                                   builder("pauli_string", {{"string", "I-"}, {"coeff", std::sqrt(gamma)}})});
    doc["prefactor"] = function_json("constant", {{"value", 1.0}});
    std::string family_name;
    switch (family) {
        case CorrelationFamily::werner:
            family_name = "werner";
            doc["initial_state"] = builder("werner", {{"lambda", lambda}});
            break;
        case CorrelationFamily::bell_diagonal_mix:
            family_name = "bell_diagonal_mix";
            doc["initial_state"] = builder("bell_diagonal_mix", {{"lambda", lambda}});
            break;
        case CorrelationFamily::random:
            family_name = "random";
            doc["initial_state"] = builder("random_density", {{"dim", 4}, {"seed", seed}});
            break;
    }
    doc["reference_state"] = {{"kind", "decorrelated"},
                              {"dims", {2, 2}},
                              {"local_state", builder("maximally_mixed", {{"dim", 2}})}};
    doc["grid"] = default_grid();
    doc["metadata"] = {{"family", family_name},
                       {"lambda", lambda},
                       {"gamma", gamma},
                       {"tight", family == CorrelationFamily::bell_diagonal_mix && lambda == 1.0}};
    return {std::move(doc)};
}

ScenarioSpec nlevel_dephasing_scenario(std::size_t dim, double gamma, std::uint64_t phase_seed, std::uint64_t seed) {
    if (dim < 2) throw std::invalid_argument("nlevel_dephasing_scenario: dimension must be >= 2");
    std::mt19937_64 rng(phase_seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<Complex> phases(dim);
    for (auto& z : phases) z = std::sqrt(gamma) * std::polar(1.0, angle(rng));
    std::vector<Complex> levels(dim);
    for (std::size_t j = 0; j < dim; ++j) levels[j] = static_cast<double>(j);
    Json doc;
    doc["name"] = "nlevel_dephasing";
    doc["dim"] = dim;
    doc["hamiltonian"] = matrix_to_json(ComplexMatrix::diagonal(levels));
    doc["jump_ops"] = Json::array({matrix_to_json(ComplexMatrix::diagonal(phases))});
    doc["prefactor"] = function_json("constant", {{"value", 1.0}});
    doc["initial_state"] = builder("random_pure", {{"dim", dim}, {"seed", seed}});
    doc["reference_state"] = {{"kind", "maximally_mixed"}};
    doc["grid"] = default_grid();
    doc["metadata"] = {{"family", "nlevel_dephasing"}, {"gamma", gamma}, {"tight", false}};
    return {std::move(doc)};
}

// ---------------------------------------------------------------------------
// Catalog

const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names = {"fig1", "fig2", "fig3", "ghz_local",
                                                   "ghz_global", "nlevel_dephasing", "decorrelator"};
    return names;
}

bool is_catalog_name(std::string_view name) {
    const auto& names = catalog_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::string catalog_description(std::string_view name) {
    if (name == "fig1") return "qubit dephasing, A = sigma_z/2, H = sigma_x (variant=text for H = sigma_z); params: variant, seed, gamma, a, b";
    if (name == "fig2") return "dephased qubit chain with V0 cos(t) XX coupling; params: M (3), V0 (0.1), gamma, seed";
    if (name == "fig3") return "decorrelator on qubit B, bell_diagonal_mix family; params: family, lambda (1), gamma, seed";
    if (name == "ghz_local") return "GHZ state under local sigma_z dephasing; params: M (3), gamma, bits";
    if (name == "ghz_global") return "global dephasing by diagonal projectors; params: N (8), gamma, seed";
    if (name == "nlevel_dephasing") return "N-level unitary dephasing A = diag(e^{i phi}); params: N (4), gamma, phase_seed, seed";
    if (name == "decorrelator") return "decorrelator on qubit B, werner family; params: family, lambda (0.5), gamma, seed";
    return {};
}

namespace {

QubitVariant parse_variant(const std::string& v) {
    if (v == "text") return QubitVariant::text;
    if (v == "figure") return QubitVariant::figure;
    schema_fail("variant must be \"text\" or \"figure\"");
}

CorrelationFamily parse_family(const std::string& f) {
    if (f == "werner") return CorrelationFamily::werner;
    if (f == "bell_diagonal_mix") return CorrelationFamily::bell_diagonal_mix;
    if (f == "random") return CorrelationFamily::random;
    schema_fail("family must be werner, bell_diagonal_mix or random");
}

void require_known_params(std::string_view name, const Json& params, std::initializer_list<const char*> known) {
    static constexpr std::array<const char*, 4> grid_keys = {"t_start", "t_end", "steps", "substeps"};
    for (const auto& [key, value] : params.items()) {
        const bool ok = std::any_of(known.begin(), known.end(), [&](const char* k) { return key == k; }) ||
                        std::any_of(grid_keys.begin(), grid_keys.end(), [&](const char* k) { return key == k; });
        if (!ok) schema_fail("catalog scenario \"" + std::string(name) + "\" has no parameter \"" + key + "\"");
    }
}

ScenarioSpec build_catalog_entry(std::string_view name, const Json& p) {
    if (name == "fig1") {
        require_known_params(name, p, {"variant", "seed", "gamma", "a", "b"});
        const auto variant = parse_variant(string_param(p, "variant", "figure"));
        const double gamma = number_param(p, "gamma", 1.0);
        if (p.contains("a") || p.contains("b")) {
            ScenarioSpec s = qubit_dephasing_scenario(variant, number_param(p, "a", 0.5), complex_param(p, "b", 0.0), gamma);
            s.document["name"] = "fig1";
            return s;
        }
        return qubit_dephasing_random_scenario(variant, count_param(p, "seed", 1), gamma);
    }
    if (name == "fig2") {
        require_known_params(name, p, {"M", "V0", "gamma", "seed"});
        ScenarioSpec s = interacting_chain_scenario(count_param(p, "M", 3), number_param(p, "V0", 0.1),
                                                    number_param(p, "gamma", 1.0), count_param(p, "seed", 1));
        s.document["name"] = "fig2";
        return s;
    }
    if (name == "fig3" || name == "decorrelator") {
        require_known_params(name, p, {"family", "lambda", "gamma", "seed"});
        const bool fig = name == "fig3";
        ScenarioSpec s = decorrelator_scenario(number_param(p, "gamma", 1.0),
                                               parse_family(string_param(p, "family", fig ? "bell_diagonal_mix" : "werner")),
                                               number_param(p, "lambda", fig ? 1.0 : 0.5), count_param(p, "seed", 1));
        s.document["name"] = std::string(name);
        return s;
    }
    if (name == "ghz_local") {
        require_known_params(name, p, {"M", "gamma", "bits"});
        const std::size_t m = count_param(p, "M", 3);
        return ghz_local_scenario(m, number_param(p, "gamma", 1.0), p.contains("bits") ? parse_bits(p, m) : std::vector<int>{});
    }
    if (name == "ghz_global") {
        require_known_params(name, p, {"N", "gamma", "seed"});
        return ghz_global_scenario(count_param(p, "N", 8), number_param(p, "gamma", 1.0), count_param(p, "seed", 1));
    }
    if (name == "nlevel_dephasing") {
        require_known_params(name, p, {"N", "gamma", "phase_seed", "seed"});
        return nlevel_dephasing_scenario(count_param(p, "N", 4), number_param(p, "gamma", 1.0),
                                         count_param(p, "phase_seed", 7), count_param(p, "seed", 1));
    }
    schema_fail("unknown catalog scenario \"" + std::string(name) + "\"");
}

}  // namespace

ScenarioSpec catalog_scenario(std::string_view name, const Json& params) {
    if (!params.is_object()) schema_fail("catalog parameters must be an object");
    ScenarioSpec spec;
    try {
        spec = build_catalog_entry(name, params);
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception& e) {
        schema_fail(std::string(name) + ": " + e.what());
    }
    Json& grid = spec.document["grid"];
    for (const char* key : {"t_start", "t_end", "steps", "substeps"})
        if (params.contains(key)) grid[key] = params.at(key);
    return spec;
}

}  // namespace qsl
