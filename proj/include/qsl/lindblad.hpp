// lindblad.hpp: density matrices, Lindblad generators and the master-equation right-hand side

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qsl/linalg.hpp"

namespace qsl {

inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kPsdTolerance = 1e-9;

// Real scalar function of time. Constant functions are flagged so that
// propagators can reuse a single exponential.
class TimeFunction {
public:
    TimeFunction() : TimeFunction(constant(1.0)) {}
    TimeFunction(std::function<double(double)> fn, bool is_constant, std::string description);

    static TimeFunction constant(double value);

    double operator()(double t) const { return fn_(t); }
    bool is_constant() const noexcept { return constant_; }
    const std::string& description() const noexcept { return description_; }

private:
    std::function<double(double)> fn_;
    bool constant_ = true;
    std::string description_;
};

class DensityMatrix {
public:
    // Throws std::invalid_argument if the matrix is not Hermitian, not unit trace, or not PSD.
    explicit DensityMatrix(ComplexMatrix matrix);

    std::size_t dim() const noexcept { return matrix_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }

private:
    ComplexMatrix matrix_;
};

// Why `m` is not a density matrix, or nullopt if it is one.
std::optional<std::string> density_violation(const ComplexMatrix& m);

struct HamiltonianTerm {
    ComplexMatrix op;
    TimeFunction modulation = TimeFunction::constant(1.0);
};

// d rho/dt = -i[H(t), rho] + prefactor(t) sum_k (A_k rho A_k^dagger - 1/2 {A_k^dagger A_k, rho})
// with H(t) = sum_j f_j(t) H_j.
class LindbladGenerator {
public:
    LindbladGenerator(ComplexMatrix hamiltonian, std::vector<ComplexMatrix> jump_ops,
                      TimeFunction prefactor = TimeFunction::constant(1.0));
    LindbladGenerator(std::size_t dim, std::vector<HamiltonianTerm> hamiltonian,
                      std::vector<ComplexMatrix> jump_ops,
                      TimeFunction prefactor = TimeFunction::constant(1.0));

    std::size_t dim() const noexcept { return dim_; }
    ComplexMatrix hamiltonian(double t) const;
    const std::vector<HamiltonianTerm>& hamiltonian_terms() const noexcept { return terms_; }
    const std::vector<ComplexMatrix>& jump_ops() const noexcept { return jumps_; }
    // sum_k A_k^dagger A_k
    const ComplexMatrix& jump_gram() const noexcept { return gram_; }

    // Throws std::domain_error if the prefactor is negative at t.
    double prefactor(double t) const;
    const TimeFunction& prefactor_function() const noexcept { return prefactor_; }

    bool hamiltonian_is_static() const noexcept;
    bool is_time_dependent() const noexcept;

    LindbladGenerator with_prefactor(TimeFunction prefactor) const;
    LindbladGenerator without_hamiltonian() const;

private:
    std::size_t dim_;
    std::vector<HamiltonianTerm> terms_;
    std::vector<ComplexMatrix> jumps_;
    TimeFunction prefactor_;
    ComplexMatrix gram_;
};

ComplexMatrix apply_generator(const LindbladGenerator& gen, const ComplexMatrix& rho, double t);

enum class ReferenceKind { origin, maximally_mixed, explicit_state };

struct ReferenceState {
    ReferenceKind kind = ReferenceKind::origin;
    std::optional<DensityMatrix> state;

    static ReferenceState origin() { return {}; }
    static ReferenceState maximally_mixed() { return {ReferenceKind::maximally_mixed, std::nullopt}; }
    static ReferenceState explicit_state(DensityMatrix rho) {
        return {ReferenceKind::explicit_state, std::move(rho)};
    }

    ComplexMatrix matrix(std::size_t dim) const;
};

double purity(const ComplexMatrix& rho);
inline double purity(const DensityMatrix& rho) { return purity(rho.matrix()); }

// tr[(rho - reference)^2]; the reference may be the zero matrix.
double purity_deviation(const ComplexMatrix& rho, const ComplexMatrix& reference);

enum class Subsystem { A, B };

DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t dim_a, std::size_t dim_b,
                            Subsystem keep);
DensityMatrix diagonal_projection(const DensityMatrix& rho);

DensityMatrix random_pure_state(std::size_t dim, std::uint64_t seed);
DensityMatrix random_density(std::size_t dim, std::uint64_t seed);

DensityMatrix maximally_mixed(std::size_t dim);
// |psi><psi| for an unnormalized amplitude vector.
DensityMatrix pure_state(std::span<const Complex> amplitudes);

}  // namespace qsl
