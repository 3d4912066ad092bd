#include "qsl/lindblad.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qsl/errors.hpp"

namespace qsl {

TimeFunction::TimeFunction(std::function<double(double)> fn, bool is_constant, std::string description)
    : fn_(std::move(fn)), constant_(is_constant), description_(std::move(description)) {}

TimeFunction TimeFunction::constant(double value) {
    std::ostringstream os;
    os << "constant(" << value << ")";
    return TimeFunction([value](double) { return value; }, true, os.str());
}

std::optional<std::string> density_violation(const ComplexMatrix& m) {
    if (!m.is_square() || m.empty()) return "not a non-empty square matrix";
    if (!m.is_finite()) return "non-finite entry";
    const double defect = hermiticity_defect(m);
    if (defect > kHermitianTolerance) {
        std::ostringstream os;
        os << "not Hermitian (max |rho - rho^dagger| = " << defect << ")";
        return os.str();
    }
    const Complex tr = trace(m);
    if (std::abs(tr - 1.0) > kTraceTolerance) {
        std::ostringstream os;
        os << "trace " << tr.real() << (tr.imag() >= 0 ? "+" : "") << tr.imag() << "i differs from 1";
        return os.str();
    }
    if (!cholesky_succeeds(m, kPsdTolerance)) {
        ComplexMatrix sym = m;
        sym += adjoint(m);
        sym *= 0.5;
        std::ostringstream os;
        os << "not positive semidefinite (min eigenvalue " << hermitian_eigenvalues(sym).front() << ")";
        return os.str();
    }
    return std::nullopt;
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
    if (auto why = density_violation(matrix_)) {
        throw std::invalid_argument("DensityMatrix: " + *why);
    }
}

LindbladGenerator::LindbladGenerator(ComplexMatrix hamiltonian, std::vector<ComplexMatrix> jump_ops,
                                     TimeFunction prefactor)
    : LindbladGenerator(hamiltonian.rows(), {HamiltonianTerm{std::move(hamiltonian)}},
                        std::move(jump_ops), std::move(prefactor)) {}

LindbladGenerator::LindbladGenerator(std::size_t dim, std::vector<HamiltonianTerm> hamiltonian,
                                     std::vector<ComplexMatrix> jump_ops, TimeFunction prefactor)
    : dim_(dim), terms_(std::move(hamiltonian)), jumps_(std::move(jump_ops)),
      prefactor_(std::move(prefactor)), gram_(dim, dim) {
    if (dim_ == 0) throw DimensionError("LindbladGenerator: dimension must be positive");
    for (const auto& term : terms_) {
        if (term.op.rows() != dim_ || term.op.cols() != dim_)
            throw DimensionError("LindbladGenerator: Hamiltonian term has wrong shape");
        const double defect = hermiticity_defect(term.op);
        if (defect > kHermitianTolerance) {
            throw NotHermitian("LindbladGenerator: Hamiltonian not Hermitian (defect " +
                               std::to_string(defect) + ")");
        }
    }
    for (const auto& a : jumps_) {
        if (a.rows() != dim_ || a.cols() != dim_)
            throw DimensionError("LindbladGenerator: jump operator has wrong shape");
        gram_ += matmul(adjoint(a), a);
    }
}

ComplexMatrix LindbladGenerator::hamiltonian(double t) const {
    ComplexMatrix h(dim_, dim_);
    for (const auto& term : terms_) {
        const double f = term.modulation(t);
        if (f == 0.0) continue;
        for (std::size_t i = 0; i < h.size(); ++i) h.entries()[i] += f * term.op.entries()[i];
    }
    return h;
}

double LindbladGenerator::prefactor(double t) const {
    const double g = prefactor_(t);
    if (!(g >= 0.0)) {
        throw std::domain_error("LindbladGenerator: prefactor " + prefactor_.description() +
                                " is negative at t=" + std::to_string(t));
    }
    return g;
}

bool LindbladGenerator::hamiltonian_is_static() const noexcept {
    for (const auto& term : terms_)
        if (!term.modulation.is_constant()) return false;
    return true;
}

bool LindbladGenerator::is_time_dependent() const noexcept {
    return !hamiltonian_is_static() || (!jumps_.empty() && !prefactor_.is_constant());
}

LindbladGenerator LindbladGenerator::with_prefactor(TimeFunction prefactor) const {
    LindbladGenerator copy = *this;
    copy.prefactor_ = std::move(prefactor);
    return copy;
}

LindbladGenerator LindbladGenerator::without_hamiltonian() const {
    LindbladGenerator copy = *this;
    copy.terms_.clear();
    return copy;
}

ComplexMatrix apply_generator(const LindbladGenerator& gen, const ComplexMatrix& rho, double t) {
    if (rho.rows() != gen.dim() || rho.cols() != gen.dim()) {
        throw DimensionError("apply_generator: state is " + std::to_string(rho.rows()) + "x" +
                             std::to_string(rho.cols()) + ", generator acts on dimension " +
                             std::to_string(gen.dim()));
    }
    const double gamma = gen.jump_ops().empty() ? 0.0 : gen.prefactor(t);
    // Effective non-Hermitian K = H - (i/2) gamma sum A^dagger A, so that
    // drho/dt = -i (K rho - rho K^dagger) + gamma sum A rho A^dagger.
    ComplexMatrix k = gen.hamiltonian(t);
    if (gamma != 0.0) k -= Complex(0.0, 0.5 * gamma) * gen.jump_gram();
    ComplexMatrix out = matmul(k, rho);
    out -= matmul(rho, adjoint(k));
    out *= Complex(0.0, -1.0);
    if (gamma != 0.0) {
        for (const auto& a : gen.jump_ops()) {
            ComplexMatrix sandwich = matmul(matmul(a, rho), adjoint(a));
            sandwich *= gamma;
            out += sandwich;
        }
    }
    return out;
}

ComplexMatrix ReferenceState::matrix(std::size_t dim) const {
    switch (kind) {
        case ReferenceKind::origin:
            return ComplexMatrix(dim, dim);
        case ReferenceKind::maximally_mixed:
            return qsl::maximally_mixed(dim).matrix();
        case ReferenceKind::explicit_state:
            if (!state || state->dim() != dim)
                throw DimensionError("ReferenceState: explicit state missing or of wrong dimension");
            return state->matrix();
    }
    return ComplexMatrix(dim, dim);
}

double purity(const ComplexMatrix& rho) {
    if (!rho.is_square()) throw DimensionError("purity: matrix not square");
    // tr(rho^2) = sum_ij rho_ij rho_ji
    double p = 0.0;
    for (std::size_t i = 0; i < rho.rows(); ++i)
        for (std::size_t j = 0; j < rho.cols(); ++j) p += (rho(i, j) * rho(j, i)).real();
    return p;
}

double purity_deviation(const ComplexMatrix& rho, const ComplexMatrix& reference) {
    if (rho.rows() != reference.rows() || rho.cols() != reference.cols())
        throw DimensionError("purity_deviation: dimension mismatch");
    return purity(rho - reference);
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t dim_a, std::size_t dim_b,
                            Subsystem keep) {
    if (dim_a == 0 || dim_b == 0 || dim_a * dim_b != rho.dim()) {
        throw DimensionError("partial_trace: " + std::to_string(rho.dim()) + " != " +
                             std::to_string(dim_a) + " x " + std::to_string(dim_b));
    }
    const auto& m = rho.matrix();
    if (keep == Subsystem::A) {
        ComplexMatrix out(dim_a, dim_a);
        for (std::size_t i = 0; i < dim_a; ++i)
            for (std::size_t j = 0; j < dim_a; ++j)
                for (std::size_t k = 0; k < dim_b; ++k) out(i, j) += m(i * dim_b + k, j * dim_b + k);
        return DensityMatrix(std::move(out));
    }
    ComplexMatrix out(dim_b, dim_b);
    for (std::size_t k = 0; k < dim_b; ++k)
        for (std::size_t l = 0; l < dim_b; ++l)
            for (std::size_t i = 0; i < dim_a; ++i) out(k, l) += m(i * dim_b + k, i * dim_b + l);
    return DensityMatrix(std::move(out));
}

DensityMatrix diagonal_projection(const DensityMatrix& rho) {
    ComplexMatrix out(rho.dim(), rho.dim());
    for (std::size_t i = 0; i < rho.dim(); ++i) out(i, i) = rho.matrix()(i, i);
    return DensityMatrix(std::move(out));
}

namespace {

std::vector<Complex> gaussian_vector(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Complex> v(n);
    for (auto& z : v) {
        const double re = normal(rng);
        const double im = normal(rng);
        z = {re, im};
    }
    return v;
}

ComplexMatrix hermitize(ComplexMatrix m) {
    const ComplexMatrix adj = adjoint(m);
    m += adj;
    m *= 0.5;
    return m;
}

}  // namespace

DensityMatrix pure_state(std::span<const Complex> amplitudes) {
    double norm2 = 0.0;
    for (Complex z : amplitudes) norm2 += std::norm(z);
    if (!(norm2 > 0.0)) throw std::invalid_argument("pure_state: zero amplitude vector");
    const std::size_t n = amplitudes.size();
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = amplitudes[i] * std::conj(amplitudes[j]) / norm2;
    return DensityMatrix(hermitize(std::move(m)));
}

DensityMatrix maximally_mixed(std::size_t dim) {
    ComplexMatrix m = ComplexMatrix::identity(dim);
    m *= 1.0 / static_cast<double>(dim);
    return DensityMatrix(std::move(m));
}

DensityMatrix random_pure_state(std::size_t dim, std::uint64_t seed) {
    if (dim < 2) throw std::invalid_argument("random_pure_state: dimension must be >= 2");
    std::mt19937_64 rng(seed);
    const auto psi = gaussian_vector(dim, rng);
    return pure_state(psi);
}

DensityMatrix random_density(std::size_t dim, std::uint64_t seed) {
    if (dim < 2) throw std::invalid_argument("random_density: dimension must be >= 2");
    std::mt19937_64 rng(seed);
    const auto g_entries = gaussian_vector(dim * dim, rng);
    const ComplexMatrix g(dim, dim, g_entries);
    ComplexMatrix m = matmul(g, adjoint(g));
    m *= 1.0 / trace(m).real();
    return DensityMatrix(hermitize(std::move(m)));
}

}  // namespace qsl
