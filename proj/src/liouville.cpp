#include "qsl/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qsl/errors.hpp"

namespace qsl {

Complex inner(const LiouvilleVector& a, const LiouvilleVector& b) {
    if (a.size() != b.size()) throw DimensionError("inner: length mismatch");
    Complex acc{};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a.values()[i]) * b.values()[i];
    return acc;
}

LiouvilleVector vectorize(const ComplexMatrix& rho) {
    if (!rho.is_square()) throw DimensionError("vectorize: matrix not square");
    return LiouvilleVector({rho.entries().begin(), rho.entries().end()});
}

ComplexMatrix devectorize(const LiouvilleVector& v) {
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (n * n != v.size()) {
        throw DimensionError("devectorize: length " + std::to_string(v.size()) + " is not a square");
    }
    return ComplexMatrix(n, n, {v.values().begin(), v.values().end()});
}

SuperOperator build_superoperator(const LindbladGenerator& gen, double t) {
    const std::size_t n = gen.dim();
    const ComplexMatrix id = ComplexMatrix::identity(n);
    const ComplexMatrix h = gen.hamiltonian(t);

    ComplexMatrix super = kron(h, id);
    super -= kron(id, transpose(h));

    if (!gen.jump_ops().empty()) {
        const double gamma = gen.prefactor(t);
        ComplexMatrix dissipator(n * n, n * n);
        for (const auto& a : gen.jump_ops()) dissipator += kron(a, conjugate(a));
        const ComplexMatrix& gram = gen.jump_gram();
        dissipator -= 0.5 * kron(gram, id);
        dissipator -= 0.5 * kron(id, transpose(gram));
        dissipator *= Complex(0.0, gamma);
        super += dissipator;
    }
    return {std::move(super), t};
}

ComplexMatrix skew_part(const SuperOperator& h) { return h.matrix - adjoint(h.matrix); }

double skew_spectral_norm(const LindbladGenerator& gen, double t) {
    if (gen.jump_ops().empty()) return 0.0;
    const ComplexMatrix skew = skew_part(build_superoperator(gen, t));
    const auto eig = hermitian_eigenvalues(Complex(0.0, 1.0) * skew);
    return std::max(std::abs(eig.front()), std::abs(eig.back()));
}

double unit_skew_spectral_norm(const LindbladGenerator& gen) {
    return skew_spectral_norm(gen.without_hamiltonian().with_prefactor(TimeFunction::constant(1.0)), 0.0);
}

DensityMatrix steady_state(const LindbladGenerator& gen, double t) {
    const std::size_t n = gen.dim();
    // d|rho>/dt = -i H |rho>; replace the first equation by the trace condition.
    ComplexMatrix system = Complex(0.0, -1.0) * build_superoperator(gen, t).matrix;
    for (std::size_t j = 0; j < n * n; ++j) system(0, j) = 0.0;
    for (std::size_t i = 0; i < n; ++i) system(0, i * n + i) = 1.0;
    ComplexMatrix rhs(n * n, 1);
    rhs(0, 0) = 1.0;
    const ComplexMatrix solution = lu_solve(std::move(system), std::move(rhs));
    ComplexMatrix rho = devectorize(LiouvilleVector({solution.entries().begin(), solution.entries().end()}));
    const ComplexMatrix adj = adjoint(rho);
    rho += adj;
    rho *= 0.5;
    return DensityMatrix(std::move(rho));
}

}  // namespace qsl
