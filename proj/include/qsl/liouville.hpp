// liouville.hpp: row-major vectorization and the Liouville-space generator
//
// Convention: |rho>_alpha = rho(row, col) with alpha = row * N + col, which gives
// vec(X rho Y) = (X kron Y^T) vec(rho). The superoperator H is defined by
// i d|rho>/dt = H |rho>, so that H - H^dagger carries all purity change.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qsl/lindblad.hpp"
#include "qsl/linalg.hpp"

namespace qsl {

class LiouvilleVector {
public:
    LiouvilleVector() = default;
    explicit LiouvilleVector(std::vector<Complex> values) : values_(std::move(values)) {}

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const Complex> values() const noexcept { return values_; }
    std::span<Complex> values() noexcept { return values_; }

private:
    std::vector<Complex> values_;
};

// <a|b>
Complex inner(const LiouvilleVector& a, const LiouvilleVector& b);

LiouvilleVector vectorize(const ComplexMatrix& rho);
// Throws DimensionError unless the length is a perfect square.
ComplexMatrix devectorize(const LiouvilleVector& v);

struct SuperOperator {
    ComplexMatrix matrix;  // N^2 x N^2
    double built_at = 0.0;
};

SuperOperator build_superoperator(const LindbladGenerator& gen, double t);

// H - H^dagger (not halved).
ComplexMatrix skew_part(const SuperOperator& h);

// max |lambda| of the Hermitian matrix i (H - H^dagger) at time t.
double skew_spectral_norm(const LindbladGenerator& gen, double t);

// Skew spectral norm with the prefactor set to one. The skew part depends
// only on the jump operators, so skew_spectral_norm(gen, t) = prefactor(t) * this.
double unit_skew_spectral_norm(const LindbladGenerator& gen);

// Unique trace-one solution of L rho = 0 at time t. Throws std::domain_error
// when the stationary state is not unique.
DensityMatrix steady_state(const LindbladGenerator& gen, double t);

}  // namespace qsl
