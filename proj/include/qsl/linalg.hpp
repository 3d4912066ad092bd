// linalg.hpp: dense complex matrices and the handful of kernels the solver needs

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qsl {

using Complex = std::complex<double>;

inline constexpr double kHermitianTolerance = 1e-10;

// Dense row-major complex matrix. Value type; copies are deep.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    // Throws DimensionError on a length mismatch and std::invalid_argument on NaN/Inf.
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const Complex> values);
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool is_square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<Complex> entries() noexcept { return data_; }
    std::span<const Complex> entries() const noexcept { return data_; }

    bool is_finite() const noexcept;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scale) noexcept;

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, Complex s);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

// Zero entries of either operand are skipped, so products with Pauli strings,
// projectors and diagonal jump operators cost far less than N^3.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
std::vector<Complex> matvec(const ComplexMatrix& a, std::span<const Complex> v);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix transpose(const ComplexMatrix& a);
ComplexMatrix conjugate(const ComplexMatrix& a);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

Complex trace(const ComplexMatrix& a);
double hs_norm(const ComplexMatrix& a);
double max_abs(const ComplexMatrix& a);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// max_ij |a_ij - conj(a_ji)|
double hermiticity_defect(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double tol = kHermitianTolerance);

// Cyclic complex Jacobi. Ascending order. Throws NotHermitian beyond kHermitianTolerance.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);

// Largest singular value, sqrt of the top eigenvalue of a^dagger a.
double spectral_norm(const ComplexMatrix& a);

// Scaling and squaring with a Pade approximant of degree 3 to 13 chosen from the 1-norm.
ComplexMatrix expm(const ComplexMatrix& a);

// Solves a x = b (b may have several columns) by LU with partial pivoting.
// Throws std::domain_error on a numerically singular system.
ComplexMatrix lu_solve(ComplexMatrix a, ComplexMatrix b);

// Cholesky test for a + shift*I being positive definite; a must be Hermitian.
bool cholesky_succeeds(const ComplexMatrix& a, double shift);

}  // namespace qsl
