// linalg.cpp: dense complex kernels

#include "qsl/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "qsl/errors.hpp"

namespace qsl {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) +
                             "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                             "x" + std::to_string(b.cols()));
    }
}

void require_square(const ComplexMatrix& a, const char* what) {
    if (!a.is_square()) {
        throw DimensionError(std::string(what) + ": matrix is not square");
    }
}

std::size_t count_nonzeros(const ComplexMatrix& a) {
    return static_cast<std::size_t>(std::count_if(a.entries().begin(), a.entries().end(),
                                                  [](Complex z) { return z != Complex{}; }));
}

// i-k-j product skipping zeros of the left operand; when the right operand is
// sparse its rows are compressed first so zeros on both sides are skipped.
ComplexMatrix sparse_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t n = a.rows();
    const std::size_t inner = a.cols();
    const std::size_t m = b.cols();
    ComplexMatrix c(n, m);
    if (2 * count_nonzeros(b) < b.size()) {
        std::vector<std::size_t> start(inner + 1, 0);
        std::vector<std::pair<std::size_t, Complex>> nz;
        for (std::size_t k = 0; k < inner; ++k) {
            for (std::size_t j = 0; j < m; ++j)
                if (b(k, j) != Complex{}) nz.emplace_back(j, b(k, j));
            start[k + 1] = nz.size();
        }
        for (std::size_t i = 0; i < n; ++i) {
            Complex* crow = &c(i, 0);
            for (std::size_t k = 0; k < inner; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex{}) continue;
                for (std::size_t e = start[k]; e < start[k + 1]; ++e) crow[nz[e].first] += aik * nz[e].second;
            }
        }
        return c;
    }
    for (std::size_t i = 0; i < n; ++i) {
        Complex* crow = &c(i, 0);
        for (std::size_t k = 0; k < inner; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            const Complex* brow = &b(k, 0);
            for (std::size_t j = 0; j < m; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

double one_norm(const ComplexMatrix& a) {
    double best = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) col += std::abs(a(i, j));
        best = std::max(best, col);
    }
    return best;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("ComplexMatrix: " + std::to_string(data_.size()) +
                             " entries for shape " + std::to_string(rows_) + "x" +
                             std::to_string(cols_));
    }
    if (!is_finite()) throw std::invalid_argument("ComplexMatrix: non-finite entry");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<Complex> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw DimensionError("from_rows: ragged rows");
        data.insert(data.end(), row.begin(), row.end());
    }
    return ComplexMatrix(r, c, std::move(data));
}

bool ComplexMatrix::is_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](Complex z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "operator+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "operator-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) noexcept {
    for (auto& z : data_) z *= scale;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: inner dimensions " + std::to_string(a.cols()) + " and " +
                             std::to_string(b.rows()) + " differ");
    }
    return sparse_product(a, b);
}

std::vector<Complex> matvec(const ComplexMatrix& a, std::span<const Complex> v) {
    if (a.cols() != v.size()) throw DimensionError("matvec: length mismatch");
    std::vector<Complex> out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Complex acc{};
        const Complex* row = &a(i, 0);
        for (std::size_t j = 0; j < a.cols(); ++j) acc += row[j] * v[j];
        out[i] = acc;
    }
    return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t p = b.rows();
    const std::size_t q = b.cols();
    ComplexMatrix out(a.rows() * p, a.cols() * q);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{}) continue;
            for (std::size_t k = 0; k < p; ++k) {
                for (std::size_t l = 0; l < q; ++l) out(i * p + k, j * q + l) = aij * b(k, l);
            }
        }
    }
    return out;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
    return out;
}

ComplexMatrix transpose(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

ComplexMatrix conjugate(const ComplexMatrix& a) {
    ComplexMatrix out = a;
    for (auto& z : out.entries()) z = std::conj(z);
    return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return matmul(a, b) - matmul(b, a);
}

Complex trace(const ComplexMatrix& a) {
    require_square(a, "trace");
    Complex t{};
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

double hs_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (Complex z : a.entries()) s += std::norm(z);
    return std::sqrt(s);
}

double max_abs(const ComplexMatrix& a) {
    double m = 0.0;
    for (Complex z : a.entries()) m = std::max(m, std::abs(z));
    return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    return m;
}

double hermiticity_defect(const ComplexMatrix& a) {
    require_square(a, "hermiticity_defect");
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i; j < a.cols(); ++j)
            m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
    return m;
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
    return a.is_square() && hermiticity_defect(a) <= tol;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& input) {
    require_square(input, "hermitian_eigenvalues");
    const double defect = hermiticity_defect(input);
    if (defect > kHermitianTolerance) {
        throw NotHermitian("hermitian_eigenvalues: max |a - a^dagger| = " + std::to_string(defect));
    }
    const std::size_t n = input.rows();
    ComplexMatrix a = input;
    for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();

    auto off_norm2 = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += std::norm(a(p, q));
        return s;
    };
    const double scale2 = std::max(std::norm(hs_norm(a)), 1e-300);

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_norm2() <= 1e-32 * scale2) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double b = std::abs(apq);
                if (b == 0.0) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // Past the first sweeps, entries below the diagonal's rounding level are dropped.
                if (sweep > 3 && std::abs(app) + 100.0 * b == std::abs(app) &&
                    std::abs(aqq) + 100.0 * b == std::abs(aqq)) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                const Complex phase = apq / b;  // e^{i phi}
                const double tau = (aqq - app) / (2.0 * b);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(tau * tau + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // U = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on the (p, q) plane; a <- U^dagger a U.
                const Complex uqp = -s * std::conj(phase);
                const Complex uqq = c * std::conj(phase);
                for (std::size_t r = 0; r < n; ++r) {
                    const Complex arp = a(r, p);
                    const Complex arq = a(r, q);
                    a(r, p) = c * arp + uqp * arq;
                    a(r, q) = s * arp + uqq * arq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const Complex apr = a(p, r);
                    const Complex aqr = a(q, r);
                    a(p, r) = c * apr + std::conj(uqp) * aqr;
                    a(q, r) = s * apr + std::conj(uqq) * aqr;
                }
                a(p, q) = a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i).real();
    std::sort(eig.begin(), eig.end());
    return eig;
}

double spectral_norm(const ComplexMatrix& a) {
    require_square(a, "spectral_norm");
    if (a.empty()) return 0.0;
    ComplexMatrix gram = matmul(adjoint(a), a);
    // Remove rounding asymmetry before the Hermitian check.
    const ComplexMatrix gram_adj = adjoint(gram);
    gram += gram_adj;
    gram *= 0.5;
    const auto eig = hermitian_eigenvalues(gram);
    return std::sqrt(std::max(eig.back(), 0.0));
}

namespace {

// Diagonal Pade approximant of degree m (odd) for exp(x), with powers[j] = x^(2j).
ComplexMatrix pade_low(const ComplexMatrix& x, const std::vector<ComplexMatrix>& powers,
                       std::span<const double> b) {
    const std::size_t n = x.rows();
    ComplexMatrix u_inner(n, n);
    ComplexMatrix v(n, n);
    for (std::size_t j = 0; j < powers.size(); ++j) {
        u_inner += b[2 * j + 1] * powers[j];
        v += b[2 * j] * powers[j];
    }
    const ComplexMatrix u = matmul(x, u_inner);
    return lu_solve(v - u, v + u);
}

}  // namespace

// Scaling and squaring with the degree chosen from the 1-norm (Higham 2005).
ComplexMatrix expm(const ComplexMatrix& a) {
    require_square(a, "expm");
    const std::size_t n = a.rows();
    if (n == 0) return a;
    static constexpr std::array<double, 4> b3 = {120.0, 60.0, 12.0, 1.0};
    static constexpr std::array<double, 6> b5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
    static constexpr std::array<double, 8> b7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                                 25200.0,    1512.0,    56.0,      1.0};
    static constexpr std::array<double, 10> b9 = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                                  30270240.0,    2162160.0,    110880.0,     3960.0,
                                                  90.0,          1.0};
    static constexpr std::array<double, 14> b = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
        129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
        1323241920.0,        40840800.0,          960960.0,           16380.0,
        182.0,               1.0};
    constexpr double kTheta3 = 1.495585217958292e-2;
    constexpr double kTheta5 = 2.539398330063230e-1;
    constexpr double kTheta7 = 9.504178996162932e-1;
    constexpr double kTheta9 = 2.097847961257068;
    constexpr double kTheta13 = 5.371920351148152;

    const double norm = one_norm(a);
    const ComplexMatrix id = ComplexMatrix::identity(n);
    if (norm <= kTheta9) {
        std::vector<ComplexMatrix> powers = {id, matmul(a, a)};
        auto extend = [&](std::size_t count) {
            while (powers.size() < count) powers.push_back(matmul(powers.back(), powers[1]));
        };
        if (norm <= kTheta3) return pade_low(a, powers, b3);
        extend(3);
        if (norm <= kTheta5) return pade_low(a, powers, b5);
        extend(4);
        if (norm <= kTheta7) return pade_low(a, powers, b7);
        extend(5);
        return pade_low(a, powers, b9);
    }

    int squarings = 0;
    if (norm > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
    ComplexMatrix x = a * Complex(std::ldexp(1.0, -squarings));

    const ComplexMatrix x2 = matmul(x, x);
    const ComplexMatrix x4 = matmul(x2, x2);
    const ComplexMatrix x6 = matmul(x4, x2);

    ComplexMatrix u_inner = matmul(x6, b[13] * x6 + b[11] * x4 + b[9] * x2);
    u_inner += b[7] * x6 + b[5] * x4 + b[3] * x2 + b[1] * id;
    const ComplexMatrix u = matmul(x, u_inner);

    ComplexMatrix v = matmul(x6, b[12] * x6 + b[10] * x4 + b[8] * x2);
    v += b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * id;

    ComplexMatrix result = lu_solve(v - u, v + u);
    for (int k = 0; k < squarings; ++k) result = matmul(result, result);
    return result;
}

ComplexMatrix lu_solve(ComplexMatrix a, ComplexMatrix b) {
    require_square(a, "lu_solve");
    if (b.rows() != a.rows()) throw DimensionError("lu_solve: right-hand side rows mismatch");
    const std::size_t n = a.rows();
    const std::size_t m = b.cols();
    const double scale = std::max(max_abs(a), 1e-300);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
        if (std::abs(a(pivot, k)) <= 1e-14 * scale) throw std::domain_error("lu_solve: singular matrix");
        if (pivot != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
            for (std::size_t j = 0; j < m; ++j) std::swap(b(k, j), b(pivot, j));
        }
        const Complex inv = 1.0 / a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = a(i, k) * inv;
            if (f == Complex{}) continue;
            a(i, k) = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            for (std::size_t j = 0; j < m; ++j) b(i, j) -= f * b(k, j);
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        const Complex inv = 1.0 / a(k, k);
        for (std::size_t j = 0; j < m; ++j) {
            Complex acc = b(k, j);
            for (std::size_t i = k + 1; i < n; ++i) acc -= a(k, i) * b(i, j);
            b(k, j) = acc * inv;
        }
    }
    return b;
}

bool cholesky_succeeds(const ComplexMatrix& a, double shift) {
    require_square(a, "cholesky_succeeds");
    const std::size_t n = a.rows();
    ComplexMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j).real() + shift;
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (!(d > 0.0)) return false;
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            Complex acc = a(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * std::conj(l(j, k));
            l(i, j) = acc / ljj;
        }
    }
    return true;
}

}  // namespace qsl
