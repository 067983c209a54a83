#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "dualcorr/errors.hpp"

namespace dualcorr {

using cplx = std::complex<double>;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
    ComplexMatrix(std::size_t dim, std::vector<cplx> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const double> d);
    static ComplexMatrix diagonal(std::initializer_list<double> d);
    /// |v><v|
    static ComplexMatrix outer(std::span<const cplx> v);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return data_.size(); }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

    cplx* row(std::size_t i) { return data_.data() + i * dim_; }
    const cplx* row(std::size_t i) const { return data_.data() + i * dim_; }

    std::span<cplx> entries() { return data_; }
    std::span<const cplx> entries() const { return data_; }

    cplx trace() const;
    ComplexMatrix adjoint() const;

    /// max_ij |A_ij - conj(A_ji)|
    double hermiticity_deviation() const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s);

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

/// max_ij |A_ij - B_ij|; dimensions must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product; `a` owns the most-significant index block.
/// Throws SizeLimitError when a.dim()*b.dim() exceeds `max_dim`.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   std::size_t max_dim = default_tolerances().max_dim);

/// tr(A B) without forming the product.
cplx trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// A v
std::vector<cplx> matvec(const ComplexMatrix& a, std::span<const cplx> v);

/// Eigen-decomposition of a Hermitian operator.
/// Eigenvalues are sorted in descending order; column i of `vectors` is the
/// unit eigenvector for `values[i]`.
struct SpectralDecomposition {
    std::vector<double> values;
    ComplexMatrix vectors;

    std::vector<cplx> vector(std::size_t i) const;

    /// sum_i f(lambda_i) v_i v_i^dagger
    template <class F>
    ComplexMatrix reconstruct(F&& f) const {
        const std::size_t n = values.size();
        ComplexMatrix out(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double w = f(values[k]);
            if (w == 0.0) continue;
            for (std::size_t i = 0; i < n; ++i) {
                const cplx vi = w * vectors(i, k);
                for (std::size_t j = 0; j < n; ++j) out(i, j) += vi * std::conj(vectors(j, k));
            }
        }
        return out;
    }
    ComplexMatrix reconstruct() const {
        return reconstruct([](double x) { return x; });
    }
};

struct EigOptions {
    double hermiticity_tol = 1e-10;
    int max_sweeps = 60;
};

/// Cyclic complex Jacobi. Throws ValidationError on non-Hermitian input.
SpectralDecomposition eig_hermitian(const ComplexMatrix& a, const EigOptions& opts = {});

}  // namespace dualcorr
