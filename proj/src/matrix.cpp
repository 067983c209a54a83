#include "dualcorr/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dualcorr/kernels.hpp"

namespace dualcorr {

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), data_(std::move(entries)) {
    if (data_.size() != dim_ * dim_)
        throw ValidationError("ComplexMatrix: expected " + std::to_string(dim_ * dim_) +
                              " entries, got " + std::to_string(data_.size()));
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : dim_(rows.size()) {
    data_.reserve(dim_ * dim_);
    for (const auto& r : rows) {
        if (r.size() != dim_) throw ValidationError("ComplexMatrix: rows must form a square");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<double> d) {
    return diagonal(std::span<const double>(d.begin(), d.size()));
}

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> v) {
    ComplexMatrix m(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
    return m;
}

cplx ComplexMatrix::trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

double ComplexMatrix::hermiticity_deviation() const {
    double dev = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i; j < dim_; ++j)
            dev = std::max(dev, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return dev;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (o.dim_ != dim_) throw ValidationError("ComplexMatrix +=: dimension mismatch");
    kernels::axpy(data_.data(), o.data_.data(), data_.size(), 1.0);
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (o.dim_ != dim_) throw ValidationError("ComplexMatrix -=: dimension mismatch");
    kernels::axpy(data_.data(), o.data_.data(), data_.size(), -1.0);
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& x : data_) x *= s;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw ValidationError("matrix product: dimension mismatch");
    const std::size_t n = a.dim();
    ComplexMatrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx* ci = c.row(i);
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = a(i, k);
            if (aik != 0.0) kernels::axpy(ci, b.row(k), n, aik);
        }
    }
    return c;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw ValidationError("max_abs_diff: dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t max_dim) {
    const std::size_t da = a.dim(), db = b.dim();
    if (da != 0 && db > max_dim / da)
        throw SizeLimitError("kron: result dimension " + std::to_string(da) + "*" +
                             std::to_string(db) + " exceeds limit " + std::to_string(max_dim));
    const std::size_t n = da * db;
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j) {
            const cplx aij = a(i, j);
            if (aij == 0.0) continue;
            for (std::size_t k = 0; k < db; ++k)
                kernels::axpy(out.row(i * db + k) + j * db, b.row(k), db, aij);
        }
    return out;
}

cplx trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw ValidationError("trace_of_product: dimension mismatch");
    const std::size_t n = a.dim();
    cplx t = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) t += a(i, j) * b(j, i);
    return t;
}

std::vector<cplx> matvec(const ComplexMatrix& a, std::span<const cplx> v) {
    if (v.size() != a.dim()) throw ValidationError("matvec: dimension mismatch");
    std::vector<cplx> out(a.dim());
    std::vector<cplx> conj_row(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        // dotc conjugates its first argument
        for (std::size_t j = 0; j < a.dim(); ++j) conj_row[j] = std::conj(a(i, j));
        out[i] = kernels::dotc(conj_row.data(), v.data(), v.size());
    }
    return out;
}

std::vector<cplx> SpectralDecomposition::vector(std::size_t i) const {
    std::vector<cplx> v(values.size());
    for (std::size_t r = 0; r < values.size(); ++r) v[r] = vectors(r, i);
    return v;
}

}  // namespace dualcorr
