#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>

namespace qwalk {

using cplx = std::complex<double>;

/// Dense complex matrix of small fixed dimension (2 or 4 in the public API;
/// intermediate blocks of dimension 1 or 3 appear internally).
class CMatrix {
public:
    CMatrix() : dim_(0) { entries_.fill(cplx{}); }

    explicit CMatrix(int dim) : dim_(dim) {
        check_dim(dim);
        entries_.fill(cplx{});
    }

    static CMatrix identity(int dim) {
        CMatrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    int dim() const { return dim_; }

    cplx& operator()(int i, int j) { return entries_[static_cast<size_t>(i) * 4 + j]; }
    const cplx& operator()(int i, int j) const { return entries_[static_cast<size_t>(i) * 4 + j]; }

    CMatrix adjoint() const {
        CMatrix r(dim_);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) r(i, j) = std::conj((*this)(j, i));
        return r;
    }

    cplx trace() const {
        cplx t{};
        for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    /// max entry magnitude, the matrix max-norm used by all tolerance checks
    double max_abs() const {
        double m = 0.0;
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) m = std::max(m, std::abs((*this)(i, j)));
        return m;
    }

    bool finite() const {
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) {
                const cplx& z = (*this)(i, j);
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
            }
        return true;
    }

    CMatrix& operator+=(const CMatrix& o) {
        for (size_t t = 0; t < entries_.size(); ++t) entries_[t] += o.entries_[t];
        return *this;
    }
    CMatrix& operator-=(const CMatrix& o) {
        for (size_t t = 0; t < entries_.size(); ++t) entries_[t] -= o.entries_[t];
        return *this;
    }
    CMatrix& operator*=(cplx s) {
        for (auto& e : entries_) e *= s;
        return *this;
    }

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }

    friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
        CMatrix r(a.dim_);
        for (int i = 0; i < a.dim_; ++i)
            for (int k = 0; k < a.dim_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx{}) continue;
                for (int j = 0; j < a.dim_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

private:
    static void check_dim(int dim) {
        if (dim < 1 || dim > 4) throw std::invalid_argument("CMatrix: dimension must be in 1..4");
    }

    int dim_;
    std::array<cplx, 16> entries_;
};

/// Complex column vector of the same small dimensions.
class CVector {
public:
    CVector() : dim_(0) { entries_.fill(cplx{}); }
    explicit CVector(int dim) : dim_(dim) { entries_.fill(cplx{}); }

    int dim() const { return dim_; }
    cplx& operator[](int i) { return entries_[static_cast<size_t>(i)]; }
    const cplx& operator[](int i) const { return entries_[static_cast<size_t>(i)]; }

    double norm() const {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) s += std::norm(entries_[static_cast<size_t>(i)]);
        return std::sqrt(s);
    }

    CVector& operator*=(cplx s) {
        for (auto& e : entries_) e *= s;
        return *this;
    }

private:
    int dim_;
    std::array<cplx, 4> entries_;
};

inline CVector operator*(const CMatrix& m, const CVector& v) {
    CVector r(m.dim());
    for (int i = 0; i < m.dim(); ++i) {
        cplx s{};
        for (int j = 0; j < m.dim(); ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

inline cplx inner(const CVector& a, const CVector& b) {
    cplx s{};
    for (int i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

/// |a><b|
inline CMatrix outer(const CVector& a, const CVector& b) {
    CMatrix m(a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) m(i, j) = a[i] * std::conj(b[j]);
    return m;
}

inline double hermiticity_defect(const CMatrix& m) { return (m - m.adjoint()).max_abs(); }

inline double unitarity_defect(const CMatrix& m) {
    return (m.adjoint() * m - CMatrix::identity(m.dim())).max_abs();
}

}  // namespace qwalk
