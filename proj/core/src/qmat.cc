// Copyright 2026 The qkdqcl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qkdqcl/qmat.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qkdqcl {

namespace {

constexpr double kEigenInputHermitianTol = 1e-10;
constexpr double kJacobiOffDiagTol = 1e-13;
constexpr int kJacobiMaxSweeps = 100;

void check_dim(std::size_t dim) {
    if (dim == 0 || dim > kMaxDim || !is_power_of_two(dim)) {
        throw std::invalid_argument("matrix dimension must be a power of two in [1, 16], got " + std::to_string(dim));
    }
}

double off_diagonal_frobenius(const ComplexMatrix &a) {
    double s = 0;
    for (std::size_t r = 0; r < a.dim(); ++r) {
        for (std::size_t c = 0; c < a.dim(); ++c) {
            if (r != c) {
                s += std::norm(a(r, c));
            }
        }
    }
    return std::sqrt(s);
}

}  // namespace

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    check_dim(dim);
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries) : dim_(dim), data_(std::move(entries)) {
    check_dim(dim);
    if (data_.size() != dim * dim) {
        throw std::invalid_argument("entry count must equal dim^2");
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) : dim_(rows.size()) {
    check_dim(dim_);
    data_.reserve(dim_ * dim_);
    for (const auto &row : rows) {
        if (row.size() != dim_) {
            throw std::invalid_argument("matrix literal must be square");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        m(k, k) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
    ComplexMatrix m(diag.size());
    for (std::size_t k = 0; k < diag.size(); ++k) {
        m(k, k) = diag[k];
    }
    return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> ket, std::span<const Complex> bra) {
    if (ket.size() != bra.size()) {
        throw std::invalid_argument("outer product needs equal lengths");
    }
    ComplexMatrix m(ket.size());
    for (std::size_t r = 0; r < ket.size(); ++r) {
        for (std::size_t c = 0; c < bra.size(); ++c) {
            m(r, c) = ket[r] * std::conj(bra[c]);
        }
    }
    return m;
}

std::size_t ComplexMatrix::n_qubits() const {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < dim_) {
        ++n;
    }
    return n;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0;
    for (std::size_t k = 0; k < dim_; ++k) {
        t += (*this)(k, k);
    }
    return t;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix &other) const {
    if (other.dim_ != dim_) {
        throw std::invalid_argument("dimension mismatch");
    }
    double m = 0;
    for (std::size_t k = 0; k < data_.size(); ++k) {
        m = std::max(m, std::abs(data_[k] - other.data_[k]));
    }
    return m;
}

bool ComplexMatrix::is_hermitian(double tol) const {
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = r; c < dim_; ++c) {
            if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) {
                return false;
            }
        }
    }
    return true;
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &rhs) {
    if (rhs.dim_ != dim_) {
        throw std::invalid_argument("dimension mismatch");
    }
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] += rhs.data_[k];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &rhs) {
    if (rhs.dim_ != dim_) {
        throw std::invalid_argument("dimension mismatch");
    }
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] -= rhs.data_[k];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(Complex scale) {
    for (auto &z : data_) {
        z *= scale;
    }
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix &lhs, const ComplexMatrix &rhs) {
    if (lhs.dim() != rhs.dim()) {
        throw std::invalid_argument("dimension mismatch");
    }
    const std::size_t d = lhs.dim();
    ComplexMatrix out(d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t k = 0; k < d; ++k) {
            const Complex a = lhs(r, k);
            if (a == Complex{}) {
                continue;
            }
            for (std::size_t c = 0; c < d; ++c) {
                out(r, c) += a * rhs(k, c);
            }
        }
    }
    return out;
}

PureState::PureState(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
    check_dim(amps_.size());
    double n2 = 0;
    for (const auto &a : amps_) {
        n2 += std::norm(a);
    }
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-12) {
        throw std::invalid_argument("state vector must have unit norm");
    }
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw std::out_of_range("basis index out of range");
    }
    std::vector<Complex> v(dim);
    v[index] = 1.0;
    return PureState(std::move(v));
}

ComplexMatrix PureState::projector() const {
    return ComplexMatrix::outer(amps_, amps_);
}

PureState tensor_product(const PureState &a, const PureState &b) {
    if (a.dim() * b.dim() > kMaxDim) {
        throw std::invalid_argument("tensor product exceeds 4 qubits");
    }
    std::vector<Complex> v;
    v.reserve(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) {
            v.push_back(a[i] * b[j]);
        }
    }
    return PureState(std::move(v));
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
    if (!m_.is_hermitian(kHermitianTol)) {
        throw std::invalid_argument("density matrix must be Hermitian");
    }
    if (std::abs(m_.trace() - Complex{1.0}) > kTraceTol) {
        throw std::invalid_argument("density matrix must have unit trace");
    }
    const auto eig = hermitian_eigen(m_);
    if (eig.values.back() < -kPsdTol) {
        throw std::invalid_argument("density matrix must be positive semidefinite");
    }
}

DensityMatrix DensityMatrix::assume_valid(ComplexMatrix m) {
    return DensityMatrix(std::move(m), Unchecked{});
}

DensityMatrix DensityMatrix::from_pure(const PureState &psi) {
    return DensityMatrix(psi.projector(), Unchecked{});
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    return DensityMatrix(ComplexMatrix::identity(dim) * Complex(1.0 / static_cast<double>(dim)), Unchecked{});
}

double DensityMatrix::purity() const {
    // Tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ.
    double s = 0;
    for (const auto &z : m_.entries()) {
        s += std::norm(z);
    }
    return s;
}

ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.dim() * b.dim() > kMaxDim) {
        throw std::invalid_argument("tensor product exceeds 4 qubits");
    }
    const std::size_t db = b.dim();
    ComplexMatrix out(a.dim() * db);
    for (std::size_t ar = 0; ar < a.dim(); ++ar) {
        for (std::size_t ac = 0; ac < a.dim(); ++ac) {
            const Complex s = a(ar, ac);
            for (std::size_t br = 0; br < db; ++br) {
                for (std::size_t bc = 0; bc < db; ++bc) {
                    out(ar * db + br, ac * db + bc) = s * b(br, bc);
                }
            }
        }
    }
    return out;
}

DensityMatrix tensor_product(const DensityMatrix &a, const DensityMatrix &b) {
    return DensityMatrix::assume_valid(tensor_product(a.matrix(), b.matrix()));
}

EigenDecomposition hermitian_eigen(const ComplexMatrix &m) {
    if (!m.is_hermitian(kEigenInputHermitianTol)) {
        throw std::invalid_argument("hermitian_eigen: input is not Hermitian");
    }
    const std::size_t n = m.dim();
    // Symmetrize so the rotations act on an exactly Hermitian matrix.
    ComplexMatrix a(n);
    for (std::size_t r = 0; r < n; ++r) {
        a(r, r) = m(r, r).real();
        for (std::size_t c = r + 1; c < n; ++c) {
            a(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
            a(c, r) = std::conj(a(r, c));
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    double frob = 0;
    for (const auto &z : a.entries()) {
        frob += std::norm(z);
    }
    const double tol = kJacobiOffDiagTol * std::max(1.0, std::sqrt(frob));

    for (int sweep = 0; sweep < kJacobiMaxSweeps && off_diagonal_frobenius(a) >= tol; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag < 1e-300) {
                    continue;
                }
                // G = D·R where D = diag(1, e^{-iφ}) on (p, q) makes a_pq real
                // and R is a real Jacobi rotation zeroing it. A <- G† A G.
                const Complex phase = a(p, q) / mag;  // e^{iφ}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex gqp = -s * std::conj(phase);
                const Complex gqq = c * std::conj(phase);

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = akp * c + akq * gqp;
                    a(k, q) = akp * s + akq * gqq;
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = vkp * c + vkq * gqp;
                    v(k, q) = vkp * s + vkq * gqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = c * apk + std::conj(gqp) * aqk;
                    a(q, k) = s * apk + std::conj(gqq) * aqk;
                }
                a(p, q) = 0;
                a(q, p) = 0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
    EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) {
            out.vectors(r, k) = v(r, order[k]);
        }
    }
    return out;
}

ComplexMatrix psd_sqrt(const ComplexMatrix &m) {
    const auto eig = hermitian_eigen(m);
    const std::size_t n = m.dim();
    ComplexMatrix out(n);
    for (std::size_t k = 0; k < n; ++k) {
        double lam = eig.values[k];
        if (lam < -kPsdTol) {
            throw std::domain_error("psd_sqrt: eigenvalue " + std::to_string(lam) + " below tolerance");
        }
        const double root = std::sqrt(std::max(lam, 0.0));
        if (root == 0) {
            continue;
        }
        for (std::size_t r = 0; r < n; ++r) {
            const Complex vr = eig.vectors(r, k) * root;
            for (std::size_t c = 0; c < n; ++c) {
                out(r, c) += vr * std::conj(eig.vectors(c, k));
            }
        }
    }
    return out;
}

ComplexMatrix psd_sqrt(const DensityMatrix &m) {
    return psd_sqrt(m.matrix());
}

double trace_norm(const ComplexMatrix &m) {
    const auto eig = hermitian_eigen(m);
    double s = 0;
    for (double lam : eig.values) {
        s += std::abs(lam);
    }
    return s;
}

namespace {

void check_same_dim(const DensityMatrix &a, const DensityMatrix &b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("fidelity: dimension mismatch");
    }
}

double overlap(const DensityMatrix &pure, const DensityMatrix &rho) {
    // Tr(|ψ⟩⟨ψ| ρ) = ⟨ψ|ρ|ψ⟩.
    double s = 0;
    for (std::size_t r = 0; r < rho.dim(); ++r) {
        for (std::size_t c = 0; c < rho.dim(); ++c) {
            s += (pure(r, c) * rho(c, r)).real();
        }
    }
    return std::clamp(s, 0.0, 1.0);
}

}  // namespace

double fidelity_general(const DensityMatrix &rho_a, const DensityMatrix &rho_b) {
    check_same_dim(rho_a, rho_b);
    const ComplexMatrix root_a = psd_sqrt(rho_a);
    ComplexMatrix inner = root_a * rho_b.matrix() * root_a;
    // Remove rounding-level anti-Hermitian parts before the second root.
    inner = (inner + inner.adjoint()) * Complex(0.5);
    const auto eig = hermitian_eigen(inner);
    // Rounding noise on a zero eigenvalue would otherwise enter as its square root.
    const double floor = 1e-14 * std::max(1.0, eig.values.front());
    double tr = 0;
    for (double lam : eig.values) {
        if (lam < -kPsdTol) {
            throw std::domain_error("fidelity: intermediate matrix not PSD");
        }
        if (lam > floor) {
            tr += std::sqrt(lam);
        }
    }
    return std::clamp(tr * tr, 0.0, 1.0);
}

double fidelity(const DensityMatrix &rho_a, const DensityMatrix &rho_b) {
    check_same_dim(rho_a, rho_b);
    if (std::abs(rho_a.purity() - 1.0) < 1e-12) {
        return overlap(rho_a, rho_b);
    }
    if (std::abs(rho_b.purity() - 1.0) < 1e-12) {
        return overlap(rho_b, rho_a);
    }
    return fidelity_general(rho_a, rho_b);
}

double fidelity_pure(const PureState &psi, const DensityMatrix &rho) {
    if (psi.dim() != rho.dim()) {
        throw std::invalid_argument("fidelity_pure: dimension mismatch");
    }
    Complex s = 0;
    for (std::size_t r = 0; r < rho.dim(); ++r) {
        for (std::size_t c = 0; c < rho.dim(); ++c) {
            s += std::conj(psi[r]) * rho(r, c) * psi[c];
        }
    }
    return std::clamp(s.real(), 0.0, 1.0);
}

}  // namespace qkdqcl
