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

#ifndef QKDQCL_QMAT_H
#define QKDQCL_QMAT_H

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qkdqcl {

using Complex = std::complex<double>;

/// Largest supported matrix dimension (4 qubits).
inline constexpr std::size_t kMaxDim = 16;

/// Tolerances shared by the validity checks on density matrices.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

bool is_power_of_two(std::size_t n);

/// Dense square complex matrix, row-major, dimension a power of two up to 16.
///
/// Qubit ordering convention: in a tensor product a ⊗ b the factor `a` owns the
/// more significant index bits, so qubit 0 is the most significant bit of a
/// basis index.
class ComplexMatrix {
   public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const Complex> diag);
    static ComplexMatrix outer(std::span<const Complex> ket, std::span<const Complex> bra);

    std::size_t dim() const { return dim_; }
    std::size_t n_qubits() const;

    Complex &operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
    const Complex &operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }

    std::span<const Complex> entries() const { return data_; }
    std::span<Complex> entries() { return data_; }

    ComplexMatrix adjoint() const;
    Complex trace() const;

    /// Largest entrywise |a - b|.
    double max_abs_diff(const ComplexMatrix &other) const;
    bool is_hermitian(double tol) const;

    ComplexMatrix &operator+=(const ComplexMatrix &rhs);
    ComplexMatrix &operator-=(const ComplexMatrix &rhs);
    ComplexMatrix &operator*=(Complex scale);

    friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix &rhs) { return lhs += rhs; }
    friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix &rhs) { return lhs -= rhs; }
    friend ComplexMatrix operator*(ComplexMatrix lhs, Complex scale) { return lhs *= scale; }
    friend ComplexMatrix operator*(Complex scale, ComplexMatrix rhs) { return rhs *= scale; }
    friend ComplexMatrix operator*(const ComplexMatrix &lhs, const ComplexMatrix &rhs);

    bool operator==(const ComplexMatrix &other) const = default;

   private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

/// Normalized state vector.
class PureState {
   public:
    /// Throws std::invalid_argument unless the norm is 1 within 1e-12.
    explicit PureState(std::vector<Complex> amplitudes);

    static PureState basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return amps_.size(); }
    std::span<const Complex> amplitudes() const { return amps_; }
    Complex operator[](std::size_t i) const { return amps_[i]; }

    ComplexMatrix projector() const;

   private:
    std::vector<Complex> amps_;
};

PureState tensor_product(const PureState &a, const PureState &b);

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
   public:
    /// Validates all three invariants; throws std::invalid_argument on violation.
    explicit DensityMatrix(ComplexMatrix m);

    /// Skips validation. For results of trace-preserving maps on valid states.
    static DensityMatrix assume_valid(ComplexMatrix m);

    static DensityMatrix from_pure(const PureState &psi);
    static DensityMatrix maximally_mixed(std::size_t dim);

    const ComplexMatrix &matrix() const { return m_; }
    std::size_t dim() const { return m_.dim(); }
    std::size_t n_qubits() const { return m_.n_qubits(); }
    Complex operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

    /// Tr(ρ²).
    double purity() const;

   private:
    struct Unchecked {};
    DensityMatrix(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}
    ComplexMatrix m_;
};

ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b);
DensityMatrix tensor_product(const DensityMatrix &a, const DensityMatrix &b);

struct EigenDecomposition {
    std::vector<double> values;  ///< descending
    ComplexMatrix vectors;       ///< column k is the eigenvector of values[k]
};

/// Cyclic complex Jacobi. Throws std::invalid_argument for non-Hermitian input
/// (tolerance 1e-10).
EigenDecomposition hermitian_eigen(const ComplexMatrix &m);

/// Square root of a PSD matrix. Eigenvalues in [-1e-10, 0) are clamped to zero;
/// anything lower throws std::domain_error.
ComplexMatrix psd_sqrt(const ComplexMatrix &m);
ComplexMatrix psd_sqrt(const DensityMatrix &m);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const ComplexMatrix &m);

/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))². Uses the pure-state fast
/// path when either argument has unit purity.
double fidelity(const DensityMatrix &rho_a, const DensityMatrix &rho_b);

/// Always takes the square-root path, for cross-checking the fast path.
double fidelity_general(const DensityMatrix &rho_a, const DensityMatrix &rho_b);

/// <psi|rho|psi>.
double fidelity_pure(const PureState &psi, const DensityMatrix &rho);

}  // namespace qkdqcl

#endif
