#ifndef QBSC_LINALG_HPP
#define QBSC_LINALG_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qbsc/errors.hpp"

namespace qbsc {

using complex_t = std::complex<double>;

/// Default cap on tensor-product dimensions (D^N).
inline constexpr std::size_t kDimCap = std::size_t{1} << 20;

/// A dense complex vector; unit norm is a property of use, not of the type.
struct StateVector {
    std::vector<complex_t> amps;

    StateVector() = default;
    explicit StateVector(std::vector<complex_t> a) : amps(std::move(a)) {}

    std::size_t dim() const { return amps.size(); }
    double norm_sq() const;
    double norm() const;
    bool is_normalized(double tol = 1e-12) const;
    void normalize();

    /// Computational basis vector e_index in the given dimension.
    static StateVector basis(std::size_t dim, std::size_t index);
};

/// <a|b> with conjugation on the left argument.
complex_t inner_product(const StateVector& a, const StateVector& b);

/// Dense square complex matrix, row major.
struct DenseOperator {
    std::size_t dim = 0;
    std::vector<complex_t> entries; // dim*dim, row major
    bool hermitian = false;

    DenseOperator() = default;
    DenseOperator(std::size_t n, bool hermitian_flag = false)
        : dim(n), entries(n * n, complex_t{0.0, 0.0}), hermitian(hermitian_flag) {}

    complex_t& at(std::size_t r, std::size_t c) { return entries[r * dim + c]; }
    const complex_t& at(std::size_t r, std::size_t c) const { return entries[r * dim + c]; }

    static DenseOperator identity(std::size_t n);
    /// |v><v| for a given vector.
    static DenseOperator outer(const StateVector& v);

    DenseOperator& operator+=(const DenseOperator& other);
    DenseOperator& operator*=(double scalar);

    /// Checks the Hermitian invariant entrywise.
    bool is_hermitian(double tol = 1e-12) const;
    /// Max |(A^H A - I)_{jk}|; zero for unitary matrices.
    double unitarity_defect() const;
};

StateVector apply(const DenseOperator& op, const StateVector& v);

/// Kronecker product of states in left-to-right order.
StateVector tensor_state(std::span<const StateVector> parts, std::size_t cap = kDimCap);
/// Kronecker product of operators; result is Hermitian iff all parts are.
DenseOperator tensor_operator(std::span<const DenseOperator> parts, std::size_t cap = kDimCap);

/// <state|op|state> as a real number. The operator must be flagged Hermitian
/// and the state unit norm; imaginary residue above imag_tol is an error.
double expectation(const StateVector& state, const DenseOperator& op,
                   double imag_tol = 1e-10);

struct LambdaMaxResult {
    double value = 0.0;
    StateVector witness;
    std::size_t iterations = 0;
};

/// Largest eigenvalue of a Hermitian PSD operator with a unit witness vector.
///
/// Power iteration from a seeded random start; for dim <= 512 the result is
/// cross-checked against a full Jacobi diagonalization, which also serves as
/// the fallback when the iteration stalls. Throws convergence_error (with the
/// best iterate attached) if neither route settles.
LambdaMaxResult lambda_max(const DenseOperator& op, double tol = 1e-10,
                           std::size_t max_iters = 100000);

struct JacobiResult {
    std::vector<double> values;  // ascending
    DenseOperator vectors;       // column k is the eigenvector of values[k]
};

/// Cyclic complex Jacobi diagonalization of a Hermitian matrix.
JacobiResult jacobi_diagonalize(const DenseOperator& op, double tol = 1e-13,
                                std::size_t max_sweeps = 64);

/// Eigenvalues only, ascending.
std::vector<double> jacobi_eigenvalues(const DenseOperator& op);

} // namespace qbsc

#endif
