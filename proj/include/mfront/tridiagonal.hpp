#pragma once

#include <cstddef>
#include <vector>

namespace mfront {

// General (possibly nonsymmetric) tridiagonal matrix:
//   row i: lower[i-1], diag[i], upper[i]   (0 <= i < n)
struct Tridiagonal {
    std::vector<double> lower;  // size n-1
    std::vector<double> diag;   // size n
    std::vector<double> upper;  // size n-1

    std::size_t size() const { return diag.size(); }
    // y = A x
    std::vector<double> apply(const std::vector<double>& x) const;
};

// Symmetric tridiagonal matrix: diag + one off-diagonal band.
struct SymmetricTridiagonal {
    std::vector<double> diag;  // size n
    std::vector<double> off;   // size n-1

    std::size_t size() const { return diag.size(); }
    std::vector<double> apply(const std::vector<double>& x) const;
};

// Solve A x = rhs for a general tridiagonal A using LU with partial
// pivoting between adjacent rows (stable also for indefinite shifted
// systems as they arise in inverse iteration).  Throws
// std::runtime_error when the matrix is numerically singular beyond
// repair.
std::vector<double> solve_tridiagonal(const Tridiagonal& A, const std::vector<double>& rhs);

// Result of the exact diagonal balancing  S = D^{-1} A D  of a
// tridiagonal matrix whose off-diagonal products are positive:
//   off_i = sqrt(lower_i * upper_i),  D_{i+1}/D_i = sqrt(lower_i/upper_i).
// The similarity is stored through log_d to stay finite when the scale
// ratios underflow; eigenvectors transform as v = D w (right) and
// w / D (left).
struct BalancedForm {
    SymmetricTridiagonal sym;
    std::vector<double> log_d;  // log D_i, log_d[0] = 0
};

// Throws std::domain_error when some product lower_i*upper_i is not
// strictly positive (the matrix is then not similar to a symmetric one
// by a positive diagonal scaling).
BalancedForm balance_to_symmetric(const Tridiagonal& A);

// Number of eigenvalues of the symmetric tridiagonal strictly below
// `shift` (Sturm-sequence count with pivot flushing).
std::size_t eigenvalues_below(const SymmetricTridiagonal& S, double shift);

struct EigenOptions {
    double relative_tolerance = 1e-12;  // bisection width target
    std::size_t max_inverse_iterations = 50;
};

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;  // unit Euclidean norm
};

// The `count` algebraically largest eigenvalues of S in descending
// order, each with a unit eigenvector.  Eigenvalues come from Sturm
// bisection, eigenvectors from shifted inverse iteration with
// re-orthogonalization against the previously computed ones (runs of
// close eigenvalues are handled that way).  Throws std::runtime_error
// when inverse iteration fails to settle.
std::vector<EigenPair> largest_eigenpairs(const SymmetricTridiagonal& S, std::size_t count,
                                          const EigenOptions& opts = {});

}  // namespace mfront
