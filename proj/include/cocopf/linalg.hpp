#pragma once

#include <span>
#include <vector>

#include "cocopf/rng.hpp"

// Small dense-matrix helpers for the low dimensions this library works in
// (k <= 40). Matrices are row-major std::vector<double> of size n*n.

namespace cocopf::linalg {

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);

/// out = A * x for row-major n x n A.
void mat_vec(std::span<const double> a, std::span<const double> x, std::span<double> out);

std::vector<double> identity(int n);

/// Haar-ish random orthogonal matrix: modified Gram-Schmidt on a matrix of
/// standard normals, columns redrawn on (vanishingly rare) degeneracy.
std::vector<double> random_orthogonal(int n, Rng& rng);

/// max_ij |(A^T A - I)_ij|, the orthogonality defect.
double orthogonality_error(std::span<const double> a, int n);

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
/// On success eigvals holds ascending eigenvalues and eigvecs is row-major
/// with column j the eigenvector for eigvals[j]. Returns false when the
/// sweep fails to converge or the input is not finite.
bool jacobi_eigen(std::span<const double> a, int n,
                  std::vector<double>& eigvals, std::vector<double>& eigvecs);

} // namespace cocopf::linalg
