#pragma once

// Real coordinates for Hermitian matrices.
//
// The basis for N x N Hermitian matrices is: the N diagonal units |i><i|,
// then for each pair i < j (lexicographic) the two matrices
// (|i><j| + |j><i|)/sqrt2 and (i|i><j| - i|j><i|)/sqrt2. It is orthonormal in
// the Hilbert-Schmidt inner product, so the coordinates of X are tr(B_k X)
// and tr(X Y) equals the Euclidean dot product of the coordinate vectors.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace gptkit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

std::vector<CMatrix> hermitian_basis(int n);

Eigen::VectorXd hermitian_coordinates(const CMatrix& m);
CMatrix hermitian_from_coordinates(const Eigen::VectorXd& coords, int n);

/// Ascending eigenvalues of the Hermitian part of m.
Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m);

bool is_hermitian(const CMatrix& m, double tol);

/// Operator on C^na (x) C^nb whose coordinates in the product basis
/// B_k (x) B_l are coords[k * nb^2 + l].
CMatrix product_operator(const Eigen::VectorXd& coords, int na, int nb);
Eigen::VectorXd product_coordinates(const CMatrix& op, int na, int nb);

CMatrix kron(const CMatrix& a, const CMatrix& b);
Eigen::VectorXd kron(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Haar-random unit vector in C^n.
CVector random_unit_vector(int n, std::mt19937_64& rng);
/// Density matrix drawn from the Hilbert-Schmidt ensemble.
CMatrix random_density_matrix(int n, std::mt19937_64& rng);
/// Effect 0 <= E <= 1 with eigenvalues uniform in [0, 1] in a Haar basis.
CMatrix random_effect(int n, std::mt19937_64& rng);
/// Haar-random unitary.
CMatrix random_unitary(int n, std::mt19937_64& rng);

}  // namespace gptkit
