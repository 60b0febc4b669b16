#pragma once

#include <complex>

#include <Eigen/Dense>

namespace opvar {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Tolerances for the spectral primitives, all relative to (1 + ||input||_inf).
namespace tol {
inline constexpr double hermitian = 1e-10;
inline constexpr double psd_clamp = 1e-10;
inline constexpr double sqrt = 1e-10;
inline constexpr double unitary = 1e-11;
inline constexpr double recon = 1e-11;
}  // namespace tol

struct HermitianEigenDecomposition {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // columns pair with eigenvalues
};

ComplexMatrix adjoint(const ComplexMatrix& a);

/// (x (x) y)(z) = <z, y> x, i.e. the matrix x y^*.
ComplexMatrix rank_one(const Vector& x, const Vector& y);

/// <u, v> = sum_k u_k conj(v_k); linear in the first argument.
Complex inner(const Vector& u, const Vector& v);

/// Largest singular value.
double operator_norm(const ComplexMatrix& a);

/// |A|^2 = A^* A, computed without a square root.
ComplexMatrix abs_squared(const ComplexMatrix& a);

bool all_finite(const ComplexMatrix& a);

/// Throws NotSquare / NotHermitian unless H is Hermitian within tol::hermitian.
void require_hermitian(const ComplexMatrix& h);

HermitianEigenDecomposition hermitian_eig(const ComplexMatrix& h);

/// Principal square root of a Hermitian PSD matrix. Eigenvalues in
/// [-psd_clamp * scale, 0) are clamped to zero; anything lower is NotPSD.
ComplexMatrix psd_sqrt(const ComplexMatrix& h);

/// |A| = (A^* A)^{1/2}; cols x cols for a rows x cols input.
ComplexMatrix abs_op(const ComplexMatrix& a);

Complex trace(const ComplexMatrix& a);

double min_eigenvalue(const ComplexMatrix& h);

}  // namespace opvar
