#include "opvar/linalg.hpp"

#include <cmath>
#include <sstream>

#include "opvar/error.hpp"

namespace opvar {

namespace {

void require_square(const ComplexMatrix& a, const char* op) {
  if (a.rows() != a.cols()) {
    std::ostringstream os;
    os << op << " requires a square matrix, got " << a.rows() << "x" << a.cols();
    throw Error(ErrorKind::NotSquare, os.str());
  }
}

// Eigen's solver only reads the lower triangle; hand it the exact Hermitian part.
HermitianEigenDecomposition solve_hermitian(const ComplexMatrix& h) {
  const ComplexMatrix sym = (h + h.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace

ComplexMatrix adjoint(const ComplexMatrix& a) { return a.adjoint(); }

ComplexMatrix rank_one(const Vector& x, const Vector& y) { return x * y.adjoint(); }

Complex inner(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) throw Error(ErrorKind::DimensionMismatch, "inner product of vectors of different length");
  Complex s{0.0, 0.0};
  for (Eigen::Index k = 0; k < u.size(); ++k) s += u[k] * std::conj(v[k]);
  return s;
}

double operator_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

ComplexMatrix abs_squared(const ComplexMatrix& a) { return a.adjoint() * a; }

bool all_finite(const ComplexMatrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
  return true;
}

void require_hermitian(const ComplexMatrix& h) {
  require_square(h, "Hermitian operation");
  const double asym = operator_norm(h - h.adjoint());
  const double bound = tol::hermitian * (1.0 + operator_norm(h));
  if (!(asym <= bound)) {
    std::ostringstream os;
    os << "||H - H*|| = " << asym << " exceeds " << bound;
    throw Error(ErrorKind::NotHermitian, os.str());
  }
}

HermitianEigenDecomposition hermitian_eig(const ComplexMatrix& h) {
  require_hermitian(h);
  return solve_hermitian(h);
}

ComplexMatrix psd_sqrt(const ComplexMatrix& h) {
  auto eig = hermitian_eig(h);
  const double floor = -tol::psd_clamp * (1.0 + operator_norm(h));
  RealVector roots(eig.eigenvalues.size());
  for (Eigen::Index k = 0; k < roots.size(); ++k) {
    const double lambda = eig.eigenvalues(k);
    if (lambda < floor) {
      std::ostringstream os;
      os << "eigenvalue " << lambda << " below clamp threshold " << floor;
      throw Error(ErrorKind::NotPSD, os.str());
    }
    roots(k) = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
  }
  const ComplexMatrix& v = eig.eigenvectors;
  ComplexMatrix s = v * roots.cast<Complex>().asDiagonal() * v.adjoint();
  return (s + s.adjoint()) * 0.5;
}

ComplexMatrix abs_op(const ComplexMatrix& a) { return psd_sqrt(abs_squared(a)); }

Complex trace(const ComplexMatrix& a) {
  require_square(a, "trace");
  return a.trace();
}

double min_eigenvalue(const ComplexMatrix& h) {
  auto eig = hermitian_eig(h);
  return eig.eigenvalues.size() ? eig.eigenvalues(0) : 0.0;
}

}  // namespace opvar
