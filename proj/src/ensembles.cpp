#include "opvar/ensembles.hpp"

#include <cmath>

#include "opvar/error.hpp"

namespace opvar {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng trial_rng(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(seed ^ splitmix64(index)));
}

Ensemble parse_ensemble(const std::string& text) {
  if (text == "ginibre") return Ensemble::Ginibre;
  if (text == "wishart") return Ensemble::Wishart;
  if (text == "diagonal-positive") return Ensemble::DiagonalPositive;
  if (text == "orthogonal-rank-one") return Ensemble::OrthogonalRankOne;
  throw Error(ErrorKind::InvalidArgument,
              "unknown ensemble '" + text + "' (ginibre|wishart|diagonal-positive|orthogonal-rank-one)");
}

std::string to_string(Ensemble e) {
  switch (e) {
    case Ensemble::Ginibre: return "ginibre";
    case Ensemble::Wishart: return "wishart";
    case Ensemble::DiagonalPositive: return "diagonal-positive";
    case Ensemble::OrthogonalRankOne: return "orthogonal-rank-one";
  }
  return "unknown";
}

bool is_psd_ensemble(Ensemble e) noexcept { return e != Ensemble::Ginibre; }

ComplexMatrix ginibre(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, M_SQRT1_2);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

Vector ginibre_vector(Rng& rng, Eigen::Index dim) { return ginibre(rng, dim, 1).col(0); }

ComplexMatrix wishart(Rng& rng, Eigen::Index dim) {
  const ComplexMatrix g = ginibre(rng, dim, dim);
  return g.adjoint() * g;
}

ComplexMatrix random_unitary(Rng& rng, Eigen::Index dim) {
  const ComplexMatrix g = ginibre(rng, dim, dim);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

ComplexMatrix diagonal_in_range(Rng& rng, Eigen::Index dim, double lo, double hi) {
  std::uniform_real_distribution<double> uniform(lo, hi);
  ComplexMatrix d = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) d(k, k) = lo == hi ? lo : uniform(rng);
  return d;
}

std::vector<Vector> orthogonal_vectors(Rng& rng, Eigen::Index dim, std::size_t count) {
  if (count > static_cast<std::size_t>(dim))
    throw Error(ErrorKind::InvalidArgument, "cannot fit that many orthogonal vectors in this dimension");
  std::uniform_real_distribution<double> length(0.5, 2.0);
  std::vector<Vector> basis;
  while (basis.size() < count) {
    Vector v = ginibre_vector(rng, dim);
    // Two Gram-Schmidt passes keep the overlaps at rounding level.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) v -= inner(v, b) * b;
    const double norm = v.norm();
    if (norm < 1e-8) continue;
    basis.push_back(v / norm);
  }
  for (auto& b : basis) b *= length(rng);
  return basis;
}

ProbabilityWeights random_weights(Rng& rng, std::size_t n, double degenerate_rate) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (n > 1 && unit(rng) < degenerate_rate) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const std::size_t heavy = pick(rng);
    std::vector<double> t(n, 1e-9 / static_cast<double>(n - 1));
    t[heavy] = 1.0 - 1e-9;
    return ProbabilityWeights::normalized(std::move(t));
  }
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> raw(n);
  for (double& w : raw) w = expo(rng);
  return ProbabilityWeights::normalized(std::move(raw));
}

}  // namespace opvar
