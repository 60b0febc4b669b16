#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "opvar/linalg.hpp"
#include "opvar/variance.hpp"

namespace opvar {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent per-trial streams.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Generator for trial `index` of a run seeded with `seed`.
Rng trial_rng(std::uint64_t seed, std::uint64_t index);

enum class Ensemble { Ginibre, Wishart, DiagonalPositive, OrthogonalRankOne };

Ensemble parse_ensemble(const std::string& text);
std::string to_string(Ensemble e);
/// Wishart, diagonal-positive and orthogonal-rank-one families are PSD.
bool is_psd_ensemble(Ensemble e) noexcept;

/// i.i.d. standard complex Gaussian entries (E|z|^2 = 1).
ComplexMatrix ginibre(Rng& rng, Eigen::Index rows, Eigen::Index cols);
Vector ginibre_vector(Rng& rng, Eigen::Index dim);
/// G^* G for a square Ginibre G.
ComplexMatrix wishart(Rng& rng, Eigen::Index dim);
/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal moved into Q.
ComplexMatrix random_unitary(Rng& rng, Eigen::Index dim);
/// Real diagonal with entries uniform in [lo, hi].
ComplexMatrix diagonal_in_range(Rng& rng, Eigen::Index dim, double lo, double hi);
/// `count` <= dim pairwise orthogonal vectors with norms uniform in [0.5, 2].
std::vector<Vector> orthogonal_vectors(Rng& rng, Eigen::Index dim, std::size_t count);

/// Flat Dirichlet weights; with probability `degenerate_rate` one weight is
/// 1 - 1e-9 and the rest share 1e-9.
ProbabilityWeights random_weights(Rng& rng, std::size_t n, double degenerate_rate = 0.1);

}  // namespace opvar
