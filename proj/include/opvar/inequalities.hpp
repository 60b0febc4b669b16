#pragma once

#include <vector>

#include "opvar/linalg.hpp"
#include "opvar/report.hpp"
#include "opvar/schatten.hpp"
#include "opvar/variance.hpp"

namespace opvar {

/// Sum bounds for positive A_i in C_p (finite p):
///   0 < p < 1:  n^{p-1} S <= ||sum A_i||_p^p <= S
///   1 <= p:     S <= ||sum A_i||_p^p <= n^{p-1} S
/// with S = sum ||A_i||_p^p. Margins are middle - lower and upper - middle.
CheckReport lemma_sum_bounds(const std::vector<ComplexMatrix>& as, SchattenOrder p, const CheckOptions& opts = {});

/// Compares V = sum ||A_i - mean||_p^p with C = n^{p/2-1} sum ||A_i||_p^p - n ||mean||_p^p.
/// p < 2 requires V >= C, p > 2 requires C >= V, p = 2 requires equality.
CheckReport thm_pnorm_check(const std::vector<ComplexMatrix>& as, SchattenOrder p, const CheckOptions& opts = {});

/// Compares V = sum ||A_i - mean||_p^2 with C = n^{2/p-1} sum ||A_i||_p^2 - n ||mean||_p^2.
///
/// The orientation checked is the one the standard argument yields: for
/// 0 < p < 2, V + n ||mean||_p^2 <= n^{2/p-1} sum ||A_i||_p^2, i.e. C >= V;
/// for p > 2 the reverse, V >= C; p = 2 is the Hilbert-Schmidt equality.
/// The opposite orientation (V >= C for p < 2) fails for any family of
/// n >= 2 equal nonzero matrices; its margin is kept in the report as
/// "reversed_margin" for reference.
CheckReport thm_sqnorm_check(const std::vector<ComplexMatrix>& as, SchattenOrder p, const CheckOptions& opts = {});

/// A_i = (e_i (x) e_i) / ||e_i|| for a pairwise orthogonal family of nonzero
/// vectors (orthogonality checked to 1e-10 relative).
std::vector<ComplexMatrix> make_orthogonal_family(const std::vector<Vector>& es);

/// max over i != j of ||A_i^* A_j||_inf (0 for a single matrix).
double max_cross_product(const std::vector<ComplexMatrix>& as);

/// ||sum sqrt(t_i) A_i||_Q^2 <= sum t_i ||A_i - sum t_j A_j||_Q^2 + ||sum t_j A_j||_Q^2
/// for A_i^* A_j = 0 (i != j), with Q = Schatten p, p >= 2 or inf.
CheckReport qnorm_orthogonal_check(const std::vector<ComplexMatrix>& as, const ProbabilityWeights& t,
                                   SchattenOrder p, const CheckOptions& opts = {});

}  // namespace opvar
