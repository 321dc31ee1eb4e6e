#ifndef MCFT_WIGHTMAN_HPP
#define MCFT_WIGHTMAN_HPP

#include <array>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcft/circle.hpp"
#include "mcft/vertex.hpp"

namespace mcft {

// phi(f) = sum_n fhat(n) v_n over the modes stored in the window. clipped records
// that f had Fourier support beyond the mode range, so the operator is a truncation.
struct SmearedField {
  std::string name;
  int dim = 1;
  TestFunction f;
  BlockOperator<Cplx> op;
  bool clipped = false;
};

SmearedField smear(const Model& m, const GeneratorField& g, const TestFunction& f);

// Representation of the Lie algebra element x through the stored sl2 modes.
BlockOperator<Cplx> pi_of(const Model& m, const LieElement& x);

struct MoebiusRep {
  MoebiusElement gamma;
  BlockOperator<Cplx> op;
  // Largest margin such that columns from weights <= N - margin have converged in the
  // truncation parameter (estimated from the geometric decay of successive truncations).
  int margin = 0;
};

// exp(pi(log gamma)) by scaling and squaring; gamma must be in the image of exp.
MoebiusRep u_of_gamma(const Model& m, const MoebiusElement& gamma);

// || U(g) phi(f) U(g)^{-1} - phi(beta_d(g) f) || on the comparison window.
double covariance_check(const Model& m, const GeneratorField& g, const MoebiusElement& gamma,
                        const TestFunction& f);

// Exact commutator form of covariance for a Lie algebra direction with rational
// coefficients c_{-1}, c_0, c_1: [pi(x), v_n] = sum_k c_k (k(d-1) - n) v_{n+k}.
bool infinitesimal_covariance_exact(const Model& m, const GeneratorField& g,
                                    const std::array<RatC, 3>& coeff);

// Float form for a general direction: [pi(x), phi(f)] = phi((d-1) x' f - x f')
// where x is the vector-field function of the direction.
double infinitesimal_covariance(const Model& m, const GeneratorField& g, const LieElement& x,
                                const TestFunction& f);

struct ModeFamily {
  std::string name;
  // Shifted modes n in [-N, N] stored at index n + N; exactly what a field hands over.
  std::vector<BlockOperator<RatC>> modes;
};

struct ReconstructionInput {
  SpacePtr space;
  GradedVector<RatC> vacuum;
  std::vector<ModeFamily> fields;
};

struct DegenerateFieldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ReconstructionInput reconstruction_input(const Model& m);

// Rebuild a model from smeared-field data alone: conformal dimensions from the first
// mode that fails to annihilate the vacuum, states as v_{-d} vac, towers as the given
// modes, sl2 action solved from covariance on spanning mode words. Throws
// DegenerateFieldError when a family annihilates the vacuum entirely.
Model reconstruct_model(const ReconstructionInput& in, int margin);

// Compare a reconstructed model against the original: dimensions, generator states,
// tower modes, sl2 modes, vacuum. Exact comparisons on the shared window.
AxiomReport roundtrip_check(const Model& original, const Model& rebuilt);

struct CorrelatorValue {
  Cplx value{0, 0};
  bool conclusive = true;
};

// lambda(phi_1(f_1) ... phi_k(f_k) vac). lambda must be supported at weights <= the
// trusted window. Inconclusive when truncated mass could have re-entered the pairing
// weights before the pairing was taken.
CorrelatorValue correlator(const Model& m, const GradedCovector<Cplx>& lambda,
                           const std::vector<std::pair<std::string, TestFunction>>& insertions);

struct ReehSchliederReport {
  int rank = 0;          // numerical rank of the arc-restricted word span
  int expected_dim = 0;  // exact rank of the unrestricted mode-word span at this length
  int space_dim = 0;     // full truncated dimension of weights <= n_w
  double sigma_ratio = 0.0;  // sigma_expected / sigma_1 of the normalized span matrix
  int words = 0;
};

// Span of phi(f_1)...phi(f_k) vac for test functions supported in the arc
// (theta1, theta2), truncated to weights <= n_w, word length <= k_max. Cyclicity at
// this word length means rank == expected_dim; expected_dim == space_dim needs k_max
// large enough that every creation monomial fits (k_max >= n_w for the free boson).
ReehSchliederReport reeh_schlieder_rank(const Model& m, double theta1, double theta2, int band,
                                        int k_max, int n_w);

struct OrderEstimate {
  double degree = 0.0;
  double max_residual = 0.0;
  int points = 0;
  bool degenerate = false;
};

// Growth order of m -> <u', v_m u> over |m| <= mode_abs: least-squares slope of
// log|value| against log|m|, a polynomial-boundedness diagnostic.
OrderEstimate order_estimate(const Model& m, const ModeTower& tower, const GradedVector<RatC>& u,
                             const GradedCovector<RatC>& udual, int mode_abs);

}  // namespace mcft

#endif
