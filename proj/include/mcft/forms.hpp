#ifndef MCFT_FORMS_HPP
#define MCFT_FORMS_HPP

#include <string>
#include <utility>
#include <vector>

#include "mcft/circle.hpp"
#include "mcft/vertex.hpp"

namespace mcft {

enum class FormKind { bilinear, sesquilinear };

// Per-weight Gram matrices of an invariant pairing; weights never mix because L_0 is
// self-adjoint for every invariant form. Sesquilinear pairings are antilinear in the
// first argument.
struct GramTower {
  FormKind kind = FormKind::bilinear;
  SpacePtr space;
  RatC normalization{Rat(1), Rat(0)};
  std::vector<Mat<RatC>> gram;

  const Mat<RatC>& at(int n) const { return gram.at(static_cast<size_t>(n)); }
};

// Antilinear involution determined by its signs on the generators: the stored
// operator is the linear part on basis coordinates, applied after conjugating them.
struct Involution {
  SpacePtr space;
  std::vector<Rat> gen_signs;
  BlockOperator<RatC> op;

  GradedVector<RatC> apply(const GradedVector<RatC>& v) const;
};

// gen_signs[i] is the scalar with theta(g_i) = sign * g_i; must square to 1.
Involution build_involution(const Model& m, const std::vector<Rat>& gen_signs);

// Gram tower fixed by the generator adjunction v_n -> (-1)^d v_{-n} (bilinear) or
// v_n -> (-1)^d (theta v)_{-n} (sesquilinear), normalized on V(0).
GramTower build_invariant_form(const Model& m, FormKind kind,
                               const RatC& normalization = RatC{Rat(1), Rat(0)},
                               const Involution* theta = nullptr);

RatC pair_vectors(const GramTower& g, const GradedVector<RatC>& a, const GradedVector<RatC>& b);
Cplx pair_vectors_f(const GramTower& g, const GradedVector<Cplx>& a, const GradedVector<Cplx>& b);

// Exact kernel basis of each Gram matrix, packed as matrix columns.
std::vector<Mat<RatC>> radical_basis(const GramTower& g);

struct UnitarityReport {
  enum class Verdict { positive_definite, positive_semidefinite, indefinite };
  Verdict verdict = Verdict::positive_definite;
  bool normalized = true;     // pairing on the vacuum equals 1
  int first_fail_weight = -1; // weight of the first nonpositive leading minor
  int first_fail_minor = -1;  // its size (1-based)
  std::vector<int> kernel_dims;
};
UnitarityReport unitarity_report(const GramTower& g);

// Mode family of the opposite field. For quasiprimary v this is n -> (-1)^d v_{-n};
// in general the finite e^{z L_1} expansion contributes towers of L_1^k v.
ModeTower opposite_tower(const Model& m, const FieldData& v, bool quasiprimary);

// Adjunction identities for generator modes (exact), sl2 modes (exact), smeared
// fields (exact on e_n, float tolerance on band-limited functions), and the group
// version (U(gamma) paired against U(alpha(gamma))) on sampled elements.
AxiomReport invariance_check(const Model& m, const GramTower& g, double smear_tol = 1e-10,
                             double group_tol = 1e-8);

// theta is involutive, preserves the form Hermitian-symmetrically, and the composite
// bilinear pairing <.,theta .> is invariant; includes the unitarity verdict.
struct InvolutiveReport {
  AxiomReport axioms;
  UnitarityReport unitarity;
};
InvolutiveReport involutive_structure_check(const Model& m, const Involution& th,
                                            const GramTower& sesq);

// Exact pairing of two creation-mode words through the opposite-word evaluation,
// compared against the direct Gram pairing by the caller. Words list (generator
// name, shifted mode) pairs, outermost first.
RatC pair_mode_words(const Model& m, const GramTower& g,
                     const std::vector<std::pair<std::string, int>>& left,
                     const std::vector<std::pair<std::string, int>>& right);

struct WordPairing {
  Cplx left_value{0, 0};
  Cplx right_value{0, 0};
  Cplx direct_value{0, 0};
  double left_right_dev = 0.0;
  double direct_dev = 0.0;
  bool conclusive = true;
};
// Pairing of smeared words (phi_1(f_1)...phi_k(f_k) vac, psi_1(g_1)...psi_l(g_l) vac)
// computed by moving either word across as opposite fields, plus the direct Gram
// evaluation of the two state vectors.
WordPairing extend_form_to_smeared(const Model& m, const GramTower& g,
                                   const std::vector<std::pair<std::string, TestFunction>>& left,
                                   const std::vector<std::pair<std::string, TestFunction>>& right);

}  // namespace mcft

#endif
