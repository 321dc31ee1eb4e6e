#include "mcft/forms.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "mcft/kernels.hpp"
#include "mcft/wightman.hpp"

namespace mcft {

namespace {

Rat parity(int d) { return (d % 2 == 0) ? Rat(1) : Rat(-1); }

std::vector<RatC> coords_or_zero(const GradedVector<RatC>& v, int n) {
  const auto* c = v.find(n);
  if (c) return *c;
  return std::vector<RatC>(static_cast<size_t>(v.space->dim(n)), RatC());
}

BlockOperator<RatC> conj_blocks(const BlockOperator<RatC>& a) {
  BlockOperator<RatC> out = a;
  for (auto& row : out.rows)
    for (auto& e : row) e.m = e.m.conjugated();
  return out;
}

// Signature of a Hermitian matrix by exact congruence elimination: when no nonzero
// diagonal entry remains, a hyperbolic off-diagonal pair is first rotated onto the
// diagonal with e_i -> e_i + lambda e_j, lambda in {1, i}.
std::array<int, 3> inertia_of(Mat<RatC> a) {
  const int n = a.rows();
  std::vector<char> done(static_cast<size_t>(n), 0);
  int pos = 0, neg = 0, zero = 0, remaining = n;
  while (remaining > 0) {
    int p = -1;
    for (int i = 0; i < n; ++i)
      if (!done[static_cast<size_t>(i)] && !a(i, i).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) {
      int bi = -1, bj = -1;
      for (int i = 0; i < n && bi < 0; ++i) {
        if (done[static_cast<size_t>(i)]) continue;
        for (int j = i + 1; j < n; ++j)
          if (!done[static_cast<size_t>(j)] && !a(i, j).is_zero()) {
            bi = i;
            bj = j;
            break;
          }
      }
      if (bi < 0) {
        zero += remaining;
        break;
      }
      const RatC lam = (sgn(a(bi, bj).re) != 0) ? RatC(Rat(1)) : RatC::unit_i();
      for (int k = 0; k < n; ++k)
        if (!done[static_cast<size_t>(k)]) a(bi, k) += lam.conj() * a(bj, k);
      for (int k = 0; k < n; ++k)
        if (!done[static_cast<size_t>(k)]) a(k, bi) += lam * a(k, bj);
      continue;
    }
    if (sgn(a(p, p).im) != 0) throw std::invalid_argument("inertia: matrix is not hermitian");
    (sgn(a(p, p).re) > 0 ? pos : neg) += 1;
    done[static_cast<size_t>(p)] = 1;
    --remaining;
    for (int i = 0; i < n; ++i) {
      if (done[static_cast<size_t>(i)] || a(i, p).is_zero()) continue;
      const RatC f = a(i, p) / a(p, p);
      for (int j = 0; j < n; ++j) {
        if (done[static_cast<size_t>(j)]) continue;
        a(i, j) -= f * a(p, j);
      }
    }
  }
  return {pos, neg, zero};
}

// Block form of the adjunction (A a, b) = s (a, B b): for every source p with the
// target q = p - shift inside the truncation, T(A_{p->q}) G_q = s G_p B_{q->p},
// where T is the transpose (bilinear) or conjugate transpose (sesquilinear).
bool adjunction_identity(const GramTower& g, const BlockOperator<RatC>& a,
                         const BlockOperator<RatC>& b, int shift, const RatC& s) {
  const int N = g.space->max_weight;
  const bool sesq = g.kind == FormKind::sesquilinear;
  for (int p = 0; p <= N; ++p) {
    const int q = p - shift;
    if (q < 0 || q > N) continue;
    if (g.space->dim(p) == 0 || g.space->dim(q) == 0) continue;
    if (a.suspect[static_cast<size_t>(p)] || b.suspect[static_cast<size_t>(q)]) continue;
    Mat<RatC> lhs(g.space->dim(p), g.space->dim(q));
    if (const Mat<RatC>* ab = a.find_block(p, q)) {
      Mat<RatC> at = sesq ? ab->conjugated().transposed() : ab->transposed();
      lhs = kernels::gemm(at, g.at(q));
    }
    Mat<RatC> rhs(g.space->dim(p), g.space->dim(q));
    if (const Mat<RatC>* bb = b.find_block(q, p)) {
      rhs = kernels::gemm(g.at(p), *bb);
      rhs.scale(s);
    }
    if (!(lhs == rhs)) return false;
  }
  return true;
}

void adjunction_records(const Model& m, const GramTower& g, AxiomReport& rep) {
  const int N = m.space->max_weight;
  const bool sesq = g.kind == FormKind::sesquilinear;
  for (const auto& gen : m.gens) {
    const RatC s = sesq ? RatC(Rat(1)) : RatC(parity(gen.dim));
    for (int n = 0; n <= N; ++n) {
      std::ostringstream os;
      os << gen.name << " mode adjunction n=" << n;
      rep.record(adjunction_identity(g, gen.tower.slot(n), gen.tower.slot(-n), n, s), os.str());
    }
  }
  for (int mm = -1; mm <= 1; ++mm) {
    std::ostringstream os;
    os << "sl2 adjunction m=" << mm;
    rep.record(adjunction_identity(g, m.sl2(mm), m.sl2(-mm), mm, RatC(Rat(1))), os.str());
  }
}

void symmetry_records(const GramTower& g, AxiomReport& rep) {
  const bool sesq = g.kind == FormKind::sesquilinear;
  for (int n = 0; n <= g.space->max_weight; ++n) {
    const Mat<RatC>& G = g.at(n);
    Mat<RatC> mirror = sesq ? G.conjugated().transposed() : G.transposed();
    std::ostringstream os;
    os << (sesq ? "hermitian" : "symmetric") << " at weight " << n;
    rep.record(mirror == G, os.str());
  }
}

// fixed band-limited function with spread coefficients; deterministic
TestFunction sample_function(int band) {
  TestFunction f(band);
  for (int n = -band; n <= band; ++n)
    f.set_coeff(n, Cplx(1.0 / (3 + std::abs(n)) + 0.125 * n, 0.0625 * n - 0.25 * (n % 2)));
  return f;
}

std::vector<GradedVector<RatC>> low_basis(const Model& m, int wmax) {
  std::vector<GradedVector<RatC>> out;
  for (int n = 0; n <= std::min(wmax, m.space->max_weight); ++n)
    for (int i = 0; i < m.space->dim(n); ++i) out.push_back(GradedVector<RatC>::basis(m.space, n, i));
  return out;
}

}  // namespace

GradedVector<RatC> Involution::apply(const GradedVector<RatC>& v) const {
  require_same_space(space, v.space);
  GradedVector<RatC> c = v;
  for (auto& w : c.comp)
    for (auto& x : w) x = x.conj();
  return op.apply(c);
}

Involution build_involution(const Model& m, const std::vector<Rat>& gen_signs) {
  if (!m.basis) throw std::invalid_argument("involution: model lacks a monomial basis");
  if (gen_signs.size() != m.gens.size())
    throw std::invalid_argument("involution: one sign per generator required");
  for (const Rat& s : gen_signs)
    if (s != 1 && s != -1) throw std::invalid_argument("involution: signs must be +1 or -1");

  const Rat s0 = gen_signs.front();
  Involution th;
  th.space = m.space;
  th.gen_signs = gen_signs;
  th.op = BlockOperator<RatC>::zero(m.space);
  for (int n = 0; n <= m.space->max_weight; ++n) {
    const int dn = m.space->dim(n);
    if (dn == 0) continue;
    Mat<RatC>& blk = th.op.block(n, n);
    for (int i = 0; i < dn; ++i) {
      const auto& kp = m.basis->kept[static_cast<size_t>(n)];
      const auto& part =
          m.basis->parts[static_cast<size_t>(n)][static_cast<size_t>(kp[static_cast<size_t>(i)])];
      blk(i, i) = RatC((part.size() % 2 == 0) ? Rat(1) : s0);
    }
  }
  return th;
}

GramTower build_invariant_form(const Model& m, FormKind kind, const RatC& normalization,
                               const Involution* theta) {
  if (!m.basis) throw std::invalid_argument("invariant form: model lacks a monomial basis");
  if (kind == FormKind::sesquilinear) {
    if (!theta) throw std::invalid_argument("invariant form: sesquilinear kind needs an involution");
    require_same_space(m.space, theta->op.space);
    // the adjunction v_n -> v_{-n} forces theta(g) = (-1)^{wt g} g on each generator
    for (size_t i = 0; i < m.gens.size(); ++i)
      if (theta->gen_signs.at(i) != parity(m.gens[i].dim))
        throw std::invalid_argument("invariant form: involution sign incompatible with adjunction");
  }

  const GeneratorField& g = m.gens.front();
  const RatC strip = (kind == FormKind::bilinear) ? RatC(parity(g.dim)) : RatC(Rat(1));
  const int N = m.space->max_weight;
  const bool sesq = kind == FormKind::sesquilinear;

  GramTower out;
  out.kind = kind;
  out.space = m.space;
  out.normalization = normalization;
  out.gram.reserve(static_cast<size_t>(N + 1));

  Mat<RatC> g0(m.space->dim(0), m.space->dim(0));
  if (m.space->dim(0) != 1) throw std::logic_error("invariant form: vacuum weight is not a line");
  g0(0, 0) = normalization;
  out.gram.push_back(std::move(g0));

  for (int n = 1; n <= N; ++n) {
    const int dn = m.space->dim(n);
    Mat<RatC> gn(dn, dn);
    if (dn > 0) {
      // row i strips the outer creation mode of its monomial and pushes it across
      std::function<std::vector<RatC>(int)> row_fn = [&](int i) {
        const int uidx = m.basis->kept[static_cast<size_t>(n)][static_cast<size_t>(i)];
        const auto& part = m.basis->parts[static_cast<size_t>(n)][static_cast<size_t>(uidx)];
        const int lam = part.front();
        const std::vector<int> rest(part.begin() + 1, part.end());
        const int rw = n - lam;
        const int ridx = m.basis->index[static_cast<size_t>(rw)].at(rest);
        const std::vector<RatC> rho = coords_or_zero(monomial_state(m, rw, ridx), rw);

        const Mat<RatC>& glow = out.gram[static_cast<size_t>(rw)];
        std::vector<RatC> w(static_cast<size_t>(glow.cols()), RatC());
        for (int k = 0; k < glow.rows(); ++k) {
          RatC x = sesq ? rho[static_cast<size_t>(k)].conj() : rho[static_cast<size_t>(k)];
          if (x.is_zero()) continue;
          for (int l = 0; l < glow.cols(); ++l) w[static_cast<size_t>(l)] += x * glow(k, l);
        }

        std::vector<RatC> row(static_cast<size_t>(dn), RatC());
        if (const Mat<RatC>* blk = g.tower.slot(lam).find_block(n, rw)) {
          for (int l = 0; l < blk->rows(); ++l) {
            if (w[static_cast<size_t>(l)].is_zero()) continue;
            for (int j = 0; j < dn; ++j) row[static_cast<size_t>(j)] += w[static_cast<size_t>(l)] * (*blk)(l, j);
          }
        }
        for (auto& x : row) x = strip * x;
        return row;
      };
      auto rows = kernels::grid_map<std::vector<RatC>>(dn, row_fn);
      for (int i = 0; i < dn; ++i)
        for (int j = 0; j < dn; ++j) gn(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    out.gram.push_back(std::move(gn));
  }
  return out;
}

RatC pair_vectors(const GramTower& g, const GradedVector<RatC>& a, const GradedVector<RatC>& b) {
  require_same_space(g.space, a.space);
  require_same_space(g.space, b.space);
  const bool sesq = g.kind == FormKind::sesquilinear;
  RatC acc;
  for (int n = 0; n <= g.space->max_weight; ++n) {
    const auto* ca = a.find(n);
    const auto* cb = b.find(n);
    if (!ca || !cb) continue;
    const Mat<RatC>& G = g.at(n);
    for (int i = 0; i < G.rows(); ++i) {
      RatC x = sesq ? (*ca)[static_cast<size_t>(i)].conj() : (*ca)[static_cast<size_t>(i)];
      if (x.is_zero()) continue;
      for (int j = 0; j < G.cols(); ++j) acc += x * G(i, j) * (*cb)[static_cast<size_t>(j)];
    }
  }
  return acc;
}

Cplx pair_vectors_f(const GramTower& g, const GradedVector<Cplx>& a, const GradedVector<Cplx>& b) {
  require_same_space(g.space, a.space);
  require_same_space(g.space, b.space);
  const bool sesq = g.kind == FormKind::sesquilinear;
  Cplx acc(0, 0);
  for (int n = 0; n <= g.space->max_weight; ++n) {
    const auto* ca = a.find(n);
    const auto* cb = b.find(n);
    if (!ca || !cb) continue;
    const Mat<RatC>& G = g.at(n);
    for (int i = 0; i < G.rows(); ++i) {
      Cplx x = sesq ? std::conj((*ca)[static_cast<size_t>(i)]) : (*ca)[static_cast<size_t>(i)];
      if (x == Cplx(0, 0)) continue;
      for (int j = 0; j < G.cols(); ++j) acc += x * to_cplx(G(i, j)) * (*cb)[static_cast<size_t>(j)];
    }
  }
  return acc;
}

std::vector<Mat<RatC>> radical_basis(const GramTower& g) {
  std::vector<Mat<RatC>> out;
  for (int n = 0; n <= g.space->max_weight; ++n) {
    std::vector<std::vector<RatC>> kern;
    row_reduce_rank(g.at(n), &kern);
    Mat<RatC> k(g.space->dim(n), static_cast<int>(kern.size()));
    for (int j = 0; j < static_cast<int>(kern.size()); ++j)
      for (int i = 0; i < k.rows(); ++i) k(i, j) = kern[static_cast<size_t>(j)][static_cast<size_t>(i)];
    out.push_back(std::move(k));
  }
  return out;
}

UnitarityReport unitarity_report(const GramTower& g) {
  UnitarityReport rep;
  const int N = g.space->max_weight;
  rep.normalized = g.space->dim(0) == 1 && g.at(0)(0, 0) == RatC(Rat(1));
  bool any_zero = false, any_neg = false;
  for (int n = 0; n <= N; ++n) {
    const auto [pos, neg, zer] = inertia_of(g.at(n));
    rep.kernel_dims.push_back(zer);
    any_zero = any_zero || zer > 0;
    any_neg = any_neg || neg > 0;
    if ((neg > 0 || zer > 0) && rep.first_fail_weight < 0) {
      rep.first_fail_weight = n;
      const Mat<RatC>& G = g.at(n);
      for (int k = 1; k <= G.rows() && rep.first_fail_minor < 0; ++k) {
        Mat<RatC> sub(k, k);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) sub(i, j) = G(i, j);
        const RatC d = det_exact(sub);
        if (sgn(d.im) != 0) throw std::invalid_argument("unitarity: minor is not real");
        if (sgn(d.re) <= 0) rep.first_fail_minor = k;
      }
    }
  }
  rep.verdict = any_neg   ? UnitarityReport::Verdict::indefinite
                : any_zero ? UnitarityReport::Verdict::positive_semidefinite
                           : UnitarityReport::Verdict::positive_definite;
  return rep;
}

ModeTower opposite_tower(const Model& m, const FieldData& v, bool quasiprimary) {
  require_same_space(m.space, v.state.space);
  const int N = m.space->max_weight;
  const RatC par{parity(v.dim), Rat(0)};
  ModeTower out(m.space, v.dim);
  if (quasiprimary) {
    for (int n = -N; n <= N; ++n) {
      out.slot(n) = v.tower->slot(-n);
      out.slot(n).scale(par);
    }
    return out;
  }
  GradedVector<RatC> st = v.state;
  Rat kfact(1);
  for (int k = 0; !st.is_zero(); ++k) {
    if (k > 0) kfact *= k;
    const RatC coeff = par * RatC(Rat(1) / kfact);
    if (k == 0) {
      for (int n = -N; n <= N; ++n) out.slot(n).axpy(coeff, v.tower->slot(-n));
    } else {
      const ModeTower tk = tower_of_state(m, st);
      for (int n = -N; n <= N; ++n) out.slot(n).axpy(coeff, tk.slot(-n));
    }
    st = m.l_plus.apply(st);
  }
  return out;
}

AxiomReport invariance_check(const Model& m, const GramTower& g, double smear_tol,
                             double group_tol) {
  AxiomReport rep;
  require_same_space(m.space, g.space);
  const int N = m.space->max_weight;
  const bool sesq = g.kind == FormKind::sesquilinear;

  symmetry_records(g, rep);
  adjunction_records(m, g, rep);

  // smeared form of the adjunction, first on pure modes e_a (exact rationals)
  const auto basis_vecs = low_basis(m, 3);
  for (const auto& gen : m.gens) {
    const RatC s = sesq ? RatC(Rat(1)) : RatC(parity(gen.dim));
    bool ok = true;
    for (int a = -std::min(3, N); a <= std::min(3, N) && ok; ++a) {
      for (const auto& phi : basis_vecs) {
        for (const auto& psi : basis_vecs) {
          const RatC lhs = pair_vectors(g, gen.tower.slot(a).apply(phi), psi);
          const RatC rhs = s * pair_vectors(g, phi, gen.tower.slot(-a).apply(psi));
          if (lhs != rhs) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
      }
    }
    rep.record(ok, gen.name + " smeared adjunction on basis modes");
  }

  // band-limited test function, float path
  const auto low_f = low_basis(m, 2);
  for (const auto& gen : m.gens) {
    const Cplx s = sesq ? Cplx(1, 0) : Cplx(parity(gen.dim).get_d(), 0);
    const TestFunction f = sample_function(std::min(4, N));
    const TestFunction rf = reflect_transform(f, sesq ? Reflect::conjugate : Reflect::invert);
    const SmearedField sf = smear(m, gen, f);
    const SmearedField sr = smear(m, gen, rf);
    double dev = 0.0;
    for (const auto& phi : low_f) {
      const GradedVector<Cplx> pphi = promote(phi);
      for (const auto& psi : low_f) {
        const GradedVector<Cplx> ppsi = promote(psi);
        const Cplx lhs = pair_vectors_f(g, sf.op.apply(pphi), ppsi);
        const Cplx rhs = s * pair_vectors_f(g, pphi, sr.op.apply(ppsi));
        dev = std::max(dev, std::abs(lhs - rhs));
      }
    }
    std::ostringstream os;
    os << gen.name << " smeared adjunction, band function (dev " << dev << ")";
    rep.record(dev <= smear_tol, os.str());
  }

  // finite form: U(gamma) paired against U(alpha(gamma)) (bilinear) or U(gamma) (sesquilinear)
  {
    const std::vector<LieElement> dirs = {
        LieElement::rotation_generator(), LieElement::boost_x(), LieElement::boost_y(),
        LieElement::boost_x() + Cplx(0.5, 0) * LieElement::boost_y() +
            Cplx(0.25, 0) * LieElement::rotation_generator()};
    double dev = 0.0;
    for (const LieElement& x : dirs) {
      for (double t : {0.10, 0.15}) {
        const MoebiusElement gamma = exp_lie(x, t);
        const BlockOperator<Cplx> u1 = u_of_gamma(m, gamma).op;
        const BlockOperator<Cplx> u2 =
            sesq ? u1 : u_of_gamma(m, alpha_automorphism(gamma)).op;
        for (const auto& phi : low_f) {
          const GradedVector<Cplx> pphi = promote(phi);
          for (const auto& psi : low_f) {
            const GradedVector<Cplx> ppsi = promote(psi);
            const Cplx lhs = pair_vectors_f(g, u1.apply(pphi), u2.apply(ppsi));
            const Cplx rhs = pair_vectors_f(g, pphi, ppsi);
            dev = std::max(dev, std::abs(lhs - rhs));
          }
        }
      }
    }
    std::ostringstream os;
    os << "group invariance on sampled elements (dev " << dev << ")";
    rep.record(dev <= group_tol, os.str());
  }
  return rep;
}

InvolutiveReport involutive_structure_check(const Model& m, const Involution& th,
                                            const GramTower& sesq) {
  InvolutiveReport out;
  AxiomReport& rep = out.axioms;
  require_same_space(m.space, th.op.space);
  require_same_space(m.space, sesq.space);
  if (sesq.kind != FormKind::sesquilinear)
    throw std::invalid_argument("involutive check: needs the sesquilinear form");
  const int N = m.space->max_weight;

  {
    const WindowCompare c = compare_on_window(compose(th.op, conj_blocks(th.op)),
                                              BlockOperator<RatC>::identity(m.space), N, N);
    rep.record(c.equal && c.compared_sources > 0, "involution squares to the identity");
  }
  rep.record(th.apply(m.vacuum).equals_exact(m.vacuum), "involution fixes the vacuum");

  for (size_t gi = 0; gi < m.gens.size(); ++gi) {
    const auto& gen = m.gens[gi];
    bool ok = true;
    for (int n = -N; n <= N && ok; ++n) {
      BlockOperator<RatC> lhs =
          compose(th.op, compose(conj_blocks(gen.tower.slot(n)), th.op));
      BlockOperator<RatC> rhs = gen.tower.slot(n);
      rhs.scale(RatC(th.gen_signs[gi]));
      const WindowCompare c = compare_on_window(lhs, rhs, m.window(), N);
      if (c.compared_sources > 0 && !c.equal) ok = false;
    }
    rep.record(ok, gen.name + ": involution intertwines the modes");
  }

  // T^dagger G T = conj(G) weight by weight
  {
    bool ok = true;
    for (int n = 0; n <= N && ok; ++n) {
      if (m.space->dim(n) == 0) continue;
      const Mat<RatC>* t = th.op.find_block(n, n);
      if (!t) {
        ok = false;
        break;
      }
      const Mat<RatC> lhs =
          kernels::gemm(kernels::gemm(t->conjugated().transposed(), sesq.at(n)), *t);
      if (!(lhs == sesq.at(n).conjugated())) ok = false;
    }
    rep.record(ok, "involution preserves the pairing");
  }

  symmetry_records(sesq, rep);

  // the composite <theta a, b> is the invariant bilinear pairing
  {
    const GramTower bil = build_invariant_form(m, FormKind::bilinear, sesq.normalization);
    GramTower composite;
    composite.kind = FormKind::bilinear;
    composite.space = m.space;
    composite.normalization = sesq.normalization;
    bool match = true;
    for (int n = 0; n <= N; ++n) {
      const int dn = m.space->dim(n);
      Mat<RatC> b(dn, dn);
      if (dn > 0) {
        const Mat<RatC>* t = th.op.find_block(n, n);
        if (t) b = kernels::gemm(t->conjugated().transposed(), sesq.at(n));
      }
      if (!(b == bil.at(n))) match = false;
      composite.gram.push_back(std::move(b));
    }
    rep.record(match, "composite bilinear pairing equals the invariant bilinear form");
    AxiomReport adj;
    adjunction_records(m, composite, adj);
    rep.record(adj.pass, "composite bilinear pairing is invariant");
  }

  out.unitarity = unitarity_report(sesq);
  rep.record(out.unitarity.normalized, "vacuum pairing equals 1");
  return out;
}

RatC pair_mode_words(const Model& m, const GramTower& g,
                     const std::vector<std::pair<std::string, int>>& left,
                     const std::vector<std::pair<std::string, int>>& right) {
  GradedVector<RatC> rv = m.vacuum;
  for (size_t i = right.size(); i-- > 0;) rv = apply_mode(m.gen(right[i].first), right[i].second, rv);
  RatC scale(Rat(1));
  for (const auto& [name, n] : left) {
    const GeneratorField& gen = m.gen(name);
    if (g.kind == FormKind::bilinear) scale *= RatC(parity(gen.dim));
    rv = apply_mode(gen, -n, rv);
  }
  if (rv.inexact) throw std::runtime_error("pair_mode_words: crossing left the truncation window");
  return scale * pair_vectors(g, m.vacuum, rv);
}

WordPairing extend_form_to_smeared(const Model& m, const GramTower& g,
                                   const std::vector<std::pair<std::string, TestFunction>>& left,
                                   const std::vector<std::pair<std::string, TestFunction>>& right) {
  WordPairing out;
  const bool sesq = g.kind == FormKind::sesquilinear;
  const Reflect refl = sesq ? Reflect::conjugate : Reflect::invert;
  const GradedVector<Cplx> vac = promote(m.vacuum);
  bool clipped = false;

  auto apply_smeared = [&](const std::string& name, const TestFunction& f,
                           const GradedVector<Cplx>& v) {
    const SmearedField sf = smear(m, m.gen(name), f);
    clipped = clipped || sf.clipped;
    return sf.op.apply(v);
  };

  GradedVector<Cplx> lv = vac;
  for (size_t i = left.size(); i-- > 0;) lv = apply_smeared(left[i].first, left[i].second, lv);
  GradedVector<Cplx> rv = vac;
  for (size_t i = right.size(); i-- > 0;) rv = apply_smeared(right[i].first, right[i].second, rv);
  out.direct_value = pair_vectors_f(g, lv, rv);

  Cplx sl(1, 0);
  GradedVector<Cplx> r2 = rv;
  for (const auto& [name, f] : left) {
    if (!sesq && m.gen(name).dim % 2 != 0) sl = -sl;
    r2 = apply_smeared(name, reflect_transform(f, refl), r2);
  }
  out.left_value = sl * pair_vectors_f(g, vac, r2);

  Cplx sr(1, 0);
  GradedVector<Cplx> l2 = lv;
  for (const auto& [name, f] : right) {
    if (!sesq && m.gen(name).dim % 2 != 0) sr = -sr;
    l2 = apply_smeared(name, reflect_transform(f, refl), l2);
  }
  out.right_value = sr * pair_vectors_f(g, l2, vac);

  out.left_right_dev = std::abs(out.left_value - out.right_value);
  out.direct_dev = std::max(std::abs(out.left_value - out.direct_value),
                            std::abs(out.right_value - out.direct_value));
  out.conclusive = !clipped && !lv.inexact && !rv.inexact && !r2.inexact && !l2.inexact;
  return out;
}

Model quotient_by_radical(const Model& m) {
  if (!m.basis) throw std::invalid_argument("quotient: model lacks a monomial basis");
  const int N = m.space->max_weight;
  const GramTower bil = build_invariant_form(m, FormKind::bilinear);
  const std::vector<Mat<RatC>> rad = radical_basis(bil);

  std::vector<std::vector<int>> kept_local(static_cast<size_t>(N + 1));
  std::vector<Mat<RatC>> bigp(static_cast<size_t>(N + 1)), emb(static_cast<size_t>(N + 1));
  for (int n = 0; n <= N; ++n) {
    const int dn = m.space->dim(n);
    const Mat<RatC>& k = rad[static_cast<size_t>(n)];
    const int r = k.cols();
    if (dn == 0) {
      bigp[static_cast<size_t>(n)] = Mat<RatC>(0, 0);
      emb[static_cast<size_t>(n)] = Mat<RatC>(0, 0);
      continue;
    }
    // pivot columns of [K | I] past the kernel block complete it to a basis
    Mat<RatC> ki(dn, r + dn);
    for (int i = 0; i < dn; ++i) {
      for (int j = 0; j < r; ++j) ki(i, j) = k(i, j);
      ki(i, r + i) = RatC(Rat(1));
    }
    std::vector<int> piv;
    row_reduce_pivots(ki, piv);
    for (int c : piv)
      if (c >= r) kept_local[static_cast<size_t>(n)].push_back(c - r);
    const int kn = static_cast<int>(kept_local[static_cast<size_t>(n)].size());
    if (kn + r != dn) throw std::logic_error("quotient: kernel completion has wrong rank");

    Mat<RatC> b(dn, dn);
    for (int j = 0; j < kn; ++j) b(kept_local[static_cast<size_t>(n)][static_cast<size_t>(j)], j) = RatC(Rat(1));
    for (int j = 0; j < r; ++j)
      for (int i = 0; i < dn; ++i) b(i, kn + j) = k(i, j);
    const Mat<RatC> binv = solve_exact_mat(b, Mat<RatC>::identity(dn));
    Mat<RatC> p(kn, dn);
    for (int i = 0; i < kn; ++i)
      for (int j = 0; j < dn; ++j) p(i, j) = binv(i, j);
    bigp[static_cast<size_t>(n)] = std::move(p);
    Mat<RatC> e(dn, kn);
    for (int j = 0; j < kn; ++j) e(kept_local[static_cast<size_t>(n)][static_cast<size_t>(j)], j) = RatC(Rat(1));
    emb[static_cast<size_t>(n)] = std::move(e);
  }

  auto qspace = std::make_shared<GradedSpace>();
  qspace->max_weight = N;
  qspace->dims.resize(static_cast<size_t>(N + 1));
  qspace->labels.resize(static_cast<size_t>(N + 1));
  for (int n = 0; n <= N; ++n) {
    qspace->dims[static_cast<size_t>(n)] = static_cast<int>(kept_local[static_cast<size_t>(n)].size());
    for (int i : kept_local[static_cast<size_t>(n)])
      qspace->labels[static_cast<size_t>(n)].push_back(
          m.space->labels[static_cast<size_t>(n)][static_cast<size_t>(i)]);
  }

  auto project_vec = [&](const GradedVector<RatC>& v) {
    GradedVector<RatC> out(qspace);
    out.tail = v.tail;
    out.inexact = v.inexact;
    for (int n = 0; n <= N; ++n) {
      const auto* c = v.find(n);
      if (!c || qspace->dim(n) == 0) continue;
      std::vector<RatC> y(static_cast<size_t>(qspace->dim(n)), RatC());
      kernels::gemv(bigp[static_cast<size_t>(n)], *c, y, kernels::ExecMode::serial);
      bool nz = false;
      for (const auto& x : y) nz = nz || !x.is_zero();
      if (nz) out.at(n) = std::move(y);
    }
    return out;
  };

  auto project_op = [&](const BlockOperator<RatC>& op) {
    BlockOperator<RatC> out(qspace);
    for (int s = 0; s <= N; ++s) {
      out.overflow[static_cast<size_t>(s)] = op.overflow[static_cast<size_t>(s)];
      out.suspect[static_cast<size_t>(s)] = op.suspect[static_cast<size_t>(s)];
      if (qspace->dim(s) == 0) continue;
      for (const auto& e : op.rows[static_cast<size_t>(s)]) {
        if (qspace->dim(e.target) == 0) continue;
        Mat<RatC> bq = kernels::gemm(bigp[static_cast<size_t>(e.target)],
                                     kernels::gemm(e.m, emb[static_cast<size_t>(s)]));
        if (!bq.is_zero()) out.block(s, e.target).add_in_place(bq);
      }
    }
    return out;
  };

  Model q;
  q.name = m.name;
  q.space = qspace;
  q.margin = m.margin;
  q.central_charge = m.central_charge;
  q.simple = true;
  q.vacuum = project_vec(m.vacuum);
  q.l_minus = project_op(m.l_minus);
  q.l_zero = project_op(m.l_zero);
  q.l_plus = project_op(m.l_plus);
  for (const auto& g : m.gens) {
    GeneratorField qg;
    qg.name = g.name;
    qg.dim = g.dim;
    qg.state = project_vec(g.state);
    qg.tower = ModeTower(qspace, g.dim);
    qg.tower.vacuum_field = g.tower.vacuum_field;
    for (int n = -N; n <= N; ++n) qg.tower.slot(n) = project_op(g.tower.slot(n));
    q.gens.push_back(std::move(qg));
  }

  auto qb = std::make_shared<ModelBasis>();
  qb->min_part = m.basis->min_part;
  qb->parts = m.basis->parts;
  qb->index = m.basis->index;
  qb->proj.reserve(static_cast<size_t>(N + 1));
  qb->kept.resize(static_cast<size_t>(N + 1));
  for (int n = 0; n <= N; ++n) {
    qb->proj.push_back(kernels::gemm(bigp[static_cast<size_t>(n)],
                                     m.basis->proj[static_cast<size_t>(n)]));
    for (int j : kept_local[static_cast<size_t>(n)])
      qb->kept[static_cast<size_t>(n)].push_back(
          m.basis->kept[static_cast<size_t>(n)][static_cast<size_t>(j)]);
  }
  q.basis = std::move(qb);
  q.cache = make_tower_cache();
  return q;
}

}  // namespace mcft
