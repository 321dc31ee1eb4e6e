#include "mcft/wightman.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace mcft {

namespace {

constexpr double kPi = std::numbers::pi;

// Gate on the geometric-tail estimate below which a window is considered converged.
constexpr double kRepGate = 1e-9;   // U(gamma) columns
constexpr double kCovGate = 5e-7;   // conjugated-smear comparison

bool weight_diagonal(const BlockOperator<Cplx>& a) {
  for (size_t s = 0; s < a.rows.size(); ++s)
    for (const auto& e : a.rows[s])
      if (e.target != static_cast<int>(s) && !e.m.is_zero()) return false;
  return true;
}

BlockOperator<Cplx> restrict_to(const BlockOperator<Cplx>& a, int cap) {
  BlockOperator<Cplx> out = BlockOperator<Cplx>::zero(a.space);
  for (int s = 0; s <= std::min(cap, a.max_weight()); ++s) {
    for (const auto& e : a.rows[static_cast<size_t>(s)])
      if (e.target <= cap) out.block(s, e.target) = e.m;
    out.overflow[static_cast<size_t>(s)] = a.overflow[static_cast<size_t>(s)];
    out.suspect[static_cast<size_t>(s)] = a.suspect[static_cast<size_t>(s)];
  }
  return out;
}

// Taylor series with scaling and squaring. Weight-block structure is exact: the
// exponential of a weight-diagonal generator stays weight-diagonal.
BlockOperator<Cplx> exp_block(const BlockOperator<Cplx>& a) {
  double nrm = a.inf_norm();
  int sq = 0;
  while (nrm > 0.5 && sq < 60) {
    nrm *= 0.5;
    ++sq;
  }
  BlockOperator<Cplx> b = a;
  b.scale(Cplx(std::ldexp(1.0, -sq), 0));
  BlockOperator<Cplx> sum = BlockOperator<Cplx>::identity(a.space);
  BlockOperator<Cplx> term = BlockOperator<Cplx>::identity(a.space);
  for (int k = 1; k <= 80; ++k) {
    term = compose(b, term);
    term.scale(Cplx(1.0 / k, 0));
    sum += term;
    if (term.inf_norm() < 1e-19 * std::max(1.0, sum.inf_norm())) break;
  }
  for (int i = 0; i < sq; ++i) sum = compose(sum, sum);
  return sum;
}

// Tail estimate for the truncation error at windows <= w from three consecutive
// truncations: differences d1 = |A_{K-2} - A_{K-4}|, d2 = |A_K - A_{K-2}| decay
// geometrically in K, so the remaining tail is about d2 * rho / (1 - rho).
double geometric_tail(double d1, double d2) {
  if (d2 == 0.0) return 0.0;
  if (d1 <= d2) return std::numeric_limits<double>::infinity();
  const double rho = d2 / d1;
  return d2 * rho / (1.0 - rho);
}

void merge_report(AxiomReport& into, const AxiomReport& sub, const std::string& prefix) {
  into.checks += sub.checks;
  if (!sub.pass) into.pass = false;
  for (const auto& f : sub.failures) into.failures.push_back(prefix + f);
}

}  // namespace

SmearedField smear(const Model& m, const GeneratorField& g, const TestFunction& f) {
  SmearedField out;
  out.name = g.name;
  out.dim = g.dim;
  out.f = f;
  out.op = BlockOperator<Cplx>::zero(m.space);
  const int N = m.space->max_weight;
  for (int n = -f.band(); n <= f.band(); ++n) {
    const Cplx c = f.coeff(n);
    if (c == Cplx(0, 0)) continue;
    if (n < -N && !g.tower.vacuum_field) out.clipped = true;
    // out-of-range modes synthesize to zero (with overflow flags for raising modes)
    out.op.axpy(c, promote(g.tower.mode(n)));
  }
  return out;
}

BlockOperator<Cplx> pi_of(const Model& m, const LieElement& x) {
  BlockOperator<Cplx> out = BlockOperator<Cplx>::zero(m.space);
  for (int k = -1; k <= 1; ++k) {
    const Cplx c = x.coeff(k);
    if (c == Cplx(0, 0)) continue;
    out.axpy(c, promote(m.sl2(k)));
  }
  return out;
}

MoebiusRep u_of_gamma(const Model& m, const MoebiusElement& gamma) {
  MoebiusRep rep;
  rep.gamma = gamma;
  const BlockOperator<Cplx> a = pi_of(m, log_moebius(gamma));
  rep.op = exp_block(a);
  const int N = m.space->max_weight;
  if (weight_diagonal(a)) {
    // rotations and the identity: every truncation agrees block for block
    rep.margin = m.margin;
    return rep;
  }
  const BlockOperator<Cplx> u2 = exp_block(restrict_to(a, N - 2));
  const BlockOperator<Cplx> u4 = exp_block(restrict_to(a, N - 4));
  int wstar = 0;
  const int wmax = std::max(0, std::min(m.window(), N - 4));
  for (int w = 0; w <= wmax; ++w) {
    const double d2 = window_deviation(rep.op, u2, w, w);
    const double d1 = window_deviation(u2, u4, w, w);
    if (geometric_tail(d1, d2) >= kRepGate) break;
    wstar = w;
  }
  rep.margin = N - wstar;
  return rep;
}

double covariance_check(const Model& m, const GeneratorField& g, const MoebiusElement& gamma,
                        const TestFunction& f) {
  const int N = m.space->max_weight;
  const BlockOperator<Cplx> a = pi_of(m, log_moebius(gamma));
  const SmearedField sf = smear(m, g, f);

  const int out_band = std::max(2 * m.window(), f.band());
  const BetaResult bf = beta_action_full(g.dim, gamma, f, out_band);
  const BlockOperator<Cplx> rhs = smear(m, g, bf.f).op;

  auto conj_at = [&](int cap) {
    const BlockOperator<Cplx> ar = restrict_to(a, cap);
    BlockOperator<Cplx> neg = ar;
    neg.scale(Cplx(-1, 0));
    return compose(exp_block(ar), compose(restrict_to(sf.op, cap), exp_block(neg)));
  };
  const BlockOperator<Cplx> cn = conj_at(N);
  const BlockOperator<Cplx> c2 = conj_at(N - 2);
  const BlockOperator<Cplx> c4 = conj_at(N - 4);

  // the smeared side is exact per block, so every truncation artifact lives in the
  // conjugation; trust the largest window on which its truncation tail is negligible
  int wstar = 0;
  const int wmax = std::max(0, std::min(m.window() - g.dim, N - 4));
  for (int w = 0; w <= wmax; ++w) {
    const double d2 = window_deviation(cn, c2, w, w);
    const double d1 = window_deviation(c2, c4, w, w);
    if (geometric_tail(d1, d2) >= kCovGate) break;
    wstar = w;
  }
  return window_deviation(cn, rhs, wstar, wstar);
}

bool infinitesimal_covariance_exact(const Model& m, const GeneratorField& g,
                                    const std::array<RatC, 3>& coeff) {
  const int N = m.space->max_weight;
  BlockOperator<RatC> pi = BlockOperator<RatC>::zero(m.space);
  for (int k = -1; k <= 1; ++k)
    if (!coeff[static_cast<size_t>(k + 1)].is_zero())
      pi.axpy(coeff[static_cast<size_t>(k + 1)], m.sl2(k));

  int compared = 0;
  for (int n = -(N - 1); n <= N - 1; ++n) {
    const BlockOperator<RatC> lhs = commutator(pi, g.tower.slot(n));
    BlockOperator<RatC> rhs = BlockOperator<RatC>::zero(m.space);
    for (int k = -1; k <= 1; ++k) {
      const RatC& c = coeff[static_cast<size_t>(k + 1)];
      if (c.is_zero()) continue;
      const long w = static_cast<long>(k) * (g.dim - 1) - n;
      if (w == 0) continue;
      rhs.axpy(c * RatC{Rat(w), Rat(0)}, g.tower.slot(n + k));
    }
    const WindowCompare cmp = compare_on_window(lhs, rhs, m.window());
    if (!cmp.equal) return false;
    compared += cmp.compared_sources;
  }
  return compared > 0;
}

double infinitesimal_covariance(const Model& m, const GeneratorField& g, const LieElement& x,
                                const TestFunction& f) {
  const BlockOperator<Cplx> lhs = commutator(pi_of(m, x), smear(m, g, f).op);
  const TestFunction gfn = x.field_function();
  const TestFunction h =
      Cplx(g.dim - 1, 0) * pointwise_product(gfn.derivative(), f) -
      pointwise_product(gfn, f.derivative());
  const BlockOperator<Cplx> rhs = smear(m, g, h).op;
  const int w = std::max(0, std::min(m.window(), m.space->max_weight - f.band() - 1));
  return window_deviation(lhs, rhs, w, w);
}

ReconstructionInput reconstruction_input(const Model& m) {
  ReconstructionInput in;
  in.space = m.space;
  in.vacuum = m.vacuum;
  const int N = m.space->max_weight;
  for (const auto& g : m.gens) {
    ModeFamily fam;
    fam.name = g.name;
    fam.modes.reserve(static_cast<size_t>(2 * N + 1));
    for (int n = -N; n <= N; ++n) fam.modes.push_back(g.tower.slot(n));
    in.fields.push_back(std::move(fam));
  }
  return in;
}

namespace {

using Letter = std::pair<int, int>;  // (family, shifted mode), modes negative = creation

template <class S>
S coord(const GradedVector<S>& v, int n, int i) {
  const std::vector<S>* c = v.find(n);
  return c ? (*c)[static_cast<size_t>(i)] : S{};
}

struct SpanData {
  // per weight: candidate words (outermost letter first), their vectors, and the
  // column subset chosen as a basis of the weight space
  std::vector<std::vector<std::vector<Letter>>> words;
  std::vector<std::vector<GradedVector<RatC>>> vecs;
  std::vector<std::vector<int>> pivots;
};

GradedVector<RatC> eval_word(const ReconstructionInput& in, const std::vector<Letter>& w) {
  GradedVector<RatC> v = in.vacuum;
  const int N = in.space->max_weight;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    const auto& fam = in.fields[static_cast<size_t>(it->first)];
    v = fam.modes[static_cast<size_t>(it->second + N)].apply(v);
  }
  return v;
}

SpanData build_word_span(const ReconstructionInput& in) {
  const int N = in.space->max_weight;
  SpanData sd;
  sd.words.resize(static_cast<size_t>(N + 1));
  sd.vecs.resize(static_cast<size_t>(N + 1));
  sd.pivots.resize(static_cast<size_t>(N + 1));
  sd.words[0].push_back({});
  sd.vecs[0].push_back(in.vacuum);
  sd.pivots[0].push_back(0);
  for (int s = 1; s <= N; ++s) {
    const int dn = in.space->dim(s);
    if (dn == 0) continue;
    auto& ws = sd.words[static_cast<size_t>(s)];
    auto& vs = sd.vecs[static_cast<size_t>(s)];
    for (int lam = 1; lam <= s; ++lam) {
      const size_t rw = static_cast<size_t>(s - lam);
      for (int pi : sd.pivots[rw]) {
        const auto& prev = sd.words[rw][static_cast<size_t>(pi)];
        for (int fi = 0; fi < static_cast<int>(in.fields.size()); ++fi) {
          // non-increasing letters keep the enumeration monomial-like
          if (!prev.empty() &&
              (lam < -prev.front().second ||
               (lam == -prev.front().second && fi > prev.front().first)))
            continue;
          std::vector<Letter> w;
          w.reserve(prev.size() + 1);
          w.emplace_back(fi, -lam);
          w.insert(w.end(), prev.begin(), prev.end());
          GradedVector<RatC> v =
              in.fields[static_cast<size_t>(fi)].modes[static_cast<size_t>(N - lam)].apply(
                  sd.vecs[rw][static_cast<size_t>(pi)]);
          ws.push_back(std::move(w));
          vs.push_back(std::move(v));
        }
      }
    }
    Mat<RatC> span(dn, static_cast<int>(vs.size()));
    for (int j = 0; j < static_cast<int>(vs.size()); ++j)
      for (int i = 0; i < dn; ++i) span(i, j) = coord(vs[static_cast<size_t>(j)], s, i);
    std::vector<int> piv;
    const int rank = row_reduce_pivots(span, piv);
    if (rank < dn) {
      std::ostringstream os;
      os << "reconstruct_model: mode words span only " << rank << " of " << dn
         << " directions at weight " << s;
      throw std::logic_error(os.str());
    }
    sd.pivots[static_cast<size_t>(s)] = std::move(piv);
  }
  return sd;
}

// Image of a word vector under L_k, computed purely from the mode data through
// [L_k, v_n] = ((d-1)k - n) v_{n+k} and L_k vacuum = 0.
GradedVector<RatC> sl2_image(const ReconstructionInput& in, const std::vector<int>& dims, int k,
                             const std::vector<Letter>& word) {
  GradedVector<RatC> out = GradedVector<RatC>::zero(in.space);
  for (size_t j = 0; j < word.size(); ++j) {
    const auto [fi, n] = word[static_cast<size_t>(j)];
    const long coef = static_cast<long>(k) * (dims[static_cast<size_t>(fi)] - 1) - n;
    if (coef == 0) continue;
    std::vector<Letter> mod = word;
    mod[j].second = n + k;
    GradedVector<RatC> term = eval_word(in, mod);
    term.scale(RatC{Rat(coef), Rat(0)});
    out += term;
  }
  return out;
}

BlockOperator<RatC> solve_sl2(const ReconstructionInput& in, const SpanData& sd,
                              const std::vector<int>& dims, int k) {
  const int N = in.space->max_weight;
  BlockOperator<RatC> out = BlockOperator<RatC>::zero(in.space);
  for (int s = 1; s <= N; ++s) {
    const int dn = in.space->dim(s);
    if (dn == 0) continue;
    const int t = s - k;
    if (t > N) {
      out.overflow[static_cast<size_t>(s)] = 1;
      continue;
    }
    if (t < 0) continue;
    const int dt = in.space->dim(t);
    const auto& vs = sd.vecs[static_cast<size_t>(s)];
    const auto& ws = sd.words[static_cast<size_t>(s)];
    const auto& piv = sd.pivots[static_cast<size_t>(s)];
    std::vector<GradedVector<RatC>> images;
    images.reserve(ws.size());
    for (const auto& w : ws) images.push_back(sl2_image(in, dims, k, w));

    Mat<RatC> sb(dn, dn), tb(dt == 0 ? 1 : dt, dn);
    for (int j = 0; j < dn; ++j) {
      const auto& v = vs[static_cast<size_t>(piv[static_cast<size_t>(j)])];
      const auto& im = images[static_cast<size_t>(piv[static_cast<size_t>(j)])];
      for (int i = 0; i < dn; ++i) sb(i, j) = coord(v, s, i);
      for (int i = 0; i < dt; ++i) tb(i, j) = coord(im, t, i);
    }
    if (dt == 0) continue;
    const Mat<RatC> xt = solve_exact_mat(sb.transposed(), tb.transposed());
    Mat<RatC> x = xt.transposed();
    // remaining words are determined by linearity; any mismatch means the mode data
    // does not satisfy the covariance it was solved from
    for (size_t j = 0; j < vs.size(); ++j) {
      std::vector<RatC> lhs(static_cast<size_t>(dt), RatC{});
      for (int i = 0; i < dt; ++i)
        for (int q = 0; q < dn; ++q) lhs[static_cast<size_t>(i)] += x(i, q) * coord(vs[j], s, q);
      for (int i = 0; i < dt; ++i)
        if (!(lhs[static_cast<size_t>(i)] == coord(images[j], t, i)))
          throw std::logic_error("reconstruct_model: inconsistent covariance data");
    }
    if (!x.is_zero()) out.block(s, t) = std::move(x);
  }
  return out;
}

}  // namespace

Model reconstruct_model(const ReconstructionInput& in, int margin) {
  if (!in.space) throw std::invalid_argument("reconstruct_model: empty space");
  const int N = in.space->max_weight;
  if (margin < 1 || margin > N) throw std::invalid_argument("reconstruct_model: bad margin");

  Model out;
  out.name = "reconstructed";
  out.space = in.space;
  out.margin = margin;
  out.vacuum = in.vacuum;

  std::vector<int> dims;
  for (const auto& fam : in.fields) {
    if (static_cast<int>(fam.modes.size()) != 2 * N + 1)
      throw std::invalid_argument("reconstruct_model: mode family must cover -N..N");
    int d = -1;
    GradedVector<RatC> state = GradedVector<RatC>::zero(in.space);
    for (int n = 0; n <= N; ++n) {
      GradedVector<RatC> v = fam.modes[static_cast<size_t>(N - n)].apply(in.vacuum);
      if (!v.is_zero()) {
        d = n;
        state = std::move(v);
        break;
      }
    }
    if (d < 0)
      throw DegenerateFieldError("reconstruct_model: field " + fam.name +
                                 " annihilates the vacuum through every stored mode");
    GeneratorField g;
    g.name = fam.name;
    g.dim = d;
    g.state = std::move(state);
    g.tower = ModeTower(in.space, d);
    g.tower.vacuum_field = (d == 0);
    for (int n = -N; n <= N; ++n) g.tower.slot(n) = fam.modes[static_cast<size_t>(n + N)];
    dims.push_back(d);
    out.gens.push_back(std::move(g));
  }

  out.l_zero = BlockOperator<RatC>::zero(in.space);
  for (int s = 1; s <= N; ++s) {
    if (in.space->dim(s) == 0) continue;
    Mat<RatC> blk = Mat<RatC>::identity(in.space->dim(s));
    blk.scale(RatC{Rat(s), Rat(0)});
    out.l_zero.block(s, s) = std::move(blk);
  }
  const SpanData sd = build_word_span(in);
  out.l_minus = solve_sl2(in, sd, dims, -1);
  out.l_plus = solve_sl2(in, sd, dims, +1);
  return out;
}

AxiomReport roundtrip_check(const Model& original, const Model& rebuilt) {
  AxiomReport r;
  const int N = original.space->max_weight;
  r.record(*original.space == *rebuilt.space, "graded spaces agree");
  r.record(original.vacuum.equals_exact(rebuilt.vacuum), "vacuum preserved");
  r.record(original.gens.size() == rebuilt.gens.size(), "generator count preserved");
  if (!r.pass) return r;

  static const char* kSl2Name[3] = {"L_{-1}", "L_0", "L_1"};
  for (int k = -1; k <= 1; ++k) {
    const WindowCompare cmp = compare_on_window(original.sl2(k), rebuilt.sl2(k), N, N);
    r.record(cmp.equal && cmp.skipped_sources == 0,
             std::string(kSl2Name[k + 1]) + " intertwined exactly");
  }

  for (size_t gi = 0; gi < original.gens.size(); ++gi) {
    const auto& a = original.gens[gi];
    const auto& b = rebuilt.gens[gi];
    r.record(a.name == b.name, a.name + ": name preserved");
    r.record(a.dim == b.dim, a.name + ": dimension recovered");
    r.record(a.state.equals_exact(b.state), a.name + ": state recovered");
    if (a.dim != b.dim) continue;
    bool exact = true;
    for (int n = -N; n <= N; ++n) {
      const WindowCompare cmp = compare_on_window(a.tower.slot(n), b.tower.slot(n), N, N);
      if (!cmp.equal || cmp.skipped_sources != 0) exact = false;
    }
    if (exact) {
      r.record(true, a.name + ": tower equals exactly");
    } else {
      double worst = 0.0;
      for (int n = -N; n <= N; ++n)
        worst = std::max(worst, window_deviation(promote(a.tower.slot(n)),
                                                 promote(b.tower.slot(n)), N, N));
      r.record(worst < 1e-10, a.name + ": tower within 1e-10 (float path)");
    }
  }

  merge_report(r, vacuum_axiom_check(rebuilt), "rebuilt: ");
  for (const auto& g : rebuilt.gens) {
    merge_report(r, creation_check(rebuilt, g), "rebuilt " + g.name + ": ");
    merge_report(r, mobius_axiom_check(rebuilt, g), "rebuilt " + g.name + ": ");
  }
  return r;
}

CorrelatorValue correlator(const Model& m, const GradedCovector<Cplx>& lambda,
                           const std::vector<std::pair<std::string, TestFunction>>& insertions) {
  for (int w = m.window() + 1; w <= m.space->max_weight; ++w)
    for (const Cplx& c : lambda.comp[static_cast<size_t>(w)])
      if (c != Cplx(0, 0))
        throw std::invalid_argument("correlator: covector supported above the trusted window");
  GradedVector<Cplx> v = promote(m.vacuum);
  for (auto it = insertions.rbegin(); it != insertions.rend(); ++it)
    v = smear(m, m.gen(it->first), it->second).op.apply(v);
  const auto p = lambda.pair(v);
  return {p.value, p.conclusive};
}

// Exact rank of the span of ordered creation monomials with at most k_max factors and
// weight at most n_w. Any product of k_max smeared letters applied to the vacuum lies
// in this span (annihilation and diagonal modes strictly shorten words), so it is the
// rank a perfect-precision arc span must reach.
int creation_span_dim(const Model& m, int k_max, int n_w) {
  struct Node {
    GradedVector<RatC> v;
    int weight;
    int head_a;
    int head_gi;
  };
  std::vector<std::vector<GradedVector<RatC>>> per(static_cast<size_t>(n_w + 1));
  per[0].push_back(m.vacuum);
  const int big = n_w + 1;
  std::vector<Node> layer{{m.vacuum, 0, big, static_cast<int>(m.gens.size())}};
  for (int k = 1; k <= k_max; ++k) {
    std::vector<Node> next;
    for (const auto& nd : layer)
      for (int gi = 0; gi < static_cast<int>(m.gens.size()); ++gi) {
        const auto& g = m.gens[static_cast<size_t>(gi)];
        for (int a = 1; a <= n_w - nd.weight; ++a) {
          if (a > nd.head_a || (a == nd.head_a && gi > nd.head_gi)) continue;
          GradedVector<RatC> v = g.tower.slot(-a).apply(nd.v);
          if (v.is_zero()) continue;
          per[static_cast<size_t>(nd.weight + a)].push_back(v);
          next.push_back({std::move(v), nd.weight + a, a, gi});
        }
      }
    layer = std::move(next);
  }
  int total = 0;
  for (int w = 0; w <= n_w; ++w) {
    const int d = m.space->dim(w);
    const auto& vs = per[static_cast<size_t>(w)];
    if (d == 0 || vs.empty()) continue;
    Mat<RatC> cols(d, static_cast<int>(vs.size()));
    for (int j = 0; j < cols.cols(); ++j)
      for (int i = 0; i < d; ++i) cols(i, j) = coord(vs[static_cast<size_t>(j)], w, i);
    total += row_reduce_rank(cols);
  }
  return total;
}

ReehSchliederReport reeh_schlieder_rank(const Model& m, double theta1, double theta2, int band,
                                        int k_max, int n_w) {
  if (n_w < 0 || n_w > m.window())
    throw std::invalid_argument("reeh_schlieder_rank: weight cutoff outside the trusted window");
  const double len = theta2 - theta1;
  if (!(len > 0.0) || len > 2 * kPi)
    throw std::invalid_argument("reeh_schlieder_rank: empty interval");

  // dictionary: raised-cosine bumps at 8 interior centers, two widths, supported in
  // the open interval, then projected to the band
  std::vector<TestFunction> dict;
  const int samples = std::max(8 * band, 1024);
  for (int ci = 0; ci < 8; ++ci) {
    const double c = theta1 + (ci + 1) * len / 9.0;
    for (const double w : {len / 9.0, len / 18.0}) {
      std::vector<Cplx> vals(static_cast<size_t>(samples));
      for (int j = 0; j < samples; ++j) {
        const double th = 2 * kPi * j / samples;
        const double dd = std::remainder(th - c, 2 * kPi);
        vals[static_cast<size_t>(j)] =
            std::abs(dd) <= w ? Cplx(0.5 * (1.0 + std::cos(kPi * dd / w)), 0) : Cplx(0, 0);
      }
      dict.push_back(from_samples(vals, band));
    }
  }

  std::vector<BlockOperator<Cplx>> letters;
  for (const auto& g : m.gens)
    for (const auto& f : dict) letters.push_back(smear(m, g, f).op);

  int rows = 0;
  std::vector<int> offs(static_cast<size_t>(n_w + 1), 0);
  for (int w = 0; w <= n_w; ++w) {
    offs[static_cast<size_t>(w)] = rows;
    rows += m.space->dim(w);
  }

  size_t total_words = 1, layer_words = 1;
  for (int k = 1; k <= k_max; ++k) {
    layer_words *= letters.size();
    total_words += layer_words;
  }

  Eigen::MatrixXcd mat(rows, static_cast<Eigen::Index>(total_words));
  Eigen::Index col = 0;
  const auto push_col = [&](const GradedVector<Cplx>& v) {
    for (int w = 0; w <= n_w; ++w)
      for (int i = 0; i < m.space->dim(w); ++i)
        mat(offs[static_cast<size_t>(w)] + i, col) = coord(v, w, i);
    const double nn = mat.col(col).norm();
    if (nn > 0) mat.col(col) /= nn;
    ++col;
  };

  // Stream word columns as they are produced; only the previous layer is retained.
  std::vector<GradedVector<Cplx>> layer{promote(m.vacuum)};
  push_col(layer[0]);
  for (int k = 1; k <= k_max; ++k) {
    const bool last_layer = (k == k_max);
    std::vector<GradedVector<Cplx>> next;
    if (!last_layer) next.reserve(layer.size() * letters.size());
    for (const auto& v : layer)
      for (const auto& op : letters) {
        GradedVector<Cplx> wv = op.apply(v);
        push_col(wv);
        if (!last_layer) next.push_back(std::move(wv));
      }
    layer = std::move(next);
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(mat.adjoint());
  const auto& sv = svd.singularValues();
  ReehSchliederReport rep;
  rep.expected_dim = creation_span_dim(m, k_max, n_w);
  rep.space_dim = rows;
  rep.words = static_cast<int>(total_words);
  if (sv.size() == 0 || sv(0) <= 0.0) return rep;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-8 * sv(0)) ++rep.rank;
  if (rep.expected_dim > 0 && rep.expected_dim <= sv.size())
    rep.sigma_ratio = sv(rep.expected_dim - 1) / sv(0);
  return rep;
}

OrderEstimate order_estimate(const Model& m, const ModeTower& tower, const GradedVector<RatC>& u,
                             const GradedCovector<RatC>& udual, int mode_abs) {
  (void)m;
  OrderEstimate out;
  std::vector<std::pair<double, double>> pts;  // (log|mode|, log|value|)
  for (int mm = -mode_abs; mm <= mode_abs; ++mm) {
    const auto p = udual.pair(tower.mode(mm).apply(u));
    if (!p.conclusive) continue;
    const double av = std::abs(to_cplx(p.value));
    if (av == 0.0) continue;
    ++out.points;
    if (mm != 0) pts.emplace_back(std::log(std::abs(static_cast<double>(mm))), std::log(av));
  }
  if (out.points == 0) {
    out.degenerate = true;  // nothing to fit
    return out;
  }
  if (pts.empty()) return out;  // only the weight-preserving mode: degree 0
  double xmin = pts[0].first, xmax = pts[0].first;
  for (const auto& [x, y] : pts) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
  }
  if (pts.size() < 2 || xmax == xmin) {
    out.degenerate = true;
    return out;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icept = (sy - slope * sx) / n;
  out.degree = slope;
  for (const auto& [x, y] : pts)
    out.max_residual = std::max(out.max_residual, std::abs(y - (icept + slope * x)));
  return out;
}

}  // namespace mcft
