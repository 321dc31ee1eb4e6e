#include "mcft/suites.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "mcft/forms.hpp"
#include "mcft/wightman.hpp"

namespace mcft {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

const char* status_str(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    default: return "inconclusive";
  }
}

CheckResult from_axiom_report(const std::string& name, const std::string& anchor,
                              const AxiomReport& r, int window, double ms) {
  CheckResult c;
  c.name = name;
  c.anchor = anchor;
  c.status = r.pass ? CheckStatus::pass : CheckStatus::fail;
  c.window = window;
  c.params["subchecks"] = r.checks;
  if (!r.failures.empty()) c.params["failures"] = r.failures;
  c.runtime_ms = ms;
  return c;
}

CheckResult deviation_check(const std::string& name, const std::string& anchor, double dev,
                            double tol, int window, double ms) {
  CheckResult c;
  c.name = name;
  c.anchor = anchor;
  c.status = dev <= tol ? CheckStatus::pass : CheckStatus::fail;
  c.deviation = dev;
  c.window = window;
  c.params["tolerance"] = tol;
  c.runtime_ms = ms;
  return c;
}

bool mats_equal(const Mat<RatC>& a, const Mat<RatC>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

TestFunction random_function(std::mt19937_64& rng, int band) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TestFunction f(band);
  for (int n = -band; n <= band; ++n)
    f.set_coeff(n, Cplx(u(rng), u(rng)) / (1.0 + static_cast<double>(n) * n));
  return f;
}

// Raised-cosine bump supported on (center - width, center + width), sampled on the DFT
// grid and projected to the band. The defining samples vanish exactly off the support.
TestFunction bump_function(double center, double width, int band) {
  const int samples = std::max(8 * band, 1024);
  std::vector<Cplx> vals(static_cast<size_t>(samples));
  for (int j = 0; j < samples; ++j) {
    double t = 2.0 * kPi * j / samples - center;
    t = std::remainder(t, 2.0 * kPi);
    vals[static_cast<size_t>(j)] =
        std::abs(t) < width ? Cplx(0.5 * (1.0 + std::cos(kPi * t / width)), 0) : Cplx(0, 0);
  }
  return from_samples(vals, band);
}

GradedCovector<Cplx> vacuum_dual(const Model& m) {
  return promote(GradedCovector<RatC>::dual_basis(m.space, 0, 0));
}

// ---------------------------------------------------------------- axioms suite

void suite_axioms(const Model& m, const RunConfig& cfg, std::vector<CheckResult>& out) {
  std::mt19937_64 rng(cfg.seed * 1000003ULL + 1);
  const int N = m.space->max_weight;
  const int W = m.window();

  {
    auto t0 = Clock::now();
    out.push_back(from_axiom_report("vacuum module structure", "VA1 grading / VA3 vacuum",
                                    vacuum_axiom_check(m), W, ms_since(t0)));
  }
  for (const auto& g : m.gens) {
    auto t0 = Clock::now();
    out.push_back(from_axiom_report("creation property: " + g.name, "VA2 creation",
                                    creation_check(m, g), W, ms_since(t0)));
  }
  for (const auto& g : m.gens) {
    auto t0 = Clock::now();
    out.push_back(from_axiom_report("quasiprimary covariance: " + g.name, "VA4 Moebius covariance",
                                    mobius_axiom_check(m, g), W, ms_since(t0)));
  }

  // Borcherds commutator formula on a mode grid, exact.
  for (const auto& u : m.gens)
    for (const auto& v : m.gens) {
      auto t0 = Clock::now();
      CheckResult c;
      c.name = "borcherds commutator: " + u.name + "," + v.name;
      c.anchor = "Borcherds commutator formula";
      c.window = W;
      int compared = 0;
      bool ok = true;
      for (int p = -2; p <= 2; ++p)
        for (int q = -2; q <= 2; ++q) {
          CommutatorCheck cc = borcherds_commutator(m, u, v, p, q);
          ok = ok && cc.cmp.equal;
          compared += cc.cmp.compared_sources;
          c.deviation = std::max(c.deviation, cc.cmp.max_dev);
        }
      c.params["mode_grid"] = "|p|,|q| <= 2";
      c.params["compared_sources"] = compared;
      c.status = !ok ? CheckStatus::fail
                     : (compared == 0 ? CheckStatus::inconclusive : CheckStatus::pass);
      c.runtime_ms = ms_since(t0);
      out.push_back(std::move(c));
    }

  // Mode-level locality: orders up to d_u + d_v must kill the weighted commutator.
  for (size_t i = 0; i < m.gens.size(); ++i)
    for (size_t j = i; j < m.gens.size(); ++j) {
      const auto& u = m.gens[i];
      const auto& v = m.gens[j];
      auto t0 = Clock::now();
      const int bound = u.dim + v.dim;
      LocalityResult lr = locality_order_check(m, u, v, bound, bound + 1, bound + 1);
      CheckResult c;
      c.name = "locality order: " + u.name + "," + v.name;
      c.anchor = "W2 locality (mode level)";
      c.window = W;
      c.params["min_order"] = lr.min_order;
      c.params["order_bound"] = bound;
      c.status = !lr.conclusive ? CheckStatus::inconclusive
                 : (lr.min_order >= 0 && lr.min_order <= bound) ? CheckStatus::pass
                                                                : CheckStatus::fail;
      c.runtime_ms = ms_since(t0);
      out.push_back(std::move(c));
    }

  // Exact commutator form of covariance for the three rational sl2 directions.
  for (const auto& g : m.gens) {
    auto t0 = Clock::now();
    bool ok = true;
    const RatC one{Rat(1), Rat(0)};
    const RatC zero{Rat(0), Rat(0)};
    ok = ok && infinitesimal_covariance_exact(m, g, {one, zero, zero});
    ok = ok && infinitesimal_covariance_exact(m, g, {zero, one, zero});
    ok = ok && infinitesimal_covariance_exact(m, g, {zero, zero, one});
    CheckResult c;
    c.name = "infinitesimal covariance (exact): " + g.name;
    c.anchor = "W1 infinitesimal covariance";
    c.window = W;
    c.status = ok ? CheckStatus::pass : CheckStatus::fail;
    c.runtime_ms = ms_since(t0);
    out.push_back(std::move(c));
  }

  // Float form against the transformed test function, random band-limited f.
  for (const auto& g : m.gens) {
    auto t0 = Clock::now();
    const TestFunction f = random_function(rng, 3);
    double dev = 0.0;
    for (const LieElement& x : {LieElement::rotation_generator(), LieElement::boost_x(),
                                LieElement::boost_y()})
      dev = std::max(dev, infinitesimal_covariance(m, g, x, f));
    out.push_back(deviation_check("infinitesimal covariance (float): " + g.name,
                                  "W1 infinitesimal covariance", dev, cfg.float_tol, W,
                                  ms_since(t0)));
  }

  // Rotations: both sides are exactly diagonal phase actions.
  for (const auto& g : m.gens) {
    auto t0 = Clock::now();
    double dev = 0.0;
    for (double phi : {0.35, 2.1})
      for (int n : {-2, 0, 2})
        dev = std::max(dev,
                       covariance_check(m, g, MoebiusElement::rotation(phi), TestFunction::basis(n)));
    out.push_back(deviation_check("rotation covariance: " + g.name, "W1 Moebius covariance", dev,
                                  cfg.float_tol, W, ms_since(t0)));
  }

  // Hyperbolic directions at t = 0.1 plus one seeded composite element.
  for (const auto& g : m.gens) {
    auto t0 = Clock::now();
    double dev = 0.0;
    dev = std::max(dev, covariance_check(m, g, exp_lie(LieElement::boost_x(), 0.1),
                                         TestFunction::basis(1)));
    dev = std::max(dev, covariance_check(m, g, exp_lie(LieElement::boost_y(), 0.1),
                                         TestFunction::basis(1)));
    out.push_back(deviation_check("boost covariance: " + g.name, "W1 Moebius covariance", dev,
                                  cfg.cov_tol, W, ms_since(t0)));
  }
  {
    auto t0 = Clock::now();
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    const MoebiusElement gamma =
        compose(compose(exp_lie(LieElement::boost_x(), u(rng)), exp_lie(LieElement::boost_y(), u(rng))),
                MoebiusElement::rotation(u(rng) * 5.0));
    const TestFunction f = random_function(rng, 2);
    double dev = 0.0;
    for (const auto& g : m.gens) dev = std::max(dev, covariance_check(m, g, gamma, f));
    out.push_back(deviation_check("covariance, seeded composite element", "W1 Moebius covariance",
                                  dev, cfg.cov_tol, W, ms_since(t0)));
  }

  // Group law of the truncated representation on the trusted window.
  {
    auto t0 = Clock::now();
    std::uniform_real_distribution<double> u(-0.03, 0.03);
    double dev = 0.0;
    for (int trial = 0; trial < 2; ++trial) {
      const MoebiusElement g1 = exp_lie(LieElement::boost_x(), trial == 0 ? 0.02 : u(rng));
      const MoebiusElement g2 = exp_lie(LieElement::boost_y(), trial == 0 ? 0.03 : u(rng));
      const MoebiusRep r1 = u_of_gamma(m, g1);
      const MoebiusRep r2 = u_of_gamma(m, g2);
      const MoebiusRep r12 = u_of_gamma(m, compose(g1, g2));
      dev = std::max(dev, window_deviation(compose(r1.op, r2.op), r12.op, W));
    }
    out.push_back(
        deviation_check("representation group law", "W1 group law", dev, cfg.group_tol, W,
                        ms_since(t0)));
  }

  // U(gamma) vacuum = vacuum; exact zero columns make this hold to round-off.
  {
    auto t0 = Clock::now();
    std::uniform_real_distribution<double> u(-0.12, 0.12);
    const GradedVector<Cplx> vac = promote(m.vacuum);
    double dev = 0.0;
    for (const MoebiusElement& gamma :
         {MoebiusElement::rotation(0.7), exp_lie(LieElement::boost_x(), 0.1),
          exp_lie(LieElement::boost_y(), 0.15),
          compose(exp_lie(LieElement::boost_x(), u(rng)), MoebiusElement::rotation(u(rng)))})
      dev = std::max(dev, vector_deviation(u_of_gamma(m, gamma).op.apply(vac), vac, N));
    out.push_back(
        deviation_check("vacuum invariance", "W4 vacuum invariance", dev, cfg.float_tol, N,
                        ms_since(t0)));
  }

  // Spectrum condition: L_0 blocks are exactly s * id, nothing off-diagonal, no flags.
  {
    auto t0 = Clock::now();
    bool ok = true;
    for (int s = 0; s <= N && ok; ++s) {
      ok = ok && !m.l_zero.overflow[static_cast<size_t>(s)] && !m.l_zero.suspect[static_cast<size_t>(s)];
      for (const auto& e : m.l_zero.rows[static_cast<size_t>(s)])
        if (e.target != s) ok = ok && e.m.is_zero();
      if (s >= 1 && m.space->dim(s) > 0) {
        const Mat<RatC>* b = m.l_zero.find_block(s, s);
        Mat<RatC> want = Mat<RatC>::identity(m.space->dim(s));
        want.scale(RatC{Rat(s), Rat(0)});
        ok = ok && b && mats_equal(*b, want);
      }
    }
    CheckResult c;
    c.name = "L0 spectrum is {0..N}";
    c.anchor = "W3 spectrum condition";
    c.status = ok ? CheckStatus::pass : CheckStatus::fail;
    c.window = N;
    c.params["dims"] = m.space->dims;
    c.runtime_ms = ms_since(t0);
    out.push_back(std::move(c));
  }

  // Cyclicity: generator-mode monomials span every weight, exact rank.
  {
    auto t0 = Clock::now();
    CyclicityReport cr = cyclic_span_check(m);
    CheckResult c;
    c.name = "vacuum cyclicity (monomial span)";
    c.anchor = "W4 vacuum cyclicity";
    c.status = cr.full_rank ? CheckStatus::pass : CheckStatus::fail;
    c.window = N;
    c.params["ranks"] = cr.ranks;
    c.runtime_ms = ms_since(t0);
    out.push_back(std::move(c));
  }

  // Smeared locality leakage for disjointly supported bumps: band-limiting spreads the
  // supports, so this is reported, not asserted.
  {
    auto t0 = Clock::now();
    const TestFunction f = bump_function(0.9, 0.55, cfg.band);
    const TestFunction h = bump_function(0.9 + kPi, 0.55, cfg.band);
    const auto& g = m.gens.front();
    const auto a = smear(m, g, f).op;
    const auto b = smear(m, g, h).op;
    CheckResult c;
    c.name = "smeared locality leakage";
    c.anchor = "W2 locality (smeared)";
    c.status = CheckStatus::inconclusive;
    c.deviation = window_deviation(compose(a, b), compose(b, a), W);
    c.window = W;
    c.params["band"] = cfg.band;
    c.params["note"] = "commutator of disjointly supported bumps after band projection";
    c.runtime_ms = ms_since(t0);
    out.push_back(std::move(c));
  }
}

// ------------------------------------------------------------------ gram suite

void suite_gram(const Model& m, const RunConfig& cfg, std::vector<CheckResult>& out) {
  const int N = m.space->max_weight;

  auto t0 = Clock::now();
  const GramTower bil = build_invariant_form(m, FormKind::bilinear);
  out.push_back(from_axiom_report("bilinear form adjunction", "invariant bilinear form",
                                  invariance_check(m, bil, cfg.float_tol, cfg.group_tol), m.window(),
                                  ms_since(t0)));

  {
    t0 = Clock::now();
    bool sym = true;
    for (int n = 0; n <= N; ++n) sym = sym && mats_equal(bil.at(n), bil.at(n).transposed());
    CheckResult c;
    c.name = "bilinear gram symmetry";
    c.anchor = "invariant bilinear form";
    c.status = sym ? CheckStatus::pass : CheckStatus::fail;
    c.window = N;
    c.runtime_ms = ms_since(t0);
    out.push_back(std::move(c));
  }

  // Involution signs (-1)^dim make the canonical sesquilinear pairing positive where
  // the model is unitary.
  std::vector<Rat> signs;
  for (const auto& g : m.gens) signs.push_back(g.dim % 2 == 0 ? Rat(1) : Rat(-1));
  t0 = Clock::now();
  const Involution theta = build_involution(m, signs);
  const GramTower sesq = build_invariant_form(m, FormKind::sesquilinear,
                                              RatC{Rat(1), Rat(0)}, &theta);
  out.push_back(from_axiom_report("sesquilinear form adjunction", "invariant sesquilinear form",
                                  invariance_check(m, sesq, cfg.float_tol, cfg.group_tol),
                                  m.window(), ms_since(t0)));

  {
    t0 = Clock::now();
    bool herm = true;
    for (int n = 0; n <= N; ++n)
      herm = herm && mats_equal(sesq.at(n), sesq.at(n).transposed().conjugated());
    CheckResult c;
    c.name = "sesquilinear gram hermitian";
    c.anchor = "invariant sesquilinear form";
    c.status = herm ? CheckStatus::pass : CheckStatus::fail;
    c.window = N;
    c.runtime_ms = ms_since(t0);
    out.push_back(std::move(c));
  }

  {
    t0 = Clock::now();
    InvolutiveReport ir = involutive_structure_check(m, theta, sesq);
    out.push_back(from_axiom_report("involutive structure", "involutive/unitary structure",
                                    ir.axioms, m.window(), ms_since(t0)));
    CheckResult c;
    c.name = "unitarity verdict";
    c.anchor = "unitarity (positive definiteness)";
    c.status = ir.unitarity.normalized ? CheckStatus::pass : CheckStatus::fail;
    c.window = N;
    c.params = unitarity_to_json(ir.unitarity);
    c.runtime_ms = ms_since(t0);
    out.push_back(std::move(c));
  }

  // Level data: exact diagonal entries at low weights and the kernel dimensions of the
  // bilinear Grams (the radical the simple quotient removes).
  {
    t0 = Clock::now();
    CheckResult c;
    c.name = "gram level data";
    c.anchor = "invariant bilinear form";
    c.status = CheckStatus::pass;
    c.window = N;
    Json diag = Json::object();
    for (int n = 0; n <= std::min(N, 4); ++n) {
      Json d = Json::array();
      for (int i = 0; i < m.space->dim(n); ++i) d.push_back(bil.at(n)(i, i).str());
      diag[std::to_string(n)] = std::move(d);
    }
    c.params["diagonal"] = std::move(diag);
    std::vector<int> kdims;
    for (const auto& kb : radical_basis(bil)) kdims.push_back(kb.cols());
    c.params["kernel_dims"] = kdims;
    c.runtime_ms = ms_since(t0);
    out.push_back(std::move(c));
  }

  // Opposite-word evaluation agrees with the direct Gram pairing on generator states.
  for (const auto& g : m.gens) {
    t0 = Clock::now();
    const std::vector<std::pair<std::string, int>> word{{g.name, -g.dim}};
    const RatC via_words = pair_mode_words(m, bil, word, word);
    const RatC direct = pair_vectors(bil, g.state, g.state);
    CheckResult c;
    c.name = "mode-word pairing: " + g.name;
    c.anchor = "invariant bilinear form";
    c.status = via_words == direct ? CheckStatus::pass : CheckStatus::fail;
    c.window = m.window();
    c.params["value"] = direct.str();
    c.runtime_ms = ms_since(t0);
    out.push_back(std::move(c));
  }
}

// ------------------------------------------------------------- roundtrip suite

void suite_roundtrip(const Model& m, const RunConfig& cfg, std::vector<CheckResult>& out) {
  (void)cfg;
  auto t0 = Clock::now();
  try {
    const ReconstructionInput in = reconstruction_input(m);
    const Model rebuilt = reconstruct_model(in, m.margin);
    out.push_back(from_axiom_report("round trip through smeared fields", "round-trip isomorphism",
                                    roundtrip_check(m, rebuilt), m.window(), ms_since(t0)));
  } catch (const std::exception& e) {
    CheckResult c;
    c.name = "round trip through smeared fields";
    c.anchor = "round-trip isomorphism";
    c.status = CheckStatus::fail;
    c.params["error"] = e.what();
    c.runtime_ms = ms_since(t0);
    out.push_back(std::move(c));
  }
}

// ----------------------------------------------------------- correlators suite

void suite_correlators(const Model& m, const RunConfig& cfg, std::vector<CheckResult>& out,
                       std::vector<CorrelatorRow>& rows) {
  std::mt19937_64 rng(cfg.seed * 1000003ULL + 4);
  const int N = m.space->max_weight;
  const int W = m.window();
  const GradedCovector<Cplx> lam = vacuum_dual(m);

  auto emit = [&](const std::vector<std::pair<std::string, TestFunction>>& ins) {
    CorrelatorValue v = correlator(m, lam, ins);
    CorrelatorRow r;
    r.k = static_cast<int>(ins.size());
    for (size_t i = 0; i < ins.size(); ++i) {
      if (i) {
        r.fields += ';';
        r.functions += ';';
      }
      r.fields += ins[i].first;
      r.functions += describe(ins[i].second);
    }
    r.value = v.value;
    rows.push_back(r);
    return v;
  };

  {
    auto t0 = Clock::now();
    CorrelatorValue v0 = emit({});
    CheckResult c;
    c.name = "vacuum normalization";
    c.anchor = "correlator";
    c.status = (v0.value == Cplx(1, 0) && v0.conclusive) ? CheckStatus::pass : CheckStatus::fail;
    c.deviation = std::abs(v0.value - Cplx(1, 0));
    c.window = W;
    c.runtime_ms = ms_since(t0);
    out.push_back(std::move(c));
  }

  // Two-point rows, cross-checked against the exact mode computation.
  {
    auto t0 = Clock::now();
    double dev = 0.0;
    bool conclusive = true;
    const GradedCovector<RatC> lam_exact = GradedCovector<RatC>::dual_basis(m.space, 0, 0);
    for (const auto& g : m.gens)
      for (int n = 1; n <= std::min(3, W); ++n) {
        CorrelatorValue v =
            emit({{g.name, TestFunction::basis(n)}, {g.name, TestFunction::basis(-n)}});
        conclusive = conclusive && v.conclusive;
        const auto exact =
            lam_exact.pair(g.tower.mode(n).apply(g.tower.mode(-n).apply(m.vacuum)));
        dev = std::max(dev, std::abs(v.value - to_cplx(exact.value)));
      }
    CheckResult c = deviation_check("two-point values match exact modes", "correlator", dev,
                                    1e-12, W, ms_since(t0));
    if (!conclusive) c.status = CheckStatus::inconclusive;
    out.push_back(std::move(c));
  }

  if (W >= 2) {
    const auto& g = m.gens.front();
    emit({{g.name, TestFunction::basis(1)},
          {g.name, TestFunction::basis(1)},
          {g.name, TestFunction::basis(-1)},
          {g.name, TestFunction::basis(-1)}});
  }

  // Multilinearity in the first slot.
  {
    auto t0 = Clock::now();
    const auto& g = m.gens.front();
    const TestFunction f1 = random_function(rng, 3);
    const TestFunction f2 = random_function(rng, 3);
    const TestFunction h = random_function(rng, 3);
    const Cplx a(0.3, 0.7), b(-1.25, 0.5);
    const Cplx lhs = correlator(m, lam, {{g.name, a * f1 + b * f2}, {g.name, h}}).value;
    const Cplx rhs = a * correlator(m, lam, {{g.name, f1}, {g.name, h}}).value +
                     b * correlator(m, lam, {{g.name, f2}, {g.name, h}}).value;
    out.push_back(deviation_check("correlator multilinearity", "correlator", std::abs(lhs - rhs),
                                  1e-12, W, ms_since(t0)));
  }

  // Triangle-inequality growth bound: measure the basis-correlator grid, then check
  // band-limited pairs against it. The Sobolev ratio is reported alongside.
  {
    auto t0 = Clock::now();
    const auto& g = m.gens.front();
    const int B = std::min(cfg.band, W);
    double grid_max = 0.0;
    std::vector<std::vector<Cplx>> grid(static_cast<size_t>(2 * B + 1),
                                        std::vector<Cplx>(static_cast<size_t>(2 * B + 1)));
    for (int n = -B; n <= B; ++n)
      for (int k = -B; k <= B; ++k) {
        const Cplx v =
            correlator(m, lam,
                       {{g.name, TestFunction::basis(n)}, {g.name, TestFunction::basis(k)}})
                .value;
        grid[static_cast<size_t>(n + B)][static_cast<size_t>(k + B)] = v;
        grid_max = std::max(grid_max, std::abs(v));
      }
    double violation = 0.0;
    double sobolev_ratio = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      const TestFunction f = random_function(rng, B);
      const TestFunction h = random_function(rng, B);
      const Cplx v = emit({{g.name, f}, {g.name, h}}).value;
      double bound = 0.0;
      for (int n = -B; n <= B; ++n)
        for (int k = -B; k <= B; ++k)
          bound += std::abs(f.coeff(n)) * std::abs(h.coeff(k)) *
                   std::abs(grid[static_cast<size_t>(n + B)][static_cast<size_t>(k + B)]);
      violation = std::max(violation, std::abs(v) - bound);
      const double s = sobolev_norm(f, 2) * sobolev_norm(h, 2);
      if (s > 0) sobolev_ratio = std::max(sobolev_ratio, std::abs(v) / s);
    }
    CheckResult c = deviation_check("finite-energy growth bound", "finite-energy estimate",
                                    std::max(violation, 0.0), 1e-9, W, ms_since(t0));
    c.params["basis_grid_max"] = grid_max;
    c.params["sobolev_ratio"] = sobolev_ratio;
    out.push_back(std::move(c));
  }

  // A raise past the cutoff followed by a lower must be flagged, not silently zero.
  {
    auto t0 = Clock::now();
    const auto& g = m.gens.front();
    CorrelatorValue v = correlator(m, lam,
                                   {{g.name, TestFunction::basis(N + 1)},
                                    {g.name, TestFunction::basis(-(N + 1))}});
    CheckResult c;
    c.name = "truncation signalling";
    c.anchor = "correlator";
    c.status = v.conclusive ? CheckStatus::fail : CheckStatus::pass;
    c.window = W;
    c.params["note"] = "raise above max weight, then lower back to the pairing weight";
    c.runtime_ms = ms_since(t0);
    out.push_back(std::move(c));
  }

  // Polynomial growth diagnostic over a non-homogeneous probe.
  for (const auto& g : m.gens) {
    auto t0 = Clock::now();
    GradedVector<RatC> u(m.space);
    GradedCovector<RatC> ud(m.space);
    for (int n = 0; n <= std::min(4, W); ++n) {
      if (m.space->dim(n) == 0) continue;
      u.at(n).assign(static_cast<size_t>(m.space->dim(n)), RatC{Rat(1), Rat(0)});
      ud.comp[static_cast<size_t>(n)].assign(static_cast<size_t>(m.space->dim(n)),
                                             RatC{Rat(1), Rat(0)});
    }
    OrderEstimate oe = order_estimate(m, g.tower, u, ud, std::min(6, N));
    CheckResult c;
    c.name = "polynomial growth order: " + g.name;
    c.anchor = "polynomial mode growth";
    c.status = oe.degenerate ? CheckStatus::inconclusive : CheckStatus::pass;
    c.window = W;
    c.params["degree"] = oe.degree;
    c.params["max_residual"] = oe.max_residual;
    c.params["points"] = oe.points;
    c.runtime_ms = ms_since(t0);
    out.push_back(std::move(c));
  }
}

// -------------------------------------------------------- reeh_schlieder suite

void suite_reeh_schlieder(const Model& m, const RunConfig& cfg, std::vector<CheckResult>& out) {
  const int nw = std::min(4, m.window());

  auto run_arc = [&](const std::string& name, double t1, double t2, int kmax, int weight_cut) {
    auto t0 = Clock::now();
    ReehSchliederReport r = reeh_schlieder_rank(m, t1, t2, cfg.band, kmax, weight_cut);
    CheckResult c;
    c.name = name;
    c.anchor = "Reeh-Schlieder cyclicity";
    c.status = (r.rank == r.expected_dim && (r.expected_dim < 2 || r.sigma_ratio > 1e-8))
                   ? CheckStatus::pass
                   : CheckStatus::fail;
    c.deviation = static_cast<double>(r.expected_dim - r.rank);
    c.window = weight_cut;
    c.params["rank"] = r.rank;
    c.params["expected_dim"] = r.expected_dim;
    c.params["space_dim"] = r.space_dim;
    c.params["sigma_ratio"] = r.sigma_ratio;
    c.params["words"] = r.words;
    c.runtime_ms = ms_since(t0);
    out.push_back(std::move(c));
  };

  run_arc("span from near-full circle", 0.05, 2.0 * kPi - 0.05, 3, nw);
  run_arc("span from quarter arc", 0.3, 0.3 + kPi / 2.0, 3, nw);

  {
    auto t0 = Clock::now();
    ReehSchliederReport r = reeh_schlieder_rank(m, 0.3, 0.3 + kPi / 2.0, cfg.band, 0, 0);
    CheckResult c;
    c.name = "empty word span is the vacuum line";
    c.anchor = "Reeh-Schlieder cyclicity";
    c.status = r.rank == 1 ? CheckStatus::pass : CheckStatus::fail;
    c.window = 0;
    c.params["rank"] = r.rank;
    c.runtime_ms = ms_since(t0);
    out.push_back(std::move(c));
  }
}

}  // namespace

// --------------------------------------------------------------- config / run

RunConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {"model", "c",      "simple", "max_weight", "band",
                                              "margin", "tolerances", "suite",  "out",        "seed"};
  for (const auto& item : j.items())
    if (!known.count(item.key())) throw ConfigError("unknown config key: " + item.key());

  RunConfig cfg;
  try {
    if (j.contains("model")) cfg.model = j.at("model").get<std::string>();
    if (j.contains("c")) cfg.c = j.at("c").get<std::string>();
    if (j.contains("simple")) cfg.simple = j.at("simple").get<bool>();
    if (j.contains("max_weight")) cfg.max_weight = j.at("max_weight").get<int>();
    if (j.contains("band")) cfg.band = j.at("band").get<int>();
    if (j.contains("margin")) cfg.margin = j.at("margin").get<int>();
    if (j.contains("suite")) cfg.suite = j.at("suite").get<std::string>();
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tolerances")) {
      const Json& t = j.at("tolerances");
      if (!t.is_object()) throw ConfigError("tolerances must be an object");
      static const std::set<std::string> tknown = {"float", "covariance", "group"};
      for (const auto& item : t.items())
        if (!tknown.count(item.key())) throw ConfigError("unknown tolerance key: " + item.key());
      if (t.contains("float")) cfg.float_tol = t.at("float").get<double>();
      if (t.contains("covariance")) cfg.cov_tol = t.at("covariance").get<double>();
      if (t.contains("group")) cfg.group_tol = t.at("group").get<double>();
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config field has the wrong type: ") + e.what());
  }
  return cfg;
}

void validate_config(const RunConfig& cfg) {
  if (cfg.model != "heisenberg" && cfg.model != "virasoro")
    throw ConfigError("model must be heisenberg or virasoro");
  if (cfg.simple && cfg.model != "virasoro")
    throw ConfigError("simple quotient requires the virasoro model");
  if (cfg.model == "virasoro") {
    Rat r;
    if (r.set_str(cfg.c, 10) != 0 || r.get_den() == 0)
      throw ConfigError("c must be a rational literal like -22/5");
  }
  const int gen_dim = cfg.model == "virasoro" ? 2 : 1;
  const int eff_margin = cfg.margin < 0 ? gen_dim + 2 : cfg.margin;
  if (eff_margin < 1) throw ConfigError("margin must be at least 1");
  if (cfg.max_weight < eff_margin) throw ConfigError("max_weight must be at least the margin");
  if (cfg.band < 1) throw ConfigError("band must be at least 1");
  if (!(cfg.float_tol > 0) || !(cfg.cov_tol > 0) || !(cfg.group_tol > 0))
    throw ConfigError("tolerances must be positive");
  static const std::set<std::string> suites = {"axioms",      "gram",           "roundtrip",
                                               "correlators", "reeh_schlieder", "all"};
  if (!suites.count(cfg.suite)) throw ConfigError("unknown suite: " + cfg.suite);
}

Model build_from_config(const RunConfig& cfg) {
  validate_config(cfg);
  if (cfg.model == "heisenberg") return build_heisenberg(cfg.max_weight, cfg.margin);
  Rat r;
  r.set_str(cfg.c, 10);
  r.canonicalize();
  return build_virasoro(r, cfg.max_weight, cfg.simple, cfg.margin);
}

SuiteReport run_suites(const Model& m, const RunConfig& cfg) {
  validate_config(cfg);
  std::vector<std::string> selected;
  if (cfg.suite == "all")
    selected = {"axioms", "gram", "roundtrip", "correlators", "reeh_schlieder"};
  else
    selected = {cfg.suite};

  std::vector<std::vector<CheckResult>> per(selected.size());
  std::vector<std::vector<CorrelatorRow>> rows(selected.size());

  // Suites are independent; report assembly below keeps the configured order.
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(selected.size()); ++i) {
    const std::string& s = selected[static_cast<size_t>(i)];
    auto& dst = per[static_cast<size_t>(i)];
    try {
      if (s == "axioms")
        suite_axioms(m, cfg, dst);
      else if (s == "gram")
        suite_gram(m, cfg, dst);
      else if (s == "roundtrip")
        suite_roundtrip(m, cfg, dst);
      else if (s == "correlators")
        suite_correlators(m, cfg, dst, rows[static_cast<size_t>(i)]);
      else
        suite_reeh_schlieder(m, cfg, dst);
    } catch (const std::exception& e) {
      CheckResult c;
      c.name = "suite " + s + " aborted";
      c.anchor = "internal";
      c.status = CheckStatus::fail;
      c.params["error"] = e.what();
      dst.push_back(std::move(c));
    }
  }

  SuiteReport rep;
  for (size_t i = 0; i < per.size(); ++i) {
    for (auto& c : per[i]) {
      switch (c.status) {
        case CheckStatus::pass: ++rep.passed; break;
        case CheckStatus::fail: ++rep.failed; break;
        default: ++rep.inconclusive; break;
      }
      rep.checks.push_back(std::move(c));
    }
    for (auto& r : rows[i]) rep.correlators.push_back(std::move(r));
  }
  return rep;
}

Json report_to_json(const Model& m, const RunConfig& cfg, const SuiteReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json e{{"check", c.name},
           {"anchor", c.anchor},
           {"model", m.name},
           {"status", status_str(c.status)},
           {"pass", c.status != CheckStatus::fail},
           {"max_deviation", c.deviation},
           {"window", c.window},
           {"params", c.params},
           {"runtime_ms", c.runtime_ms}};
    checks.push_back(std::move(e));
  }
  Json out{{"schema", "mcft-report/1"},
           {"model",
            Json{{"name", m.name},
                 {"central_charge", m.central_charge.get_str()},
                 {"simple", m.simple},
                 {"max_weight", m.space->max_weight},
                 {"margin", m.margin},
                 {"band", cfg.band},
                 {"dims", m.space->dims}}},
           {"config",
            Json{{"suite", cfg.suite},
                 {"seed", cfg.seed},
                 {"tolerances",
                  Json{{"float", cfg.float_tol},
                       {"covariance", cfg.cov_tol},
                       {"group", cfg.group_tol}}}}},
           {"checks", std::move(checks)},
           {"summary",
            Json{{"pass", r.passed}, {"fail", r.failed}, {"inconclusive", r.inconclusive}}},
           {"pass", r.pass()}};
  if (!r.correlators.empty()) {
    Json rows = Json::array();
    for (const auto& row : r.correlators)
      rows.push_back(Json{{"k", row.k},
                          {"fields", row.fields},
                          {"functions", row.functions},
                          {"re", row.value.real()},
                          {"im", row.value.imag()}});
    out["correlators"] = std::move(rows);
  }
  return out;
}

}  // namespace mcft
