#include "mcft/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mcft {

namespace {

std::string rat_str(const Rat& r) { return r.get_str(); }

Rat rat_parse(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  r.canonicalize();
  return r;
}

}  // namespace

Json to_json(const TestFunction& f) {
  Json coeffs = Json::array();
  for (int n = -f.band(); n <= f.band(); ++n) {
    const Cplx c = f.coeff(n);
    if (c == Cplx(0, 0)) continue;
    coeffs.push_back(Json::array({n, c.real(), c.imag()}));
  }
  return Json{{"band", f.band()}, {"coeffs", std::move(coeffs)}};
}

TestFunction test_function_from_json(const Json& j) {
  TestFunction f(j.at("band").get<int>());
  for (const auto& row : j.at("coeffs")) {
    if (!row.is_array() || row.size() != 3) throw std::invalid_argument("coeff rows are [n, re, im]");
    f.set_coeff(row[0].get<int>(), Cplx(row[1].get<double>(), row[2].get<double>()));
  }
  return f;
}

Json to_json(const RatC& x) { return Json{{"re", rat_str(x.re)}, {"im", rat_str(x.im)}}; }

RatC ratc_from_json(const Json& j) {
  return RatC{rat_parse(j.at("re").get<std::string>()), rat_parse(j.at("im").get<std::string>())};
}

Json to_json(const Mat<RatC>& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

Mat<RatC> mat_from_json(const Json& j) {
  Mat<RatC> m(j.at("rows").get<int>(), j.at("cols").get<int>());
  const Json& rows = j.at("entries");
  if (static_cast<int>(rows.size()) != m.rows()) throw std::invalid_argument("entry row count mismatch");
  for (int i = 0; i < m.rows(); ++i) {
    const Json& row = rows[static_cast<size_t>(i)];
    if (static_cast<int>(row.size()) != m.cols()) throw std::invalid_argument("entry col count mismatch");
    for (int k = 0; k < m.cols(); ++k) m(i, k) = ratc_from_json(row[static_cast<size_t>(k)]);
  }
  return m;
}

Json to_json(const BlockOperator<RatC>& a) {
  Json blocks = Json::array();
  for (int s = 0; s <= a.max_weight(); ++s)
    for (const auto& e : a.rows[static_cast<size_t>(s)]) {
      if (e.m.is_zero()) continue;
      blocks.push_back(Json{{"source", s}, {"target", e.target}, {"mat", to_json(e.m)}});
    }
  Json overflow = Json::array(), suspect = Json::array();
  for (int s = 0; s <= a.max_weight(); ++s) {
    overflow.push_back(static_cast<bool>(a.overflow[static_cast<size_t>(s)]));
    suspect.push_back(static_cast<bool>(a.suspect[static_cast<size_t>(s)]));
  }
  return Json{{"max_weight", a.max_weight()},
              {"blocks", std::move(blocks)},
              {"overflow", std::move(overflow)},
              {"suspect", std::move(suspect)}};
}

BlockOperator<RatC> operator_from_json(const Json& j, const SpacePtr& space) {
  if (j.at("max_weight").get<int>() != space->max_weight)
    throw std::invalid_argument("operator max_weight does not match the space");
  BlockOperator<RatC> a(space);
  for (const auto& b : j.at("blocks")) {
    const int s = b.at("source").get<int>();
    const int t = b.at("target").get<int>();
    Mat<RatC> m = mat_from_json(b.at("mat"));
    if (m.rows() != space->dim(t) || m.cols() != space->dim(s))
      throw std::invalid_argument("block shape does not match the space dims");
    a.block(s, t) = std::move(m);
  }
  const Json& ov = j.at("overflow");
  const Json& su = j.at("suspect");
  for (int s = 0; s <= space->max_weight; ++s) {
    a.overflow[static_cast<size_t>(s)] = ov[static_cast<size_t>(s)].get<bool>() ? 1 : 0;
    a.suspect[static_cast<size_t>(s)] = su[static_cast<size_t>(s)].get<bool>() ? 1 : 0;
  }
  return a;
}

Json to_json(const GradedVector<RatC>& v) {
  Json comps = Json::array();
  for (int n = 0; n <= v.space->max_weight; ++n) {
    const auto* c = v.find(n);
    if (!c) continue;
    Json entries = Json::array();
    for (const RatC& x : *c) entries.push_back(to_json(x));
    comps.push_back(Json{{"n", n}, {"entries", std::move(entries)}});
  }
  return Json{{"max_weight", v.space->max_weight},
              {"components", std::move(comps)},
              {"tail", v.tail},
              {"inexact", v.inexact}};
}

GradedVector<RatC> vector_from_json(const Json& j, const SpacePtr& space) {
  if (j.at("max_weight").get<int>() != space->max_weight)
    throw std::invalid_argument("vector max_weight does not match the space");
  GradedVector<RatC> v(space);
  for (const auto& comp : j.at("components")) {
    const int n = comp.at("n").get<int>();
    const Json& entries = comp.at("entries");
    if (static_cast<int>(entries.size()) != space->dim(n))
      throw std::invalid_argument("component size does not match the space dims");
    auto& slot = v.at(n);
    slot.resize(entries.size());
    for (size_t i = 0; i < entries.size(); ++i) slot[i] = ratc_from_json(entries[i]);
  }
  v.tail = j.at("tail").get<bool>();
  v.inexact = j.at("inexact").get<bool>();
  return v;
}

Json model_to_json(const Model& m, bool with_matrices) {
  Json gens = Json::array();
  for (const auto& g : m.gens) gens.push_back(Json{{"name", g.name}, {"dim", g.dim}});
  Json out{{"name", m.name},
           {"central_charge", rat_str(m.central_charge)},
           {"simple", m.simple},
           {"max_weight", m.space->max_weight},
           {"margin", m.margin},
           {"dims", m.space->dims},
           {"generators", std::move(gens)}};
  if (with_matrices) {
    out["vacuum"] = to_json(m.vacuum);
    out["l_minus"] = to_json(m.l_minus);
    out["l_zero"] = to_json(m.l_zero);
    out["l_plus"] = to_json(m.l_plus);
    Json towers = Json::array();
    for (const auto& g : m.gens) {
      Json modes = Json::array();
      for (int n = -m.space->max_weight; n <= m.space->max_weight; ++n)
        modes.push_back(Json{{"n", n}, {"op", to_json(g.tower.slot(n))}});
      towers.push_back(
          Json{{"name", g.name}, {"state", to_json(g.state)}, {"modes", std::move(modes)}});
    }
    out["towers"] = std::move(towers);
  }
  return out;
}

Json gram_to_json(const GramTower& g) {
  Json weights = Json::array();
  for (int n = 0; n < static_cast<int>(g.gram.size()); ++n)
    weights.push_back(Json{{"n", n}, {"gram", to_json(g.at(n))}});
  return Json{{"kind", g.kind == FormKind::bilinear ? "bilinear" : "sesquilinear"},
              {"normalization", to_json(g.normalization)},
              {"weights", std::move(weights)}};
}

Json unitarity_to_json(const UnitarityReport& r) {
  const char* v = r.verdict == UnitarityReport::Verdict::positive_definite ? "positive_definite"
                  : r.verdict == UnitarityReport::Verdict::positive_semidefinite
                      ? "positive_semidefinite"
                      : "indefinite";
  return Json{{"verdict", v},
              {"normalized", r.normalized},
              {"first_fail_weight", r.first_fail_weight},
              {"first_fail_minor", r.first_fail_minor},
              {"kernel_dims", r.kernel_dims}};
}

std::string describe(const TestFunction& f) {
  int nonzero = 0, last = 0;
  for (int n = -f.band(); n <= f.band(); ++n)
    if (f.coeff(n) != Cplx(0, 0)) {
      ++nonzero;
      last = n;
    }
  if (nonzero == 1 && f.coeff(last) == Cplx(1, 0)) return "e_" + std::to_string(last);
  std::ostringstream os;
  os << "band" << f.band() << "(" << nonzero << " coeffs)";
  return os.str();
}

std::string correlator_csv(const std::vector<CorrelatorRow>& rows) {
  std::ostringstream os;
  os << "k,fields,functions,re,im\n";
  char buf[64];
  for (const auto& r : rows) {
    os << r.k << ',' << r.fields << ',' << r.functions << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.value.real());
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.value.imag());
    os << buf << '\n';
  }
  return os.str();
}

std::string json_to_string(const Json& j) { return j.dump(2) + "\n"; }

Json json_from_string(const std::string& text) { return Json::parse(text); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace mcft
