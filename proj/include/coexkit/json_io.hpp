#pragma once

// JSON encodings of the toolkit's values (nlohmann/json).
//
//   matrix        {"dim": d, "re": [[...]], "im": [[...]]}
//   povm          {"labels": [...], "effects": [matrix, ...]}
//   stochastic    {"rows": m, "cols": n, "entries": [[...]]}
//   distribution  {"x0": .., "dx": .., "weights": [...]}
//   wavefunction  {"x0": .., "dx": .., "re": [...], "im": [...]}
//   generator     {"weights": [...], "components": [wavefunction, ...]}

#include <string>
#include <vector>

#include <json.hpp>

#include "coexkit/coexistence.hpp"
#include "coexkit/linalg.hpp"
#include "coexkit/moments.hpp"
#include "coexkit/phasespace.hpp"
#include "coexkit/povm.hpp"

namespace coexkit::json {

using nlohmann::json;

inline json to_json(const Matrix& m) {
  json re = json::array(), im = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json r = json::array(), c = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) {
      r.push_back(m(i, j).real());
      c.push_back(m(i, j).imag());
    }
    re.push_back(std::move(r));
    im.push_back(std::move(c));
  }
  return {{"dim", m.dim()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline json to_json(const HermitianMatrix& h) { return to_json(h.matrix()); }

inline Matrix matrix_from_json(const json& j) {
  const auto d = j.at("dim").get<std::size_t>();
  if (d == 0) throw std::invalid_argument("matrix json: dim must be >= 1");
  const auto& re = j.at("re");
  const json im = j.contains("im") ? j.at("im") : json();
  if (re.size() != d || (!im.is_null() && im.size() != d)) throw std::invalid_argument("matrix json: row count != dim");
  Matrix m(d);
  for (std::size_t r = 0; r < d; ++r) {
    if (re[r].size() != d || (!im.is_null() && im[r].size() != d))
      throw std::invalid_argument("matrix json: column count != dim");
    for (std::size_t c = 0; c < d; ++c)
      m(r, c) = cplx(re[r][c].get<double>(), im.is_null() ? 0.0 : im[r][c].get<double>());
  }
  return m;
}

inline HermitianMatrix hermitian_from_json(const json& j) { return HermitianMatrix(matrix_from_json(j)); }

inline json to_json(const DiscretePOVM& e) {
  json eff = json::array();
  for (const auto& m : e.effects()) eff.push_back(to_json(m));
  return {{"labels", e.labels()}, {"effects", std::move(eff)}};
}

inline DiscretePOVM povm_from_json(const json& j) {
  std::vector<HermitianMatrix> eff;
  for (const auto& m : j.at("effects")) eff.push_back(hermitian_from_json(m));
  if (!j.contains("labels")) return DiscretePOVM(std::move(eff));
  return DiscretePOVM(j.at("labels").get<std::vector<std::string>>(), std::move(eff));
}

inline json to_json(const JointPOVM& f) {
  json table = json::array();
  for (std::size_t r = 0; r < f.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < f.cols(); ++c) row.push_back(to_json(f(r, c)));
    table.push_back(std::move(row));
  }
  return {{"row_labels", f.row_labels()}, {"col_labels", f.col_labels()}, {"effects", std::move(table)}};
}

inline json to_json(const StochasticMatrix& s) {
  return {{"rows", s.rows()}, {"cols", s.cols()}, {"entries", s.entries()}};
}

inline StochasticMatrix stochastic_from_json(const json& j) {
  return StochasticMatrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                          j.at("entries").get<std::vector<std::vector<double>>>());
}

inline json to_json(const GridDistribution& p) { return {{"x0", p.x0()}, {"dx", p.dx()}, {"weights", p.weights()}}; }

inline GridDistribution distribution_from_json(const json& j) {
  return {j.at("x0").get<double>(), j.at("dx").get<double>(), j.at("weights").get<std::vector<double>>()};
}

inline json to_json(const WaveFunction& w) {
  std::vector<double> re, im;
  for (const auto& z : w.amplitudes()) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return {{"x0", w.grid().x0}, {"dx", w.grid().dx}, {"re", re}, {"im", im}};
}

inline WaveFunction wavefunction_from_json(const json& j) {
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.contains("im") ? j.at("im").get<std::vector<double>>() : std::vector<double>(re.size(), 0.0);
  if (im.size() != re.size()) throw std::invalid_argument("wavefunction json: re/im length mismatch");
  std::vector<cplx> a(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) a[i] = cplx(re[i], im[i]);
  return WaveFunction(Grid{j.at("x0").get<double>(), j.at("dx").get<double>(), re.size()}, std::move(a));
}

inline json to_json(const GeneratingOperator& t) {
  json comps = json::array();
  for (const auto& c : t.components()) comps.push_back(to_json(c));
  return {{"weights", t.weights()}, {"components", std::move(comps)}};
}

inline GeneratingOperator generator_from_json(const json& j) {
  std::vector<WaveFunction> comps;
  for (const auto& c : j.at("components")) comps.push_back(wavefunction_from_json(c));
  return GeneratingOperator(j.at("weights").get<std::vector<double>>(), std::move(comps));
}

inline json to_json(const CoexistenceReport& r) {
  const auto& h = r.helpers;
  return {{"coexistent", r.coexistent},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"margin", r.margin},
          {"helpers",
           {{"F", h.F}, {"B", h.B}, {"x", h.x}, {"y", h.y}, {"phi_a", h.phi_a}, {"phi_b", h.phi_b},
            {"beta_a", h.beta_a}, {"beta_b", h.beta_b}}}};
}

inline json to_json(const FeasibilityResult& r) {
  json j = {{"feasible", r.feasible},
            {"status", to_string(r.status)},
            {"residual", r.residual},
            {"objective", r.objective},
            {"evaluations", r.evaluations},
            {"best_start", r.best_start}};
  j["witness"] = r.witness ? to_json(r.witness->flatten()) : json();
  return j;
}

}  // namespace coexkit::json
