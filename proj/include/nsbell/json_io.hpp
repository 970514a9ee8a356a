#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nsbell/constructions.hpp"
#include "nsbell/experiments.hpp"
#include "nsbell/games.hpp"
#include "nsbell/tensor.hpp"
#include "nsbell/values.hpp"

namespace nsbell {

// Interchange rules: rationals are strings "p/q" (or "p"), never JSON
// numbers; 64-bit seeds are decimal strings; field order is fixed so equal
// inputs serialize byte-identically.
using Json = nlohmann::ordered_json;

inline Json rational_to_json(const Rational& r) { return r.str(); }

inline Rational rational_from_json(const Json& j) {
  if (j.is_string()) return Rational::from_string(j.get<std::string>());
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  throw std::invalid_argument("expected a rational as a string");
}

inline Json seed_to_json(std::uint64_t seed) { return std::to_string(seed); }

inline std::uint64_t seed_from_json(const Json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_string()) return std::stoull(j.get<std::string>());
  throw std::invalid_argument("expected a seed as a decimal string");
}

inline Json tensor_to_json(const Tensor4& t) {
  Json j;
  j["dims"] = {t.dims().n1, t.dims().k1, t.dims().n2, t.dims().k2};
  Json coeffs = Json::array();
  for (const auto& c : t.coeffs()) coeffs.push_back(rational_to_json(c));
  j["coeffs"] = std::move(coeffs);
  return j;
}

inline Tensor4 tensor_from_json(const Json& j) {
  const auto& dims = j.at("dims");
  if (!dims.is_array() || dims.size() != 4)
    throw std::invalid_argument("tensor: dims must be [n1,k1,n2,k2]");
  const Dims d{dims[0].get<int>(), dims[1].get<int>(), dims[2].get<int>(), dims[3].get<int>()};
  const auto& coeffs = j.at("coeffs");
  if (!coeffs.is_array() || coeffs.size() != d.size())
    throw std::invalid_argument("tensor: coeffs length must be n1*k1*n2*k2");
  std::vector<Rational> c;
  c.reserve(coeffs.size());
  for (const auto& e : coeffs) c.push_back(rational_from_json(e));
  return Tensor4(d, std::move(c));
}

inline Json matrix_to_json(const RatMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(rational_to_json(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return Json{{"entries", std::move(rows)}};
}

inline RatMatrix matrix_from_json(const Json& j) {
  const auto& rows = j.at("entries");
  if (!rows.is_array() || rows.empty()) throw std::invalid_argument("matrix: entries must be rows");
  const int nr = static_cast<int>(rows.size());
  const int nc = static_cast<int>(rows[0].size());
  RatMatrix m(nr, nc);
  for (int i = 0; i < nr; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != nc)
      throw std::invalid_argument("matrix: ragged rows");
    for (int c = 0; c < nc; ++c)
      m.at(i, c) = rational_from_json(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]);
  }
  return m;
}

inline Json strategy_to_json(const DeterministicStrategy& s) {
  return Json{{"a", s.a}, {"b", s.b}, {"signs_x", s.signs_x}, {"signs_y", s.signs_y}};
}

inline Json perm_game_to_json(const PermGame& g) {
  Json j;
  j["n"] = g.n;
  j["seed"] = seed_to_json(g.seed);
  Json sig = Json::array();
  for (int x = 0; x < g.n; ++x) {
    Json row = Json::array();
    for (int y = 0; y < g.n; ++y) row.push_back(g.sigma(x, y));
    sig.push_back(std::move(row));
  }
  j["sigmas"] = std::move(sig);
  return j;
}

inline PermGame perm_game_from_json(const Json& j) {
  PermGame g;
  g.n = j.at("n").get<int>();
  if (g.n < 1) throw std::invalid_argument("perm game: n must be >= 1");
  g.seed = j.contains("seed") ? seed_from_json(j.at("seed")) : 0;
  const auto& sig = j.at("sigmas");
  if (static_cast<int>(sig.size()) != g.n) throw std::invalid_argument("perm game: bad sigma rows");
  for (int x = 0; x < g.n; ++x) {
    const auto& row = sig[static_cast<std::size_t>(x)];
    if (static_cast<int>(row.size()) != g.n)
      throw std::invalid_argument("perm game: bad sigma row length");
    for (int y = 0; y < g.n; ++y) {
      auto perm = row[static_cast<std::size_t>(y)].get<std::vector<int>>();
      std::vector<bool> seen(static_cast<std::size_t>(g.n), false);
      if (static_cast<int>(perm.size()) != g.n)
        throw std::invalid_argument("perm game: permutation length mismatch");
      for (const int v : perm) {
        if (v < 0 || v >= g.n || seen[static_cast<std::size_t>(v)])
          throw std::invalid_argument("perm game: sigma entry is not a permutation");
        seen[static_cast<std::size_t>(v)] = true;
      }
      g.sigmas.push_back(std::move(perm));
    }
  }
  return g;
}

inline Json xor_d_game_to_json(const XorDGame& g) {
  Json j;
  j["n"] = g.n;
  j["d"] = g.d;
  j["seed"] = seed_to_json(g.seed);
  j["sigma"] = g.sigma;
  return j;
}

inline XorDGame xor_d_game_from_json(const Json& j) {
  XorDGame g;
  g.n = j.at("n").get<int>();
  g.d = j.at("d").get<int>();
  if (g.n < 1 || g.d < 1) throw std::invalid_argument("xor-d game: n and d must be >= 1");
  g.seed = j.contains("seed") ? seed_from_json(j.at("seed")) : 0;
  g.sigma = j.at("sigma").get<std::vector<std::vector<int>>>();
  if (static_cast<int>(g.sigma.size()) != g.n) throw std::invalid_argument("xor-d game: bad sigma");
  for (const auto& row : g.sigma) {
    if (static_cast<int>(row.size()) != g.n) throw std::invalid_argument("xor-d game: bad sigma");
    for (const int v : row)
      if (v < 0 || v >= g.d) throw std::invalid_argument("xor-d game: sigma entry out of range");
  }
  return g;
}

inline Json ans_split_to_json(const AnsSplit& s) {
  return Json{{"lam", rational_to_json(s.lam)},
              {"pos", tensor_to_json(s.pos)},
              {"mu", rational_to_json(s.mu)},
              {"neg", tensor_to_json(s.neg)}};
}

inline Json nsg_to_json(const NsgElement& r) {
  Json j = matrix_to_json(r.entries);
  j["row_sum"] = rational_to_json(r.row_sum);
  return j;
}

inline NsgElement nsg_from_json(const Json& j) {
  return NsgElement::from_matrix(matrix_from_json(j));
}

inline Json nsg_split_to_json(const NsgSplit& s) {
  return Json{{"big", rational_to_json(s.big)},
              {"small", rational_to_json(s.small)},
              {"p1", matrix_to_json(s.p1.entries)},
              {"p2", matrix_to_json(s.p2.entries)}};
}

inline Json bm_image_to_json(const BmImage& w) {
  Json j;
  j["n"] = w.n;
  j["k"] = w.k;
  Json core = Json::array(), pa = Json::array(), qb = Json::array();
  for (const auto& c : w.core) core.push_back(rational_to_json(c));
  for (const auto& c : w.pa) pa.push_back(rational_to_json(c));
  for (const auto& c : w.qb) qb.push_back(rational_to_json(c));
  j["core"] = std::move(core);
  j["pa"] = std::move(pa);
  j["qb"] = std::move(qb);
  j["s"] = rational_to_json(w.s);
  return j;
}

inline BmImage bm_image_from_json(const Json& j) {
  BmImage w;
  w.n = j.at("n").get<int>();
  w.k = j.at("k").get<int>();
  for (const auto& e : j.at("core")) w.core.push_back(rational_from_json(e));
  for (const auto& e : j.at("pa")) w.pa.push_back(rational_from_json(e));
  for (const auto& e : j.at("qb")) w.qb.push_back(rational_from_json(e));
  w.s = rational_from_json(j.at("s"));
  w.check_sizes();
  return w;
}

inline Json dns_certificate_to_json(const DnsCertificate& c) {
  return Json{{"value", rational_to_json(c.value)},
              {"decimal", c.value.decimal()},
              {"m1", tensor_to_json(c.m1)},
              {"m2", tensor_to_json(c.m2)}};
}

inline Json marginals_to_json(const Marginals& m) {
  return Json{{"alice", matrix_to_json(m.alice)},
              {"bob", matrix_to_json(m.bob)},
              {"total", rational_to_json(m.total)}};
}

inline Json experiment_report_to_json(const ExperimentReport& r) {
  Json trials = Json::array();
  for (int t = 0; t < r.trials; ++t) {
    const Rational ratio = r.ns_value / Rational(r.omega_l[static_cast<std::size_t>(t)]);
    trials.push_back(Json{{"trial", t},
                          {"seed", seed_to_json(r.trial_seeds[static_cast<std::size_t>(t)])},
                          {"omega_l", r.omega_l[static_cast<std::size_t>(t)]},
                          {"ratio", rational_to_json(ratio)},
                          {"below_threshold",
                           Rational(r.omega_l[static_cast<std::size_t>(t)]) < r.threshold.lo}});
  }
  return Json{{"n", r.n},
              {"trials", r.trials},
              {"seed", seed_to_json(r.seed)},
              {"ns_value", rational_to_json(r.ns_value)},
              {"threshold_lo", rational_to_json(r.threshold.lo)},
              {"threshold_hi", rational_to_json(r.threshold.hi)},
              {"threshold_decimal", r.threshold.lo.decimal()},
              {"below_threshold", r.below_threshold},
              {"fraction_below", rational_to_json(r.fraction_below)},
              {"fraction_below_decimal", r.fraction_below.decimal()},
              {"ratio_min", rational_to_json(r.ratio_min)},
              {"ratio_median", rational_to_json(r.ratio_median)},
              {"ratio_max", rational_to_json(r.ratio_max)},
              {"ratio_max_decimal", r.ratio_max.decimal()},
              {"per_trial", std::move(trials)}};
}

inline std::string experiment_report_to_csv(const ExperimentReport& r) {
  std::string out = "trial,seed,omega_L,ratio,below_threshold\n";
  for (int t = 0; t < r.trials; ++t) {
    const Rational ratio = r.ns_value / Rational(r.omega_l[static_cast<std::size_t>(t)]);
    out += std::to_string(t) + "," + std::to_string(r.trial_seeds[static_cast<std::size_t>(t)]) +
           "," + std::to_string(r.omega_l[static_cast<std::size_t>(t)]) + "," + ratio.str() + "," +
           (Rational(r.omega_l[static_cast<std::size_t>(t)]) < r.threshold.lo ? "1" : "0") + "\n";
  }
  return out;
}

inline Json bound_sweep_to_json(const BoundSweepReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back(Json{{"kind", row.kind},
                        {"n", row.n},
                        {"k", row.k},
                        {"sample", row.sample},
                        {"seed", seed_to_json(row.seed)},
                        {"value", rational_to_json(row.value)},
                        {"value_decimal", row.value.decimal()},
                        {"bound", rational_to_json(row.bound)},
                        {"pass", row.pass}});
  return Json{{"rows", std::move(rows)}};
}

inline std::string bound_sweep_to_csv(const BoundSweepReport& r) {
  std::string out = "kind,n,k,sample,seed,value,bound,pass\n";
  for (const auto& row : r.rows)
    out += row.kind + "," + std::to_string(row.n) + "," + std::to_string(row.k) + "," +
           std::to_string(row.sample) + "," + std::to_string(row.seed) + "," + row.value.str() +
           "," + row.bound.str() + "," + (row.pass ? "1" : "0") + "\n";
  return out;
}

}  // namespace nsbell
