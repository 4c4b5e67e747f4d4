#include "arrham/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace arrham {

namespace {

Rat rat_from_json(const Json& v) {
  if (v.is_string()) return rat_from_string(v.get<std::string>());
  if (v.is_number_integer()) return Rat(v.get<long>());
  throw std::invalid_argument("expected exact rational (\"p/q\" string or integer), got " + v.dump());
}

}  // namespace

ArrangementFile parse_arrangement(const Json& j) {
  ArrangementFile file;
  file.fam.k = j.at("k").get<int>();
  file.fam.n = j.at("n").get<int>();
  const Json& rows = j.at("B");
  if (static_cast<int>(rows.size()) != file.fam.n)
    throw std::invalid_argument("B must have n rows");
  file.fam.b = RatMat(file.fam.n, file.fam.k);
  for (int r = 0; r < file.fam.n; ++r) {
    if (static_cast<int>(rows[r].size()) != file.fam.k)
      throw std::invalid_argument("row " + std::to_string(r + 1) + " of B must have k entries");
    for (int c = 0; c < file.fam.k; ++c) file.fam.b.at(r, c) = rat_from_json(rows[r][c]);
  }
  for (const auto& w : j.at("a")) file.fam.a.push_back(rat_from_json(w));
  if (j.contains("labels"))
    for (const auto& l : j.at("labels")) file.fam.labels.push_back(l.get<std::string>());
  if (file.fam.labels.empty())
    for (int r = 0; r < file.fam.n; ++r) file.fam.labels.push_back("H" + std::to_string(r + 1));
  file.fam.validate();
  if (j.contains("z")) {
    const Json& zj = j.at("z");
    if (static_cast<int>(zj.size()) != file.fam.n)
      throw std::invalid_argument("z must have n entries");
    bool exact = true;
    for (const auto& v : zj)
      if (v.is_number_float()) exact = false;
    if (exact) {
      RatVec z;
      for (const auto& v : zj) z.push_back(rat_from_json(v));
      file.z = FiberPoint::from_exact(std::move(z));
    } else {
      std::vector<double> z;
      for (const auto& v : zj)
        z.push_back(v.is_number() ? v.get<double>() : rat_d(rat_from_string(v.get<std::string>())));
      file.z = FiberPoint::from_doubles(std::move(z));
    }
  }
  return file;
}

ArrangementFile load_arrangement(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  try {
    return parse_arrangement(j);
  } catch (const Json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

Json arrangement_to_json(const ArrangementFamily& fam, const std::optional<FiberPoint>& z) {
  Json j;
  j["k"] = fam.k;
  j["n"] = fam.n;
  Json rows = Json::array();
  for (int r = 0; r < fam.n; ++r) {
    Json row = Json::array();
    for (int c = 0; c < fam.k; ++c) row.push_back(rat_str(fam.b.at(r, c)));
    rows.push_back(row);
  }
  j["B"] = rows;
  Json a = Json::array();
  for (const auto& w : fam.a) a.push_back(rat_str(w));
  j["a"] = a;
  j["labels"] = fam.labels;
  if (z) {
    Json zj = Json::array();
    if (z->exact)
      for (const auto& v : z->z) zj.push_back(rat_str(v));
    else
      for (double v : z->zd) zj.push_back(v);
    j["z"] = zj;
  }
  return j;
}

GaudinPreset parse_gaudin_preset(const Json& j) {
  GaudinPreset p;
  p.algebra = j.at("algebra").get<std::string>();
  if (p.algebra != "sl2" && p.algebra != "gl2")
    throw std::invalid_argument("algebra must be \"sl2\" or \"gl2\"");
  for (const auto& w : j.at("weights")) p.weights.push_back(w.get<long>());
  for (const auto& ki : j.at("k")) p.kvec.push_back(ki.get<int>());
  for (const auto& xb : j.at("x")) p.x.push_back(rat_from_json(xb));
  if (p.kvec.size() != 1 || p.kvec[0] != 1)
    throw std::invalid_argument(
        "presets drive the one-variable Bethe pipeline and expect \"k\": [1]");
  p.data();  // validates
  return p;
}

GaudinPreset load_gaudin_preset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  try {
    return parse_gaudin_preset(j);
  } catch (const Json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

GaudinData GaudinPreset::data() const {
  GaudinData d;
  d.r = 1;
  d.N = static_cast<int>(weights.size());
  d.alpha_gram = RatMat{{Rat(2)}};
  d.lambda_pairings = RatMat(d.N, 1);
  d.lambda_gram = RatMat(d.N, d.N);
  for (int b = 0; b < d.N; ++b) {
    // sl2: Lambda_b = (m_b/2) alpha with (alpha,alpha) = 2, so
    // (Lambda_b, alpha) = m_b and (Lambda_b, Lambda_c) = m_b m_c / 2.
    // gl2 one-row partitions in the epsilon-orthonormal form:
    // (Lambda_b, alpha_1) = lambda_b and (Lambda_b, Lambda_c) = lambda_b lambda_c.
    d.lambda_pairings.at(b, 0) = Rat(weights[b]);
    for (int c = 0; c < d.N; ++c) {
      Rat prod = Rat(weights[b]) * Rat(weights[c]);
      d.lambda_gram.at(b, c) = algebra == "sl2" ? prod / 2 : prod;
    }
  }
  d.kvec = kvec;
  d.x = x;
  d.validate();
  return d;
}

TensorModule GaudinPreset::module() const {
  return algebra == "sl2" ? TensorModule::sl2(weights) : TensorModule::gl2_rows(weights);
}

Json sing_basis_to_json(const SingBasis& sb, const StandardBasis& top) {
  Json j;
  j["ambient"] = sb.ambient == SingBasis::Ambient::good_fiber ? "good" : "degenerate";
  j["dim"] = sb.dim();
  Json basis = Json::array();
  for (const auto& v : sb.vectors) {
    Json vec = Json::array();
    for (int q = 0; q < top.size(); ++q) {
      if (is_zero(v[q])) continue;
      Json entry;
      Json subset = Json::array();
      for (int idx : top.subsets[q]) subset.push_back(idx + 1);
      entry["subset"] = subset;
      entry["coeff"] = rat_str(v[q]);
      vec.push_back(entry);
    }
    basis.push_back(vec);
  }
  j["basis"] = basis;
  return j;
}

Json operator_to_json(const RatMat& op, const std::string& basis_descriptor) {
  Json j;
  j["basis"] = basis_descriptor;
  j["rows"] = op.rows();
  j["cols"] = op.cols();
  Json m = Json::array();
  for (int r = 0; r < op.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < op.cols(); ++c) row.push_back(rat_str(op.at(r, c)));
    m.push_back(row);
  }
  j["matrix"] = m;
  return j;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

Json critical_points_to_json(const ArrangementFamily& fam, const std::vector<CriticalPoint>& pts,
                             const std::vector<double>& z) {
  Json arr = Json::array();
  for (const auto& p : pts) {
    Json j;
    Json t = Json::array();
    for (double x : p.t) t.push_back(format_double(x));
    j["t"] = t;
    j["residual"] = format_double(p.residual);
    j["hess_det"] = format_double(p.hess_det);
    j["region"] = p.region;
    j["nondegenerate"] = p.nondegenerate;
    Json eig;
    for (int jj = 0; jj < fam.n; ++jj)
      eig[std::to_string(jj + 1)] = format_double(rat_d(fam.a[jj]) / fam.f_d(jj, z, p.t));
    j["eigenvalues"] = eig;
    arr.push_back(j);
  }
  return arr;
}

}  // namespace arrham
