#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

#include "arrham/verify.hpp"

using namespace arrham;

namespace {

struct GlobalOpts {
  uint64_t seed = 0;
  double tol_newton = 1e-12;
  double tol_verify = 1e-8;
  std::string format = "table";

  VerifyOptions verify() const { return VerifyOptions{seed, tol_newton, tol_verify}; }
};

void print_checks(const std::vector<CheckResult>& checks, const GlobalOpts& g) {
  if (g.format == "json") {
    std::cout << checks_to_json(checks, g.verify()).dump(2) << "\n";
    return;
  }
  for (const auto& c : checks)
    std::printf("%-4s [%s] %s — %s%s%s\n", c.pass ? "PASS" : "FAIL", c.suite.c_str(),
                c.name.c_str(), c.tag.c_str(), c.detail.empty() ? "" : " | ",
                c.detail.c_str());
  int failed = 0;
  for (const auto& c : checks)
    if (!c.pass) ++failed;
  std::printf("%d checks, %d failed\n", static_cast<int>(checks.size()), failed);
}

RatVec parse_fiber_arg(const std::string& at, int n) {
  RatVec z;
  std::string cur;
  for (char ch : at) {
    if (ch == ',') {
      z.push_back(rat_from_string(cur));
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) z.push_back(rat_from_string(cur));
  if (static_cast<int>(z.size()) != n)
    throw std::invalid_argument("--at needs " + std::to_string(n) + " comma-separated rationals");
  return z;
}

int cmd_circuits(const std::string& path, const GlobalOpts& g) {
  auto file = load_arrangement(path);
  auto circuits = enumerate_circuits(file.fam);
  if (g.format == "json") {
    Json j;
    j["n"] = file.fam.n;
    j["k"] = file.fam.k;
    Json arr = Json::array();
    for (const auto& c : circuits) {
      Json cj;
      Json sup = Json::array(), lam = Json::array();
      for (int idx : c.support) sup.push_back(idx + 1);
      for (const auto& l : c.syzygy) lam.push_back(rat_str(l));
      cj["support"] = sup;
      cj["syzygy"] = lam;
      arr.push_back(cj);
    }
    j["circuits"] = arr;
    if (file.z && file.z->exact) {
      auto cls = classify_fiber(file.fam, circuits, *file.z);
      j["fiber"] = cls.good ? "good" : "bad";
      j["vanishing"] = static_cast<int>(cls.vanishing_circuits.size());
    }
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::printf("%zu circuit(s) of %d hyperplanes in dimension %d\n", circuits.size(), file.fam.n,
              file.fam.k);
  for (const auto& c : circuits) {
    std::printf("  {");
    for (size_t q = 0; q < c.support.size(); ++q)
      std::printf("%s%d", q ? "," : "", c.support[q] + 1);
    std::printf("}  lambda = (");
    for (size_t q = 0; q < c.syzygy.size(); ++q)
      std::printf("%s%s", q ? ", " : "", rat_str(c.syzygy[q]).c_str());
    std::printf(")\n");
  }
  if (file.z && file.z->exact) {
    auto cls = classify_fiber(file.fam, circuits, *file.z);
    std::printf("fiber z: %s (%zu vanishing covector(s))\n", cls.good ? "good" : "bad",
                cls.vanishing_circuits.size());
  }
  return 0;
}

int cmd_sing(const std::string& path, const GlobalOpts& g) {
  auto file = load_arrangement(path);
  StandardBasis top = StandardBasis::build(file.fam, file.fam.k);
  SingBasis sb;
  if (file.z && file.z->exact) {
    auto circuits = enumerate_circuits(file.fam);
    auto cls = classify_fiber(file.fam, circuits, *file.z);
    sb = cls.good ? sing_basis(file.fam)
                  : degenerate_subspaces(file.fam, circuits, *file.z).sing;
  } else {
    sb = sing_basis(file.fam);
  }
  Json j = sing_basis_to_json(sb, top);
  if (g.format == "json") {
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::printf("ambient: %s, dim Sing = %d\n", j["ambient"].get<std::string>().c_str(), sb.dim());
  for (const auto& vec : j["basis"]) {
    std::printf(" ");
    for (const auto& entry : vec) {
      std::string subset;
      for (const auto& s : entry["subset"]) subset += (subset.empty() ? "" : ",") + std::to_string(s.get<int>());
      std::printf(" %s*F(%s)", entry["coeff"].get<std::string>().c_str(), subset.c_str());
    }
    std::printf("\n");
  }
  return 0;
}

int cmd_hamiltonians(const std::string& path, const std::string& at, int jindex,
                     const GlobalOpts& g) {
  auto file = load_arrangement(path);
  auto hf = HamiltonianFamily::build(file.fam);
  RatVec z;
  if (!at.empty())
    z = parse_fiber_arg(at, file.fam.n);
  else if (file.z && file.z->exact)
    z = file.z->z;
  else
    throw std::invalid_argument("no exact fiber: pass --at \"p/q,...\" or store z in the file");
  std::vector<int> js;
  if (jindex > 0)
    js.push_back(jindex - 1);
  else
    for (int j = 0; j < file.fam.n; ++j) js.push_back(j);
  Json out = Json::array();
  for (int j : js) {
    RatMat kj = hf.k_at(z, j);
    Json oj = operator_to_json(kj, "standard basis of F^k, independent k-subsets in lex order");
    oj["j"] = j + 1;
    oj["kappa"] = hf.kappa_label;  // formal parameter, labeling only
    out.push_back(oj);
  }
  if (g.format == "json") {
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  for (const auto& oj : out) {
    std::printf("K_%d(z) in the %s:\n", oj["j"].get<int>(), oj["basis"].get<std::string>().c_str());
    for (const auto& row : oj["matrix"]) {
      std::printf("  ");
      for (const auto& e : row) std::printf("%12s", e.get<std::string>().c_str());
      std::printf("\n");
    }
  }
  return 0;
}

int cmd_critical(const std::string& path, const GlobalOpts& g) {
  auto file = load_arrangement(path);
  if (!file.z) throw std::invalid_argument("critical: the file must carry a fiber point z");
  if (!file.z->exact)
    throw std::invalid_argument("critical: exact rational z required for region certification");
  auto pts = solve_critical_points(file.fam, *file.z, g.tol_newton);
  Json j = critical_points_to_json(file.fam, pts, file.z->zd);
  if (g.format == "json") {
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::printf("%zu critical point(s)\n", pts.size());
  for (const auto& p : j) {
    std::printf("  region %d: t = (", p["region"].get<int>());
    bool first = true;
    for (const auto& w : p["t"]) {
      std::printf("%s%s", first ? "" : ", ", w.get<std::string>().c_str());
      first = false;
    }
    std::printf("), residual %s, det Hess %s\n", p["residual"].get<std::string>().c_str(),
                p["hess_det"].get<std::string>().c_str());
  }
  return 0;
}

int cmd_verify(const std::string& path, const std::string& suite, const GlobalOpts& g) {
  std::vector<CheckResult> checks;
  if (!path.empty()) {
    // Try the arrangement schema first, then the Gaudin preset schema.
    try {
      auto file = load_arrangement(path);
      checks = run_arrangement_checks(file, g.verify());
    } catch (const std::exception& arr_err) {
      try {
        auto preset = load_gaudin_preset(path);
        checks = run_gaudin_checks(preset, g.verify());
      } catch (const std::exception&) {
        throw std::runtime_error(arr_err.what());
      }
    }
    if (suite != "all") {
      // keep only the requested label when filtering applies
      std::vector<CheckResult> kept;
      for (auto& c : checks)
        if (c.suite == suite || c.suite == "file") kept.push_back(std::move(c));
      checks = std::move(kept);
    }
  } else {
    checks = run_builtin_suite(suite, g.verify());
  }
  print_checks(checks, g);
  return all_pass(checks) ? 0 : 1;
}

int cmd_gaudin(const std::string& path, const GlobalOpts& g) {
  auto preset = load_gaudin_preset(path);
  auto checks = run_gaudin_checks(preset, g.verify());
  print_checks(checks, g);
  return all_pass(checks) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact quantum integrable models of weighted hyperplane arrangements:\n"
      "circuits, singular flag spaces, geometric Hamiltonians, master-function\n"
      "critical points and sl2/gl2 Gaudin Bethe vectors."};
  app.require_subcommand(1);
  app.fallthrough();  // let global flags follow the subcommand

  GlobalOpts g;
  app.add_option("--seed", g.seed, "seed for all randomized checks (default 0)");
  app.add_option("--tol-newton", g.tol_newton, "critical-point residual tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-verify", g.tol_verify, "floating verification tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "output format: table | json")
      ->check(CLI::IsMember({"table", "json"}));

  std::string path, at, suite = "all";
  int jindex = 0;

  auto* c_circ = app.add_subcommand("circuits", "list matroid circuits and their syzygies");
  c_circ->add_option("file", path, "arrangement JSON file")->required();

  auto* c_sing = app.add_subcommand("sing", "basis of the singular subspace");
  c_sing->add_option("file", path, "arrangement JSON file")->required();

  auto* c_ham = app.add_subcommand("hamiltonians", "geometric Hamiltonian matrices K_j(z)");
  c_ham->add_option("file", path, "arrangement JSON file")->required();
  c_ham->add_option("--at", at, "fiber point as comma-separated rationals");
  c_ham->add_option("--j", jindex, "single 1-based hyperplane index");

  auto* c_crit = app.add_subcommand("critical", "solve all critical points (positive weights)");
  c_crit->add_option("file", path, "arrangement JSON file")->required();

  auto* c_ver = app.add_subcommand("verify", "run verification suites");
  c_ver->add_option("file", path, "optional arrangement or Gaudin preset file");
  c_ver->add_option("--suite", suite, "all | good | bad | gaudin")
      ->check(CLI::IsMember({"all", "good", "bad", "gaudin"}));

  auto* c_gau = app.add_subcommand("gaudin", "full Gaudin pipeline report for a preset");
  c_gau->add_option("preset", path, "Gaudin preset JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_circ->parsed()) return cmd_circuits(path, g);
    if (c_sing->parsed()) return cmd_sing(path, g);
    if (c_ham->parsed()) return cmd_hamiltonians(path, at, jindex, g);
    if (c_crit->parsed()) return cmd_critical(path, g);
    if (c_ver->parsed()) return cmd_verify(path, suite, g);
    if (c_gau->parsed()) return cmd_gaudin(path, g);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
