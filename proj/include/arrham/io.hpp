#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "arrham/gaudin.hpp"
#include "arrham/mastercrit.hpp"

namespace arrham {

using Json = nlohmann::ordered_json;

// Arrangement file: { "k", "n", "B": [["p/q",...]], "a": ["p/q",...],
// "labels": [...], "z": optional ["p/q" | number] }.
struct ArrangementFile {
  ArrangementFamily fam;
  std::optional<FiberPoint> z;
};

ArrangementFile load_arrangement(const std::string& path);
ArrangementFile parse_arrangement(const Json& j);
Json arrangement_to_json(const ArrangementFamily& fam, const std::optional<FiberPoint>& z);

// Gaudin preset: { "algebra": "sl2"|"gl2", "weights": [...], "k": [...], "x": [...] }.
// sl2 weights are <Lambda_b, H>; gl2 weights are the first partition row.
struct GaudinPreset {
  std::string algebra;
  std::vector<long> weights;
  std::vector<int> kvec;
  RatVec x;

  GaudinData data() const;       // rank-1 pairing data
  TensorModule module() const;
};

GaudinPreset load_gaudin_preset(const std::string& path);
GaudinPreset parse_gaudin_preset(const Json& j);

// Report pieces (every printed number mirrors the JSON report).
Json sing_basis_to_json(const SingBasis& sb, const StandardBasis& top);
Json operator_to_json(const RatMat& op, const std::string& basis_descriptor);
Json critical_points_to_json(const ArrangementFamily& fam, const std::vector<CriticalPoint>& pts,
                             const std::vector<double>& z);

std::string format_double(double v);

}  // namespace arrham
