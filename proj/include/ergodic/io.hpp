#pragma once

#include "ergodic/conditions.hpp"
#include "ergodic/decomposition.hpp"
#include "ergodic/economy.hpp"
#include "ergodic/kernel.hpp"
#include "ergodic/spectral.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace ergodic::io {

using json = nlohmann::json;

// Schemas:
//   kernel      {"states": [...], "rows": [[...], ...]}
//   measure     {"states": [...], "weights": [...]}      (observables likewise)
//   model       {"exo_states": [...], "endo_states": [...], "q": [[...]], "law": {"x|e": "x'"}}
//   density     {"density": [[...]], "cell_weights": [...], "eps": [...]}
// Arrays follow the accompanying "states" list. NaN/Inf and ragged arrays are rejected.

MarkovKernel kernel_from_json(const json& j);
json to_json(const MarkovKernel& kernel);

/// Weights are reordered onto `space` when the file lists the same states in another order.
SignedMeasure measure_from_json(const json& j, const StateSpace& space);
Observable observable_from_json(const json& j, const StateSpace& space);
json to_json(const SignedMeasure& mu);
json to_json(const Observable& l);

EconomyModel model_from_json(const json& j);
json to_json(const EconomyModel& model);

struct DensityInput {
  Matrix density;
  Vector cell_weights;
  std::vector<double> eps;
};
DensityInput density_from_json(const json& j);

json to_json(const ErgodicDecomposition& decomp);
json to_json(const SpectralSplit& split);
json to_json(const ConditionReport& report);
json to_json(const ErgodicityVerdict& verdict);

json read_json_file(const std::filesystem::path& path);
/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace ergodic::io
