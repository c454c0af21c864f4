// Copyright 2026 The sfs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SFS_CONFIG_HPP_
#define SFS_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "sfs/datasets.hpp"
#include "sfs/evaluation.hpp"
#include "sfs/geometry.hpp"
#include "sfs/loss.hpp"
#include "sfs/trainer.hpp"

namespace sfs {

inline constexpr int kConfigSchemaVersion = 1;

enum class Scale { kFull, kDesk };

Scale parse_scale(const std::string& name);
const char* to_string(Scale s);

struct ArrayConfig {
  ArrayFamily family = ArrayFamily::kCircular;
  std::size_t count = 64;
  double radius = 1.0;
  double spacing = 0.0625;
  double x0 = 1.0;

  friend bool operator==(const ArrayConfig&, const ArrayConfig&) = default;
};

struct FrequencyConfig {
  double start_hz = 46.0;
  double step_hz = 23.0;
  std::size_t count = 63;
  double speed_of_sound = kDefaultSpeedOfSound;

  friend bool operator==(const FrequencyConfig&, const FrequencyConfig&) = default;
};

struct EvaluationConfig {
  // Source-radius bin edges for the fixed-frequency sweep; empty disables it.
  std::vector<double> radius_bins;
  double radius_sweep_hz = 1007.0;
  Point2 render_source{0.72, 1.37};
  double render_hz = 1007.0;

  friend bool operator==(const EvaluationConfig&, const EvaluationConfig&) = default;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  ArrayConfig array;
  std::size_t decimation = 32;
  ListeningArea listening{Disk{{0.0, 0.0}, 1.0}, 0.02};
  std::size_t control_points = 276;
  FrequencyConfig frequencies;
  CircularProtocol circular;
  LinearProtocol linear;
  TrainConfig train;
  LossWeights loss;
  double regularization = 1e-2;
  std::vector<Method> methods{Method::kMr, Method::kPm, Method::kCnn};
  EvaluationConfig evaluation;
  std::string output_dir = "out";

  bool uses(Method m) const;
  FrequencyGrid frequency_grid() const;
  // Regular array, then the decimated one (seeded from `seed`).
  ArrayGeometry regular_array() const;
  ArrayGeometry array_geometry() const;
  // Radius that sets the MR truncation order.
  double listening_radius() const;

  // Throws std::invalid_argument describing the first inconsistency.
  void validate() const;
};

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

// Defaults for a scale and array family. Full scale mirrors the published
// setup; desk scale is the reduced circular (or linear) setup that trains in
// minutes on one CPU core.
ExperimentConfig default_config(Scale scale, ArrayFamily family = ArrayFamily::kCircular);

nlohmann::json to_json(const ExperimentConfig& cfg);

// Starts from default_config(scale, family-from-json) and applies every key
// present in `j`. Unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j, Scale scale);

ExperimentConfig load_config(const std::filesystem::path& path, Scale scale);
void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg);

}  // namespace sfs

#endif  // SFS_CONFIG_HPP_
