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

#ifndef SFS_EXPERIMENT_HPP_
#define SFS_EXPERIMENT_HPP_

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sfs/config.hpp"
#include "sfs/datasets.hpp"

namespace sfs {

class StageError : public std::runtime_error {
 public:
  StageError(const std::string& stage, const std::string& cause)
      : std::runtime_error(stage + ": " + cause), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct ArtifactEntry {
  std::string path;  // relative to the output directory
  std::string role;
  std::string stage;
  std::string sha256;
  bool stale = false;
};

struct ArtifactManifest {
  std::string config_hash;
  std::vector<ArtifactEntry> files;

  nlohmann::json to_json() const;
  static ArtifactManifest from_json(const nlohmann::json& j);
  // True if no entry is stale and every file exists with its recorded hash.
  bool verify(const std::filesystem::path& root) const;
};

// Seeds derived from ExperimentConfig::seed.
std::uint64_t source_seed(const ExperimentConfig& cfg);
std::uint64_t init_seed(const ExperimentConfig& cfg);
std::uint64_t shuffle_seed(const ExperimentConfig& cfg);

PointSet control_points(const ExperimentConfig& cfg);
// Listening grid without points closer than kMinClearance to any loudspeaker
// of the regular array.
PointSet evaluation_points(const ExperimentConfig& cfg);
SourceSplit generate_sources(const ExperimentConfig& cfg);

// Stage outputs are written under `out`; each returns the files it wrote
// (relative paths and roles, hashes not yet filled).
std::vector<ArtifactEntry> stage_gen_dataset(const ExperimentConfig& cfg,
                                             const std::filesystem::path& out);
std::vector<ArtifactEntry> stage_train(const ExperimentConfig& cfg,
                                       const std::filesystem::path& out, std::ostream* log);
std::vector<ArtifactEntry> stage_evaluate(const ExperimentConfig& cfg,
                                          const std::filesystem::path& out, std::ostream* log);

// Ground-truth and `method` fields (real part) at the grid frequency nearest
// `hz`, plus the per-point NRE map of the method, as CSV and PGM files.
// Throws std::invalid_argument if the source lies inside the listening area
// or the circular array, and std::runtime_error if cnn is requested without
// a checkpoint in `out`.
std::vector<ArtifactEntry> render_field(const ExperimentConfig& cfg,
                                        const std::filesystem::path& out, Method method,
                                        Point2 source, double hz);

// gen-dataset, train (when cnn is requested), evaluate and render. Writes
// config.json and manifest.json to `out`. Stages whose recorded outputs still
// match the manifest for the same config are skipped. On failure the
// manifest is written with the failing stage's files marked stale and a
// StageError is thrown.
ArtifactManifest run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out,
                                std::ostream* log);

}  // namespace sfs

#endif  // SFS_EXPERIMENT_HPP_
