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

#include "sfs/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>

#include "sfs/io.hpp"
#include "sfs/network.hpp"
#include "sfs/renderers.hpp"
#include "sfs/trainer.hpp"

namespace sfs {
namespace fs = std::filesystem;
namespace {

constexpr const char* kDatasetFile = "dataset.sfsx";
constexpr const char* kCheckpointFile = "model.sfsm";
constexpr const char* kManifestFile = "manifest.json";

std::vector<std::string> train_outputs() {
  return {kCheckpointFile, std::string(kCheckpointFile) + ".json", "training_log.csv"};
}

Dataset load_matching_dataset(const ExperimentConfig& cfg, const fs::path& out) {
  const fs::path path = out / kDatasetFile;
  if (!fs::exists(path)) {
    throw std::runtime_error("no dataset at " + path.string() + "; run gen-dataset first");
  }
  Dataset ds = read_dataset(path);
  Dataset expected;
  expected.array = cfg.array_geometry();
  expected.freqs = cfg.frequency_grid();
  expected.control = control_points(cfg);
  if (ds.geometry_hash() != expected.geometry_hash()) {
    throw std::runtime_error(path.string() +
                             " was built for a different geometry; rerun gen-dataset");
  }
  return ds;
}

std::vector<ComplexMatrix> transfer_stack(const std::vector<Point2>& points,
                                          const ArrayGeometry& array, const FrequencyGrid& f) {
  const std::vector<Point2> speakers = array.active_positions();
  std::vector<ComplexMatrix> g;
  g.reserve(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    g.push_back(transfer_matrix(points, speakers, f.omega(k), f.c()));
  }
  return g;
}

ModelParams load_model(const ExperimentConfig& cfg, const fs::path& out) {
  const fs::path path = out / kCheckpointFile;
  if (!fs::exists(path)) {
    throw std::runtime_error("no checkpoint at " + path.string() +
                             "; run the train stage first or drop cnn from methods");
  }
  ModelParams params = load_checkpoint(path);
  const auto active = static_cast<int>(cfg.array.count - cfg.decimation);
  if (params.spec.rows != 2 * active ||
      params.spec.cols != static_cast<int>(cfg.frequencies.count)) {
    throw std::runtime_error(path.string() + " was trained for a different geometry");
  }
  return params;
}

void check_render_source(const ExperimentConfig& cfg, Point2 source) {
  if (cfg.listening.contains(source)) {
    throw std::invalid_argument("render source lies inside the listening area");
  }
  if (cfg.array.family == ArrayFamily::kCircular && !(source.norm() > cfg.array.radius)) {
    throw std::invalid_argument("render source must lie outside the circular array");
  }
}

std::string hz_tag(double hz) {
  std::string s = format_double(hz);
  for (char& ch : s) {
    if (ch == '.') ch = 'p';
  }
  return s + "Hz";
}

void write_real_field(const fs::path& out, const std::string& stem, const PointSet& points,
                      const ComplexVector& field, double spacing,
                      std::vector<ArtifactEntry>& files) {
  write_field_csv(out / (stem + ".csv"), points, field);
  std::vector<double> re(static_cast<std::size_t>(field.size()));
  for (Eigen::Index i = 0; i < field.size(); ++i) re[static_cast<std::size_t>(i)] = field(i).real();
  write_field_pgm(out / (stem + ".pgm"), points, re, spacing);
  files.push_back({stem + ".csv", "field_csv", "render", "", false});
  files.push_back({stem + ".pgm", "field_image", "render", "", false});
}

void fill_hashes(const fs::path& root, std::vector<ArtifactEntry>& files) {
  for (ArtifactEntry& e : files) e.sha256 = sha256_file(root / e.path);
}

ArtifactManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) return {};
  try {
    return ArtifactManifest::from_json(nlohmann::json::parse(in));
  } catch (const std::exception&) {
    return {};
  }
}

void write_manifest(const fs::path& path, const ArtifactManifest& m) {
  std::ofstream out(path);
  out << m.to_json().dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

nlohmann::json ArtifactManifest::to_json() const {
  nlohmann::json files_json = nlohmann::json::array();
  for (const ArtifactEntry& e : files) {
    files_json.push_back({{"path", e.path},
                          {"role", e.role},
                          {"stage", e.stage},
                          {"sha256", e.sha256},
                          {"stale", e.stale}});
  }
  return {{"config_hash", config_hash}, {"files", files_json}};
}

ArtifactManifest ArtifactManifest::from_json(const nlohmann::json& j) {
  ArtifactManifest m;
  m.config_hash = j.at("config_hash").get<std::string>();
  for (const auto& f : j.at("files")) {
    m.files.push_back({f.at("path").get<std::string>(), f.at("role").get<std::string>(),
                       f.at("stage").get<std::string>(), f.at("sha256").get<std::string>(),
                       f.at("stale").get<bool>()});
  }
  return m;
}

bool ArtifactManifest::verify(const fs::path& root) const {
  for (const ArtifactEntry& e : files) {
    if (e.stale || !fs::exists(root / e.path) || sha256_file(root / e.path) != e.sha256) {
      return false;
    }
  }
  return true;
}

std::uint64_t source_seed(const ExperimentConfig& cfg) { return cfg.seed + 1; }
std::uint64_t init_seed(const ExperimentConfig& cfg) { return cfg.seed + 2; }
std::uint64_t shuffle_seed(const ExperimentConfig& cfg) { return cfg.seed + 3; }

PointSet control_points(const ExperimentConfig& cfg) {
  const ArrayGeometry regular = cfg.regular_array();
  PointSet cp = filter_clearance(sample_control_points(cfg.listening, cfg.control_points),
                                 regular.positions(), kMinClearance);
  cp.role = PointRole::kControl;
  return cp;
}

PointSet evaluation_points(const ExperimentConfig& cfg) {
  const ArrayGeometry regular = cfg.regular_array();
  return filter_clearance(sample_listening_grid(cfg.listening), regular.positions(),
                          kMinClearance);
}

SourceSplit generate_sources(const ExperimentConfig& cfg) {
  SourceSplit split = cfg.array.family == ArrayFamily::kCircular
                          ? gen_sources_circular(cfg.circular, source_seed(cfg))
                          : gen_sources_linear(cfg.linear, source_seed(cfg));
  check_sources_outside(split, cfg.listening, cfg.regular_array());
  return split;
}

std::vector<ArtifactEntry> stage_gen_dataset(const ExperimentConfig& cfg, const fs::path& out) {
  cfg.validate();
  fs::create_directories(out);
  const PointSet cp = control_points(cfg);
  const Dataset ds = build_dataset(cfg.array_geometry(), generate_sources(cfg), cp,
                                   cfg.frequency_grid(), cfg.listening_radius(),
                                   cfg.regularization);
  write_dataset(out / kDatasetFile, ds);
  write_points_csv(out / "control_points.csv", cp);
  return {{kDatasetFile, "dataset", "gen-dataset", "", false},
          {"control_points.csv", "points_csv", "gen-dataset", "", false}};
}

std::vector<ArtifactEntry> stage_train(const ExperimentConfig& cfg, const fs::path& out,
                                       std::ostream* log) {
  cfg.validate();
  const Dataset ds = load_matching_dataset(cfg, out);
  std::vector<TrainingSample> train;
  std::vector<TrainingSample> val;
  for (const DatasetRecord& r : ds.records) {
    if (r.split == Split::kTrain) train.push_back({r.tensor, r.pressure});
    if (r.split == Split::kVal) val.push_back({r.tensor, r.pressure});
  }
  const std::vector<ComplexMatrix> g = transfer_stack(ds.control.points, ds.array, ds.freqs);
  const NetworkSpec spec = compensator_network(2 * static_cast<int>(ds.array.active_count()),
                                               static_cast<int>(ds.freqs.size()));
  TrainConfig tc = cfg.train;
  tc.seed = shuffle_seed(cfg);

  std::ofstream csv(out / "training_log.csv");
  if (!csv) throw std::runtime_error("cannot write training_log.csv");
  csv << "epoch,train_loss,val_loss,improved\n";
  const auto on_epoch = [&](const EpochReport& r) {
    csv << r.epoch << ',' << format_double(r.train_loss) << ',' << format_double(r.val_loss)
        << ',' << (r.improved ? 1 : 0) << '\n';
    if (log && (r.epoch % 10 == 0 || r.improved)) {
      *log << "epoch " << r.epoch << " train " << r.train_loss << " val " << r.val_loss
           << (r.improved ? " *" : "") << '\n';
    }
  };
  const TrainResult result = train_compensator(init_params(spec, init_seed(cfg)), train, val, g,
                                               cfg.loss, tc, on_epoch);
  csv.close();
  if (!csv) throw std::runtime_error("failed writing training_log.csv");
  if (log) {
    *log << "best validation loss " << result.best_val_loss << " at epoch " << result.best_epoch
         << " (" << result.params.parameter_count() << " parameters)\n";
  }
  save_checkpoint(out / kCheckpointFile, result.params);
  return {{kCheckpointFile, "checkpoint", "train", "", false},
          {std::string(kCheckpointFile) + ".json", "checkpoint_sidecar", "train", "", false},
          {"training_log.csv", "training_log", "train", "", false}};
}

std::vector<ArtifactEntry> stage_evaluate(const ExperimentConfig& cfg, const fs::path& out,
                                          std::ostream* log) {
  cfg.validate();
  const Dataset ds = load_matching_dataset(cfg, out);
  const std::vector<const DatasetRecord*> test = ds.select(Split::kTest);
  if (test.empty()) throw std::runtime_error("dataset has no test sources");
  const PointSet grid = evaluation_points(cfg);
  const FrequencyGrid& f = ds.freqs;
  const std::vector<ComplexMatrix> g = transfer_stack(grid.points, ds.array, f);

  std::optional<ModelParams> model;
  if (cfg.uses(Method::kCnn)) model = load_model(cfg, out);
  std::optional<PmBank> pm;
  if (cfg.uses(Method::kPm)) pm.emplace(ds.array, ds.control, f, cfg.regularization);

  const auto n_src = static_cast<Eigen::Index>(test.size());
  const auto n_freq = static_cast<Eigen::Index>(f.size());
  std::vector<SourceMetrics> nre_tables(cfg.methods.size(), SourceMetrics(n_src, n_freq));
  std::vector<SourceMetrics> ssim_tables(cfg.methods.size(), SourceMetrics(n_src, n_freq));
  std::vector<double> radii;
  for (Eigen::Index s = 0; s < n_src; ++s) {
    const DatasetRecord& rec = *test[static_cast<std::size_t>(s)];
    radii.push_back(rec.position.norm());
    const Source source{rec.position, {}};
    std::vector<ComplexMatrix> drive;
    for (Method m : cfg.methods) {
      switch (m) {
        case Method::kMr:
          drive.push_back(unpack_driving(rec.tensor));
          break;
        case Method::kPm:
          drive.push_back(pm->driving(source).values);
          break;
        case Method::kCnn:
          drive.push_back(unpack_driving(cnn_forward(rec.tensor, *model)));
          break;
      }
    }
    for (Eigen::Index k = 0; k < n_freq; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      const ComplexVector gt = monopole_field(grid.points, rec.position, f.omega(ku), f.c());
      const std::vector<double> gt_mag = normalize_magnitude(gt);
      for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
        const ComplexVector p = g[ku] * drive[m].col(k);
        nre_tables[m](s, k) = nre(p, gt);
        ssim_tables[m](s, k) = ssim_global(normalize_magnitude(p), gt_mag);
      }
    }
    if (log && (s + 1) % 16 == 0) *log << "evaluated " << s + 1 << "/" << n_src << " sources\n";
  }

  std::vector<ArtifactEntry> files;
  const auto emit = [&](const std::string& name, const MetricSeries& series) {
    write_metric_csv(out / name, series);
    files.push_back({name, "metric_csv", "evaluate", "", false});
  };
  emit("nre_frequency.csv", frequency_sweep(f.hz(), cfg.methods, nre_tables));
  emit("ssim_frequency.csv", frequency_sweep(f.hz(), cfg.methods, ssim_tables));
  if (!cfg.evaluation.radius_bins.empty()) {
    const std::size_t k = f.nearest(cfg.evaluation.radius_sweep_hz);
    emit("nre_radius.csv",
         radius_sweep(radii, cfg.evaluation.radius_bins, k, cfg.methods, nre_tables));
    emit("ssim_radius.csv",
         radius_sweep(radii, cfg.evaluation.radius_bins, k, cfg.methods, ssim_tables));
  }
  return files;
}

std::vector<ArtifactEntry> render_field(const ExperimentConfig& cfg, const fs::path& out,
                                        Method method, Point2 source, double hz) {
  cfg.validate();
  check_render_source(cfg, source);
  fs::create_directories(out);
  const FrequencyGrid freqs = cfg.frequency_grid();
  const std::size_t k = freqs.nearest(hz);
  const double omega = freqs.omega(k);
  const ArrayGeometry array = cfg.array_geometry();
  const PointSet grid = evaluation_points(cfg);
  const PointSet cp = control_points(cfg);
  const Source src{source, {}};

  ComplexVector d;
  switch (method) {
    case Method::kMr: {
      const FrequencyGrid single({freqs.hz(k)}, freqs.c());
      d = MrBank(array, single, cfg.listening_radius(), cp, cfg.regularization)
              .driving(src)
              .values.col(0);
      break;
    }
    case Method::kPm: {
      const FrequencyGrid single({freqs.hz(k)}, freqs.c());
      d = PmBank(array, cp, single, cfg.regularization).driving(src).values.col(0);
      break;
    }
    case Method::kCnn: {
      const ModelParams model = load_model(cfg, out);
      const DrivingSignals mr =
          MrBank(array, freqs, cfg.listening_radius(), cp, cfg.regularization).driving(src);
      d = compensate(mr, model).values.col(static_cast<Eigen::Index>(k));
      break;
    }
  }
  const ComplexVector gt = monopole_field(grid.points, source, omega, freqs.c());
  const ComplexVector p = synthesize(array, d, grid, omega, freqs.c()).pressure;

  std::vector<ArtifactEntry> files;
  const std::string tag = hz_tag(freqs.hz(k));
  write_real_field(out, "field_gt_" + tag, grid, gt, cfg.listening.spacing, files);
  write_real_field(out, std::string("field_") + to_string(method) + "_" + tag, grid, p,
                   cfg.listening.spacing, files);

  std::vector<double> err(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double e = std::norm(p(ii) - gt(ii)) / std::norm(gt(ii));
    err[i] = e > 0.0 ? std::max(kNreFloorDb, 10.0 * std::log10(e)) : kNreFloorDb;
  }
  const std::string stem = std::string("nre_map_") + to_string(method) + "_" + tag;
  {
    std::ofstream csv(out / (stem + ".csv"));
    csv << "x,y,nre_db\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      csv << format_double(grid.points[i].x) << ',' << format_double(grid.points[i].y) << ','
          << format_double(err[i]) << '\n';
    }
    if (!csv) throw std::runtime_error("failed writing " + stem + ".csv");
  }
  write_field_pgm(out / (stem + ".pgm"), grid, err, cfg.listening.spacing);
  files.push_back({stem + ".csv", "nre_map_csv", "render", "", false});
  files.push_back({stem + ".pgm", "nre_map_image", "render", "", false});
  return files;
}

ArtifactManifest run_experiment(const ExperimentConfig& cfg, const fs::path& out,
                                std::ostream* log) {
  cfg.validate();
  fs::create_directories(out);
  save_config(out / "config.json", cfg);
  ArtifactManifest manifest;
  manifest.config_hash = sha256_hex(to_json(cfg).dump());
  manifest.files.push_back({"config.json", "config", "config", sha256_file(out / "config.json"),
                            false});
  const ArtifactManifest previous = read_manifest(out / kManifestFile);

  using StageFn = std::function<std::vector<ArtifactEntry>()>;
  std::vector<std::pair<std::string, StageFn>> stages;
  stages.emplace_back("gen-dataset", [&] { return stage_gen_dataset(cfg, out); });
  if (cfg.uses(Method::kCnn)) stages.emplace_back("train", [&] { return stage_train(cfg, out, log); });
  stages.emplace_back("evaluate", [&] { return stage_evaluate(cfg, out, log); });
  stages.emplace_back("render", [&] {
    std::vector<ArtifactEntry> files;
    for (Method m : cfg.methods) {
      for (ArtifactEntry& e :
           render_field(cfg, out, m, cfg.evaluation.render_source, cfg.evaluation.render_hz)) {
        const bool seen = std::any_of(files.begin(), files.end(),
                                      [&](const ArtifactEntry& x) { return x.path == e.path; });
        if (!seen) files.push_back(std::move(e));
      }
    }
    return files;
  });

  bool upstream_reused = true;
  for (const auto& [name, fn] : stages) {
    ArtifactManifest prior;
    prior.config_hash = previous.config_hash;
    for (const ArtifactEntry& e : previous.files) {
      if (e.stage == name) prior.files.push_back(e);
    }
    if (upstream_reused && previous.config_hash == manifest.config_hash &&
        !prior.files.empty() && prior.verify(out)) {
      if (log) *log << "[" << name << "] outputs up to date, skipped\n";
      manifest.files.insert(manifest.files.end(), prior.files.begin(), prior.files.end());
      continue;
    }
    if (log) *log << "[" << name << "] running\n";
    try {
      std::vector<ArtifactEntry> files = fn();
      fill_hashes(out, files);
      bool same = prior.files.size() == files.size();
      for (std::size_t i = 0; same && i < files.size(); ++i) {
        same = prior.files[i].path == files[i].path && prior.files[i].sha256 == files[i].sha256;
      }
      upstream_reused = upstream_reused && same;
      manifest.files.insert(manifest.files.end(), files.begin(), files.end());
    } catch (const std::exception& e) {
      for (const ArtifactEntry& p : prior.files) {
        if (fs::exists(out / p.path)) {
          ArtifactEntry stale = p;
          stale.sha256 = sha256_file(out / p.path);
          stale.stale = true;
          manifest.files.push_back(stale);
        }
      }
      if (name == "train") {
        for (const std::string& path : train_outputs()) {
          const bool listed = std::any_of(manifest.files.begin(), manifest.files.end(),
                                          [&](const ArtifactEntry& x) { return x.path == path; });
          if (!listed && fs::exists(out / path)) {
            manifest.files.push_back({path, "partial", name, sha256_file(out / path), true});
          }
        }
      }
      write_manifest(out / kManifestFile, manifest);
      throw StageError(name, e.what());
    }
  }
  write_manifest(out / kManifestFile, manifest);
  return manifest;
}

}  // namespace sfs
