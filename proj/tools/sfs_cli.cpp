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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sfs/config.hpp"
#include "sfs/datasets.hpp"
#include "sfs/experiment.hpp"
#include "sfs/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string scale = "full";
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "JSON config file (missing keys keep the defaults)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "Output directory (overrides output_dir)");
  cmd->add_option("--seed", o.seed, "Master seed (overrides seed)");
  cmd->add_option("--scale", o.scale, "Default set: full or desk")
      ->check(CLI::IsMember({"full", "desk"}));
}

sfs::ExperimentConfig resolve(const CommonOptions& o) {
  const sfs::Scale scale = sfs::parse_scale(o.scale);
  sfs::ExperimentConfig cfg =
      o.config.empty() ? sfs::default_config(scale) : sfs::load_config(o.config, scale);
  if (o.seed) cfg.seed = *o.seed;
  if (!o.out.empty()) cfg.output_dir = o.out;
  cfg.validate();
  return cfg;
}

void print_files(const std::vector<sfs::ArtifactEntry>& files, const fs::path& out) {
  for (const auto& f : files) std::cout << (out / f.path).string() << '\n';
}

// Runs `body`; failures are reported as "error [stage]: cause".
int guarded(const std::string& stage, const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const sfs::StageError& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error [" << stage << "]: " << e.what() << '\n';
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sound field synthesis experiments: mode matching, pressure matching and CNN "
               "compensation of irregular loudspeaker arrays"};
  app.require_subcommand(1);

  CommonOptions common;
  CLI::App* gen = app.add_subcommand("gen-dataset", "Generate sources and MR driving signals");
  CLI::App* train = app.add_subcommand("train", "Train the compensation network");
  CLI::App* evaluate = app.add_subcommand("evaluate", "NRE and SSIM sweeps on the test split");
  CLI::App* render = app.add_subcommand("render", "Export one synthesized sound field");
  CLI::App* run = app.add_subcommand("run", "Run every stage and write manifest.json");
  CLI::App* inspect = app.add_subcommand("inspect", "Summarize a dataset and dump records");
  for (CLI::App* cmd : {gen, train, evaluate, render, run, inspect}) add_common(cmd, common);

  std::string method = "mr";
  std::vector<double> source;
  std::optional<double> hz;
  render->add_option("--method", method, "mr, pm or cnn")
      ->check(CLI::IsMember({"mr", "pm", "cnn"}));
  render->add_option("--source", source, "Source position x y (default from config)")
      ->expected(2);
  render->add_option("--hz", hz, "Frequency, snapped to the grid (default from config)");

  std::string dataset_path;
  std::vector<std::size_t> record_ids;
  inspect->add_option("--dataset", dataset_path, "Dataset file (default <out>/dataset.sfsx)");
  inspect->add_option("--record", record_ids, "Record indices to dump as CSV");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    return guarded("gen-dataset", [&] {
      const auto cfg = resolve(common);
      print_files(sfs::stage_gen_dataset(cfg, cfg.output_dir), cfg.output_dir);
    });
  }
  if (train->parsed()) {
    return guarded("train", [&] {
      const auto cfg = resolve(common);
      print_files(sfs::stage_train(cfg, cfg.output_dir, &std::cerr), cfg.output_dir);
    });
  }
  if (evaluate->parsed()) {
    return guarded("evaluate", [&] {
      const auto cfg = resolve(common);
      print_files(sfs::stage_evaluate(cfg, cfg.output_dir, &std::cerr), cfg.output_dir);
    });
  }
  if (render->parsed()) {
    return guarded("render", [&] {
      const auto cfg = resolve(common);
      const sfs::Point2 src =
          source.empty() ? cfg.evaluation.render_source : sfs::Point2{source[0], source[1]};
      print_files(sfs::render_field(cfg, cfg.output_dir, sfs::parse_method(method), src,
                                    hz.value_or(cfg.evaluation.render_hz)),
                  cfg.output_dir);
    });
  }
  if (run->parsed()) {
    return guarded("run", [&] {
      const auto cfg = resolve(common);
      const sfs::ArtifactManifest m = sfs::run_experiment(cfg, cfg.output_dir, &std::cerr);
      print_files(m.files, cfg.output_dir);
    });
  }
  return guarded("inspect", [&] {
    const auto cfg = resolve(common);
    const fs::path path =
        dataset_path.empty() ? fs::path(cfg.output_dir) / "dataset.sfsx" : fs::path(dataset_path);
    const sfs::Dataset ds = sfs::read_dataset(path);
    std::cout << "file            " << path.string() << '\n'
              << "geometry_hash   " << ds.geometry_hash() << '\n'
              << "loudspeakers    " << ds.array.active_count() << " of "
              << ds.array.total_count() << '\n'
              << "frequencies     " << ds.freqs.size() << '\n'
              << "control_points  " << ds.control.size() << '\n';
    for (sfs::Split s : {sfs::Split::kTrain, sfs::Split::kVal, sfs::Split::kTest}) {
      std::cout << "records." << sfs::to_string(s) << "   " << ds.select(s).size() << '\n';
    }
    for (std::size_t id : record_ids) {
      if (id >= ds.records.size()) {
        throw std::out_of_range("record " + std::to_string(id) + " out of range (" +
                                std::to_string(ds.records.size()) + " records)");
      }
      const fs::path stem = path.parent_path() / ("record_" + std::to_string(id));
      sfs::write_record_csv(stem, ds.records[id]);
      std::cout << stem.string() << "_tensor.csv\n" << stem.string() << "_pressure.csv\n";
    }
  });
}
