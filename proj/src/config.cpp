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

#include "sfs/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace sfs {
namespace {

using nlohmann::json;

void check_keys(const json& j, const char* section, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw std::invalid_argument(std::string(section) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw std::invalid_argument("unknown config key '" + std::string(section) + "." + key + "'");
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

json point_json(Point2 p) { return json::array({p.x, p.y}); }

Point2 point_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("points are [x, y] arrays");
  return {j[0].get<double>(), j[1].get<double>()};
}

json listening_json(const ListeningArea& a) {
  if (const auto* d = std::get_if<Disk>(&a.shape)) {
    return {{"shape", "disk"},
            {"center", point_json(d->center)},
            {"radius", d->radius},
            {"spacing", a.spacing}};
  }
  const auto& r = std::get<Rectangle>(a.shape);
  return {{"shape", "rectangle"}, {"xmin", r.xmin},  {"xmax", r.xmax},
          {"ymin", r.ymin},       {"ymax", r.ymax}, {"spacing", a.spacing}};
}

ListeningArea listening_from(const json& j, const ListeningArea& base) {
  check_keys(j, "listening", {"shape", "center", "radius", "spacing", "xmin", "xmax", "ymin", "ymax"});
  ListeningArea a = base;
  read(j, "spacing", a.spacing);
  std::string shape = std::holds_alternative<Disk>(a.shape) ? "disk" : "rectangle";
  read(j, "shape", shape);
  if (shape == "disk") {
    Disk d = std::holds_alternative<Disk>(a.shape) ? std::get<Disk>(a.shape) : Disk{};
    if (j.contains("center")) d.center = point_from(j.at("center"));
    read(j, "radius", d.radius);
    a.shape = d;
  } else if (shape == "rectangle") {
    Rectangle r = std::holds_alternative<Rectangle>(a.shape) ? std::get<Rectangle>(a.shape)
                                                             : Rectangle{};
    read(j, "xmin", r.xmin);
    read(j, "xmax", r.xmax);
    read(j, "ymin", r.ymin);
    read(j, "ymax", r.ymax);
    a.shape = r;
  } else {
    throw std::invalid_argument("listening.shape must be 'disk' or 'rectangle'");
  }
  return a;
}

ArrayFamily parse_family(const std::string& s) {
  if (s == "circular") return ArrayFamily::kCircular;
  if (s == "linear") return ArrayFamily::kLinear;
  throw std::invalid_argument("array.family must be 'circular' or 'linear'");
}

const char* family_name(ArrayFamily f) {
  return f == ArrayFamily::kCircular ? "circular" : "linear";
}

}  // namespace

Scale parse_scale(const std::string& name) {
  if (name == "full") return Scale::kFull;
  if (name == "desk") return Scale::kDesk;
  throw std::invalid_argument("scale must be 'full' or 'desk'");
}

const char* to_string(Scale s) { return s == Scale::kFull ? "full" : "desk"; }

bool ExperimentConfig::uses(Method m) const {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

FrequencyGrid ExperimentConfig::frequency_grid() const {
  return FrequencyGrid::uniform(frequencies.start_hz, frequencies.step_hz, frequencies.count,
                                frequencies.speed_of_sound);
}

ArrayGeometry ExperimentConfig::regular_array() const {
  return array.family == ArrayFamily::kCircular
             ? make_circular_array(array.count, array.radius)
             : make_linear_array(array.count, array.spacing, array.x0);
}

ArrayGeometry ExperimentConfig::array_geometry() const {
  return decimate_array(regular_array(), decimation, seed);
}

double ExperimentConfig::listening_radius() const { return listening.max_radius(); }

void ExperimentConfig::validate() const {
  if (array.count == 0) throw std::invalid_argument("array.count must be >= 1");
  if (decimation >= array.count) {
    throw std::invalid_argument("decimation must leave at least one loudspeaker");
  }
  sfs::validate(listening);
  if (array.family == ArrayFamily::kLinear) validate_for_linear_array(listening, array.x0);
  if (control_points == 0) throw std::invalid_argument("control_points must be >= 1");
  if (frequencies.count == 0 || !(frequencies.start_hz > 0.0) || !(frequencies.step_hz > 0.0) ||
      !(frequencies.speed_of_sound > 0.0)) {
    throw std::invalid_argument("frequencies need count >= 1 and positive start, step and c");
  }
  if (methods.empty()) throw std::invalid_argument("methods must not be empty");
  if (std::set<Method>(methods.begin(), methods.end()).size() != methods.size()) {
    throw std::invalid_argument("methods contain duplicates");
  }
  if (!(regularization >= 0.0)) throw std::invalid_argument("regularization must be >= 0");
  loss.validate();
  train.validate();
  if (uses(Method::kCnn)) {
    const std::size_t rows = 2 * (array.count - decimation);
    if (rows < 15 || frequencies.count < 15) {
      throw std::invalid_argument(
          "cnn needs 2 * active loudspeakers >= 15 and at least 15 frequencies");
    }
  }
  if (!std::is_sorted(evaluation.radius_bins.begin(), evaluation.radius_bins.end()) ||
      evaluation.radius_bins.size() == 1) {
    throw std::invalid_argument("evaluation.radius_bins must be empty or >= 2 increasing edges");
  }
  if (!evaluation.radius_bins.empty() && array.family != ArrayFamily::kCircular) {
    throw std::invalid_argument("the radius sweep applies to circular arrays only");
  }
  if (output_dir.empty()) throw std::invalid_argument("output_dir must not be empty");
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return to_json(a) == to_json(b);
}

ExperimentConfig default_config(Scale scale, ArrayFamily family) {
  ExperimentConfig c;
  c.array.family = family;
  if (family == ArrayFamily::kLinear) {
    c.listening = {default_linear_listening_rectangle(c.array.x0), 0.02};
    c.control_points = 660;
    c.linear.region = default_linear_source_region(c.array.x0);
    c.evaluation.render_source = {1.08, 1.10};
  } else {
    for (int i = 0; i <= 9; ++i) c.evaluation.radius_bins.push_back(1.5 + 0.25 * i);
  }
  c.linear.region = default_linear_source_region(c.array.x0);
  if (scale == Scale::kDesk) {
    c.array.count = 16;
    c.array.spacing = 0.25;
    c.decimation = 8;
    c.frequencies.count = 15;
    c.control_points = 61;
    c.circular.n_radii = 10;
    c.circular.n_angles = 32;
    c.circular.n_val = 64;
    c.circular.n_test = 64;
    c.linear.n_train = 256;
    c.linear.n_val = 64;
    c.linear.n_test = 64;
    c.train.max_epochs = 300;
    c.evaluation.radius_bins.clear();
  }
  return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  const Rectangle& reg = c.linear.region;
  return {
      {"schema_version", kConfigSchemaVersion},
      {"seed", c.seed},
      {"array",
       {{"family", family_name(c.array.family)},
        {"count", c.array.count},
        {"radius", c.array.radius},
        {"spacing", c.array.spacing},
        {"x0", c.array.x0}}},
      {"decimation", c.decimation},
      {"listening", listening_json(c.listening)},
      {"control_points", c.control_points},
      {"frequencies",
       {{"start_hz", c.frequencies.start_hz},
        {"step_hz", c.frequencies.step_hz},
        {"count", c.frequencies.count},
        {"speed_of_sound", c.frequencies.speed_of_sound}}},
      {"dataset",
       {{"circular",
         {{"n_radii", c.circular.n_radii},
          {"n_angles", c.circular.n_angles},
          {"radius_min", c.circular.radius_min},
          {"radius_max", c.circular.radius_max},
          {"test_shift", c.circular.test_shift},
          {"n_val", c.circular.n_val},
          {"n_test", c.circular.n_test}}},
        {"linear",
         {{"n_train", c.linear.n_train},
          {"n_val", c.linear.n_val},
          {"n_test", c.linear.n_test},
          {"region", {reg.xmin, reg.xmax, reg.ymin, reg.ymax}},
          {"test_shift", c.linear.test_shift}}}}},
      {"train",
       {{"learning_rate", c.train.learning_rate},
        {"max_epochs", c.train.max_epochs},
        {"patience", c.train.patience},
        {"batch_size", c.train.batch_size},
        {"adam",
         {{"beta1", c.train.adam.beta1},
          {"beta2", c.train.adam.beta2},
          {"epsilon", c.train.adam.epsilon}}}}},
      {"loss", {{"lambda_abs", c.loss.lambda_abs}, {"lambda_phase", c.loss.lambda_phase}}},
      {"regularization", c.regularization},
      {"methods",
       [&] {
         json m = json::array();
         for (Method x : c.methods) m.push_back(to_string(x));
         return m;
       }()},
      {"evaluation",
       {{"radius_bins", c.evaluation.radius_bins},
        {"radius_sweep_hz", c.evaluation.radius_sweep_hz},
        {"render_source", point_json(c.evaluation.render_source)},
        {"render_hz", c.evaluation.render_hz}}},
      {"output_dir", c.output_dir}};
}

ExperimentConfig config_from_json(const nlohmann::json& j, Scale scale) {
  check_keys(j, "config",
             {"schema_version", "seed", "array", "decimation", "listening", "control_points",
              "frequencies", "dataset", "train", "loss", "regularization", "methods",
              "evaluation", "output_dir"});
  if (j.contains("schema_version") && j.at("schema_version").get<int>() != kConfigSchemaVersion) {
    throw std::invalid_argument("unsupported schema_version (expected " +
                                std::to_string(kConfigSchemaVersion) + ")");
  }
  ArrayFamily family = ArrayFamily::kCircular;
  if (j.contains("array") && j.at("array").contains("family")) {
    family = parse_family(j.at("array").at("family").get<std::string>());
  }
  ExperimentConfig c = default_config(scale, family);
  read(j, "seed", c.seed);
  if (j.contains("array")) {
    const json& a = j.at("array");
    check_keys(a, "array", {"family", "count", "radius", "spacing", "x0"});
    read(a, "count", c.array.count);
    read(a, "radius", c.array.radius);
    read(a, "spacing", c.array.spacing);
    read(a, "x0", c.array.x0);
    if (family == ArrayFamily::kLinear && a.contains("x0")) {
      c.listening.shape = default_linear_listening_rectangle(c.array.x0);
      c.linear.region = default_linear_source_region(c.array.x0);
    }
  }
  read(j, "decimation", c.decimation);
  if (j.contains("listening")) c.listening = listening_from(j.at("listening"), c.listening);
  read(j, "control_points", c.control_points);
  if (j.contains("frequencies")) {
    const json& f = j.at("frequencies");
    check_keys(f, "frequencies", {"start_hz", "step_hz", "count", "speed_of_sound"});
    read(f, "start_hz", c.frequencies.start_hz);
    read(f, "step_hz", c.frequencies.step_hz);
    read(f, "count", c.frequencies.count);
    read(f, "speed_of_sound", c.frequencies.speed_of_sound);
  }
  if (j.contains("dataset")) {
    const json& d = j.at("dataset");
    check_keys(d, "dataset", {"circular", "linear"});
    if (d.contains("circular")) {
      const json& p = d.at("circular");
      check_keys(p, "dataset.circular",
                 {"n_radii", "n_angles", "radius_min", "radius_max", "test_shift", "n_val",
                  "n_test"});
      read(p, "n_radii", c.circular.n_radii);
      read(p, "n_angles", c.circular.n_angles);
      read(p, "radius_min", c.circular.radius_min);
      read(p, "radius_max", c.circular.radius_max);
      read(p, "test_shift", c.circular.test_shift);
      read(p, "n_val", c.circular.n_val);
      read(p, "n_test", c.circular.n_test);
    }
    if (d.contains("linear")) {
      const json& p = d.at("linear");
      check_keys(p, "dataset.linear", {"n_train", "n_val", "n_test", "region", "test_shift"});
      read(p, "n_train", c.linear.n_train);
      read(p, "n_val", c.linear.n_val);
      read(p, "n_test", c.linear.n_test);
      read(p, "test_shift", c.linear.test_shift);
      if (p.contains("region")) {
        const auto r = p.at("region").get<std::vector<double>>();
        if (r.size() != 4) throw std::invalid_argument("dataset.linear.region is [xmin, xmax, ymin, ymax]");
        c.linear.region = {r[0], r[1], r[2], r[3]};
      }
    }
  }
  if (j.contains("train")) {
    const json& t = j.at("train");
    check_keys(t, "train", {"learning_rate", "max_epochs", "patience", "batch_size", "adam"});
    read(t, "learning_rate", c.train.learning_rate);
    read(t, "max_epochs", c.train.max_epochs);
    read(t, "patience", c.train.patience);
    read(t, "batch_size", c.train.batch_size);
    if (t.contains("adam")) {
      const json& a = t.at("adam");
      check_keys(a, "train.adam", {"beta1", "beta2", "epsilon"});
      read(a, "beta1", c.train.adam.beta1);
      read(a, "beta2", c.train.adam.beta2);
      read(a, "epsilon", c.train.adam.epsilon);
    }
  }
  if (j.contains("loss")) {
    const json& l = j.at("loss");
    check_keys(l, "loss", {"lambda_abs", "lambda_phase"});
    read(l, "lambda_abs", c.loss.lambda_abs);
    read(l, "lambda_phase", c.loss.lambda_phase);
  }
  read(j, "regularization", c.regularization);
  if (j.contains("methods")) {
    c.methods.clear();
    for (const auto& m : j.at("methods")) c.methods.push_back(parse_method(m.get<std::string>()));
  }
  if (j.contains("evaluation")) {
    const json& e = j.at("evaluation");
    check_keys(e, "evaluation", {"radius_bins", "radius_sweep_hz", "render_source", "render_hz"});
    read(e, "radius_bins", c.evaluation.radius_bins);
    read(e, "radius_sweep_hz", c.evaluation.radius_sweep_hz);
    if (e.contains("render_source")) c.evaluation.render_source = point_from(e.at("render_source"));
    read(e, "render_hz", c.evaluation.render_hz);
  }
  read(j, "output_dir", c.output_dir);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, Scale scale) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return config_from_json(j, scale);
}

void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << to_json(cfg).dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace sfs
