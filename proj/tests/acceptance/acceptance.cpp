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

// Acceptance runner: one pass/fail line per criterion, exit status 1 if any
// selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sfs/acoustics.hpp"
#include "sfs/bessel.hpp"
#include "sfs/config.hpp"
#include "sfs/evaluation.hpp"
#include "sfs/experiment.hpp"
#include "sfs/network.hpp"
#include "sfs/packing.hpp"
#include "sfs/renderers.hpp"
#include "sfs/trainer.hpp"

namespace fs = std::filesystem;
using namespace sfs;

namespace {

constexpr double kC = 343.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ComplexMatrix random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = {n(rng), n(rng)};
  }
  return m;
}

Point2 polar_point(double r, double theta) { return {r * std::cos(theta), r * std::sin(theta)}; }

Outcome special_functions() {
  std::ifstream in(std::string(SFS_FIXTURE_DIR) + "/bessel_oracle.csv");
  if (!in) return {false, "fixture missing"};
  std::string line;
  std::getline(in, line);
  double worst_fixture = 0.0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string m, x, j, y;
    std::getline(ss, m, ',');
    std::getline(ss, x, ',');
    std::getline(ss, j, ',');
    std::getline(ss, y, ',');
    const Complex expected{std::stod(j), -std::stod(y)};
    const Complex got = hankel2(std::stoi(m), std::stod(x));
    worst_fixture = std::max(worst_fixture, std::abs(got - expected) / std::abs(expected));
    ++rows;
  }
  double worst_wronskian = 0.0;
  double worst_recurrence = 0.0;
  for (double x : {1e-3, 0.02, 0.5, 1.0, 2.5, 7.0, 15.0, 33.3, 60.0, 100.0}) {
    const int n = x < 0.01 ? 40 : 60;
    const BesselSequence s = bessel_jy(n, x);
    const double w_ref = 2.0 / (kPi * x);
    for (int m = 0; m < n; ++m) {
      const double w = s.j[m + 1] * s.y[m] - s.j[m] * s.y[m + 1];
      worst_wronskian = std::max(worst_wronskian, std::abs(w - w_ref) / w_ref);
    }
    const std::vector<Complex> h = hankel2_orders(n, x);
    for (int m = 1; m < n; ++m) {
      const Complex rhs = 2.0 * m / x * h[m];
      worst_recurrence = std::max(worst_recurrence, std::abs(h[m - 1] + h[m + 1] - rhs) / std::abs(rhs));
    }
  }
  const bool pass = rows == 500 && worst_fixture <= 1e-10 && worst_wronskian <= 1e-9 &&
                    worst_recurrence <= 1e-9;
  return {pass, std::to_string(rows) + " fixture rows, max rel err " + fmt("%.2e", worst_fixture) +
                    "; Wronskian " + fmt("%.2e", worst_wronskian) + "; recurrence " +
                    fmt("%.2e", worst_recurrence)};
}

Outcome plane_wave_equivalence() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const FrequencyGrid f = FrequencyGrid::uniform(46.0, 23.0, 63, kC);
  const double radius = 1.0;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double omega = f.omega(static_cast<std::size_t>(u(rng) * 63.0));
    const Point2 z = polar_point(1.5 + 2.0 * u(rng), kTwoPi * u(rng));
    const Point2 r = polar_point(radius * std::sqrt(u(rng)), kTwoPi * u(rng));
    const HerglotzDensity phi(z, 1.0, truncation_order(omega, radius, kC), omega, kC);
    const Complex expansion = plane_wave_expansion(r, phi, omega, kC, 2048);
    const Complex exact = green2d(r, z, omega, kC);
    worst = std::max(worst, std::abs(expansion - exact) / std::abs(exact));
  }
  return {worst <= 1e-6, "20 triples, max rel err " + fmt("%.2e", worst) + " (limit 1e-6)"};
}

double mr_nre(const ArrayGeometry& array, Point2 z, double omega, const PointSet& grid) {
  const ComplexVector d = mr_circular_driving(array, z, 1.0, omega, 0.8, kC);
  return nre(synthesize(array, d, grid, omega, kC).pressure,
             monopole_field(grid.points, z, omega, kC));
}

std::vector<Point2> random_sources(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point2> out;
  for (int i = 0; i < n; ++i) {
    const double rho = 1.5 + 2.0 * u(rng);
    out.push_back(polar_point(rho, kTwoPi * u(rng)));
  }
  return out;
}

Outcome mr_circular_full_array() {
  const double omega = kTwoPi * 500.0;
  const ArrayGeometry array = make_circular_array(64, 1.0);
  const PointSet grid = sample_listening_grid({Disk{{0.0, 0.0}, 0.8}, 0.02});
  double worst = -1e300;
  for (Point2 z : random_sources(3, 10)) worst = std::max(worst, mr_nre(array, z, omega, grid));
  return {worst <= -15.0, "worst NRE " + fmt("%.2f", worst) + " dB over 10 sources (limit -15 dB)"};
}

Outcome degradation_ordering() {
  const double omega = kTwoPi * 500.0;
  const ArrayGeometry full = make_circular_array(64, 1.0);
  const PointSet grid = sample_listening_grid({Disk{{0.0, 0.0}, 0.8}, 0.02});
  const std::vector<Point2> sources = random_sources(4, 10);
  std::vector<double> means;
  std::string detail = "mean NRE";
  for (std::size_t remove : {0u, 16u, 32u, 48u}) {
    const ArrayGeometry a = decimate_array(full, remove, 4);
    double sum = 0.0;
    for (Point2 z : sources) sum += mr_nre(a, z, omega, grid);
    means.push_back(sum / static_cast<double>(sources.size()));
    detail += " L=" + std::to_string(a.active_count()) + ":" + fmt("%.2f", means.back());
  }
  const bool pass = means[0] < means[1] && means[1] < means[2] && means[2] < means[3];
  return {pass, detail + " dB"};
}

Outcome pm_residual() {
  std::mt19937_64 rng(5);
  double worst_small = 0.0;
  double worst_default = 0.0;
  for (int i = 0; i < 5; ++i) {
    const ComplexMatrix g = random_complex(100, 16, rng);
    const ComplexVector p = g * random_complex(16, 1, rng);
    for (double lambda : {1e-6, 1e-2}) {
      const PmOperator op(g, lambda, kTwoPi * 500.0);
      const double res = (g * op.driving(p) - p).norm() / p.norm();
      (lambda < 1e-3 ? worst_small : worst_default) =
          std::max(lambda < 1e-3 ? worst_small : worst_default, res);
    }
  }
  return {worst_small <= 1e-3 && worst_default <= 0.1,
          "worst residual " + fmt("%.2e", worst_small) + " at 1e-6 (limit 1e-3), " +
              fmt("%.2e", worst_default) + " at 1e-2 (limit 0.1)"};
}

Outcome gradient_check() {
  const int speakers = 4;
  const int freqs = 9;
  const int points = 6;
  std::mt19937_64 rng(6);
  ModelParams params = init_params(miniature_network(2 * speakers, freqs, 4), 6);
  std::vector<ComplexMatrix> g;
  for (int k = 0; k < freqs; ++k) g.push_back(random_complex(points, speakers, rng));
  std::vector<TrainingSample> samples;
  for (int i = 0; i < 3; ++i) {
    samples.push_back({pack_driving(random_complex(speakers, freqs, rng)),
                       random_complex(points, freqs, rng)});
  }
  const LossWeights w;
  ModelGradients grads = zero_gradients(params);
  loss_and_gradients(params, samples, g, w, grads);
  const double h = 1e-5;
  double worst = 0.0;
  std::size_t checked = 0;
  const auto check = [&](double* p, const double* an, Eigen::Index n) {
    Eigen::VectorXd fd(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double orig = p[i];
      p[i] = orig + h;
      const double up = evaluate_loss(params, samples, g, w);
      p[i] = orig - h;
      const double down = evaluate_loss(params, samples, g, w);
      p[i] = orig;
      fd(i) = (up - down) / (2.0 * h);
    }
    const Eigen::Map<const Eigen::VectorXd> a(an, n);
    worst = std::max(worst, (fd - a).norm() / std::max(fd.norm(), a.norm()));
    checked += static_cast<std::size_t>(n);
  };
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    LayerParams& p = params.layers[l];
    check(p.weight.data(), grads[l].weight.data(), p.weight.size());
    check(p.bias.data(), grads[l].bias.data(), p.bias.size());
    if (p.slope.size() > 0) check(p.slope.data(), grads[l].slope.data(), p.slope.size());
  }
  return {worst <= 1e-4, std::to_string(checked) + " parameters, worst rel err " +
                             fmt("%.2e", worst) + " (limit 1e-4)"};
}

struct OverfitResult {
  double initial = 0.0;
  double final = 0.0;
};

OverfitResult overfit_one(const ExperimentConfig& cfg) {
  const ArrayGeometry array = cfg.array_geometry();
  const FrequencyGrid f = cfg.frequency_grid();
  const PointSet cp = control_points(cfg);
  SourceSplit split;
  split.train.push_back({{2.0, 0.5}, {}});
  const Dataset ds = build_dataset(array, split, cp, f, cfg.listening_radius(), cfg.regularization);
  const std::vector<TrainingSample> one{{ds.records[0].tensor, ds.records[0].pressure}};
  std::vector<ComplexMatrix> g;
  for (std::size_t k = 0; k < f.size(); ++k) {
    g.push_back(transfer_matrix(cp.points, array.active_positions(), f.omega(k), f.c()));
  }
  const auto active = static_cast<int>(array.active_count());
  const ModelParams init =
      init_params(compensator_network(2 * active, static_cast<int>(f.size())), init_seed(cfg));
  TrainConfig tc = cfg.train;
  tc.max_epochs = 500;
  tc.patience = 500;
  tc.seed = shuffle_seed(cfg);
  const TrainResult r = train_compensator(init, one, one, g, cfg.loss, tc);
  return {evaluate_loss(init, one, g, cfg.loss), evaluate_loss(r.params, one, g, cfg.loss)};
}

Outcome overfit_single_record() {
  ExperimentConfig cfg = default_config(Scale::kDesk);
  cfg.decimation = 0;
  const OverfitResult r = overfit_one(cfg);
  const double ratio = r.final / r.initial;
  std::cout << "  info: regular 16-loudspeaker desk array, loss " << fmt("%.4f", r.initial)
            << " -> " << fmt("%.4f", r.final) << std::endl;
  const OverfitResult d = overfit_one(default_config(Scale::kDesk));
  std::cout << "  info: decimated 8-loudspeaker desk array, loss " << fmt("%.4f", d.initial)
            << " -> " << fmt("%.4f", d.final) << " (ratio " << fmt("%.3f", d.final / d.initial)
            << ", bounded by the array's reproduction floor)" << std::endl;
  return {ratio < 0.1, "final/initial " + fmt("%.4f", ratio) + " (limit 0.1)"};
}

Outcome metric_self_tests() {
  std::mt19937_64 rng(9);
  const ComplexVector p = random_complex(200, 1, rng);
  const double same = nre(p, p);
  const double zero = nre(ComplexVector::Zero(200), p);
  std::vector<double> x(200);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double& v : x) v = u(rng);
  const double self = ssim_global(x, x);
  const double constants = ssim_global(std::vector<double>(200, 0.0), std::vector<double>(200, 1.0));
  const bool pass = same == kNreFloorDb && zero == 0.0 && self == 1.0 &&
                    std::abs(constants - 1e-4 / 1.0001) <= 1e-12;
  return {pass, "nre(p,p)=" + fmt("%g", same) + ", nre(0,p)=" + fmt("%g", zero) +
                    ", ssim(x,x)=" + fmt("%.17g", self) + ", ssim(0,1)=" + fmt("%.12g", constants)};
}

// Mean NRE columns read back from a run's nre_frequency.csv.
struct FrequencyTable {
  std::vector<double> mr;
  std::vector<double> cnn;
};

FrequencyTable read_frequency_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "axis_value,mr,pm,cnn,count") throw std::runtime_error("unexpected header " + line);
  FrequencyTable t;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (cells.size() != 5) throw std::runtime_error("malformed row " + line);
    t.mr.push_back(std::stod(cells[1]));
    t.cnn.push_back(std::stod(cells[3]));
  }
  return t;
}

class DeskRuns {
 public:
  explicit DeskRuns(fs::path work) : work_(std::move(work)) {}

  const fs::path& run(const std::string& name) {
    auto it = std::find_if(done_.begin(), done_.end(), [&](const auto& d) { return d.first == name; });
    if (it != done_.end()) return it->second;
    const fs::path out = work_ / name;
    fs::remove_all(out);
    fs::create_directories(out);
    const std::string cmd = std::string("\"") + SFS_CLI_PATH + "\" run --scale desk --out \"" +
                            out.string() + "\" > \"" + (work_ / (name + ".log")).string() +
                            "\" 2>&1";
    const auto t0 = std::chrono::steady_clock::now();
    if (std::system(cmd.c_str()) != 0) {
      throw std::runtime_error("desk run failed, see " + (work_ / (name + ".log")).string());
    }
    std::cout << "  info: desk run " << name << " took "
              << fmt("%.0f", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                 .count())
              << " s" << std::endl;
    done_.emplace_back(name, out);
    return done_.back().second;
  }

 private:
  fs::path work_;
  std::vector<std::pair<std::string, fs::path>> done_;
};

Outcome desk_end_to_end(DeskRuns& runs) {
  const FrequencyTable t = read_frequency_table(runs.run("run_a") / "nre_frequency.csv");
  std::size_t better = 0;
  double mean_mr = 0.0;
  double mean_cnn = 0.0;
  for (std::size_t k = 0; k < t.mr.size(); ++k) {
    better += t.cnn[k] <= t.mr[k];
    mean_mr += t.mr[k];
    mean_cnn += t.cnn[k];
  }
  const double n = static_cast<double>(t.mr.size());
  mean_mr /= n;
  mean_cnn /= n;
  const bool pass = !t.mr.empty() && static_cast<double>(better) >= 0.7 * n && mean_cnn < mean_mr;
  return {pass, "CNN <= MR at " + std::to_string(better) + "/" + std::to_string(t.mr.size()) +
                    " frequencies; mean NRE CNN " + fmt("%.2f", mean_cnn) + " dB vs MR " +
                    fmt("%.2f", mean_mr) + " dB"};
}

std::string file_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(DeskRuns& runs) {
  const fs::path a = runs.run("run_a");
  const fs::path b = runs.run("run_b");
  std::vector<std::string> differing;
  const std::vector<std::string> files{"nre_frequency.csv", "ssim_frequency.csv", "dataset.sfsx"};
  for (const std::string& f : files) {
    if (file_bytes(a / f) != file_bytes(b / f)) differing.push_back(f);
  }
  std::string detail = differing.empty() ? "metric CSVs and dataset identical" : "differ:";
  for (const std::string& f : differing) detail += " " + f;
  return {differing.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria runner"};
  std::string work = "acceptance_work";
  std::vector<int> only;
  app.add_option("--work", work, "Scratch directory for desk-scale runs");
  app.add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(work);
  DeskRuns runs(work);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"special-function oracle suite", special_functions},
      {"plane-wave expansion equivalence", plane_wave_equivalence},
      {"MR circular full array at 500 Hz", mr_circular_full_array},
      {"MR degradation ordering 64/48/32/16", degradation_ordering},
      {"PM control-point residual", pm_residual},
      {"gradient check on miniature network", gradient_check},
      {"overfit single record", overfit_single_record},
      {"desk-scale end to end", [&] { return desk_end_to_end(runs); }},
      {"metric self-tests", metric_self_tests},
      {"determinism of desk runs", [&] { return determinism(runs); }},
  };
  const std::set<int> selected(only.begin(), only.end());
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && selected.count(id) == 0) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::cout << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << " "
              << criteria[i].first << ": " << o.detail << " [" << fmt("%.1f", secs) << " s]"
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
