// swbary: sliced Wasserstein barycenters with marginal-fairness objectives.
//
// Subcommands:
//   gauss       four-Gaussian synthetic barycenter run
//   pointcloud  free-support barycenter of equal-size point clouds
//   color       color-palette harmonization between two target images
//   bench       verification suites (sandwich, gradients, OT oracles, MC rate)

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "suites.hpp"
#include "swb/eval.hpp"
#include "swb/io.hpp"
#include "swb/optimizer.hpp"

using json = nlohmann::json;
using namespace swb;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonOpts {
  std::string method = "uswb";
  double lambda = 1.0;
  bool lambda_given = false;
  Eigen::Index projections = 100;
  int iters = 1000;
  double lr = 0.01;
  std::uint64_t seed = 0;
  int metrics_every = 1000;
  Eigen::Index eval_cap = 4096;
  std::string out = "swbary_out";
  std::string manifest_path;
  std::vector<std::string> inputs;
};

void add_common_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--method", o.method, "one of uswb|mfswb|s|us|es")
      ->check(CLI::IsMember({"uswb", "mfswb", "s", "us", "es"}));
  auto* lam = cmd->add_option("--lambda", o.lambda, "fairness penalty (mfswb only)");
  cmd->parse_complete_callback([lam, &o] { o.lambda_given = lam->count() > 0; });
  cmd->add_option("--projections", o.projections, "projections per iteration");
  cmd->add_option("--iters", o.iters, "gradient iterations");
  cmd->add_option("--lr", o.lr, "step size");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--metrics-every", o.metrics_every, "metric evaluation stride");
  cmd->add_option("--eval-cap", o.eval_cap, "support cap for exact-OT evaluation");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--manifest", o.manifest_path,
                  "rerun from a previously written manifest (overrides all flags)");
}

void load_manifest(CommonOpts& o) {
  std::ifstream in(o.manifest_path);
  if (!in) throw CLI::ValidationError("--manifest", "cannot open " + o.manifest_path);
  json m = json::parse(in);
  o.method = m.at("method").get<std::string>();
  o.lambda = m.at("lambda").get<double>();
  o.lambda_given = o.method == "mfswb";
  o.projections = m.at("projections").get<Eigen::Index>();
  o.iters = m.at("iters").get<int>();
  o.lr = m.at("lr").get<double>();
  o.seed = m.at("seed").get<std::uint64_t>();
  o.metrics_every = m.at("metrics_every").get<int>();
  o.eval_cap = m.at("eval_cap").get<Eigen::Index>();
  o.out = m.at("out").get<std::string>();
  if (m.contains("inputs")) o.inputs = m.at("inputs").get<std::vector<std::string>>();
}

Method make_method(const CommonOpts& o) {
  const MethodTag tag = method_from_name(o.method);
  if (o.lambda_given && tag != MethodTag::MfswbDual)
    throw CLI::ValidationError("--lambda", "only valid with --method mfswb");
  Method m;
  m.tag = tag;
  if (tag == MethodTag::MfswbDual) m.lambda = o.lambda;
  return m;
}

void write_manifest(const CommonOpts& o, const std::string& subcommand) {
  json m;
  m["subcommand"] = subcommand;
  m["version"] = kVersion;
  m["method"] = o.method;
  m["lambda"] = o.lambda;
  m["projections"] = o.projections;
  m["iters"] = o.iters;
  m["lr"] = o.lr;
  m["seed"] = o.seed;
  m["metrics_every"] = o.metrics_every;
  m["eval_cap"] = o.eval_cap;
  m["out"] = o.out;
  m["inputs"] = o.inputs;
  m["p"] = 2.0;
  m["argmax_tie_break"] = "smallest-index";
  std::ofstream out(fs::path(o.out) / "manifest.json");
  out << m.dump(2) << "\n";
}

MetricEvaluator capped_evaluator(const std::vector<DiscreteMeasure>& marginals,
                                 Eigen::Index cap, std::uint64_t seed, double p) {
  std::vector<DiscreteMeasure> capped;
  capped.reserve(marginals.size());
  for (size_t k = 0; k < marginals.size(); ++k)
    capped.push_back(subsample_for_eval(marginals[k], cap, mix_seed(seed, 900 + k)));
  return [capped, cap, seed, p](const DiscreteMeasure& bary) {
    const auto cb = subsample_for_eval(bary, cap, mix_seed(seed, 800));
    return std::make_pair(capped.size() > 1 ? f_metric(cb, capped, p) : 0.0,
                          w_metric(cb, capped, p));
  };
}

DiscreteMeasure gaussian_cloud(Eigen::Index n, double cx, double cy, std::uint64_t seed) {
  Rng rng(seed);
  Matrix s(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    s(i, 0) = cx + rng.normal();
    s(i, 1) = cy + rng.normal();
  }
  return DiscreteMeasure::uniform(std::move(s));
}

int cmd_gauss(CommonOpts& o) {
  if (!o.manifest_path.empty()) load_manifest(o);
  fs::create_directories(o.out);
  const Method method = make_method(o);

  const std::vector<std::pair<double, double>> centers = {{0, 0}, {20, 0}, {18, 8}, {18, -8}};
  std::vector<DiscreteMeasure> marginals;
  for (size_t k = 0; k < centers.size(); ++k)
    marginals.push_back(
        gaussian_cloud(100, centers[k].first, centers[k].second, mix_seed(o.seed, 100 + k)));
  const auto init = gaussian_cloud(100, 0.0, -5.0, mix_seed(o.seed, 200));

  BarycenterConfig cfg;
  cfg.method = method;
  cfg.p = 2.0;
  cfg.projections = o.projections;
  cfg.lr = o.lr;
  cfg.iters = o.iters;
  cfg.seed = o.seed;
  cfg.metrics_every = o.metrics_every;
  cfg.snapshot_at = {0, 1000, 5000};

  const auto trace = run_free_support(init, marginals, cfg,
                                      capped_evaluator(marginals, o.eval_cap, o.seed, cfg.p));
  write_metrics_csv(trace, (fs::path(o.out) / "metrics.csv").string());
  for (const auto& [t, snap] : trace.snapshots)
    save_matrix_txt(snap.supports,
                    (fs::path(o.out) / ("bary_iter_" + std::to_string(t) + ".txt")).string());
  write_manifest(o, "gauss");
  std::cout << "gauss: done, final F=" << trace.records.back().F
            << " W=" << trace.records.back().W << "\n";
  return 0;
}

int cmd_pointcloud(CommonOpts& o) {
  if (!o.manifest_path.empty()) load_manifest(o);
  if (o.inputs.size() < 2)
    throw CLI::ValidationError("clouds", "need at least two point cloud files");
  fs::create_directories(o.out);
  const Method method = make_method(o);

  std::vector<DiscreteMeasure> marginals;
  for (const auto& path : o.inputs) marginals.push_back(load_pointcloud(path));
  const Eigen::Index n = marginals.front().size();
  for (const auto& m : marginals)
    if (m.size() != n)
      throw std::runtime_error("point clouds must have equal point counts");

  // spherical init: centered at the marginals' mean, radius = mean marginal radius
  Eigen::RowVector3d center = Eigen::RowVector3d::Zero();
  for (const auto& m : marginals) center += m.supports.colwise().mean();
  center /= double(marginals.size());
  double radius = 0.0;
  for (const auto& m : marginals)
    radius += (m.supports.rowwise() - center).rowwise().norm().mean();
  radius /= double(marginals.size());
  const auto sphere_dirs = sample_uniform_sphere(n, 3, mix_seed(o.seed, 300));
  Matrix init_s = radius * sphere_dirs.directions;
  init_s.rowwise() += center;

  BarycenterConfig cfg;
  cfg.method = method;
  cfg.p = 2.0;
  cfg.projections = o.projections;
  cfg.lr = o.lr;
  cfg.iters = o.iters;
  cfg.seed = o.seed;
  cfg.metrics_every = o.metrics_every;
  cfg.metrics_at = {0, 1000, 5000};

  const auto trace =
      run_free_support(DiscreteMeasure::uniform(init_s), marginals, cfg,
                       capped_evaluator(marginals, o.eval_cap, o.seed, cfg.p));
  write_metrics_csv(trace, (fs::path(o.out) / "metrics.csv").string());
  save_matrix_txt(trace.snapshots.back().second.supports,
                  (fs::path(o.out) / "bary_final.xyz").string());
  write_manifest(o, "pointcloud");
  std::cout << "pointcloud: done, final F=" << trace.records.back().F
            << " W=" << trace.records.back().W << "\n";
  return 0;
}

// Equalize a palette's support count with the barycenter's: cap without
// replacement, extend with replacement.
DiscreteMeasure resample_to(const DiscreteMeasure& m, Eigen::Index n, std::uint64_t seed) {
  if (m.size() == n) return m;
  if (m.size() > n) return subsample_for_eval(m, n, seed);
  Rng rng(seed);
  Matrix s(n, m.dim());
  for (Eigen::Index i = 0; i < n; ++i)
    s.row(i) = m.supports.row(Eigen::Index(rng.below(std::uint64_t(m.size()))));
  return DiscreteMeasure::uniform(std::move(s));
}

int cmd_color(CommonOpts& o) {
  if (!o.manifest_path.empty()) load_manifest(o);
  if (o.inputs.size() != 3)
    throw CLI::ValidationError("images", "need a source image and exactly two targets");
  fs::create_directories(o.out);
  const Method method = make_method(o);

  const auto source = load_image_palette(o.inputs[0]);
  const auto init = palette_measure(source);
  std::vector<DiscreteMeasure> marginals;
  for (size_t k = 1; k < o.inputs.size(); ++k)
    marginals.push_back(resample_to(palette_measure(load_image_palette(o.inputs[k])),
                                    init.size(), mix_seed(o.seed, 400 + k)));

  BarycenterConfig cfg;
  cfg.method = method;
  cfg.p = 2.0;
  cfg.projections = o.projections;
  cfg.lr = o.lr;
  cfg.iters = o.iters;
  cfg.seed = o.seed;
  cfg.metrics_every = o.metrics_every;

  const auto trace = run_free_support(init, marginals, cfg,
                                      capped_evaluator(marginals, o.eval_cap, o.seed, cfg.p));
  write_metrics_csv(trace, (fs::path(o.out) / "metrics.csv").string());
  write_image_palette(source, trace.snapshots.back().second.supports,
                      (fs::path(o.out) / "harmonized.png").string());
  write_manifest(o, "color");
  std::cout << "color: done, wrote " << (fs::path(o.out) / "harmonized.png").string() << "\n";
  return 0;
}

struct BenchOpts {
  std::string suite = "all";
  int cases = 50;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_bench(const BenchOpts& b) {
  struct Row {
    std::string name;
    suites::Result res;
  };
  std::vector<Row> rows;
  const bool all = b.suite == "all";
  if (all || b.suite == "sandwich") rows.push_back({"sandwich", suites::sandwich(b.cases, b.seed)});
  if (all || b.suite == "grad-fd") rows.push_back({"grad-fd", suites::gradient_fd(std::min(b.cases, 50), b.seed)});
  if (all || b.suite == "fixed-fd") rows.push_back({"fixed-fd", suites::fixed_gradient_fd(std::min(b.cases, 50), b.seed)});
  if (all || b.suite == "oracle") rows.push_back({"oracle", suites::ot_oracles(b.cases * 5, b.cases, b.seed)});
  if (all || b.suite == "mc-slope") rows.push_back({"mc-slope", suites::mc_slope(200, b.seed)});
  if (rows.empty()) throw CLI::ValidationError("--suite", "unknown suite " + b.suite);

  bool ok = true;
  for (const auto& row : rows) {
    std::cout << (row.res.pass ? "PASS" : "FAIL") << "  " << row.name << "  "
              << row.res.detail << "\n";
    ok = ok && row.res.pass;
  }
  if (!b.out.empty()) {
    fs::create_directories(b.out);
    json m = {{"subcommand", "bench"}, {"version", kVersion}, {"suite", b.suite},
              {"cases", b.cases},      {"seed", b.seed},      {"out", b.out}};
    std::ofstream out(fs::path(b.out) / "manifest.json");
    out << m.dump(2) << "\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sliced Wasserstein barycenters with marginal-fairness objectives"};
  app.require_subcommand(1);

  CommonOpts gauss_opts;
  auto* gauss = app.add_subcommand("gauss", "four-Gaussian synthetic experiment");
  gauss_opts.iters = 50000;
  gauss_opts.lr = 0.01;
  gauss_opts.projections = 100;
  add_common_flags(gauss, gauss_opts);

  CommonOpts pc_opts;
  auto* pc = app.add_subcommand("pointcloud", "point-cloud barycenter");
  pc_opts.iters = 10000;
  pc_opts.lr = 0.01;
  pc_opts.projections = 10;
  add_common_flags(pc, pc_opts);
  pc->add_option("clouds", pc_opts.inputs, "two or more point cloud files (.xyz/.ply)");

  CommonOpts color_opts;
  auto* color = app.add_subcommand("color", "color harmonization");
  color_opts.iters = 20000;
  color_opts.lr = 0.0001;
  color_opts.projections = 100;
  add_common_flags(color, color_opts);
  color->add_option("images", color_opts.inputs, "source image followed by two target images");

  BenchOpts bench_opts;
  auto* bench = app.add_subcommand("bench", "verification suites");
  bench->add_option("--suite", bench_opts.suite,
                    "all|sandwich|grad-fd|fixed-fd|oracle|mc-slope");
  bench->add_option("--cases", bench_opts.cases, "instances per suite");
  bench->add_option("--seed", bench_opts.seed, "RNG seed");
  bench->add_option("--out", bench_opts.out, "manifest output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gauss->parsed()) return cmd_gauss(gauss_opts);
    if (pc->parsed()) return cmd_pointcloud(pc_opts);
    if (color->parsed()) return cmd_color(color_opts);
    if (bench->parsed()) return cmd_bench(bench_opts);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
