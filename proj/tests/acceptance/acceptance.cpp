// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Tolerances and time limits are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fixtures.hpp"
#include "process.hpp"
#include "smotepipe/config.hpp"
#include "smotepipe/linear.hpp"
#include "smotepipe/metrics.hpp"
#include "smotepipe/pipeline.hpp"
#include "smotepipe/smote.hpp"
#include "smotepipe/synth.hpp"
#include "smotepipe/text.hpp"

namespace fs = std::filesystem;
using namespace smotepipe;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int decimals = 3) { return text::format_fixed(v, decimals); }

struct Context {
  fs::path cli;
  fs::path workdir;
};

// report-delta prints rows "<metric> <baseline> <improved> <delta>".
Outcome delta_anchor(const Context& ctx) {
  constexpr double kLimit = 1.0;
  const auto start = Clock::now();
  const auto r = support::run_command(
      support::quote(ctx.cli) +
          " report-delta --baseline 90.17,83.19,80.06,81.00,97.46 --improved 92.14,82.10,85.50,83.52,98.18",
      ctx.workdir / "delta.out");
  const double elapsed = seconds_since(start);
  if (r.exit_code != 0) return {false, "exit code " + std::to_string(r.exit_code) + ": " + r.output};

  std::map<std::string, std::string> delta;
  std::istringstream in(r.output);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string metric, base, improved, d;
    if (row >> metric >> base >> improved >> d) delta[metric] = d;
  }
  const std::map<std::string, std::string> expected{
      {"Ac", "+1.97"}, {"Rc", "+5.44"}, {"Sp", "+0.72"}, {"F1", "+2.52"}, {"Pr", "-1.09"}};
  bool ok = elapsed < kLimit;
  std::string detail;
  for (const auto& [metric, want] : expected) {
    const std::string got = delta.count(metric) ? delta[metric] : "missing";
    ok = ok && got == want;
    detail += metric + "=" + got + " ";
  }
  return {ok, detail + "in " + fmt(elapsed) + " s (limit " + fmt(kLimit, 0) + " s)"};
}

Outcome smote_balance(const Context&) {
  constexpr double kLimit = 5.0;
  const Dataset full = synth::generate(synth::preset("dr-like"));
  const Split split = stratified_split(full, SplitSpec{});
  const auto start = Clock::now();
  const Dataset out = smote(split.train, SmoteParams{});
  const double elapsed = seconds_since(start);
  const auto before = class_counts(split.train).counts;
  const auto after = class_counts(out).counts;
  const bool equal = std::all_of(after.begin(), after.end(), [&](std::size_t n) { return n == after[0]; });
  const bool expected_before = before == std::vector<std::size_t>{1353, 277, 749, 144, 221};
  std::string counts;
  for (const auto n : after) counts += std::to_string(n) + " ";
  return {equal && expected_before && after[0] == 1353 && elapsed < kLimit,
          "counts " + counts + "in " + fmt(elapsed) + " s (limit " + fmt(kLimit, 0) + " s)"};
}

Outcome simplex_preservation(const Context&) {
  constexpr double kTolerance = 1e-9;
  constexpr std::size_t kSynthetic = 10000;
  // Minorities of 7000, 5000 and 8000 rows are raised to 10000.
  const Dataset ds = synth::generate({{10000, 7000, 5000, 8000}, 3.0, 17, {}});
  const Dataset out = smote(ds, SmoteParams{5, {}, 23});
  const std::size_t synthetic = out.rows() - ds.rows();
  double worst_sum = 0.0;
  double min_entry = 1.0;
  for (std::size_t i = ds.rows(); i < out.rows(); ++i) {
    double sum = 0.0;
    for (const double v : out.row(i)) {
      sum += v;
      min_entry = std::min(min_entry, v);
    }
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
  }
  std::ostringstream detail;
  detail << synthetic << " synthetic rows, max |sum-1| = " << worst_sum << ", min entry = " << min_entry;
  return {synthetic == kSynthetic && worst_sum <= kTolerance && min_entry >= 0.0, detail.str()};
}

Outcome micro_identities(const Context&) {
  constexpr double kTolerance = 1e-12;
  Rng rng(559);
  std::size_t exact_failures = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t c = 2 + rng.uniform_index(9);
    ConfusionMatrix cm(c);
    do {
      for (std::size_t a = 0; a < c; ++a) {
        for (std::size_t p = 0; p < c; ++p) cm.at(a, p) = rng.uniform_index(51);
      }
    } while (cm.total() == 0);

    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t k = 0; k < c; ++k) {
      const auto o = one_vs_rest_counts(cm, k);
      tp += o.tp;
      fp += o.fp;
      fn += o.fn;
      tn += o.tn;
    }
    // Rational form: P = tp/(tp+fp), R = tp/(tp+fn), Ac = trace/M, and
    // Sp = tn/(tn+fp) against 1 - (M - trace)/(M(C-1)), cross-multiplied.
    const std::uint64_t m = cm.total();
    const std::uint64_t trace = cm.trace();
    const bool rational_ok = tp * m == trace * (tp + fp) && tp * m == trace * (tp + fn) &&
                             tn * m * (c - 1) == (tn + fp) * (m * (c - 1) - (m - trace));
    exact_failures += !rational_ok;

    const MetricsReport r = compute_metrics(cm, Averaging::kMicro);
    const double sp = 1.0 - (1.0 - r.accuracy) / static_cast<double>(c - 1);
    worst = std::max({worst, std::abs(r.precision - r.accuracy), std::abs(r.recall - r.accuracy),
                      std::abs(r.specificity - sp)});
  }
  std::ostringstream detail;
  detail << "1000 matrices, rational mismatches " << exact_failures << ", max float error " << worst;
  return {exact_failures == 0 && worst <= kTolerance, detail.str()};
}

Outcome metrics_oracle(const Context&) {
  constexpr double kTolerance = 1e-12;
  Rng rng(560);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t c = 2 + rng.uniform_index(9);
    const std::size_t n = 1 + rng.uniform_index(500);
    std::vector<Label> truth(n);
    std::vector<Label> pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = rng.uniform_index(c);
      pred[i] = rng.uniform01() < 0.5 ? truth[i] : rng.uniform_index(c);
    }
    const ConfusionMatrix cm = confusion_matrix(truth, pred, c);
    for (const Averaging a : {Averaging::kMicro, Averaging::kMacro}) {
      const auto r = compute_metrics(cm, a).values();
      const auto o = support::brute_force_metrics(truth, pred, c, a == Averaging::kMicro);
      const std::array<double, 5> expected{o.accuracy, o.precision, o.recall, o.f1, o.specificity};
      for (std::size_t k = 0; k < 5; ++k) worst = std::max(worst, std::abs(r[k] - expected[k]));
    }
  }
  std::ostringstream detail;
  detail << "100 instances x 2 averagings, max error " << worst;
  return {worst <= kTolerance, detail.str()};
}

Outcome gradient_checks(const Context&) {
  constexpr double kTolerance = 1e-5;
  constexpr double kLimit = 5.0;
  const auto start = Clock::now();
  double worst_ce = 0.0;
  double worst_hinge = 0.0;
  Rng rng(561);
  for (const LossKind loss : {LossKind::kSoftmaxCrossEntropy, LossKind::kHinge}) {
    for (int point = 0; point < 20; ++point) {
      const std::size_t c = 2 + rng.uniform_index(4);
      const std::size_t d = 1 + rng.uniform_index(6);
      const Dataset ds = support::random_dataset(rng, c, d, 1, 15);
      const LinearModel m = support::random_model(rng, loss, c, d);
      std::vector<double> w(c);
      for (auto& v : w) v = rng.uniform(0.2, 3.0);
      const double err = support::gradient_check_error(m, ds, ClassWeights{w}, rng.uniform(0.0, 0.5));
      (loss == LossKind::kHinge ? worst_hinge : worst_ce) =
          std::max(loss == LossKind::kHinge ? worst_hinge : worst_ce, err);
    }
  }
  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << "max rel error logistic " << worst_ce << ", hinge " << worst_hinge << " in " << fmt(elapsed)
         << " s (limit " << kLimit << " s)";
  return {worst_ce < kTolerance && worst_hinge < kTolerance && elapsed < kLimit, detail.str()};
}

Outcome knn_oracle(const Context&) {
  Rng rng(562);
  std::size_t mismatches = 0;
  std::size_t queries = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 2 + rng.uniform_index(199);
    const std::size_t d = 1 + rng.uniform_index(10);
    Matrix x(m, d);
    const bool grid = trial % 2 == 0;
    for (auto& v : x.data()) v = grid ? static_cast<double>(rng.uniform_index(4)) : rng.uniform01();
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < m; ++i) {
      if (rng.uniform01() < 0.6 || rows.size() < 2) rows.push_back(i);
    }
    const std::size_t k = 1 + rng.uniform_index(10);
    for (const std::size_t q : rows) {
      ++queries;
      mismatches += knn_within_class(x, rows, q, k) != support::brute_force_knn(x, rows, q, k);
    }
  }
  return {mismatches == 0,
          "50 instances, " + std::to_string(queries) + " queries, " + std::to_string(mismatches) + " mismatches"};
}

Outcome separability(const Context&) {
  constexpr double kLimit = 10.0;
  const auto start = Clock::now();
  const Dataset blobs = support::separable_blobs(0);
  std::string detail;
  bool ok = true;
  for (const LinearKind kind : {LinearKind::kLogistic, LinearKind::kLinearSvm, LinearKind::kSgd}) {
    TrainConfig cfg;
    cfg.epochs = 500;
    const double acc = support::accuracy(blobs.labels(), predict(fit_linear(kind, blobs, cfg), blobs.features()));
    ok = ok && acc == 1.0;
    detail += to_string(kind) + "=" + fmt(100.0 * acc, 2) + "% ";
  }
  const double elapsed = seconds_since(start);
  return {ok && elapsed < kLimit, detail + "in " + fmt(elapsed) + " s (limit " + fmt(kLimit, 0) + " s)"};
}

// Both arms train unweighted logistic regression, so SMOTE is the only
// rebalancing mechanism being compared.
Outcome end_to_end(const Context& ctx) {
  constexpr double kLimit = 120.0;
  constexpr int kSeeds = 10;
  constexpr int kRequiredImprovements = 7;
  const auto start = Clock::now();
  std::vector<double> minority_with;
  std::vector<double> minority_without;
  int improved = 0;
  std::string per_seed;
  for (int seed = 0; seed < kSeeds; ++seed) {
    std::array<MetricsReport, 2> reports;
    std::size_t minority = 0;
    for (const bool use_smote : {true, false}) {
      PipelineConfig cfg = parse_config("seed = " + std::to_string(seed) +
                                        "\ninput.preset = dr-like\ninput.confusion_scale = 2.0\n"
                                        "models = logistic\nmodel.logistic.class_weight = none\n"
                                        "smote.enabled = " + (use_smote ? "true" : "false") + "\n");
      cfg.output_dir = ctx.workdir / "e2e" / std::to_string(seed) / (use_smote ? "smote" : "plain");
      const ExperimentResult r = run_experiment(cfg);
      const auto& counts = r.train_before.counts;
      minority = static_cast<std::size_t>(std::min_element(counts.begin(), counts.end()) - counts.begin());
      reports[use_smote ? 0 : 1] = r.models.at(0).evaluation.report;
    }
    minority_with.push_back(reports[0].per_class.at(minority).recall);
    minority_without.push_back(reports[1].per_class.at(minority).recall);
    improved += reports[0].recall > reports[1].recall;
    per_seed += fmt(reports[0].recall - reports[1].recall, 4) + " ";
  }
  const auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
  };
  const double med_with = median(minority_with);
  const double med_without = median(minority_without);
  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << "median minority recall " << fmt(med_with) << " (SMOTE) vs " << fmt(med_without)
         << "; macro recall improved in " << improved << "/" << kSeeds << " seeds (delta " << per_seed
         << "); " << fmt(elapsed, 1) << " s (limit " << kLimit << " s)";
  return {med_with >= med_without && improved >= kRequiredImprovements && elapsed < kLimit, detail.str()};
}

// Every file under the two run directories must match byte for byte, except
// the manifest's wall-clock timings and its output_dir line.
Outcome determinism(const Context& ctx) {
  const fs::path cfg = ctx.workdir / "determinism.cfg";
  text::write_file(cfg,
                   "seed = 7\ninput.preset = dr-like\n"
                   "models = logistic, linear-svm, sgd, naive-bayes, decision-tree, random-forest, "
                   "extra-trees, voting\n");
  std::vector<fs::path> runs;
  for (const char* name : {"run1", "run2"}) {
    const fs::path out = ctx.workdir / "determinism" / name;
    fs::remove_all(out);
    const auto r = support::run_command(
        support::quote(ctx.cli) + " run -c " + support::quote(cfg) + " --output " + support::quote(out),
        ctx.workdir / (std::string(name) + ".out"));
    if (r.exit_code != 0) return {false, std::string(name) + " failed: " + r.output};
    runs.push_back(out);
  }
  const auto strip_times = [](const std::string& s) {
    std::istringstream in(s);
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
      if (line.rfind("manifest.time.", 0) == 0 || line.rfind("output_dir = ", 0) == 0) continue;
      out += line + "\n";
    }
    return out;
  };
  std::size_t compared = 0;
  std::size_t models = 0;
  std::vector<std::string> differing;
  for (const auto& entry : fs::recursive_directory_iterator(runs[0])) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), runs[0]);
    const fs::path other = runs[1] / rel;
    std::string a = support::slurp(entry.path());
    std::string b = fs::exists(other) ? support::slurp(other) : std::string("<missing>");
    if (rel == "manifest.txt") {
      a = strip_times(a);
      b = strip_times(b);
    }
    ++compared;
    models += rel.filename().string().find("model") == 0 || rel.filename().string().find(".member") != std::string::npos;
    if (a != b) differing.push_back(rel.string());
  }
  std::size_t second = 0;
  for (const auto& entry : fs::recursive_directory_iterator(runs[1])) second += entry.is_regular_file();
  std::string detail = std::to_string(compared) + " files compared (" + std::to_string(models) +
                       " model files), " + std::to_string(differing.size()) + " differ";
  for (const auto& d : differing) detail += " " + d;
  return {differing.empty() && second == compared && compared > 0, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  Context ctx;
  app.add_option("--cli", ctx.cli, "Path to the smotepipe executable")->required();
  app.add_option("--workdir", ctx.workdir, "Scratch directory")->required();
  CLI11_PARSE(app, argc, argv);
  fs::remove_all(ctx.workdir);
  fs::create_directories(ctx.workdir);

  const std::vector<std::pair<std::string, std::function<Outcome(const Context&)>>> checks{
      {"delta-anchor", delta_anchor},
      {"smote-balance", smote_balance},
      {"simplex-preservation", simplex_preservation},
      {"micro-metric-identities", micro_identities},
      {"metrics-oracle", metrics_oracle},
      {"gradient-checks", gradient_checks},
      {"knn-oracle", knn_oracle},
      {"separability", separability},
      {"end-to-end-improvement", end_to_end},
      {"determinism", determinism},
  };

  int failures = 0;
  for (const auto& [name, check] : checks) {
    Outcome o;
    try {
      o = check(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (checks.size() - failures) << "/" << checks.size() << " acceptance criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
