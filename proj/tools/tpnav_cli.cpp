// tpnav command-line harness: synthetic corpora, prediction training and
// evaluation, usability analysis, and the navigation benchmark.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "tpnav/bench.hpp"
#include "tpnav/csv.hpp"
#include "tpnav/report.hpp"

namespace fs = std::filesystem;
using namespace tpnav;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOpts {
  std::uint64_t seed = 1;
  std::string data;
  std::string graph;
  std::string out = "out";
  int horizon_min = 5;
  int k_paths = 5;
  int window_h = 11;
  std::string config;
};

// key=value file; values override command-line flags
void apply_config_overrides(GlobalOpts& g) {
  if (g.config.empty()) return;
  std::ifstream in(g.config);
  if (!in) throw UsageError("cannot open config file: " + g.config);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && (line[start] == ' ' || line[start] == '\t')) ++start;
    line.erase(0, start);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(line_no) + " is not key=value");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "seed")
      g.seed = std::stoull(value);
    else if (key == "data")
      g.data = value;
    else if (key == "graph")
      g.graph = value;
    else if (key == "out")
      g.out = value;
    else if (key == "horizon-min")
      g.horizon_min = std::stoi(value);
    else if (key == "k-paths")
      g.k_paths = std::stoi(value);
    else if (key == "window-h")
      g.window_h = std::stoi(value);
    else
      throw UsageError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
}

SpeedField require_data(const GlobalOpts& g) {
  if (g.data.empty()) throw UsageError("this command needs --data <speed csv>");
  SpeedField field = load_speed_csv(g.data);
  field = interpolate_missing(field);
  validate_cleaned(field);
  return field;
}

RoadGraph require_graph(const GlobalOpts& g, const SpeedField& field) {
  if (g.graph.empty()) throw UsageError("this command needs --graph <graph csv>");
  RoadGraph graph = load_graph_csv(g.graph);
  for (const auto& road : graph.road_ids)
    if (field.road_index(road) < 0)
      throw DataError("graph road " + road + " is missing from the speed data");
  return graph;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  for (const auto& tok : split(text, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw UsageError(std::string("bad ") + what + " entry: '" + tok + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string("empty ") + what + " list");
  return out;
}

std::string horizon_model_path(const GlobalOpts& g, const char* kind, int horizon) {
  return (fs::path(g.out) / (std::string(kind) + "_" + std::to_string(horizon) + "min.txt"))
      .string();
}

PerRoadGbt load_model_set_file(const std::string& path, const SpeedField& field) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open model file " + path + " (run train-predict first)");
  return load_model_set(in, field);
}

// split-consistent interval ranges in "now" coordinates
struct IntervalLayout {
  int n_train = 0;       // training samples per road
  IndexRange train_now;  // now-times whose windows+targets stay in the train region
  IndexRange test_now;
};

IntervalLayout interval_layout(const SpeedField& field, const WindowSpec& spec, double ratio) {
  const int n_samples = field.n_steps() - spec.d;
  IntervalLayout layout;
  layout.n_train = static_cast<int>(ratio * n_samples);
  layout.train_now = IndexRange{spec.h, layout.n_train + spec.h};
  layout.test_now = IndexRange{layout.n_train + spec.h, field.n_steps() - spec.lead()};
  return layout;
}

struct StageTimer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  ~StageTimer() {
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
    std::cerr << "elapsed: " << format_double(elapsed.count()) << "s\n";
  }
};

ordered_json global_config_echo(const GlobalOpts& g) {
  ordered_json j;
  j["seed"] = g.seed;
  j["data"] = g.data;
  j["graph"] = g.graph;
  j["out"] = g.out;
  j["horizon_min"] = g.horizon_min;
  j["k_paths"] = g.k_paths;
  j["window_h"] = g.window_h;
  return j;
}

// ---- subcommand bodies ----

int run_ingest(const GlobalOpts& g) {
  StageTimer timer;
  const SpeedField field = require_data(g);
  fs::create_directories(g.out);
  const auto out_path = (fs::path(g.out) / "cleaned.csv").string();
  write_speed_csv(field, out_path);

  ordered_json summary;
  summary["roads"] = field.n_roads();
  summary["steps"] = field.n_steps();
  summary["step_minutes"] = field.step_minutes;
  summary["cleaned_csv"] = out_path;
  if (!g.graph.empty()) {
    const RoadGraph graph = require_graph(g, field);
    summary["graph_vertices"] = graph.n_vertices();
    summary["graph_edges"] = graph.n_edges();
    summary["graph_roads"] = graph.n_roads();
  }
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int run_synth(const GlobalOpts& g, int roads, int steps, const std::string& profile) {
  StageTimer timer;
  const SyntheticCorpus corpus = gen_synthetic(roads, steps, g.seed, profile_from_string(profile));
  fs::create_directories(g.out);
  write_speed_csv(corpus.field, (fs::path(g.out) / "speeds.csv").string());
  write_graph_csv(corpus.graph, (fs::path(g.out) / "graph.csv").string());
  std::cout << "wrote " << (fs::path(g.out) / "speeds.csv").string() << " (" << roads << " roads x "
            << steps << " steps, " << profile << ") and graph.csv ("
            << corpus.graph.n_vertices() << " vertices, " << corpus.graph.n_edges()
            << " edges)\n";
  return 0;
}

int run_train_predict(const GlobalOpts& g, const BoostParams& boost, double ratio,
                      const std::string& horizons_text, double congestion_p) {
  StageTimer timer;
  const SpeedField field = require_data(g);
  const auto horizons = parse_int_list(horizons_text, "horizon");
  fs::create_directories(g.out);
  for (int horizon : horizons) {
    const WindowSpec spec = window_for_horizon(horizon, g.window_h, field.step_minutes);
    const PerRoadGbt regressors = train_per_road_regressors(field, spec, ratio, boost);
    PerRoadTrainStats stats;
    const PerRoadGbt classifiers = train_per_road_classifiers(
        field, spec, ratio, boost, CongestionConfig{congestion_p}, &stats);

    std::ofstream reg(horizon_model_path(g, "gbt_regressor", horizon));
    save_model_set(regressors, field.road_ids, reg);
    std::ofstream cls(horizon_model_path(g, "gbt_classifier", horizon));
    save_model_set(classifiers, field.road_ids, cls);
    std::cout << "horizon " << horizon << "min: trained " << field.n_roads()
              << " regressors, " << stats.roads_trained << " classifiers";
    if (!stats.skipped_roads.empty())
      std::cout << " (skipped " << stats.skipped_roads.size() << " single-class roads)";
    std::cout << "\n";
  }
  return 0;
}

int run_eval_predict(const GlobalOpts& g, PredictionEvalConfig cfg) {
  StageTimer timer;
  const SpeedField field = require_data(g);
  cfg.window = window_for_horizon(g.horizon_min, g.window_h, field.step_minutes);
  const PredictionEval eval = eval_prediction(field, cfg);

  BenchResults results = load_results(g.out);
  results.config["global"] = global_config_echo(g);
  results.config["eval_predict"] = {{"rounds", cfg.boost.rounds},
                                    {"max_depth", cfg.boost.max_depth},
                                    {"eta", cfg.boost.eta},
                                    {"lambda", cfg.boost.lambda},
                                    {"gamma", cfg.boost.gamma},
                                    {"train_ratio", cfg.train_ratio},
                                    {"knn_k", cfg.knn_k},
                                    {"congestion_p", cfg.congestion.p},
                                    {"mlp_epochs", cfg.mlp.epochs},
                                    {"with_mlp", cfg.with_mlp}};
  results.speed_table = eval.speed_rows;
  results.congestion_table = eval.congestion_rows;
  if (eval.gbt_roc) results.roc = eval.gbt_roc;
  results.per_road = PerRoadTable{field.road_ids, eval.per_road_gbt};
  save_results(results, g.out);
  emit_report(results, g.out);

  for (const auto& row : eval.speed_rows)
    std::cout << row.model << ": rmse=" << format_double(row.rmse)
              << " mae=" << format_double(row.mae) << " acc=" << format_double(row.acc) << "\n";
  for (const auto& row : eval.congestion_rows)
    std::cout << row.model << ": precision=" << format_double(row.precision)
              << " recall=" << format_double(row.recall) << " f1=" << format_double(row.f1)
              << "\n";
  if (eval.gbt_roc) std::cout << "GBT congestion AUC: " << format_double(eval.gbt_roc->auc) << "\n";
  return 0;
}

int run_sweep_horizon(const GlobalOpts& g, const std::string& horizons_text, SweepConfig cfg) {
  StageTimer timer;
  const SpeedField field = require_data(g);
  cfg.window_h = g.window_h;
  const auto horizons = parse_int_list(horizons_text, "horizon");
  const auto rows = horizon_sweep(field, horizons, cfg);

  BenchResults results = load_results(g.out);
  results.config["global"] = global_config_echo(g);
  results.config["sweep_horizon"] = {{"horizons", horizons}, {"rounds", cfg.boost.rounds}};
  results.horizon_sweep = rows;
  save_results(results, g.out);
  emit_report(results, g.out);
  for (const auto& row : rows)
    std::cout << row.horizon_min << "min: rmse=" << format_double(row.rmse)
              << " mae=" << format_double(row.mae) << " acc=" << format_double(row.acc) << "\n";
  return 0;
}

int run_epoch_curve(const GlobalOpts& g, int max_rounds, BoostParams boost, double ratio) {
  StageTimer timer;
  const SpeedField field = require_data(g);
  boost.rounds = max_rounds;
  const WindowSpec spec = window_for_horizon(g.horizon_min, g.window_h, field.step_minutes);
  const EpochCurveResult curve = epoch_curve(field, spec, ratio, boost);

  BenchResults results = load_results(g.out);
  results.config["global"] = global_config_echo(g);
  results.config["epoch_curve"] = {{"max_rounds", max_rounds}};
  results.epoch_curve = curve;
  save_results(results, g.out);
  emit_report(results, g.out);
  std::cout << "plateau round: " << curve.plateau_round
            << " (test rmse " << format_double(curve.test_rmse[curve.plateau_round - 1]) << ")\n";
  return 0;
}

int run_usability(const GlobalOpts& g, const std::string& k_list_text, BoostParams boost,
                  double ratio) {
  StageTimer timer;
  const SpeedField field = require_data(g);
  const auto k_list = parse_int_list(k_list_text, "K");
  const WindowSpec spec = window_for_horizon(g.horizon_min, g.window_h, field.step_minutes);

  // per-road GBT metrics on the test split feed the correlation study
  PerRoadMetrics per_road;
  for (int r = 0; r < field.n_roads(); ++r) {
    auto split = split_train_test(make_windows(field, r, spec), ratio);
    const auto model = train_regressor(split.train, boost);
    std::vector<double> pred, actual;
    for (const auto& s : split.test) {
      pred.push_back(model.predict(s.features));
      actual.push_back(s.target);
    }
    per_road.rmse.push_back(rmse(pred, actual));
    per_road.mae.push_back(mae(pred, actual));
    per_road.acc.push_back(acc(pred, actual));
  }
  const auto rows = usability_study(field, per_road, k_list);

  BenchResults results = load_results(g.out);
  results.config["global"] = global_config_echo(g);
  results.config["usability"] = {{"k_list", k_list}, {"rounds", boost.rounds}};
  results.usability = rows;
  results.per_road = PerRoadTable{field.road_ids, per_road};
  save_results(results, g.out);
  emit_report(results, g.out);
  for (const auto& row : rows)
    std::cout << row.factor << " K=" << row.k << ": corr(RMSE)=" << format_double(row.corr_rmse)
              << " corr(MAE)=" << format_double(row.corr_mae)
              << " corr(Acc)=" << format_double(row.corr_acc) << "\n";
  return 0;
}

int run_train_eopf(const GlobalOpts& g, int n_requests, int max_intervals, int max_records,
                   MlpParams mlp, double ratio) {
  StageTimer timer;
  const SpeedField field = require_data(g);
  const RoadGraph graph = require_graph(g, field);
  const WindowSpec spec = window_for_horizon(g.horizon_min, g.window_h, field.step_minutes);

  const PerRoadGbt regressors =
      load_model_set_file(horizon_model_path(g, "gbt_regressor", g.horizon_min), field);
  const PerRoadGbt classifiers =
      load_model_set_file(horizon_model_path(g, "gbt_classifier", g.horizon_min), field);
  if (regressors.window.h != spec.h || regressors.window.d != spec.d)
    throw DataError("stored models were trained for a different window; re-run train-predict");

  const IntervalLayout layout = interval_layout(field, spec, ratio);
  IndexRange train_range = layout.train_now;
  if (max_intervals > 0 && train_range.size() > max_intervals)
    train_range.begin = train_range.end - max_intervals;  // most recent history

  const GbtFieldModel speed_model(regressors, false);
  const GbtFieldModel congestion_model(classifiers, true, 0.0);
  NavEvalConfig cfg;
  cfg.window = spec;
  cfg.k_paths = g.k_paths;
  const auto requests = gen_requests(graph, n_requests, train_range, g.seed);
  const EopfHistory history =
      collect_eopf_history(graph, field, speed_model, &congestion_model, requests, cfg);
  EopfBuildResult built = build_training_set(history);
  std::cerr << "collected " << built.records.size() << " records (" << built.skipped
            << " skipped) from " << history.size() << " requests\n";
  if (max_records > 0 && static_cast<int>(built.records.size()) > max_records) {
    // full-batch training cost scales with the record count; thin by stride
    std::vector<EopfRecord> sampled;
    sampled.reserve(max_records);
    const double stride = static_cast<double>(built.records.size()) / max_records;
    for (int i = 0; i < max_records; ++i)
      sampled.push_back(built.records[static_cast<std::size_t>(i * stride)]);
    built.records = std::move(sampled);
    std::cerr << "subsampled to " << built.records.size() << " records\n";
  }

  const MlpModel model = train_eopf(built.records, mlp);
  fs::create_directories(g.out);
  std::ofstream out(horizon_model_path(g, "eopf_model", g.horizon_min));
  save_mlp(model, out);
  std::cout << "eopf model: " << built.records.size()
            << " training records, final loss " << format_double(model.loss_curve.back())
            << ", saved to " << horizon_model_path(g, "eopf_model", g.horizon_min) << "\n";
  return 0;
}

int run_eval_nav(const GlobalOpts& g, const std::string& horizons_text, int n_requests,
                 int max_intervals, bool use_eopf, double ratio) {
  StageTimer timer;
  const SpeedField field = require_data(g);
  const RoadGraph graph = require_graph(g, field);
  const auto horizons =
      horizons_text.empty() ? std::vector<int>{g.horizon_min} : parse_int_list(horizons_text, "horizon");

  std::vector<NavHorizonResult> nav_results;
  for (int horizon : horizons) {
    const WindowSpec spec = window_for_horizon(horizon, g.window_h, field.step_minutes);
    const PerRoadGbt regressors =
        load_model_set_file(horizon_model_path(g, "gbt_regressor", horizon), field);
    const PerRoadGbt classifiers =
        load_model_set_file(horizon_model_path(g, "gbt_classifier", horizon), field);

    std::optional<MlpModel> eopf;
    const std::string eopf_path = horizon_model_path(g, "eopf_model", horizon);
    if (use_eopf) {
      std::ifstream in(eopf_path);
      if (!in) throw DataError("cannot open " + eopf_path + " (run train-eopf first)");
      eopf = load_mlp(in);
    }

    const IntervalLayout layout = interval_layout(field, spec, ratio);
    IndexRange eval_range = layout.test_now;
    if (max_intervals > 0 && eval_range.size() > max_intervals)
      eval_range.end = eval_range.begin + max_intervals;

    const GbtFieldModel speed_model(regressors, false);
    const GbtFieldModel congestion_model(classifiers, true, 0.0);
    NavEvalConfig cfg;
    cfg.window = spec;
    cfg.k_paths = g.k_paths;
    const auto requests = gen_requests(graph, n_requests, eval_range, g.seed);
    NavEvalResult result = eval_navigation(graph, field, speed_model, &congestion_model,
                                           eopf ? &*eopf : nullptr, requests, cfg);
    const auto& s = result.summary;
    std::cout << horizon << "min: naive=" << format_double(100.0 * s.mean_regret_naive)
              << "% predict=" << format_double(100.0 * s.mean_regret_predict) << "%";
    if (eopf) std::cout << " eopf=" << format_double(100.0 * s.mean_regret_eopf) << "%";
    std::cout << " exact=" << format_double(100.0 * s.exact_match_predict) << "% ("
              << s.evaluated << " evaluated, " << s.skipped << " skipped)\n";
    nav_results.push_back(NavHorizonResult{horizon, std::move(result)});
  }

  BenchResults results = load_results(g.out);
  results.config["global"] = global_config_echo(g);
  results.config["eval_nav"] = {{"horizons", horizons},
                                {"n_requests", n_requests},
                                {"max_intervals", max_intervals},
                                {"eopf", use_eopf},
                                {"train_ratio", ratio}};
  results.navigation = std::move(nav_results);
  save_results(results, g.out);
  emit_report(results, g.out);
  return 0;
}

int run_report(const GlobalOpts& g) {
  StageTimer timer;
  const BenchResults results = load_results(g.out);
  emit_report(results, g.out);
  std::cout << "report written to " << (fs::path(g.out) / "report.json").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tpnav: traffic speed prediction and Top-K navigation benchmark"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "RNG seed for every stage");
  app.add_option("--data", g.data, "speed CSV (header: road ids; one row per timestep)");
  app.add_option("--graph", g.graph, "graph CSV (from,to,road_id,length_miles per edge)");
  app.add_option("--out", g.out, "output directory (default: out)");
  app.add_option("--horizon-min", g.horizon_min, "prediction horizon in minutes");
  app.add_option("--k-paths", g.k_paths, "Top-K candidate count");
  app.add_option("--window-h", g.window_h, "window size h (state vector has h+1 entries)");
  app.add_option("--config", g.config, "key=value file overriding flags");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  int roads = 16, steps = 2016;
  std::string profile = "rush-hour";
  synth->add_option("--roads", roads, "number of roads");
  synth->add_option("--steps", steps, "number of timesteps");
  synth->add_option("--profile", profile, "smooth | rush-hour | volatile");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "load, clean and canonicalize a speed CSV");

  // shared training knobs
  BoostParams boost;
  double ratio = 0.8;
  double congestion_p = 10.0;

  auto add_boost_options = [&](CLI::App* cmd) {
    cmd->add_option("--rounds", boost.rounds, "boosting rounds");
    cmd->add_option("--max-depth", boost.max_depth, "tree depth limit");
    cmd->add_option("--eta", boost.eta, "shrinkage");
    cmd->add_option("--lambda", boost.lambda, "leaf weight L2 penalty");
    cmd->add_option("--gamma", boost.gamma, "split penalty");
    cmd->add_option("--ratio", ratio, "chronological train fraction");
  };

  auto* train_predict = app.add_subcommand("train-predict", "train per-road GBT models");
  std::string train_horizons = "";
  add_boost_options(train_predict);
  train_predict->add_option("--horizons", train_horizons,
                            "comma-separated horizons (default: --horizon-min)");
  train_predict->add_option("--congestion-p", congestion_p, "congestion percentile");

  auto* eval_predict = app.add_subcommand("eval-predict", "prediction tables for all models");
  PredictionEvalConfig pred_cfg;
  add_boost_options(eval_predict);
  eval_predict->add_option("--knn-k", pred_cfg.knn_k, "KNN neighbor count");
  eval_predict->add_option("--congestion-p", congestion_p, "congestion percentile");
  eval_predict->add_option("--mlp-epochs", pred_cfg.mlp.epochs, "MLP baseline epochs");
  eval_predict->add_option("--mlp-hidden1", pred_cfg.mlp.hidden1, "MLP first hidden width");
  eval_predict->add_option("--mlp-hidden2", pred_cfg.mlp.hidden2, "MLP second hidden width");
  eval_predict->add_option("--mlp-lr", pred_cfg.mlp.learning_rate, "MLP learning rate");
  bool no_mlp = false;
  eval_predict->add_flag("--no-mlp", no_mlp, "skip the MLP baseline");

  auto* sweep = app.add_subcommand("sweep-horizon", "RMSE/MAE/Acc across horizons");
  std::string sweep_horizons = "5,10,15,20,25,30";
  add_boost_options(sweep);
  sweep->add_option("--horizons", sweep_horizons, "comma-separated horizons in minutes");

  auto* epochs_cmd = app.add_subcommand("epoch-curve", "per-round train/test RMSE");
  int max_rounds = 100;
  add_boost_options(epochs_cmd);
  epochs_cmd->add_option("--max-rounds", max_rounds, "rounds to trace");

  auto* usability = app.add_subcommand("usability", "SR/Bias correlation study");
  std::string k_list = "1,2,3,5,10,15,20";
  add_boost_options(usability);
  usability->add_option("--k-list", k_list, "comma-separated K values");

  auto* train_eopf_cmd = app.add_subcommand("train-eopf", "train the route corrector");
  int n_requests = 100, max_intervals = 200, max_records = 8000;
  MlpParams eopf_mlp;
  eopf_mlp.epochs = 1200;
  eopf_mlp.learning_rate = 2.0;
  train_eopf_cmd->add_option("--n-requests", n_requests, "requests per interval");
  train_eopf_cmd->add_option("--max-intervals", max_intervals,
                             "cap on history intervals (0 = all)");
  train_eopf_cmd->add_option("--max-records", max_records,
                             "cap on training records, stride-subsampled (0 = all)");
  train_eopf_cmd->add_option("--eopf-epochs", eopf_mlp.epochs, "training epochs");
  train_eopf_cmd->add_option("--eopf-hidden1", eopf_mlp.hidden1, "first hidden width");
  train_eopf_cmd->add_option("--eopf-hidden2", eopf_mlp.hidden2, "second hidden width");
  train_eopf_cmd->add_option("--eopf-lr", eopf_mlp.learning_rate, "learning rate");
  train_eopf_cmd->add_option("--ratio", ratio, "chronological train fraction");

  auto* eval_nav = app.add_subcommand("eval-nav", "navigation benchmark");
  std::string nav_horizons = "";
  int nav_requests = 100, nav_max_intervals = 0;
  bool no_eopf = false;
  eval_nav->add_option("--horizons", nav_horizons,
                       "comma-separated horizons (default: --horizon-min)");
  eval_nav->add_option("--n-requests", nav_requests, "requests per interval");
  eval_nav->add_option("--max-intervals", nav_max_intervals, "cap on intervals (0 = all)");
  eval_nav->add_flag("--no-eopf", no_eopf, "skip EOPF reranking");
  eval_nav->add_option("--ratio", ratio, "chronological train fraction");

  auto* report = app.add_subcommand("report", "emit consolidated report and charts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    apply_config_overrides(g);
    eopf_mlp.seed = g.seed;
    pred_cfg.mlp.seed = g.seed;
    pred_cfg.boost = boost;
    pred_cfg.train_ratio = ratio;
    pred_cfg.congestion = CongestionConfig{congestion_p};
    pred_cfg.with_mlp = !no_mlp;

    if (synth->parsed()) return run_synth(g, roads, steps, profile);
    if (ingest->parsed()) return run_ingest(g);
    if (train_predict->parsed()) {
      const std::string horizons =
          train_horizons.empty() ? std::to_string(g.horizon_min) : train_horizons;
      return run_train_predict(g, boost, ratio, horizons, congestion_p);
    }
    if (eval_predict->parsed()) return run_eval_predict(g, pred_cfg);
    if (sweep->parsed()) {
      SweepConfig cfg;
      cfg.boost = boost;
      cfg.train_ratio = ratio;
      return run_sweep_horizon(g, sweep_horizons, cfg);
    }
    if (epochs_cmd->parsed()) return run_epoch_curve(g, max_rounds, boost, ratio);
    if (usability->parsed()) return run_usability(g, k_list, boost, ratio);
    if (train_eopf_cmd->parsed())
      return run_train_eopf(g, n_requests, max_intervals, max_records, eopf_mlp, ratio);
    if (eval_nav->parsed())
      return run_eval_nav(g, nav_horizons, nav_requests, nav_max_intervals, !no_eopf, ratio);
    if (report->parsed()) return run_report(g);
    throw UsageError("no subcommand given");
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
