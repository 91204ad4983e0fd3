#pragma once
// Report emission: per-table CSVs, a consolidated JSON report, and SVG line
// charts. Every number goes through format_double / nlohmann's dtoa, so
// identical inputs produce byte-identical files.

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "tpnav/bench.hpp"

namespace tpnav {

using ordered_json = nlohmann::ordered_json;

struct PerRoadTable {
  std::vector<std::string> roads;
  PerRoadMetrics metrics;
};

struct NavHorizonResult {
  int horizon_min = 0;
  NavEvalResult result;
};

struct BenchResults {
  ordered_json config = ordered_json::object();
  std::optional<std::vector<SpeedModelRow>> speed_table;
  std::optional<std::vector<CongestionModelRow>> congestion_table;
  std::optional<RocCurve> roc;
  std::optional<PerRoadTable> per_road;
  std::optional<std::vector<HorizonRow>> horizon_sweep;
  std::optional<EpochCurveResult> epoch_curve;
  std::optional<std::vector<UsabilityRow>> usability;
  std::optional<std::vector<NavHorizonResult>> navigation;
};

// ---- JSON round trip (results.json is the machine intermediate) ----

inline ordered_json results_to_json(const BenchResults& r) {
  ordered_json j;
  j["config"] = r.config;
  j["speed_table"] = ordered_json::array();
  if (r.speed_table)
    for (const auto& row : *r.speed_table)
      j["speed_table"].push_back(
          {{"model", row.model}, {"rmse", row.rmse}, {"mae", row.mae}, {"acc", row.acc}});
  j["congestion_table"] = ordered_json::array();
  if (r.congestion_table)
    for (const auto& row : *r.congestion_table)
      j["congestion_table"].push_back({{"model", row.model},
                                       {"precision", row.precision},
                                       {"recall", row.recall},
                                       {"f1", row.f1}});
  if (r.roc) {
    ordered_json points = ordered_json::array();
    for (const auto& [fpr, tpr] : r.roc->points) points.push_back({fpr, tpr});
    j["roc"] = {{"auc", r.roc->auc}, {"points", std::move(points)}};
  } else {
    j["roc"] = nullptr;
  }
  j["per_road_metrics"] = ordered_json::array();
  if (r.per_road)
    for (std::size_t i = 0; i < r.per_road->roads.size(); ++i)
      j["per_road_metrics"].push_back({{"road", r.per_road->roads[i]},
                                       {"rmse", r.per_road->metrics.rmse[i]},
                                       {"mae", r.per_road->metrics.mae[i]},
                                       {"acc", r.per_road->metrics.acc[i]}});
  j["horizon_sweep"] = ordered_json::array();
  if (r.horizon_sweep)
    for (const auto& row : *r.horizon_sweep)
      j["horizon_sweep"].push_back({{"horizon_min", row.horizon_min},
                                    {"rmse", row.rmse},
                                    {"mae", row.mae},
                                    {"acc", row.acc}});
  if (r.epoch_curve) {
    j["epoch_curve"] = {{"train_rmse", r.epoch_curve->train_rmse},
                        {"test_rmse", r.epoch_curve->test_rmse},
                        {"plateau_round", r.epoch_curve->plateau_round}};
  } else {
    j["epoch_curve"] = nullptr;
  }
  j["usability"] = ordered_json::array();
  if (r.usability)
    for (const auto& row : *r.usability)
      j["usability"].push_back({{"factor", row.factor},
                                {"K", row.k},
                                {"rmse", row.corr_rmse},
                                {"mae", row.corr_mae},
                                {"acc", row.corr_acc}});
  j["navigation"] = ordered_json::array();
  if (r.navigation) {
    for (const auto& nav : *r.navigation) {
      const auto& s = nav.result.summary;
      auto buckets = [](const NavBuckets& b) {
        return ordered_json{{"gt30", b.gt30},
                            {"b20_30", b.b20_30},
                            {"b10_20", b.b10_20},
                            {"b5_10", b.b5_10},
                            {"lt5", b.lt5}};
      };
      ordered_json records = ordered_json::array();
      for (const auto& rec : nav.result.records)
        records.push_back({{"id", rec.request.id},
                           {"origin", rec.request.origin},
                           {"destination", rec.request.destination},
                           {"timestep", rec.request.timestep},
                           {"t_optimal", rec.t_optimal},
                           {"t_naive", rec.t_naive},
                           {"t_predict", rec.t_predict},
                           {"t_eopf", rec.t_eopf},
                           {"regret_naive", rec.regret_naive},
                           {"regret_predict", rec.regret_predict},
                           {"regret_eopf", rec.regret_eopf},
                           {"eopf_used", rec.eopf_used},
                           {"predict_exact", rec.predict_exact},
                           {"eopf_exact", rec.eopf_exact}});
      j["navigation"].push_back(
          {{"horizon_min", nav.horizon_min},
           {"summary",
            {{"evaluated", s.evaluated},
             {"skipped", s.skipped},
             {"mean_regret_naive", s.mean_regret_naive},
             {"mean_regret_predict", s.mean_regret_predict},
             {"mean_regret_eopf", s.mean_regret_eopf},
             {"exact_match_predict", s.exact_match_predict},
             {"exact_match_eopf", s.exact_match_eopf},
             {"improved", s.improved},
             {"worsened", s.worsened},
             {"unchanged", s.unchanged},
             {"mean_improvement_improved", s.mean_improvement_improved},
             {"better_dist", buckets(s.better_dist)},
             {"worse_dist", buckets(s.worse_dist)},
             {"predict_regret_dist", buckets(s.predict_regret_dist)},
             {"eopf_regret_dist", buckets(s.eopf_regret_dist)}}},
           {"records", std::move(records)}});
    }
  }
  return j;
}

inline BenchResults results_from_json(const ordered_json& j) {
  BenchResults r;
  r.config = j.value("config", ordered_json::object());
  if (j.contains("speed_table") && !j["speed_table"].empty()) {
    r.speed_table.emplace();
    for (const auto& row : j["speed_table"])
      r.speed_table->push_back(
          SpeedModelRow{row["model"], row["rmse"], row["mae"], row["acc"]});
  }
  if (j.contains("congestion_table") && !j["congestion_table"].empty()) {
    r.congestion_table.emplace();
    for (const auto& row : j["congestion_table"])
      r.congestion_table->push_back(
          CongestionModelRow{row["model"], row["precision"], row["recall"], row["f1"]});
  }
  if (j.contains("roc") && !j["roc"].is_null()) {
    RocCurve roc;
    roc.auc = j["roc"]["auc"];
    for (const auto& p : j["roc"]["points"]) roc.points.emplace_back(p[0], p[1]);
    r.roc = std::move(roc);
  }
  if (j.contains("per_road_metrics") && !j["per_road_metrics"].empty()) {
    PerRoadTable t;
    for (const auto& row : j["per_road_metrics"]) {
      t.roads.push_back(row["road"]);
      t.metrics.rmse.push_back(row["rmse"]);
      t.metrics.mae.push_back(row["mae"]);
      t.metrics.acc.push_back(row["acc"]);
    }
    r.per_road = std::move(t);
  }
  if (j.contains("horizon_sweep") && !j["horizon_sweep"].empty()) {
    r.horizon_sweep.emplace();
    for (const auto& row : j["horizon_sweep"])
      r.horizon_sweep->push_back(
          HorizonRow{row["horizon_min"], row["rmse"], row["mae"], row["acc"]});
  }
  if (j.contains("epoch_curve") && !j["epoch_curve"].is_null()) {
    EpochCurveResult e;
    e.train_rmse = j["epoch_curve"]["train_rmse"].get<std::vector<double>>();
    e.test_rmse = j["epoch_curve"]["test_rmse"].get<std::vector<double>>();
    e.plateau_round = j["epoch_curve"]["plateau_round"];
    r.epoch_curve = std::move(e);
  }
  if (j.contains("usability") && !j["usability"].empty()) {
    r.usability.emplace();
    for (const auto& row : j["usability"])
      r.usability->push_back(
          UsabilityRow{row["factor"], row["K"], row["rmse"], row["mae"], row["acc"]});
  }
  if (j.contains("navigation") && !j["navigation"].empty()) {
    r.navigation.emplace();
    for (const auto& nav : j["navigation"]) {
      NavHorizonResult out;
      out.horizon_min = nav["horizon_min"];
      const auto& s = nav["summary"];
      auto buckets = [](const ordered_json& b) {
        return NavBuckets{b["gt30"], b["b20_30"], b["b10_20"], b["b5_10"], b["lt5"]};
      };
      auto& sum = out.result.summary;
      sum.evaluated = s["evaluated"];
      sum.skipped = s["skipped"];
      sum.mean_regret_naive = s["mean_regret_naive"];
      sum.mean_regret_predict = s["mean_regret_predict"];
      sum.mean_regret_eopf = s["mean_regret_eopf"];
      sum.exact_match_predict = s["exact_match_predict"];
      sum.exact_match_eopf = s["exact_match_eopf"];
      sum.improved = s["improved"];
      sum.worsened = s["worsened"];
      sum.unchanged = s["unchanged"];
      sum.mean_improvement_improved = s["mean_improvement_improved"];
      sum.better_dist = buckets(s["better_dist"]);
      sum.worse_dist = buckets(s["worse_dist"]);
      sum.predict_regret_dist = buckets(s["predict_regret_dist"]);
      sum.eopf_regret_dist = buckets(s["eopf_regret_dist"]);
      for (const auto& rec : nav["records"]) {
        RegretRecord rr;
        rr.request = NavRequest{rec["id"], rec["origin"], rec["destination"], rec["timestep"]};
        rr.t_optimal = rec["t_optimal"];
        rr.t_naive = rec["t_naive"];
        rr.t_predict = rec["t_predict"];
        rr.t_eopf = rec["t_eopf"];
        rr.regret_naive = rec["regret_naive"];
        rr.regret_predict = rec["regret_predict"];
        rr.regret_eopf = rec["regret_eopf"];
        rr.eopf_used = rec["eopf_used"];
        rr.predict_exact = rec["predict_exact"];
        rr.eopf_exact = rec["eopf_exact"];
        out.result.records.push_back(std::move(rr));
      }
      r.navigation->push_back(std::move(out));
    }
  }
  return r;
}

// ---- SVG line charts ----

struct ChartSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

inline std::string svg_line_chart(const std::string& title, const std::string& x_label,
                                  const std::string& y_label,
                                  const std::vector<ChartSeries>& series) {
  constexpr int width = 720, height = 440;
  constexpr double ml = 70, mr = 30, mt = 46, mb = 56;  // margins
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool first = true;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (first) {
        x_min = x_max = x;
        y_min = y_max = y;
        first = false;
      }
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (x_max == x_min) x_max = x_min + 1;
  if (y_max == y_min) y_max = y_min + 1;

  auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr); };
  auto py = [&](double y) { return height - mb - (y - y_min) / (y_max - y_min) * (height - mt - mb); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"440\" "
         "viewBox=\"0 0 720 440\">\n";
  svg += "<rect width=\"720\" height=\"440\" fill=\"white\"/>\n";
  svg += "<text x=\"360\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" + title + "</text>\n";
  // axes
  svg += "<line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(height - mb) + "\" x2=\"" +
         format_double(width - mr) + "\" y2=\"" + format_double(height - mb) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(mt) + "\" x2=\"" +
         format_double(ml) + "\" y2=\"" + format_double(height - mb) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = x_min + (x_max - x_min) * i / 5.0;
    const double yv = y_min + (y_max - y_min) * i / 5.0;
    svg += "<text x=\"" + format_double(px(xv)) + "\" y=\"" + format_double(height - mb + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_double(std::round(xv * 1000) / 1000) + "</text>\n";
    svg += "<text x=\"" + format_double(ml - 8) + "\" y=\"" + format_double(py(yv) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_double(std::round(yv * 1000) / 1000) + "</text>\n";
  }
  svg += "<text x=\"" + format_double((ml + width - mr) / 2) + "\" y=\"" +
         format_double(height - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + x_label +
         "</text>\n";
  svg += "<text x=\"18\" y=\"" + format_double((mt + height - mb) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 " + format_double((mt + height - mb) / 2) + ")\">" + y_label +
         "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = palette[si % 5];
    std::string pts;
    for (const auto& [x, y] : series[si].points) {
      if (!pts.empty()) pts += ' ';
      pts += format_double(std::round(px(x) * 100) / 100) + "," +
             format_double(std::round(py(y) * 100) / 100);
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    svg += "<text x=\"" + format_double(width - mr - 8) + "\" y=\"" +
           format_double(mt + 16 + 16 * static_cast<double>(si)) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" + color +
           "\">" + series[si].label + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

// ---- file emission ----

namespace detail {

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
}

inline std::string csv_table(const std::string& header,
                             const std::vector<std::vector<std::string>>& rows) {
  std::string out = header + "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

inline std::vector<std::string> bucket_labels() {
  return {">30%", "20%-30%", "10%-20%", "5%-10%", "<5%"};
}

inline std::vector<double> bucket_values(const NavBuckets& b) {
  return {b.gt30, b.b20_30, b.b10_20, b.b5_10, b.lt5};
}

}  // namespace detail

inline void emit_report(const BenchResults& results, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec && !fs::exists(dir)) throw DataError("cannot create output directory " + out_dir);

  using Rows = std::vector<std::vector<std::string>>;
  const auto f = [](double v) { return format_double(v); };

  // drop artifacts whose section is absent so the directory always mirrors
  // the results being reported
  const std::pair<const char*, bool> managed[] = {
      {"speed_table.csv", results.speed_table.has_value()},
      {"congestion_table.csv", results.congestion_table.has_value()},
      {"roc_points.csv", results.roc.has_value()},
      {"roc.svg", results.roc.has_value()},
      {"per_road_metrics.csv", results.per_road.has_value()},
      {"horizon_sweep.csv", results.horizon_sweep.has_value()},
      {"horizon_sweep.svg", results.horizon_sweep.has_value()},
      {"epoch_curve.csv", results.epoch_curve.has_value()},
      {"epoch_curve.svg", results.epoch_curve.has_value()},
      {"usability.csv", results.usability.has_value()},
      {"nav_summary.csv", results.navigation.has_value()},
      {"nav_records.csv", results.navigation.has_value()},
      {"eopf_improvement.csv", false},  // rewritten below when EOPF ran
      {"eopf_vs_optimal.csv", false},
  };
  for (const auto& [name, keep] : managed)
    if (!keep) fs::remove(dir / name, ec);

  if (results.speed_table) {
    Rows rows;
    for (const auto& r : *results.speed_table)
      rows.push_back({r.model, f(r.rmse), f(r.mae), f(r.acc)});
    detail::write_text_file(dir / "speed_table.csv",
                            detail::csv_table("model,rmse,mae,acc", rows));
  }
  if (results.congestion_table) {
    Rows rows;
    for (const auto& r : *results.congestion_table)
      rows.push_back({r.model, f(r.precision), f(r.recall), f(r.f1)});
    detail::write_text_file(dir / "congestion_table.csv",
                            detail::csv_table("model,precision,recall,f1", rows));
  }
  if (results.roc) {
    Rows rows;
    for (const auto& [fpr, tpr] : results.roc->points) rows.push_back({f(fpr), f(tpr)});
    detail::write_text_file(dir / "roc_points.csv", detail::csv_table("fpr,tpr", rows));
    detail::write_text_file(
        dir / "roc.svg",
        svg_line_chart("ROC (AUC=" + f(results.roc->auc) + ")", "false positive rate",
                       "true positive rate", {ChartSeries{"ROC", results.roc->points}}));
  }
  if (results.per_road) {
    Rows rows;
    for (std::size_t i = 0; i < results.per_road->roads.size(); ++i)
      rows.push_back({results.per_road->roads[i], f(results.per_road->metrics.rmse[i]),
                      f(results.per_road->metrics.mae[i]), f(results.per_road->metrics.acc[i])});
    detail::write_text_file(dir / "per_road_metrics.csv",
                            detail::csv_table("road,rmse,mae,acc", rows));
  }
  if (results.horizon_sweep) {
    Rows rows;
    std::vector<std::pair<double, double>> rmse_pts, mae_pts, acc_pts;
    for (const auto& r : *results.horizon_sweep) {
      rows.push_back({std::to_string(r.horizon_min), f(r.rmse), f(r.mae), f(r.acc)});
      rmse_pts.emplace_back(r.horizon_min, r.rmse);
      mae_pts.emplace_back(r.horizon_min, r.mae);
      acc_pts.emplace_back(r.horizon_min, r.acc);
    }
    detail::write_text_file(dir / "horizon_sweep.csv",
                            detail::csv_table("horizon_min,rmse,mae,acc", rows));
    detail::write_text_file(dir / "horizon_sweep.svg",
                            svg_line_chart("Prediction error vs horizon", "horizon (min)",
                                           "error",
                                           {ChartSeries{"RMSE", rmse_pts},
                                            ChartSeries{"MAE", mae_pts}}));
  }
  if (results.epoch_curve) {
    Rows rows;
    std::vector<std::pair<double, double>> train_pts, test_pts;
    for (std::size_t k = 0; k < results.epoch_curve->train_rmse.size(); ++k) {
      rows.push_back({std::to_string(k + 1), f(results.epoch_curve->train_rmse[k]),
                      f(results.epoch_curve->test_rmse[k])});
      train_pts.emplace_back(static_cast<double>(k + 1), results.epoch_curve->train_rmse[k]);
      test_pts.emplace_back(static_cast<double>(k + 1), results.epoch_curve->test_rmse[k]);
    }
    detail::write_text_file(dir / "epoch_curve.csv",
                            detail::csv_table("round,train_rmse,test_rmse", rows));
    detail::write_text_file(
        dir / "epoch_curve.svg",
        svg_line_chart("RMSE vs boosting rounds (plateau at round " +
                           std::to_string(results.epoch_curve->plateau_round) + ")",
                       "round", "RMSE",
                       {ChartSeries{"train", train_pts}, ChartSeries{"test", test_pts}}));
  }
  if (results.usability) {
    Rows rows;
    for (const auto& r : *results.usability)
      rows.push_back({r.factor, std::to_string(r.k), f(r.corr_rmse), f(r.corr_mae), f(r.corr_acc)});
    detail::write_text_file(dir / "usability.csv",
                            detail::csv_table("factor,K,RMSE,MAE,Acc", rows));
  }
  if (results.navigation) {
    Rows summary_rows, record_rows;
    for (const auto& nav : *results.navigation) {
      const auto& s = nav.result.summary;
      summary_rows.push_back({std::to_string(nav.horizon_min), f(s.mean_regret_naive),
                              f(s.mean_regret_predict), f(s.mean_regret_eopf),
                              f(s.exact_match_predict), f(s.exact_match_eopf),
                              std::to_string(s.evaluated), std::to_string(s.skipped)});
      for (const auto& rec : nav.result.records)
        record_rows.push_back({std::to_string(nav.horizon_min), std::to_string(rec.request.id),
                               std::to_string(rec.request.origin),
                               std::to_string(rec.request.destination),
                               std::to_string(rec.request.timestep), f(rec.t_optimal),
                               f(rec.t_naive), f(rec.t_predict), f(rec.t_eopf),
                               f(rec.regret_naive), f(rec.regret_predict), f(rec.regret_eopf)});
    }
    detail::write_text_file(
        dir / "nav_summary.csv",
        detail::csv_table("horizon_min,mean_regret_naive,mean_regret_predict,mean_regret_eopf,"
                          "exact_match_predict,exact_match_eopf,evaluated,skipped",
                          summary_rows));
    detail::write_text_file(
        dir / "nav_records.csv",
        detail::csv_table("horizon_min,request_id,origin,destination,timestep,t_optimal,t_naive,"
                          "t_predict,t_eopf,regret_naive,regret_predict,regret_eopf",
                          record_rows));

    // improvement distributions, written for the last navigation run that
    // used EOPF (single-horizon views)
    for (auto it = results.navigation->rbegin(); it != results.navigation->rend(); ++it) {
      const auto& s = it->result.summary;
      if (s.improved + s.worsened + s.unchanged == 0) continue;
      Rows t8;
      const auto labels = detail::bucket_labels();
      const auto better = detail::bucket_values(s.better_dist);
      const auto worse = detail::bucket_values(s.worse_dist);
      for (std::size_t i = 0; i < labels.size(); ++i)
        t8.push_back({labels[i], f(better[i]), f(worse[i])});
      detail::write_text_file(dir / "eopf_improvement.csv",
                              detail::csv_table("bucket,better,worse", t8));
      Rows t9;
      const auto eopf_dist = detail::bucket_values(s.eopf_regret_dist);
      const auto plain_dist = detail::bucket_values(s.predict_regret_dist);
      for (std::size_t i = 0; i < labels.size(); ++i)
        t9.push_back({labels[i], f(eopf_dist[i]), f(plain_dist[i])});
      t9.push_back({"overall_mean_regret_pct", f(s.mean_regret_eopf * 100.0),
                    f(s.mean_regret_predict * 100.0)});
      detail::write_text_file(dir / "eopf_vs_optimal.csv",
                              detail::csv_table("bucket,eopf,without_eopf", t9));
      break;
    }
  }

  detail::write_text_file(dir / "report.json", results_to_json(results).dump(2) + "\n");
}

inline void save_results(const BenchResults& results, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  detail::write_text_file(fs::path(out_dir) / "results.json",
                          results_to_json(results).dump(2) + "\n");
}

inline BenchResults load_results(const std::string& out_dir) {
  const auto path = std::filesystem::path(out_dir) / "results.json";
  std::ifstream in(path);
  if (!in) return BenchResults{};
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DataError("cannot parse " + path.string() + ": " + e.what());
  }
  return results_from_json(j);
}

}  // namespace tpnav
