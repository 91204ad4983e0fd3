#pragma once
// File formats. Speed CSV: header of road ids, one row per timestep, empty
// cell = missing. Graph CSV: `from,to,road_id,length_miles` per edge, no header.

#include <fstream>
#include <sstream>
#include <string>

#include "tpnav/graph.hpp"
#include "tpnav/speed_field.hpp"

namespace tpnav {

namespace detail {

inline double parse_cell(const std::string& cell, int line_no, int col_no) {
  if (cell.empty()) return kMissing;
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + cell.size())
    throw DataError("non-numeric cell at line " + std::to_string(line_no) + ", column " +
                    std::to_string(col_no) + ": '" + cell + "'");
  return v;
}

inline std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace detail

inline SpeedField parse_speed_csv(std::istream& in, int step_minutes = 5) {
  SpeedField field;
  field.step_minutes = step_minutes;
  std::string line;
  if (!std::getline(in, line)) throw DataError("speed CSV is empty");
  field.road_ids = split(detail::strip_cr(line), ',');
  if (field.road_ids.empty() || (field.road_ids.size() == 1 && field.road_ids[0].empty()))
    throw DataError("speed CSV header has no road ids");

  const int n_roads = static_cast<int>(field.road_ids.size());
  field.speeds.assign(n_roads, {});
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::strip_cr(line);
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;  // trailing newline
    const auto cells = split(line, ',');
    if (static_cast<int>(cells.size()) != n_roads)
      throw DataError("ragged row at line " + std::to_string(line_no) + ": expected " +
                      std::to_string(n_roads) + " cells, got " + std::to_string(cells.size()));
    for (int c = 0; c < n_roads; ++c)
      field.speeds[c].push_back(detail::parse_cell(cells[c], line_no, c + 1));
  }
  if (field.n_steps() == 0) throw DataError("speed CSV has a header but no data rows");
  return field;
}

inline SpeedField load_speed_csv(const std::string& path, int step_minutes = 5) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open speed CSV: " + path);
  return parse_speed_csv(in, step_minutes);
}

inline std::string speed_csv_string(const SpeedField& field) {
  std::string out;
  for (int r = 0; r < field.n_roads(); ++r) {
    if (r) out += ',';
    out += field.road_ids[r];
  }
  out += '\n';
  for (int t = 0; t < field.n_steps(); ++t) {
    for (int r = 0; r < field.n_roads(); ++r) {
      if (r) out += ',';
      const double v = field.speeds[r][t];
      if (!is_missing(v)) out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

inline void write_speed_csv(const SpeedField& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write speed CSV: " + path);
  out << speed_csv_string(field);
}

inline RoadGraph parse_graph_csv(std::istream& in) {
  std::vector<GraphEdgeSpec> specs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 4)
      throw DataError("graph CSV line " + std::to_string(line_no) +
                      " must be from,to,road_id,length_miles");
    GraphEdgeSpec e;
    e.from = cells[0];
    e.to = cells[1];
    e.road_id = cells[2];
    e.length = detail::parse_cell(cells[3], line_no, 4);
    if (is_missing(e.length)) throw DataError("graph CSV line " + std::to_string(line_no) + " has empty length");
    specs.push_back(std::move(e));
  }
  if (specs.empty()) throw DataError("graph CSV has no edges");
  RoadGraph g = make_road_graph(specs);
  validate_graph(g);
  return g;
}

inline RoadGraph load_graph_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open graph CSV: " + path);
  return parse_graph_csv(in);
}

inline std::string graph_csv_string(const RoadGraph& g) {
  std::string out;
  for (const auto& e : g.edges) {
    out += g.vertex_ids[e.from];
    out += ',';
    out += g.vertex_ids[e.to];
    out += ',';
    out += g.road_ids[e.road];
    out += ',';
    out += format_double(e.length);
    out += '\n';
  }
  return out;
}

inline void write_graph_csv(const RoadGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write graph CSV: " + path);
  out << graph_csv_string(g);
}

}  // namespace tpnav
