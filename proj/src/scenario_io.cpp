#include "mbrc/scenario_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "mbrc/errors.hpp"
#include "mbrc/text.hpp"

namespace mbrc {

namespace fs = std::filesystem;
namespace paths = package_paths;
using nlohmann::json;

namespace {

std::vector<std::string> read_lines(const fs::path& file, const std::string& name) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputError(name, "cannot open file");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

AsciiGrid read_ascii_grid(const fs::path& file, const std::string& name) {
  const auto lines = read_lines(file, name);
  AsciiGrid g;
  std::optional<std::int64_t> ncols, nrows;
  std::optional<double> cellsize;
  std::size_t ln = 0;
  for (; ln < lines.size(); ++ln) {
    const auto tok = tokens(lines[ln]);
    if (tok.empty()) continue;
    const auto key = lower(tok[0]);
    const bool is_key = !key.empty() && std::isalpha(static_cast<unsigned char>(key[0]));
    if (!is_key) break;
    if (tok.size() != 2) throw InputError(name, ln + 1, "header line must be 'key value'");
    const auto v = text::parse_double(tok[1]);
    if (!v) throw InputError(name, ln + 1, "non-numeric header value for " + std::string(tok[0]));
    if (key == "ncols") {
      ncols = text::parse_int(tok[1]);
      if (!ncols || *ncols < 1) throw InputError(name, ln + 1, "ncols must be a positive integer");
    } else if (key == "nrows") {
      nrows = text::parse_int(tok[1]);
      if (!nrows || *nrows < 1) throw InputError(name, ln + 1, "nrows must be a positive integer");
    } else if (key == "xllcorner" || key == "xllcenter") {
      g.xllcorner = *v;
    } else if (key == "yllcorner" || key == "yllcenter") {
      g.yllcorner = *v;
    } else if (key == "cellsize") {
      cellsize = *v;
      if (!(*v > 0.0)) throw InputError(name, ln + 1, "cellsize must be positive");
    } else if (key == "nodata_value") {
      g.nodata = *v;
    } else {
      throw InputError(name, ln + 1, "unknown header key " + std::string(tok[0]));
    }
  }
  if (!ncols) throw InputError(name, "missing ncols header");
  if (!nrows) throw InputError(name, "missing nrows header");
  if (!cellsize) throw InputError(name, "missing cellsize header");
  g.ncols = static_cast<std::size_t>(*ncols);
  g.nrows = static_cast<std::size_t>(*nrows);
  g.cellsize = *cellsize;

  g.values.reserve(g.ncols * g.nrows);
  std::size_t row = 0;
  for (; ln < lines.size(); ++ln) {
    const auto tok = tokens(lines[ln]);
    if (tok.empty()) continue;
    if (row >= g.nrows) throw InputError(name, ln + 1, "more data rows than nrows = " + std::to_string(g.nrows));
    if (tok.size() != g.ncols)
      throw InputError(name, ln + 1,
                       "row has " + std::to_string(tok.size()) + " values, expected ncols = " + std::to_string(g.ncols));
    for (auto t : tok) {
      const auto v = text::parse_double(t);
      if (!v) throw InputError(name, ln + 1, "non-numeric value '" + std::string(t) + "'");
      g.values.push_back(*v);
    }
    ++row;
  }
  if (row != g.nrows)
    throw InputError(name, "found " + std::to_string(row) + " data rows, expected nrows = " + std::to_string(g.nrows));
  return g;
}

void write_ascii_grid(const fs::path& file, const AsciiGrid& g) {
  std::string out;
  out += "ncols " + std::to_string(g.ncols) + "\n";
  out += "nrows " + std::to_string(g.nrows) + "\n";
  out += "xllcorner " + text::format_double(g.xllcorner) + "\n";
  out += "yllcorner " + text::format_double(g.yllcorner) + "\n";
  out += "cellsize " + text::format_double(g.cellsize) + "\n";
  if (g.nodata) out += "NODATA_value " + text::format_double(*g.nodata) + "\n";
  for (std::size_t r = 0; r < g.nrows; ++r) {
    for (std::size_t c = 0; c < g.ncols; ++c) {
      if (c > 0) out += ' ';
      out += text::format_double(g.values[r * g.ncols + c]);
    }
    out += '\n';
  }
  fs::create_directories(file.parent_path());
  std::ofstream f(file, std::ios::binary);
  f << out;
  if (!f) throw InputError(file.string(), "cannot write file");
}

namespace {

struct PackageReader {
  fs::path dir;
  GridSpec grid;

  AsciiGrid grid_file(const std::string& rel) const {
    auto g = read_ascii_grid(dir / rel, rel);
    if (g.nrows != grid.rows || g.ncols != grid.cols)
      throw InputError(rel, "dimension mismatch: raster is " + std::to_string(g.nrows) + "x" + std::to_string(g.ncols) +
                                ", grid is " + std::to_string(grid.rows) + "x" + std::to_string(grid.cols));
    if (g.nodata && *g.nodata != grid.nodata)
      throw InputError(rel, "NODATA_value " + text::format_double(*g.nodata) + " differs from manifest nodata " +
                                text::format_double(grid.nodata));
    return g;
  }

  Raster<double> real_raster(const std::string& rel) const {
    auto g = grid_file(rel);
    Raster<double> r(grid.rows, grid.cols);
    r.values = std::move(g.values);
    return r;
  }

  Raster<ClassCode> class_raster(const std::string& rel) const {
    auto g = grid_file(rel);
    Raster<ClassCode> r(grid.rows, grid.cols);
    for (std::size_t i = 0; i < g.values.size(); ++i) {
      const double v = g.values[i];
      if (std::trunc(v) != v || std::abs(v) > 2e9)
        throw InputError(rel, "class code at cell " + std::to_string(i) + " must be an integer");
      r.values[i] = static_cast<ClassCode>(v);
    }
    return r;
  }
};

// Splits one CSV record; double-quoted fields may contain commas and "" escapes.
std::vector<std::string> csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false, was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"' && text::trim(cur).empty()) {
      cur.clear();
      quoted = was_quoted = true;
    } else if (ch == ',') {
      cells.push_back(was_quoted ? cur : std::string(text::trim(cur)));
      cur.clear();
      was_quoted = false;
    } else {
      cur += ch;
    }
  }
  cells.push_back(was_quoted ? cur : std::string(text::trim(cur)));
  return cells;
}

std::vector<ClassCode> class_list(const std::string& field, const std::string& file, std::size_t line) {
  std::vector<ClassCode> out;
  for (const auto& part : text::split(field, '|')) {
    const auto v = text::parse_int(part);
    if (!v) throw InputError(file, line, "bad class code '" + part + "'");
    out.push_back(static_cast<ClassCode>(*v));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string join_classes(const std::vector<ClassCode>& cs) {
  std::string out;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i > 0) out += '|';
    out += std::to_string(cs[i]);
  }
  return out;
}

void expect_header(const std::vector<std::string>& lines, const std::string& file, const std::vector<std::string>& want) {
  if (lines.empty()) throw InputError(file, "empty file, expected a header row");
  if (csv_row(lines[0]) != want) {
    std::string joined;
    for (std::size_t i = 0; i < want.size(); ++i) joined += (i ? "," : "") + want[i];
    throw InputError(file, 1, "header must be '" + joined + "'");
  }
}

std::vector<std::int64_t> read_range(const PackageReader& rd, const std::string& rel) {
  std::vector<std::int64_t> cells;
  const auto n = static_cast<std::int64_t>(rd.grid.cell_count());
  if (fs::path(rel).extension() == ".asc") {
    const auto g = rd.grid_file(rel);
    for (std::size_t i = 0; i < g.values.size(); ++i) {
      const double v = g.values[i];
      if (v != 0.0 && !(g.nodata && v == *g.nodata)) cells.push_back(static_cast<std::int64_t>(i));
    }
    return cells;
  }
  const auto lines = read_lines(rd.dir / rel, rel);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto t = text::trim(lines[i]);
    if (t.empty()) continue;
    if (i == 0 && t == "cell_id") continue;
    const auto v = text::parse_int(t);
    if (!v) throw InputError(rel, i + 1, "bad cell id '" + std::string(t) + "'");
    if (*v < 0 || *v >= n) throw InputError(rel, i + 1, "cell id " + std::to_string(*v) + " outside the grid");
    cells.push_back(*v);
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

template <class T>
T manifest_value(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw InputError(paths::kManifest, "missing field " + what);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(paths::kManifest, "field " + what + " has the wrong type");
  }
}

std::string file_ref(const json& m, const char* section, const char* key, const char* fallback) {
  if (section) {
    if (m.contains(section) && m[section].contains(key)) return m[section][key].get<std::string>();
    return fallback;
  }
  if (m.contains(key)) return m[key].get<std::string>();
  return fallback;
}

}  // namespace

Scenario load_scenario(const fs::path& dir) {
  Scenario s;
  json m;
  {
    std::ifstream in(dir / paths::kManifest, std::ios::binary);
    if (!in) throw InputError(paths::kManifest, "cannot open file");
    try {
      m = json::parse(in);
    } catch (const json::parse_error& e) {
      throw InputError(paths::kManifest, e.what());
    }
  }
  if (!m.is_object()) throw InputError(paths::kManifest, "manifest must be a JSON object");
  if (!m.contains("grid") || !m["grid"].is_object()) throw InputError(paths::kManifest, "missing object field grid");
  const auto& g = m["grid"];
  const auto rows = manifest_value<std::int64_t>(g, "rows", "grid.rows");
  const auto cols = manifest_value<std::int64_t>(g, "cols", "grid.cols");
  if (rows < 1 || cols < 1) throw InputError(paths::kManifest, "grid rows and cols must be positive");
  s.grid.rows = static_cast<std::size_t>(rows);
  s.grid.cols = static_cast<std::size_t>(cols);
  s.grid.cell_area_km2 = manifest_value<double>(g, "cell_area_km2", "grid.cell_area_km2");
  s.grid.nodata = g.contains("nodata") ? manifest_value<double>(g, "nodata", "grid.nodata") : -9999.0;
  const auto factor = m.contains("aggregation_factor") ? manifest_value<std::int64_t>(m, "aggregation_factor", "aggregation_factor") : 1;
  if (factor < 1) throw InputError(paths::kManifest, "aggregation_factor must be a positive integer");
  s.aggregation_factor = static_cast<std::size_t>(factor);
  if (m.contains("z")) {
    const auto& z = m["z"];
    s.z.central = manifest_value<double>(z, "central", "z.central");
    s.z.low = manifest_value<double>(z, "low", "z.low");
    s.z.high = manifest_value<double>(z, "high", "z.high");
  }
  if (!m.contains("classes") || !m["classes"].is_array()) throw InputError(paths::kManifest, "missing array field classes");
  for (const auto& c : m["classes"]) {
    s.classes.push_back({manifest_value<ClassCode>(c, "code", "classes[].code"),
                         c.contains("name") ? c["name"].get<std::string>() : std::string()});
  }

  PackageReader rd{dir, s.grid};
  s.current_classes = rd.class_raster(file_ref(m, "rasters", "current_classes", paths::kCurrentClasses));
  s.potential_classes = rd.class_raster(file_ref(m, "rasters", "potential_classes", paths::kPotentialClasses));
  s.elevation = rd.real_raster(file_ref(m, "rasters", "elevation", paths::kElevation));

  const std::string species_file = file_ref(m, nullptr, "species", paths::kSpecies);
  {
    const auto lines = read_lines(dir / species_file, species_file);
    expect_header(lines, species_file, {"species_id", "suitable_classes", "elev_min", "elev_max", "range_file"});
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (text::trim(lines[i]).empty()) continue;
      const auto row = csv_row(lines[i]);
      if (row.size() != 5) throw InputError(species_file, i + 1, "expected 5 fields, found " + std::to_string(row.size()));
      SpeciesSpec sp;
      sp.species_id = row[0];
      if (sp.species_id.empty()) throw InputError(species_file, i + 1, "empty species_id");
      sp.suitable_classes = class_list(row[1], species_file, i + 1);
      const auto lo = text::parse_double(row[2]);
      const auto hi = text::parse_double(row[3]);
      if (!lo || !hi) throw InputError(species_file, i + 1, "elevation bounds must be numeric");
      sp.elevation_min = *lo;
      sp.elevation_max = *hi;
      if (row[4].empty()) throw InputError(species_file, i + 1, "missing range_file");
      sp.range_mask = read_range(rd, row[4]);
      s.species.push_back(std::move(sp));
    }
  }

  const std::string tech_file = file_ref(m, nullptr, "technologies", paths::kTechnologies);
  {
    const auto lines = read_lines(dir / tech_file, tech_file);
    expect_header(lines, tech_file, {"technology_id", "from_classes", "to_class", "cost_layer"});
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (text::trim(lines[i]).empty()) continue;
      const auto row = csv_row(lines[i]);
      if (row.size() != 4) throw InputError(tech_file, i + 1, "expected 4 fields, found " + std::to_string(row.size()));
      TechnologySpec t;
      t.technology_id = row[0];
      if (t.technology_id.empty()) throw InputError(tech_file, i + 1, "empty technology_id");
      t.from_classes = class_list(row[1], tech_file, i + 1);
      const auto to = text::parse_int(row[2]);
      if (!to) throw InputError(tech_file, i + 1, "bad to_class '" + row[2] + "'");
      t.to_class = static_cast<ClassCode>(*to);
      for (auto c : t.from_classes)
        if (!s.is_known_class(c)) throw InputError(tech_file, i + 1, "unknown habitat class " + std::to_string(c));
      if (!s.is_known_class(t.to_class)) throw InputError(tech_file, i + 1, "unknown habitat class " + std::to_string(t.to_class));
      t.cost_layer_ref = row[3];
      if (t.cost_layer_ref.empty()) throw InputError(tech_file, i + 1, "missing cost_layer");
      if (s.cost_layers.count(t.technology_id)) throw InputError(tech_file, i + 1, "duplicate technology_id " + t.technology_id);
      s.cost_layers.emplace(t.technology_id, rd.real_raster(t.cost_layer_ref));
      s.technologies.push_back(std::move(t));
    }
  }
  return s;
}

namespace {

template <class T>
AsciiGrid to_ascii(const Raster<T>& r, const GridSpec& g) {
  AsciiGrid a;
  a.nrows = r.rows;
  a.ncols = r.cols;
  a.cellsize = std::sqrt(g.cell_area_km2);
  a.nodata = g.nodata;
  a.values.assign(r.values.begin(), r.values.end());
  return a;
}

void write_text(const fs::path& file, const std::string& content) {
  fs::create_directories(file.parent_path());
  std::ofstream f(file, std::ios::binary);
  f << content;
  if (!f) throw InputError(file.string(), "cannot write file");
}

}  // namespace

void save_scenario(const Scenario& s, const fs::path& dir) {
  fs::create_directories(dir);
  json m;
  m["grid"] = {{"rows", s.grid.rows}, {"cols", s.grid.cols}, {"cell_area_km2", s.grid.cell_area_km2}, {"nodata", s.grid.nodata}};
  m["aggregation_factor"] = s.aggregation_factor;
  m["z"] = {{"central", s.z.central}, {"low", s.z.low}, {"high", s.z.high}};
  m["classes"] = json::array();
  for (const auto& c : s.classes) m["classes"].push_back({{"code", c.code}, {"name", c.name}});
  m["rasters"] = {{"current_classes", paths::kCurrentClasses},
                  {"potential_classes", paths::kPotentialClasses},
                  {"elevation", paths::kElevation}};
  m["species"] = paths::kSpecies;
  m["technologies"] = paths::kTechnologies;
  write_text(dir / paths::kManifest, m.dump(2) + "\n");

  write_ascii_grid(dir / paths::kCurrentClasses, to_ascii(s.current_classes, s.grid));
  write_ascii_grid(dir / paths::kPotentialClasses, to_ascii(s.potential_classes, s.grid));
  write_ascii_grid(dir / paths::kElevation, to_ascii(s.elevation, s.grid));

  std::string species = "species_id,suitable_classes,elev_min,elev_max,range_file\n";
  for (std::size_t i = 0; i < s.species.size(); ++i) {
    const auto& sp = s.species[i];
    const std::string range_file = "ranges/species_" + std::to_string(i + 1) + ".csv";
    species += text::csv_field(sp.species_id) + "," + join_classes(sp.suitable_classes) + "," + text::format_double(sp.elevation_min) + "," +
               text::format_double(sp.elevation_max) + "," + range_file + "\n";
    std::string cells = "cell_id\n";
    for (auto c : sp.range_mask) cells += std::to_string(c) + "\n";
    write_text(dir / range_file, cells);
  }
  write_text(dir / paths::kSpecies, species);

  std::string techs = "technology_id,from_classes,to_class,cost_layer\n";
  for (const auto& t : s.technologies) {
    const std::string ref = t.cost_layer_ref.empty() ? "rasters/cost_" + t.technology_id + ".asc" : t.cost_layer_ref;
    techs += text::csv_field(t.technology_id) + "," + join_classes(t.from_classes) + "," + std::to_string(t.to_class) + "," + ref + "\n";
    write_ascii_grid(dir / ref, to_ascii(s.cost_layer(t), s.grid));
  }
  write_text(dir / paths::kTechnologies, techs);
}

}  // namespace mbrc
