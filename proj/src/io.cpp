#include "homprobe/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "homprobe/errors.hpp"
#include "json.hpp"

namespace homprobe::io {
namespace {

using nlohmann::json;

bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

bool parse_integer(const std::string& s, std::int64_t& out) {
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), last, out);
  return ec == std::errc{} && ptr == last;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

json grid_json(const FrequencyGrid& g) { return {{"points", g.points()}, {"weights", g.weights()}}; }

GridPtr grid_from_json(const json& j) {
  if (!j.contains("points")) throw InvalidArgument("grid object needs \"points\"");
  auto pts = j.at("points").get<std::vector<double>>();
  if (!j.contains("weights")) return FrequencyGrid::from_points(std::move(pts));
  return std::make_shared<const FrequencyGrid>(std::move(pts), j.at("weights").get<std::vector<double>>());
}

json parse_json(std::istream& is, const char* what) {
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

void check_schema(const json& j) {
  if (j.contains("schema") && j.at("schema").get<int>() != kSchemaVersion)
    throw InvalidArgument("unsupported schema version " + j.at("schema").dump());
}

Table make_table(std::string kind, std::vector<std::string> columns) {
  Table t;
  t.kind = std::move(kind);
  t.columns = std::move(columns);
  return t;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  if (ec != std::errc{}) throw InternalError("number formatting failed");
  return std::string(buf, ptr);
}

// --- Table ------------------------------------------------------------------

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw InvalidArgument("table has no column \"" + name + "\"");
}

double Table::number(std::size_t row, const std::string& name) const {
  const std::string& s = text(row, name);
  double v = 0.0;
  if (!parse_double(s, v)) throw InvalidArgument("cell \"" + s + "\" in column " + name + " is not a number");
  return v;
}

const std::string& Table::text(std::size_t row, const std::string& name) const { return rows.at(row).at(column(name)); }

void write_csv(const Table& t, std::ostream& os) {
  os << "# homprobe " << t.kind << " schema: " << kSchemaVersion << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

Table read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument("empty CSV input");
  std::istringstream head(line);
  std::string hash, tool, kind, schema_key;
  int schema = 0;
  if (!(head >> hash >> tool >> kind >> schema_key >> schema) || hash != "#" || tool != "homprobe" ||
      schema_key != "schema:")
    throw InvalidArgument("CSV is missing the '# homprobe <kind> schema: N' header");
  if (schema != kSchemaVersion) throw InvalidArgument("unsupported CSV schema version " + std::to_string(schema));

  Table t;
  t.kind = kind;
  if (!std::getline(is, line)) throw InvalidArgument("CSV has no column header");
  t.columns = split_csv_line(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != t.columns.size()) throw InvalidArgument("CSV row width differs from header");
    t.rows.push_back(std::move(cells));
  }
  return t;
}

void write_json(const Table& t, std::ostream& os) {
  // ordered_json keeps the documented column order in every row object
  nlohmann::ordered_json out;
  out["schema"] = kSchemaVersion;
  out["kind"] = t.kind;
  out["columns"] = t.columns;
  out["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      double v = 0.0;
      std::int64_t k = 0;
      if (parse_integer(row[i], k))
        obj[t.columns[i]] = k;
      else if (parse_double(row[i], v))
        obj[t.columns[i]] = v;
      else
        obj[t.columns[i]] = row[i];
    }
    out["rows"].push_back(std::move(obj));
  }
  os << out.dump(2) << '\n';
}

Table read_json(std::istream& is) {
  const json j = parse_json(is, "table");
  check_schema(j);
  Table t;
  t.kind = j.value("kind", "");
  t.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& obj : j.at("rows")) {
    std::vector<std::string> row;
    for (const auto& c : t.columns) {
      const json& v = obj.at(c);
      if (v.is_number_integer())
        row.push_back(std::to_string(v.get<std::int64_t>()));
      else if (v.is_number())
        row.push_back(format_number(v.get<double>()));
      else
        row.push_back(v.get<std::string>());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

// --- table builders ---------------------------------------------------------

Table dip_table(const std::vector<design::DipRow>& rows) {
  Table t = make_table("dip-scan", {"tau", "T", "V", "R_C"});
  for (const auto& r : rows)
    t.rows.push_back({format_number(r.delay), format_number(r.overlap), format_number(r.visibility),
                      format_number(r.coincidence_rate)});
  return t;
}

Table contour_table(const design::ContourGrid& g) {
  Table t = make_table("contour", {"eta_p", "eta_beta_sq", "xi", "c_f", "rc0"});
  for (std::size_t i = 0; i < g.eta_p.size(); ++i)
    for (std::size_t j = 0; j < g.eta_beta_sq.size(); ++j)
      t.rows.push_back({format_number(g.eta_p[i]), format_number(g.eta_beta_sq[j]), format_number(g.xi),
                        format_number(g.cf_at(i, j)), format_number(g.rc0_at(i, j))});
  return t;
}

Table monte_carlo_table(const SetupParams& s, double T, const std::vector<mc::DipReplica>& replicas) {
  Table t = make_table("monte-carlo", {"replica", "setting", "p", "eta", "xi", "beta_sq", "overlap", "n_pulses",
                                       "coincidences", "v_hat", "v_stderr", "t_hat", "t_stderr", "t_out_of_range"});
  for (std::size_t r = 0; r < replicas.size(); ++r) {
    const auto& rep = replicas[r];
    for (const mc::CountRecord* rec : {&rep.matched, &rep.unmatched}) {
      t.rows.push_back({std::to_string(r), rec->setting == mc::Setting::Matched ? "matched" : "unmatched",
                        format_number(s.p), format_number(s.eta), format_number(s.xi), format_number(s.beta_sq),
                        format_number(rec->setting == mc::Setting::Matched ? T : 0.0), std::to_string(rec->n_pulses),
                        std::to_string(rec->coincidences), format_number(rep.visibility.value),
                        format_number(rep.visibility.std_error), format_number(rep.overlap.value),
                        format_number(rep.overlap.std_error), rep.overlap.out_of_range ? "1" : "0"});
    }
  }
  return t;
}

// --- spectral state files ---------------------------------------------------

void write_state(const SpectralDensityMatrix& rho, std::ostream& os) {
  const auto& m = rho.entries();
  std::vector<std::vector<double>> re(static_cast<std::size_t>(m.rows())), im(re.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      re[static_cast<std::size_t>(i)].push_back(m(i, k).real());
      im[static_cast<std::size_t>(i)].push_back(m(i, k).imag());
    }
  }
  nlohmann::ordered_json j;
  j["schema"] = kSchemaVersion;
  j["grid"] = grid_json(*rho.grid());
  j["rho"] = {{"re", re}, {"im", im}};
  os << j.dump() << '\n';
}

void write_mode(const ModeFunction& u, std::ostream& os) {
  std::vector<double> re, im;
  for (const auto& a : u.amplitudes()) {
    re.push_back(a.real());
    im.push_back(a.imag());
  }
  nlohmann::ordered_json j;
  j["schema"] = kSchemaVersion;
  j["grid"] = grid_json(*u.grid());
  j["mode"] = {{"re", re}, {"im", im}};
  os << j.dump() << '\n';
}

SpectralDensityMatrix read_state(std::istream& is) {
  const json j = parse_json(is, "state");
  try {
    check_schema(j);
    GridPtr grid = grid_from_json(j.at("grid"));
    const auto re = j.at("rho").at("re").get<std::vector<std::vector<double>>>();
    const auto n = grid->size();
    std::vector<std::vector<double>> im(n, std::vector<double>(n, 0.0));
    if (j.at("rho").contains("im")) im = j.at("rho").at("im").get<std::vector<std::vector<double>>>();
    if (re.size() != n || im.size() != n) throw GridMismatch();
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
      if (re[r].size() != n || im[r].size() != n) throw GridMismatch();
      for (std::size_t c = 0; c < n; ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = Complex(re[r][c], im[r][c]);
    }
    return SpectralDensityMatrix::normalized(std::move(grid), std::move(m));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad state file: ") + e.what());
  }
}

ModeFunction read_mode(std::istream& is, const GridPtr& fallback_grid) {
  const json j = parse_json(is, "mode");
  try {
    check_schema(j);
    GridPtr grid = j.contains("grid") ? grid_from_json(j.at("grid")) : fallback_grid;
    if (!grid) throw InvalidArgument("mode file has no grid and no fallback grid was given");
    const auto re = j.at("mode").at("re").get<std::vector<double>>();
    std::vector<double> im(re.size(), 0.0);
    if (j.at("mode").contains("im")) im = j.at("mode").at("im").get<std::vector<double>>();
    if (re.size() != grid->size() || im.size() != grid->size()) throw GridMismatch();
    Eigen::VectorXcd a(static_cast<Eigen::Index>(re.size()));
    for (std::size_t i = 0; i < re.size(); ++i) a[static_cast<Eigen::Index>(i)] = Complex(re[i], im[i]);
    return ModeFunction::normalized(std::move(grid), std::move(a));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad mode file: ") + e.what());
  }
}

SpectralDensityMatrix read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open state file " + path);
  return read_state(in);
}

ModeFunction read_mode_file(const std::string& path, const GridPtr& fallback_grid) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open mode file " + path);
  return read_mode(in, fallback_grid);
}

}  // namespace homprobe::io
