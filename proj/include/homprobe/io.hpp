#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "homprobe/design.hpp"
#include "homprobe/montecarlo.hpp"
#include "homprobe/spectral.hpp"

namespace homprobe::io {

inline constexpr int kSchemaVersion = 1;

/// 9 significant digits, '.' decimal separator regardless of locale.
std::string format_number(double v);

/// Plot-ready table. Cells are stored as text so CSV and JSON carry the
/// same digits; numeric columns parse back with `number`.
struct Table {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
  const std::string& text(std::size_t row, const std::string& name) const;
};

// CSV layout: "# homprobe <kind> schema: 1", header line, one line per row.
void write_csv(const Table& t, std::ostream& os);
Table read_csv(std::istream& is);

// JSON layout: {"schema":1,"kind":..,"columns":[..],"rows":[{col: value}]}.
void write_json(const Table& t, std::ostream& os);
Table read_json(std::istream& is);

Table dip_table(const std::vector<design::DipRow>& rows);
Table contour_table(const design::ContourGrid& grid);
Table monte_carlo_table(const SetupParams& s, double T, const std::vector<mc::DipReplica>& replicas);

// Spectral state files.
//   state: {"schema":1,"grid":{"points":[..],"weights":[..]},"rho":{"re":[[..]],"im":[[..]]}}
//   mode:  {"schema":1,"grid":{..},"mode":{"re":[..],"im":[..]}}
// Loaders renormalize (unit trace / unit norm) and validate the rest.
void write_state(const SpectralDensityMatrix& rho, std::ostream& os);
void write_mode(const ModeFunction& u, std::ostream& os);
SpectralDensityMatrix read_state(std::istream& is);
/// `fallback_grid` is used when the file carries no "grid" object.
ModeFunction read_mode(std::istream& is, const GridPtr& fallback_grid = nullptr);

SpectralDensityMatrix read_state_file(const std::string& path);
ModeFunction read_mode_file(const std::string& path, const GridPtr& fallback_grid = nullptr);

}  // namespace homprobe::io
