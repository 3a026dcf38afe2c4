#pragma once

#include "roughkit/densitylab.hpp"
#include "roughkit/flows.hpp"
#include "roughkit/grid.hpp"
#include "roughkit/signature.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace roughkit::io {

/// Shortest text that round-trips: 17 significant digits, fixed locale.
std::string format_double(double v);

/// "t,comp_1,...,comp_d" then one row per grid point.
std::string path_csv(const SamplePath& path);
/// {"H", "T", "n_points", "d", "seed", "c_H_convention"}.
std::string path_metadata_json(const SamplePath& path);

/// {"interval": [s, t], "level": n, "entries": [{"word": [1, 2], "value": x}, ...]}
std::string signature_json(const IteratedIntegrals& sig);

/// "t,y_1,...,y_m".
std::string solution_csv(const TimeGrid& grid, const Eigen::MatrixXd& values);

/// "x,density".
std::string density_csv(const DensityEstimate& estimate);

/// "u,d_1_1,...,d_m_d" (row-major entries of D_u y_t).
std::string malliavin_csv(const MalliavinSlice& slice);

/// Generic table with a header row.
std::string table_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

struct PlotSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string label;
};

/// Hand-rolled SVG 1.1 line plot with axes and tick labels.
std::string svg_line_plot(const std::vector<PlotSeries>& series, const std::string& title, const std::string& x_label,
                          const std::string& y_label);

/// Creates missing parent directories.
void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

}  // namespace roughkit::io
