#include "roughkit/io.hpp"

#include "roughkit/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace roughkit::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

void append_row(std::string& out, double first, const Eigen::Ref<const Eigen::RowVectorXd>& rest) {
  out += format_double(first);
  for (Eigen::Index k = 0; k < rest.size(); ++k) {
    out += ',';
    out += format_double(rest(k));
  }
  out += '\n';
}

}  // namespace

std::string path_csv(const SamplePath& path) {
  std::string out = "t";
  for (std::size_t c = 0; c < path.dim(); ++c) out += ",comp_" + std::to_string(c + 1);
  out += '\n';
  for (std::size_t k = 0; k < path.size(); ++k)
    append_row(out, path.grid()[k], path.values().row(static_cast<Eigen::Index>(k)));
  return out;
}

std::string path_metadata_json(const SamplePath& path) {
  nlohmann::ordered_json j;
  j["H"] = path.hurst().value();
  j["T"] = path.grid().horizon();
  j["n_points"] = path.size();
  j["d"] = path.dim();
  j["seed"] = path.seed();
  j["c_H_convention"] = "int_0^1 K_H(1,r)^2 dr = 1";
  return j.dump(2) + "\n";
}

std::string signature_json(const IteratedIntegrals& sig) {
  nlohmann::ordered_json j;
  j["interval"] = {sig.start(), sig.end()};
  j["level"] = sig.level();
  j["dim"] = sig.dim();
  auto entries = nlohmann::ordered_json::array();
  for (std::size_t k = 1; k <= sig.level(); ++k) {
    const auto values = sig.level_values(k);
    for (std::size_t w = 0; w < values.size(); ++w) {
      const Word word = Word::from_index(w, k, sig.dim());
      std::vector<int> letters;
      for (int l : word) letters.push_back(l + 1);
      entries.push_back({{"word", letters}, {"value", values[w]}});
    }
  }
  j["entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

std::string solution_csv(const TimeGrid& grid, const Eigen::MatrixXd& values) {
  if (static_cast<std::size_t>(values.rows()) != grid.size()) throw DomainError("solution rows do not match the grid");
  std::string out = "t";
  for (Eigen::Index c = 0; c < values.cols(); ++c) out += ",y_" + std::to_string(c + 1);
  out += '\n';
  for (std::size_t k = 0; k < grid.size(); ++k) append_row(out, grid[k], values.row(static_cast<Eigen::Index>(k)));
  return out;
}

std::string density_csv(const DensityEstimate& estimate) {
  std::string out = "x,density\n";
  for (std::size_t k = 0; k < estimate.x.size(); ++k)
    out += format_double(estimate.x[k]) + "," + format_double(estimate.values[k]) + "\n";
  return out;
}

std::string malliavin_csv(const MalliavinSlice& slice) {
  std::string out = "u";
  if (!slice.D.empty()) {
    for (Eigen::Index i = 0; i < slice.D.front().rows(); ++i)
      for (Eigen::Index j = 0; j < slice.D.front().cols(); ++j)
        out += ",d_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
  }
  out += '\n';
  for (std::size_t k = 0; k < slice.u.size(); ++k) {
    out += format_double(slice.u[k]);
    const auto& D = slice.D[k];
    for (Eigen::Index i = 0; i < D.rows(); ++i)
      for (Eigen::Index j = 0; j < D.cols(); ++j) out += "," + format_double(D(i, j));
    out += '\n';
  }
  return out;
}

std::string table_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t k = 0; k < header.size(); ++k) out += (k ? "," : "") + header[k];
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw DomainError("table row width differs from the header");
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + format_double(row[k]);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Tick positions at 1, 2 or 5 times a power of ten.
std::vector<double> ticks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {lo};
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {2.0, 5.0, 10.0})
    if (raw > step) step = f * mag;
  std::vector<double> out;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return out;
}

std::string tick_label(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string svg_line_plot(const std::vector<PlotSeries>& series, const std::string& title, const std::string& x_label,
                          const std::string& y_label) {
  constexpr double W = 640, H = 400, L = 70, R = 20, T = 40, B = 50;
  double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw DomainError("plot series has mismatched x and y");
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      xlo = std::min(xlo, s.x[k]);
      xhi = std::max(xhi, s.x[k]);
      ylo = std::min(ylo, s.y[k]);
      yhi = std::max(yhi, s.y[k]);
    }
  }
  if (!(xhi > xlo)) { xlo -= 0.5; xhi += 0.5; }
  if (!(yhi > ylo)) { ylo -= 0.5; yhi += 0.5; }
  const double pad = 0.05 * (yhi - ylo);
  ylo -= pad;
  yhi += pad;
  auto px = [&](double x) { return L + (x - xlo) / (xhi - xlo) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - ylo) / (yhi - ylo) * (H - T - B); };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                    "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" height=\"400\" "
                    "viewBox=\"0 0 640 400\">\n"
                    "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         escape_xml(title) + "</text>\n";
  out += "<line x1=\"" + format_double(L) + "\" y1=\"" + format_double(H - B) + "\" x2=\"" + format_double(W - R) +
         "\" y2=\"" + format_double(H - B) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + format_double(L) + "\" y1=\"" + format_double(T) + "\" x2=\"" + format_double(L) + "\" y2=\"" +
         format_double(H - B) + "\" stroke=\"black\"/>\n";
  for (double v : ticks(xlo, xhi)) {
    const std::string x = format_double(px(v));
    out += "<line x1=\"" + x + "\" y1=\"" + format_double(H - B) + "\" x2=\"" + x + "\" y2=\"" +
           format_double(H - B + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + x + "\" y=\"" + format_double(H - B + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + tick_label(v) + "</text>\n";
  }
  for (double v : ticks(ylo, yhi)) {
    const std::string y = format_double(py(v));
    out += "<line x1=\"" + format_double(L - 5) + "\" y1=\"" + y + "\" x2=\"" + format_double(L) + "\" y2=\"" + y +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + format_double(L - 8) + "\" y=\"" + y +
           "\" text-anchor=\"end\" dominant-baseline=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           tick_label(v) + "</text>\n";
  }
  out += "<text x=\"" + format_double((L + W - R) / 2) + "\" y=\"" + format_double(H - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape_xml(x_label) + "</text>\n";
  out += "<text x=\"16\" y=\"" + format_double((T + H - B) / 2) + "\" transform=\"rotate(-90 16 " +
         format_double((T + H - B) / 2) + ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
         escape_xml(y_label) + "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    std::string pts;
    for (std::size_t k = 0; k < series[s].x.size(); ++k) {
      if (!std::isfinite(series[s].x[k]) || !std::isfinite(series[s].y[k])) continue;
      if (!pts.empty()) pts += ' ';
      pts += format_double(px(series[s].x[k])) + "," + format_double(py(series[s].y[k]));
    }
    const char* color = colors[s % 5];
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    if (!series[s].label.empty()) {
      const std::string ly = format_double(T + 14.0 * static_cast<double>(s + 1));
      out += "<text x=\"" + format_double(W - R - 4) + "\" y=\"" + ly + "\" text-anchor=\"end\" fill=\"" + color +
             "\" font-family=\"sans-serif\" font-size=\"11\">" + escape_xml(series[s].label) + "</text>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace roughkit::io
