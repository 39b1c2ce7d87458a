#pragma once

// CSV, SVG and JSON serialization for the command-line front end.

#include "smoothcvx/bounds.hpp"
#include "smoothcvx/chain_qcqp.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <unistd.h>
#include <vector>

namespace smoothcvx {

/// Round-trippable 17 significant digits.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Writes via a sibling temporary file and rename, so readers never observe
/// partial output.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << content;
    os.flush();
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

// --- JSON ---------------------------------------------------------------

namespace detail {

inline Vec vec_from_json(const nlohmann::json& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_array()) throw std::invalid_argument(std::string("missing array field '") + field + "'");
  const auto& arr = j.at(field);
  Vec v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t k = 0; k < arr.size(); ++k) {
    if (!arr[k].is_number()) throw std::invalid_argument(std::string("non-numeric entry in '") + field + "'");
    v(static_cast<Eigen::Index>(k)) = arr[k].get<double>();
  }
  return v;
}

inline double number_from_json(const nlohmann::json& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_number()) throw std::invalid_argument(std::string("missing number field '") + field + "'");
  return j.at(field).get<double>();
}

inline nlohmann::json vec_to_json(const Vec& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) arr.push_back(v(k));
  return arr;
}

}  // namespace detail

/// {"L", "x", "y", "f_x", "g_x", "g_y", "N", "direction": "upper"|"lower"}.
inline ChainSpec chain_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("chain spec must be a JSON object");
  ChainSpec spec;
  spec.L = detail::number_from_json(j, "L");
  spec.x = detail::vec_from_json(j, "x");
  spec.y = detail::vec_from_json(j, "y");
  spec.f_x = detail::number_from_json(j, "f_x");
  spec.g_x = detail::vec_from_json(j, "g_x");
  spec.g_y = detail::vec_from_json(j, "g_y");
  if (!j.contains("N") || !j.at("N").is_number_integer() || j.at("N").get<long long>() < 1)
    throw std::invalid_argument("'N' must be a positive integer");
  spec.N = j.at("N").get<std::size_t>();
  const std::string dir = j.value("direction", "upper");
  if (dir == "upper" || dir == "Upper") {
    spec.direction = Direction::Upper;
  } else if (dir == "lower" || dir == "Lower") {
    spec.direction = Direction::Lower;
  } else {
    throw std::invalid_argument("'direction' must be \"upper\" or \"lower\"");
  }
  spec.validate();
  return spec;
}

inline nlohmann::json to_json(const ChainSpec& spec) {
  return {{"L", spec.L},
          {"x", detail::vec_to_json(spec.x)},
          {"y", detail::vec_to_json(spec.y)},
          {"f_x", spec.f_x},
          {"g_x", detail::vec_to_json(spec.g_x)},
          {"g_y", detail::vec_to_json(spec.g_y)},
          {"N", spec.N},
          {"direction", to_string(spec.direction)}};
}

inline nlohmann::json to_json(const BoundResult& r) {
  nlohmann::json chain = nlohmann::json::array();
  for (const auto& p : r.chain) chain.push_back({{"x", detail::vec_to_json(p.x)}, {"f", p.f}, {"g", detail::vec_to_json(p.g)}});
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  return {{"status", to_string(r.status)},
          {"value", num(r.value)},
          {"max_constraint_violation", num(r.max_constraint_violation)},
          {"duality_gap_estimate", num(r.duality_gap_estimate)},
          {"relaxed", r.relaxed},
          {"chain", chain}};
}

// --- CSV ----------------------------------------------------------------

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) { row_strings(header); }

  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) out_ << (k ? "," : "") << cells[k];
    out_ << '\n';
  }
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  template <class I, class = std::enable_if_t<std::is_integral_v<I>>>
  static std::string cell(I v) { return std::to_string(v); }

  std::ostringstream out_;
};

// --- SVG ----------------------------------------------------------------

inline std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

struct Band {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> lo;
  std::vector<double> hi;
  bool dashed = false;  // draw edges only
};

/// Minimal filled-band plot; each band is drawn as a translucent polygon
/// between its lower and upper curves.
inline std::string band_plot_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                                 const std::vector<Band>& bands) {
  const double W = 720, H = 480, ml = 70, mr = 150, mt = 40, mb = 55;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& b : bands)
    for (std::size_t k = 0; k < b.x.size(); ++k) {
      if (!std::isfinite(b.lo[k]) || !std::isfinite(b.hi[k])) continue;
      xmin = std::min(xmin, b.x[k]);
      xmax = std::max(xmax, b.x[k]);
      ymin = std::min(ymin, b.lo[k]);
      ymax = std::max(ymax, b.hi[k]);
    }
  if (!(xmax > xmin)) { xmin -= 0.5; xmax += 0.5; }
  if (!(ymax > ymin)) { ymin -= 0.5; ymax += 0.5; }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << xml_escape(title) << "</text>\n";
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\"" << H - mt - mb
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 4.0, yv = ymin + (ymax - ymin) * k / 4.0;
    os << "<text x=\"" << px(xv) << "\" y=\"" << H - mb + 18 << "\" text-anchor=\"middle\" font-size=\"11\">" << xv
       << "</text>\n";
    os << "<text x=\"" << ml - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << yv
       << "</text>\n";
  }
  os << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
     << xml_escape(xlabel) << "</text>\n";
  os << "<text x=\"16\" y=\"" << (mt + H - mb) / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
     << (mt + H - mb) / 2 << ")\">" << xml_escape(ylabel) << "</text>\n";

  int legend = 0;
  for (const auto& b : bands) {
    std::ostringstream upper, lower;
    for (std::size_t k = 0; k < b.x.size(); ++k) {
      if (!std::isfinite(b.lo[k]) || !std::isfinite(b.hi[k])) continue;
      upper << px(b.x[k]) << "," << py(b.hi[k]) << " ";
    }
    for (std::size_t k = b.x.size(); k-- > 0;) {
      if (!std::isfinite(b.lo[k]) || !std::isfinite(b.hi[k])) continue;
      lower << px(b.x[k]) << "," << py(b.lo[k]) << " ";
    }
    if (b.dashed) {
      os << "<polyline points=\"" << upper.str() << "\" fill=\"none\" stroke=\"" << b.color
         << "\" stroke-dasharray=\"4 3\"/>\n";
      os << "<polyline points=\"" << lower.str() << "\" fill=\"none\" stroke=\"" << b.color
         << "\" stroke-dasharray=\"4 3\"/>\n";
    } else {
      os << "<polygon points=\"" << upper.str() << lower.str() << "\" fill=\"" << b.color
         << "\" fill-opacity=\"0.35\" stroke=\"" << b.color << "\"/>\n";
    }
    const double ly = mt + 10 + 20 * legend++;
    os << "<rect x=\"" << W - mr + 12 << "\" y=\"" << ly << "\" width=\"14\" height=\"10\" fill=\"" << b.color
       << "\"/>\n";
    os << "<text x=\"" << W - mr + 32 << "\" y=\"" << ly + 9 << "\" font-size=\"12\">" << xml_escape(b.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

/// Heat map of cell values, one rectangle per grid node, with a piece id
/// drawn as a separate outline color.
struct HeatCell {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;
  int piece = 0;
};

inline std::string heatmap_svg(const std::string& title, const std::vector<HeatCell>& cells, std::size_t nx,
                               std::size_t ny) {
  const double W = 640, H = 640, m = 50;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY, vmin = INFINITY, vmax = -INFINITY;
  for (const auto& c : cells) {
    xmin = std::min(xmin, c.x); xmax = std::max(xmax, c.x);
    ymin = std::min(ymin, c.y); ymax = std::max(ymax, c.y);
    vmin = std::min(vmin, c.value); vmax = std::max(vmax, c.value);
  }
  if (!(xmax > xmin)) xmax = xmin + 1;
  if (!(ymax > ymin)) ymax = ymin + 1;
  if (!(vmax > vmin)) vmax = vmin + 1;
  const double cw = (W - 2 * m) / static_cast<double>(std::max<std::size_t>(nx, 1));
  const double ch = (H - 2 * m) / static_cast<double>(std::max<std::size_t>(ny, 1));
  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">" << xml_escape(title) << "</text>\n";
  for (const auto& c : cells) {
    // Banded shading approximates contour lines.
    const double level = std::sqrt((c.value - vmin) / (vmax - vmin));
    const int band = static_cast<int>(level * 16.0);
    const int shade = 40 + (band % 2 ? 20 : 0) + static_cast<int>(180.0 * level);
    const int r = std::min(255, shade), g = std::min(255, 80 + static_cast<int>(120.0 * (1.0 - level))),
              bl = 120 + 30 * (c.piece % 4);
    const double x = m + (c.x - xmin) / (xmax - xmin) * (W - 2 * m - cw);
    const double y = H - m - ch - (c.y - ymin) / (ymax - ymin) * (H - 2 * m - ch);
    os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw + 0.5 << "\" height=\"" << ch + 0.5
       << "\" fill=\"rgb(" << r << "," << g << "," << std::min(255, bl) << ")\"/>\n";
  }
  os << "<text x=\"" << m << "\" y=\"" << H - 15 << "\" font-size=\"12\">x0 in [" << xmin << ", " << xmax
     << "], x1 in [" << ymin << ", " << ymax << "]</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace smoothcvx
