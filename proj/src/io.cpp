#include "cstirap/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include "cstirap/hamiltonian.hpp"

namespace cstirap {

std::string format_number(double value) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.11e", value == 0.0 ? 0.0 : value);
  return buf;
}

std::string sanitize_label(const std::string& label) {
  std::string out;
  bool pending = false;
  for (unsigned char c : label) {
    if (std::isalnum(c)) {
      if (pending && !out.empty()) out += '_';
      pending = false;
      out += static_cast<char>(std::tolower(c));
    } else {
      pending = true;
    }
  }
  return out.empty() ? "level" : out;
}

std::vector<std::string> population_columns(const ChainSystem& system) {
  std::vector<std::string> names;
  std::set<std::string> seen;
  for (std::size_t k = 0; k < system.levels.size(); ++k) {
    std::string name = "pop_" + sanitize_label(system.levels[k].label);
    if (!seen.insert(name).second) {
      name += "_" + std::to_string(k);
      seen.insert(name);
    }
    names.push_back(std::move(name));
  }
  return names;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string timeseries_csv(const ChainSystem& system, const Trajectory& traj) {
  std::string out = "t_s";
  for (const std::string& c : population_columns(system)) out += "," + c;
  out += ",trace\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out += format_number(traj.times[i]);
    for (Eigen::Index k = 0; k < traj.populations.cols(); ++k)
      out += "," + format_number(traj.populations(static_cast<Eigen::Index>(i), k));
    out += "," + format_number(traj.trace[i]) + "\n";
  }
  return out;
}

namespace {

struct Series {
  std::string name;
  std::string color;
  std::vector<double> y;
};

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void panel(std::ostringstream& svg, double top, const std::string& title, const std::vector<double>& t,
           const std::vector<Series>& series, double y_max) {
  const double left = 70, width = 560, height = 170;
  if (!(y_max > 0)) y_max = 1;
  svg << "<rect x=\"" << left << "\" y=\"" << fixed(top) << "\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  svg << "<text x=\"" << left << "\" y=\"" << fixed(top - 6) << "\" font-size=\"12\">" << title << "</text>\n";
  svg << "<text x=\"" << left - 6 << "\" y=\"" << fixed(top + 10) << "\" font-size=\"10\" text-anchor=\"end\">"
      << short_number(y_max) << "</text>\n";
  svg << "<text x=\"" << left - 6 << "\" y=\"" << fixed(top + height) << "\" font-size=\"10\" text-anchor=\"end\">0</text>\n";
  const double t0 = t.front(), t1 = t.back();
  const double span = t1 > t0 ? t1 - t0 : 1.0;
  double legend_x = left + width - 150;
  double legend_y = top + 14;
  for (const Series& s : series) {
    svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double x = left + (t[i] - t0) / span * width;
      const double y = top + height - std::clamp(s.y[i] / y_max, 0.0, 1.0) * height;
      svg << (i ? " " : "") << fixed(x) << "," << fixed(y);
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << fixed(legend_x) << "\" y=\"" << fixed(legend_y) << "\" font-size=\"10\" fill=\"" << s.color
        << "\">" << s.name << "</text>\n";
    legend_y += 12;
  }
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string populations_svg(const ChainSystem& system, const Trajectory& traj) {
  if (traj.size() < 2) throw IoError("plot needs at least two samples");
  const std::vector<double>& t = traj.times;
  std::vector<double> t_us(t.size());
  std::transform(t.begin(), t.end(), t_us.begin(), [](double v) { return v * 1e6; });

  std::vector<Series> pulses(2);
  pulses[0] = {"pump", kPalette[0], {}};
  pulses[1] = {"Stokes", kPalette[1], {}};
  double pulse_max = 0;
  for (double ti : t) {
    const Eigen::VectorXd r = rabi_frequencies(system, ti);
    pulses[0].y.push_back(r(0));
    pulses[1].y.push_back(r(r.size() - 1));
    pulse_max = std::max({pulse_max, r(0), r(r.size() - 1)});
  }

  auto population_series = [&](std::size_t level, std::size_t color) {
    Series s{xml_escape(system.levels[level].label), kPalette[color % 7], {}};
    for (std::size_t i = 0; i < traj.size(); ++i) s.y.push_back(traj.populations(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(level)));
    return s;
  };
  std::vector<Series> middle;
  double middle_max = 0;
  std::size_t color = 2;
  for (std::size_t k = 1; k + 1 < system.levels.size(); ++k) {
    if (system.levels[k].kind != LevelKind::ground) continue;
    middle.push_back(population_series(k, color++));
    middle_max = std::max(middle_max, *std::max_element(middle.back().y.begin(), middle.back().y.end()));
  }
  std::vector<Series> ends{population_series(system.initial_level, 0), population_series(system.target_level, 1)};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"660\" height=\"660\" font-family=\"sans-serif\">\n";
  svg << "<rect width=\"660\" height=\"660\" fill=\"white\"/>\n";
  panel(svg, 30, "(a) Rabi frequency [1/s]", t_us, pulses, pulse_max);
  panel(svg, 240, "(b) intermediate ground populations", t_us, middle, middle_max > 0 ? 1.1 * middle_max : 1.0);
  panel(svg, 450, "(c) initial and target populations", t_us, ends, 1.0);
  svg << "<text x=\"70\" y=\"640\" font-size=\"10\">" << fixed(t_us.front()) << " us</text>\n";
  svg << "<text x=\"630\" y=\"640\" font-size=\"10\" text-anchor=\"end\">" << fixed(t_us.back()) << " us</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& artifacts) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

  std::vector<fs::path> temps;
  auto cleanup = [&] {
    for (const fs::path& p : temps) fs::remove(p, ec);
  };
  for (const auto& [name, contents] : artifacts) {
    const fs::path tmp = dir / ("." + name + ".tmp");
    temps.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.close();
    if (!out) {
      cleanup();
      throw IoError("cannot write " + (dir / name).string());
    }
  }
  for (std::size_t i = 0; i < artifacts.size(); ++i) {
    fs::rename(temps[i], dir / artifacts[i].first, ec);
    if (ec) {
      cleanup();
      throw IoError("cannot rename into " + (dir / artifacts[i].first).string() + ": " + ec.message());
    }
  }
}

}  // namespace cstirap
