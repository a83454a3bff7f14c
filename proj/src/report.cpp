#include "onebit/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace onebit {

namespace {

std::string format_double(double v, const char* fmt = "%.15g") {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), fmt, v);
  return buffer;
}

std::string format_coord(double v) { return format_double(v, "%.2f"); }

void write_file(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  out << text;
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (m, mean_mse)
};

std::vector<Series> collect_series(const SweepResult& result) {
  // Rows are sorted by (m, param_value, variant); regroup per curve while
  // keeping first-appearance order for the legend.
  std::vector<Series> series;
  std::map<std::pair<std::string, double>, std::size_t> lookup;
  for (const SweepRow& row : result.rows) {
    const auto key = std::make_pair(row.variant, row.param_value);
    auto found = lookup.find(key);
    if (found == lookup.end()) {
      Series s;
      s.label = row.param_name == "none"
                    ? row.variant
                    : row.variant + " " + row.param_name + "=" +
                          format_double(row.param_value, "%.6g");
      lookup.emplace(key, series.size());
      series.push_back(std::move(s));
      found = lookup.find(key);
    }
    series[found->second].points.emplace_back(static_cast<double>(row.m),
                                              row.mean_mse);
  }
  for (Series& s : series) {
    std::sort(s.points.begin(), s.points.end());
  }
  return series;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f"};

}  // namespace

std::string csv_string(const SweepResult& result) {
  std::ostringstream out;
  out << "m,variant,param_name,param_value,mean_mse,sem_mse,"
         "mean_consistency,mean_support_recall,mean_iters,degenerate_count\n";
  for (const SweepRow& row : result.rows) {
    out << row.m << ',' << row.variant << ',' << row.param_name << ','
        << format_double(row.param_value) << ','
        << format_double(row.mean_mse) << ',' << format_double(row.sem_mse)
        << ',' << format_double(row.mean_consistency) << ','
        << format_double(row.mean_support_recall) << ','
        << format_double(row.mean_iters) << ',' << row.degenerate_count
        << '\n';
  }
  return out.str();
}

void emit_csv(const SweepResult& result, const std::string& path) {
  write_file(csv_string(result), path);
}

std::string raw_csv_string(const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  out << "m,variant,param_value,trial,mse,consistency,support_recall,"
         "iterations,degenerate\n";
  for (const TrialRecord& r : records) {
    out << r.m << ',' << r.variant << ',' << format_double(r.param_value)
        << ',' << r.trial << ',' << format_double(r.metrics.mse) << ','
        << format_double(r.metrics.consistency) << ','
        << format_double(r.metrics.support_recall) << ','
        << r.metrics.iterations << ',' << (r.metrics.degenerate ? 1 : 0)
        << '\n';
  }
  return out.str();
}

void emit_raw_csv(const std::vector<TrialRecord>& records,
                  const std::string& path) {
  write_file(raw_csv_string(records), path);
}

std::string svg_string(const SweepResult& result) {
  if (result.rows.empty()) {
    throw std::invalid_argument("svg_string: empty sweep result");
  }
  const std::vector<Series> series = collect_series(result);

  double x_min = series.front().points.front().first;
  double x_max = x_min;
  double y_max = 0.0;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.points) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_max = std::max(y_max, y);
    }
  }
  if (x_min == x_max) {
    x_min -= 1.0;
    x_max += 1.0;
  }
  if (y_max <= 0.0) {
    y_max = 1.0;
  }
  y_max *= 1.05;

  const double width = 860.0, height = 540.0;
  const double left = 70.0, right = width - 215.0;
  const double top = 25.0, bottom = height - 55.0;
  auto to_x = [&](double m) {
    return left + (m - x_min) / (x_max - x_min) * (right - left);
  };
  auto to_y = [&](double mse) {
    return bottom - mse / y_max * (bottom - top);
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
         "width=\""
      << width << "\" height=\"" << height << "\" viewBox=\"0 0 " << width
      << " " << height << "\">\n"
      << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";

  // axes
  svg << "<line x1=\"" << format_coord(left) << "\" y1=\""
      << format_coord(bottom) << "\" x2=\"" << format_coord(right)
      << "\" y2=\"" << format_coord(bottom)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "<line x1=\"" << format_coord(left) << "\" y1=\""
      << format_coord(top) << "\" x2=\"" << format_coord(left) << "\" y2=\""
      << format_coord(bottom) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  const int ticks = 5;
  for (int t = 0; t <= ticks; ++t) {
    const double fx = x_min + (x_max - x_min) * t / ticks;
    const double px = to_x(fx);
    svg << "<line x1=\"" << format_coord(px) << "\" y1=\""
        << format_coord(bottom) << "\" x2=\"" << format_coord(px)
        << "\" y2=\"" << format_coord(bottom + 5) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << format_coord(px) << "\" y=\""
        << format_coord(bottom + 20)
        << "\" font-family=\"sans-serif\" font-size=\"12\" "
           "text-anchor=\"middle\">"
        << format_double(fx, "%.6g") << "</text>\n";
    const double fy = y_max * t / ticks;
    const double py = to_y(fy);
    svg << "<line x1=\"" << format_coord(left - 5) << "\" y1=\""
        << format_coord(py) << "\" x2=\"" << format_coord(left) << "\" y2=\""
        << format_coord(py) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << format_coord(left - 9) << "\" y=\""
        << format_coord(py + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\" "
           "text-anchor=\"end\">"
        << format_double(fy, "%.4g") << "</text>\n";
  }
  svg << "<text x=\"" << format_coord((left + right) / 2) << "\" y=\""
      << format_coord(height - 14)
      << "\" font-family=\"sans-serif\" font-size=\"14\" "
         "text-anchor=\"middle\">m (measurements)</text>\n";
  svg << "<text x=\"18\" y=\"" << format_coord((top + bottom) / 2)
      << "\" font-family=\"sans-serif\" font-size=\"14\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << format_coord((top + bottom) / 2) << ")\">mean MSE</text>\n";

  // curves and markers
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(*kPalette))];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t p = 0; p < series[s].points.size(); ++p) {
      if (p > 0) {
        svg << ' ';
      }
      svg << format_coord(to_x(series[s].points[p].first)) << ','
          << format_coord(to_y(series[s].points[p].second));
    }
    svg << "\"/>\n";
    for (const auto& [x, y] : series[s].points) {
      svg << "<circle cx=\"" << format_coord(to_x(x)) << "\" cy=\""
          << format_coord(to_y(y)) << "\" r=\"3.5\" fill=\"" << color
          << "\"/>\n";
    }
  }

  // legend
  const double legend_x = right + 18.0;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(*kPalette))];
    const double ly = top + 14.0 + 22.0 * s;
    svg << "<line x1=\"" << format_coord(legend_x) << "\" y1=\""
        << format_coord(ly - 4) << "\" x2=\"" << format_coord(legend_x + 26)
        << "\" y2=\"" << format_coord(ly - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"2.5\"/>\n"
        << "<text class=\"legend\" x=\"" << format_coord(legend_x + 32)
        << "\" y=\"" << format_coord(ly)
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << series[s].label << "</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

void emit_plot(const SweepResult& result, const std::string& path) {
  write_file(svg_string(result), path);
}

}  // namespace onebit
