#include <ostream>
#include <string>

#include "gpf/csv.hpp"
#include "gpf/experiment.hpp"

namespace gpf {

namespace {

constexpr double kPixelsPerMetre = 30.0;
constexpr double kMargin = 20.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#17becf", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"};

struct Canvas {
  const sim::World& w;
  double width() const { return (w.x_max - w.x_min) * kPixelsPerMetre + 2 * kMargin; }
  double height() const { return (w.y_max - w.y_min) * kPixelsPerMetre + 2 * kMargin; }
  std::string x(double v) const { return format_number((v - w.x_min) * kPixelsPerMetre + kMargin, 2); }
  std::string y(double v) const { return format_number((w.y_max - v) * kPixelsPerMetre + kMargin, 2); }
  std::string len(double v) const { return format_number(v * kPixelsPerMetre, 2); }
};

}  // namespace

void write_svg(std::ostream& out, const sim::Scenario& sc, std::span<const RunRecord> runs) {
  const Canvas c{sc.world};
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_number(c.width(), 0)
      << "\" height=\"" << format_number(c.height(), 0) << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<rect x=\"" << c.x(sc.world.x_min) << "\" y=\"" << c.y(sc.world.y_max) << "\" width=\""
      << c.len(sc.world.x_max - sc.world.x_min) << "\" height=\"" << c.len(sc.world.y_max - sc.world.y_min)
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (const auto& r : sc.world.rects) {
    out << "<rect x=\"" << c.x(r.x_min) << "\" y=\"" << c.y(r.y_max) << "\" width=\""
        << c.len(r.x_max - r.x_min) << "\" height=\"" << c.len(r.y_max - r.y_min)
        << "\" fill=\"#555\"/>\n";
  }
  for (const auto& ci : sc.world.circles) {
    out << "<circle cx=\"" << c.x(ci.cx) << "\" cy=\"" << c.y(ci.cy) << "\" r=\"" << c.len(ci.radius)
        << "\" fill=\"#555\"/>\n";
  }

  if (!runs.empty()) {
    for (const auto& snap : runs.front().result.snapshots) {
      for (std::size_t k = 0; k < snap.points.size(); ++k) {
        const bool chosen = static_cast<int>(k) == snap.selected;
        out << "<circle cx=\"" << c.x(snap.points[k].x()) << "\" cy=\"" << c.y(snap.points[k].y())
            << "\" r=\"" << (chosen ? "3.5" : "2") << "\" fill=\"" << (chosen ? "#ff7f0e" : "#bbb")
            << "\"/>\n";
      }
    }
  }

  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& log = runs[i].result.log;
    if (log.empty()) continue;
    out << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << kPalette[i % std::size(kPalette)]
        << "\" points=\"";
    for (const auto& s : log) out << c.x(s.x) << "," << c.y(s.y) << " ";
    out << "\"/>\n";
    if (!runs[i].result.success()) {
      out << "<text x=\"" << c.x(log.back().x) << "\" y=\"" << c.y(log.back().y)
          << "\" font-size=\"12\" fill=\"#d62728\">x</text>\n";
    }
  }

  out << "<circle cx=\"" << c.x(sc.start.x) << "\" cy=\"" << c.y(sc.start.y)
      << "\" r=\"6\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"2\"/>\n";
  out << "<circle cx=\"" << c.x(sc.goal.x()) << "\" cy=\"" << c.y(sc.goal.y())
      << "\" r=\"6\" fill=\"#d62728\"/>\n";
  out << "<text x=\"" << format_number(kMargin, 0) << "\" y=\"14\" font-size=\"12\" font-family=\"monospace\">"
      << sc.name << "</text>\n";
  out << "</svg>\n";
}

}  // namespace gpf
