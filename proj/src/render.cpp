#include "gasketwalk/render.hpp"

#include <cstdio>
#include <map>
#include <sstream>

#include "gasketwalk/boundary.hpp"

namespace gasket {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string ramp_color(double value) {
  // clamp h in [0,3] to [0,1] and interpolate between the two anchors
  double t = value / 3.0;
  t = t < 0 ? 0 : (t > 1 ? 1 : t);
  const int lo[3] = {0x12, 0x3a, 0x5c};
  const int hi[3] = {0xf7, 0xc9, 0x48};
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(lo[0] + t * (hi[0] - lo[0]) + 0.5),
                static_cast<int>(lo[1] + t * (hi[1] - lo[1]) + 0.5),
                static_cast<int>(lo[2] + t * (hi[2] - lo[2]) + 0.5));
  return buf;
}

}  // namespace

std::string render_gasket_svg(BoundaryEvaluator& eval, const GasketRenderConfig& config) {
  if (config.depth < 0 || config.depth > 8)
    throw std::invalid_argument("render depth must be in [0, 8]");
  if (config.color_by < 1 || config.color_by > 3)
    throw std::invalid_argument("color_by must name a letter");

  const double W = config.size_px;
  const double margin = 0.04 * W;
  const double span = W - 2 * margin;
  const double height_ratio = 0.8660254037844386;  // sqrt(3)/2
  const double H = span * height_ratio + 2 * margin;
  auto X = [&](double x) { return margin + x * span; };
  auto Y = [&](double y) { return H - margin - y * span; };

  std::map<std::pair<Rat, Rat>, double> value_at;  // exact vertex key -> h value
  auto vertex_value = [&](const FiniteWord& stem, Letter j) {
    const ExactPoint p = vertex_point_exact(stem, j);
    auto it = value_at.find({p.x, p.y_s3});
    if (it != value_at.end()) return it->second;
    const BoundaryWord w(stem, FiniteWord::repeated(j, 1));
    const double v = harmonic_at_boundary(eval, config.color_by, w, config.tol);
    value_at.emplace(std::make_pair(p.x, p.y_s3), v);
    return v;
  };

  std::size_t cells = 1;
  for (int i = 0; i < config.depth; ++i) cells *= 3;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(W) << "\" height=\""
      << fmt(H) << "\" viewBox=\"0 0 " << fmt(W) << " " << fmt(H) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  std::ostringstream dots;
  for (std::size_t idx = 0; idx < cells; ++idx) {
    const FiniteWord stem = FiniteWord::from_index(idx, config.depth);
    double vx[3], vy[3], hv[3];
    for (Letter j : kAlphabet) {
      const Point2D p = vertex_point(stem, j);
      vx[j - 1] = X(p.x);
      vy[j - 1] = Y(p.y);
      hv[j - 1] = vertex_value(stem, j);
    }
    const double mean = (hv[0] + hv[1] + hv[2]) / 3.0;
    svg << "<polygon points=\"" << fmt(vx[0]) << "," << fmt(vy[0]) << " " << fmt(vx[1]) << ","
        << fmt(vy[1]) << " " << fmt(vx[2]) << "," << fmt(vy[2]) << "\" fill=\""
        << ramp_color(mean) << "\" stroke=\"#1d1d1d\" stroke-width=\"0.4\"/>\n";
    const double radius = std::max(1.2, 6.0 / (1 << config.depth));
    for (int j = 0; j < 3; ++j)
      dots << "<circle cx=\"" << fmt(vx[j]) << "\" cy=\"" << fmt(vy[j]) << "\" r=\""
           << fmt(radius) << "\" fill=\"" << ramp_color(hv[j]) << "\"/>\n";
  }
  svg << dots.str();
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace gasket
