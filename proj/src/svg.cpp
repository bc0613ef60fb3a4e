#include "triclock/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace triclock {

std::string_view to_string(PortraitLayer l) {
  switch (l) {
    case PortraitLayer::basin_background: return "basin_background";
    case PortraitLayer::invariant_segments: return "invariant_segments";
    case PortraitLayer::sample_orbits: return "sample_orbits";
    case PortraitLayer::heteroclinics: return "heteroclinics";
    case PortraitLayer::fixed_points: return "fixed_points";
  }
  return "?";
}

PortraitLayer portrait_layer_from_string(std::string_view s) {
  for (auto l : {PortraitLayer::basin_background, PortraitLayer::invariant_segments,
                 PortraitLayer::sample_orbits, PortraitLayer::heteroclinics,
                 PortraitLayer::fixed_points})
    if (to_string(l) == s) return l;
  throw std::invalid_argument("unknown portrait layer: " + std::string(s));
}

std::map<PortraitLayer, LayerStyle> PortraitSpec::default_styling() {
  return {
      {PortraitLayer::basin_background, {"none", 0.0}},
      {PortraitLayer::invariant_segments, {"#999999", 0.8}},
      {PortraitLayer::sample_orbits, {"#000000", 0.6}},
      {PortraitLayer::heteroclinics, {"#d62728", 1.8}},
      {PortraitLayer::fixed_points, {"#000000", 1.2}},
  };
}

namespace {

constexpr double kMargin = 24.0;
constexpr const char* kRaColor = "#1f77b4";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  // avoid "-0.00"
  if (std::string_view(buf) == "-0.00") return "0.00";
  return buf;
}

class Canvas {
 public:
  explicit Canvas(int size) : size_(size) {}

  double px(double x) const { return kMargin + x / kTwoPi * size_; }
  double py(double y) const { return kMargin + size_ - y / kTwoPi * size_; }
  double total() const { return size_ + 2.0 * kMargin; }

  void begin() {
    out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(total())
         << "\" height=\"" << num(total()) << "\" viewBox=\"0 0 " << num(total()) << ' '
         << num(total()) << "\">\n"
         << "<rect x=\"0\" y=\"0\" width=\"" << num(total()) << "\" height=\"" << num(total())
         << "\" fill=\"#ffffff\"/>\n";
  }

  void frame() {
    out_ << "<rect x=\"" << num(px(0)) << "\" y=\"" << num(py(kTwoPi)) << "\" width=\""
         << num(size_) << "\" height=\"" << num(size_)
         << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  }

  void end() { out_ << "</svg>\n"; }

  void open_group(std::string_view id) { out_ << "<g id=\"" << id << "\">\n"; }
  void close_group() { out_ << "</g>\n"; }

  void rect_cells(double x0, double y0, double x1, double y1, std::string_view fill) {
    out_ << "<rect x=\"" << num(px(x0)) << "\" y=\"" << num(py(y1)) << "\" width=\""
         << num(px(x1) - px(x0)) << "\" height=\"" << num(py(y0) - py(y1)) << "\" fill=\""
         << fill << "\"/>\n";
  }

  void line(PhasePoint a, PhasePoint b, std::string_view color, double width) {
    out_ << "<line x1=\"" << num(px(a.x)) << "\" y1=\"" << num(py(a.y)) << "\" x2=\""
         << num(px(b.x)) << "\" y2=\"" << num(py(b.y)) << "\" stroke=\"" << color
         << "\" stroke-width=\"" << num(width) << "\"/>\n";
  }

  void polyline(const std::vector<PhasePoint>& pts, std::string_view color, double width) {
    if (pts.size() < 2) return;
    out_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << num(width)
         << "\" points=\"";
    // drop points closer than a tenth of a pixel to the previous one
    double lx = -1e9, ly = -1e9;
    bool first = true;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const double x = px(pts[k].x), y = py(pts[k].y);
      const bool last = k + 1 == pts.size();
      if (!first && !last && std::abs(x - lx) < 0.1 && std::abs(y - ly) < 0.1) continue;
      if (!first) out_ << ' ';
      out_ << num(x) << ',' << num(y);
      lx = x;
      ly = y;
      first = false;
    }
    out_ << "\"/>\n";
  }

  void circle(PhasePoint c, double r, std::string_view fill, std::string_view stroke, double width) {
    out_ << "<circle cx=\"" << num(px(c.x)) << "\" cy=\"" << num(py(c.y)) << "\" r=\"" << num(r)
         << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\"" << num(width)
         << "\"/>\n";
  }

  std::string str() const { return out_.str(); }

 private:
  int size_;
  std::ostringstream out_;
};

std::string_view label_fill(BasinLabel l) {
  switch (l) {
    case BasinLabel::upper: return "#9ecae1";
    case BasinLabel::lower: return "#fdd0a2";
    case BasinLabel::boundary: return "#ffffff";
    case BasinLabel::unresolved: return "#7f7f7f";
  }
  return "#000000";
}

void draw_basins(Canvas& cv, const BasinGrid& grid) {
  const double h = grid.cell_size();
  for (int j = 0; j < grid.resolution; ++j) {
    int start = 0;
    for (int i = 1; i <= grid.resolution; ++i) {
      if (i < grid.resolution && grid.label(i, j) == grid.label(start, j)) continue;
      cv.rect_cells(start * h, j * h, i == grid.resolution ? kTwoPi : i * h,
                    j + 1 == grid.resolution ? kTwoPi : (j + 1) * h,
                    label_fill(grid.label(start, j)));
      start = i;
    }
  }
}

void draw_fixed_points(Canvas& cv, const std::vector<FixedPointRecord>& fps, const LayerStyle& st) {
  for (const FixedPointRecord& fp : fps) {
    switch (fp.stability) {
      case StabilityClass::attractor: cv.circle(fp.location, 5.0, st.color, st.color, st.width); break;
      case StabilityClass::repeller: cv.circle(fp.location, 5.0, "#ffffff", st.color, st.width); break;
      case StabilityClass::saddle: cv.circle(fp.location, 4.0, "#7f7f7f", st.color, st.width); break;
      case StabilityClass::non_hyperbolic:
        cv.circle(fp.location, 3.0, "none", st.color, st.width);
        break;
    }
  }
}

}  // namespace

std::string render_portrait(const PortraitSpec& spec, const PortraitData& data) {
  if (spec.layers.empty()) throw std::invalid_argument("a portrait needs at least one layer");
  if (spec.size_px < 16) throw std::invalid_argument("portrait size too small");

  std::vector<PortraitLayer> layers = spec.layers;
  std::sort(layers.begin(), layers.end());
  layers.erase(std::unique(layers.begin(), layers.end()), layers.end());

  auto style = [&spec](PortraitLayer l) {
    auto it = spec.styling.find(l);
    return it != spec.styling.end() ? it->second : PortraitSpec::default_styling().at(l);
  };

  Canvas cv(spec.size_px);
  cv.begin();
  for (PortraitLayer layer : layers) {
    cv.open_group(to_string(layer));
    const LayerStyle st = style(layer);
    switch (layer) {
      case PortraitLayer::basin_background:
        if (!data.basins) throw std::invalid_argument("basin layer requested without a basin grid");
        draw_basins(cv, *data.basins);
        break;
      case PortraitLayer::invariant_segments:
        if (data.segments.empty())
          throw std::invalid_argument("segment layer requested without segments");
        for (const InvariantSegment& s : data.segments)
          cv.line(s.point(s.t_min), s.point(s.t_max), st.color, st.width);
        break;
      case PortraitLayer::sample_orbits:
        if (data.orbits.empty()) throw std::invalid_argument("orbit layer requested without orbits");
        for (const auto& o : data.orbits) cv.polyline(o, st.color, st.width);
        break;
      case PortraitLayer::heteroclinics: {
        if (!data.census)
          throw std::invalid_argument("heteroclinic layer requested without a census");
        for (const HeteroclinicOrbit& o : data.census->traced) {
          std::vector<PhasePoint> pts{o.source.location};
          pts.insert(pts.end(), o.samples.begin(), o.samples.end());
          pts.push_back(o.target.location);
          cv.polyline(pts, st.color, st.width);
        }
        for (const Connection& c : data.census->connections) {
          if (c.via == "trace") continue;
          const bool ra = c.kind == ConnectionKind::ra;
          cv.line(c.source, c.target, ra ? kRaColor : st.color, st.width);
        }
        break;
      }
      case PortraitLayer::fixed_points:
        if (data.fixed_points.empty())
          throw std::invalid_argument("fixed point layer requested without fixed points");
        draw_fixed_points(cv, data.fixed_points, st);
        break;
    }
    cv.close_group();
  }
  cv.frame();
  cv.end();
  return cv.str();
}

std::string render_basins(const BasinGrid& grid, int size_px) {
  PortraitSpec spec;
  spec.layers = {PortraitLayer::basin_background, PortraitLayer::fixed_points};
  spec.size_px = size_px;
  PortraitData data;
  data.basins = grid;
  for (Region r : {Region::upper, Region::lower})
    data.fixed_points.push_back(classify(region_attractor(r), grid.params));
  return render_portrait(spec, data);
}

}  // namespace triclock
