#include "bilag/plot.hpp"

#include <cmath>
#include <cstdio>
#include <optional>

#include "bilag/errors.hpp"

namespace bilag {

namespace {

struct Point {
  double x;
  double y;
};

class NumericField {
 public:
  explicit NumericField(const VectorField& f) : field_(f) {
    if (f.chart().dim() != 2) throw DomainError("plotting needs a 2-dimensional chart");
    for (const auto& c : f.components()) {
      for (const auto& v : free_variables(c)) {
        if (!v.is_coordinate()) throw DomainError("plotting needs '" + v.atom().name + "' bound to an expression");
      }
    }
  }

  // Unit tangent at p, or nothing where the field vanishes or is undefined.
  std::optional<Point> unit(Point p) const {
    Assignment a{{field_.chart().name(0), Rational(p.x)}, {field_.chart().name(1), Rational(p.y)}};
    double u;
    double v;
    try {
      u = eval_num(field_[0], a).get_d();
      v = eval_num(field_[1], a).get_d();
    } catch (const DomainError&) {
      return std::nullopt;
    }
    double norm = std::hypot(u, v);
    if (!(norm > 1e-12) || !std::isfinite(norm)) return std::nullopt;
    return Point{u / norm, v / norm};
  }

 private:
  const VectorField& field_;
};

std::optional<Point> rk4(const NumericField& f, Point p, double h) {
  auto k1 = f.unit(p);
  if (!k1) return std::nullopt;
  auto k2 = f.unit({p.x + h / 2 * k1->x, p.y + h / 2 * k1->y});
  if (!k2) return std::nullopt;
  auto k3 = f.unit({p.x + h / 2 * k2->x, p.y + h / 2 * k2->y});
  if (!k3) return std::nullopt;
  auto k4 = f.unit({p.x + h * k3->x, p.y + h * k3->y});
  if (!k4) return std::nullopt;
  return Point{p.x + h / 6 * (k1->x + 2 * k2->x + 2 * k3->x + k4->x),
               p.y + h / 6 * (k1->y + 2 * k2->y + 2 * k3->y + k4->y)};
}

}  // namespace

Plot plot_leaves(const std::vector<PlotFamily>& families, const PlotOptions& o) {
  const auto [xmin, xmax, ymin, ymax] = o.window;
  if (!(xmin < xmax && ymin < ymax)) throw DomainError("empty plot window");
  if (o.leaves < 1 || o.steps < 1 || !(o.step > 0)) throw DomainError("bad plot sampling parameters");
  const double mx = (xmax - xmin) * 0.05;
  const double my = (ymax - ymin) * 0.05;
  auto inside = [&](Point p) { return p.x >= xmin - mx && p.x <= xmax + mx && p.y >= ymin - my && p.y <= ymax + my; };
  auto px = [&](Point p) {
    return Point{(p.x - xmin) / (xmax - xmin) * o.size, (ymax - p.y) / (ymax - ymin) * o.size};
  };

  Plot plot;
  char buf[64];
  std::string& out = plot.svg;
  std::snprintf(buf, sizeof buf, "%d", o.size);
  std::string size = buf;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + size + "\" height=\"" + size + "\" viewBox=\"0 0 " +
         size + " " + size + "\">\n";
  out += "<rect width=\"" + size + "\" height=\"" + size + "\" fill=\"white\" stroke=\"black\"/>\n";
  for (const auto& family : families) {
    NumericField f(family.field);
    const Point center{(xmin + xmax) / 2, (ymin + ymax) / 2};
    auto at_center = f.unit(center);
    // Seeds run across the leaves: along y for mostly horizontal leaves.
    bool along_y = !at_center || std::fabs(at_center->x) >= std::fabs(at_center->y);
    out += "<g fill=\"none\" stroke=\"" + family.color + "\" stroke-width=\"1.2\">\n";
    for (int i = 0; i < o.leaves; ++i) {
      double t = (i + 0.5) / o.leaves;
      Point seed = along_y ? Point{center.x, ymin + t * (ymax - ymin)} : Point{xmin + t * (xmax - xmin), center.y};
      std::vector<Point> backward;
      std::vector<Point> forward{seed};
      for (double h : {-o.step, o.step}) {
        auto& curve = h < 0 ? backward : forward;
        Point p = seed;
        for (int k = 0; k < o.steps; ++k) {
          auto next = rk4(f, p, h);
          if (!next || !inside(*next)) break;
          p = *next;
          curve.push_back(p);
        }
      }
      std::vector<Point> curve(backward.rbegin(), backward.rend());
      curve.insert(curve.end(), forward.begin(), forward.end());
      if (curve.size() < 2) continue;
      out += "<polyline points=\"";
      for (std::size_t k = 0; k < curve.size(); ++k) {
        Point q = px(curve[k]);
        std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", k ? " " : "", q.x, q.y);
        out += buf;
      }
      out += "\"/>\n";
      ++plot.curves;
      plot.points += curve.size();
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return plot;
}

}  // namespace bilag
