#include "vnfp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <stdexcept>

namespace vnfp {

namespace {

bool dominates_or_equal(const Point& a, const Point& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

void check_arity(std::span<const Point> points, std::size_t arity) {
  for (const auto& p : points) {
    if (p.size() != arity) throw std::invalid_argument("points have mixed arity");
  }
}

// 2-D staircase: x ascending, y strictly descending.
using Front = std::map<double, double>;

void front_insert(Front& front, double x, double y) {
  auto it = front.upper_bound(x);
  if (it != front.begin() && std::prev(it)->second <= y) return;  // weakly dominated
  it = front.lower_bound(x);
  while (it != front.end() && it->second >= y) it = front.erase(it);
  front[x] = y;
}

double front_area(const Front& front, double rx, double ry) {
  double area = 0.0;
  double prev_y = ry;
  for (const auto& [x, y] : front) {
    area += (rx - x) * (prev_y - y);
    prev_y = y;
  }
  return area;
}

}  // namespace

std::vector<Point> nondominated(std::span<const Point> points) {
  if (!points.empty()) check_arity(points, points.front().size());
  std::vector<Point> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < points.size() && keep; ++j) {
      if (i == j) continue;
      if (dominates_or_equal(points[j], points[i])) {
        // Equal points: only the first occurrence survives.
        keep = points[j] == points[i] && j > i;
      }
    }
    if (keep) out.push_back(points[i]);
  }
  return out;
}

std::vector<Point> normalize(std::span<const Point> points, const NormBounds& bounds) {
  const std::size_t m = bounds.ideal.size();
  if (bounds.nadir.size() != m) throw std::invalid_argument("bounds arity mismatch");
  check_arity(points, m);
  std::vector<Point> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    Point q(m);
    for (std::size_t i = 0; i < m; ++i) {
      double range = bounds.nadir[i] - bounds.ideal[i];
      if (!(range > 0.0)) range = 1.0;
      q[i] = std::clamp((p[i] - bounds.ideal[i]) / range, 0.0, 1.0);
    }
    out.push_back(std::move(q));
  }
  return out;
}

NormBounds bounds_of(std::span<const Point> points) {
  if (points.empty()) throw std::invalid_argument("bounds of an empty set");
  const std::size_t m = points.front().size();
  check_arity(points, m);
  NormBounds b{points.front(), points.front()};
  for (const auto& p : points) {
    for (std::size_t i = 0; i < m; ++i) {
      b.ideal[i] = std::min(b.ideal[i], p[i]);
      b.nadir[i] = std::max(b.nadir[i], p[i]);
    }
  }
  return b;
}

FiniteSplit split_finite(std::span<const Point> points) {
  FiniteSplit split;
  for (const auto& p : points) {
    if (std::all_of(p.begin(), p.end(), [](double v) { return std::isfinite(v); })) {
      split.finite.push_back(p);
    } else {
      ++split.excluded;
    }
  }
  return split;
}

double hypervolume(std::span<const Point> points, std::span<const double> ref) {
  const std::size_t m = ref.size();
  if (m != 2 && m != 3) throw std::invalid_argument("hypervolume supports 2 or 3 objectives");
  check_arity(points, m);

  std::vector<const Point*> inside;
  for (const auto& p : points) {
    bool ok = true;
    for (std::size_t i = 0; i < m; ++i) ok = ok && p[i] < ref[i];
    if (ok) inside.push_back(&p);
  }
  if (inside.empty()) return 0.0;

  if (m == 2) {
    Front front;
    for (const auto* p : inside) front_insert(front, (*p)[0], (*p)[1]);
    return front_area(front, ref[0], ref[1]);
  }

  std::sort(inside.begin(), inside.end(), [](const Point* a, const Point* b) { return (*a)[2] < (*b)[2]; });
  Front front;
  double volume = 0.0;
  for (std::size_t i = 0; i < inside.size(); ++i) {
    front_insert(front, (*inside[i])[0], (*inside[i])[1]);
    const double next_z = i + 1 < inside.size() ? (*inside[i + 1])[2] : ref[2];
    const double depth = next_z - (*inside[i])[2];
    if (depth > 0.0) volume += front_area(front, ref[0], ref[1]) * depth;
  }
  return volume;
}

double normalized_hypervolume(std::span<const Point> points, const NormBounds& bounds) {
  const auto scaled = normalize(points, bounds);
  const std::vector<double> ref(bounds.ideal.size(), kReferenceCoordinate);
  return hypervolume(scaled, ref);
}

}  // namespace vnfp
