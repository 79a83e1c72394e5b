#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vnfp {

/// One objective vector, minimization in every coordinate.
using Point = std::vector<double>;

struct NormBounds {
  std::vector<double> ideal;  // per-objective best
  std::vector<double> nadir;  // per-objective worst
};

/// Reference coordinate used for hypervolume after normalization to [0, 1].
inline constexpr double kReferenceCoordinate = 1.1;

/// Points no other point dominates; duplicates are kept once. Input order
/// of survivors is preserved.
std::vector<Point> nondominated(std::span<const Point> points);

/// Per-objective min-max scaling, clamped to [0, 1]. A collapsed range maps
/// to (value - ideal) clamped, i.e. denominator 1.
std::vector<Point> normalize(std::span<const Point> points, const NormBounds& bounds);

/// Componentwise min and max over all points. Throws on mixed arity or an
/// empty set.
NormBounds bounds_of(std::span<const Point> points);

struct FiniteSplit {
  std::vector<Point> finite;
  std::size_t excluded = 0;  // points with an infinite or NaN coordinate
};
FiniteSplit split_finite(std::span<const Point> points);

/// Exact measure of the region dominated by `points` inside the box bounded
/// by `ref`. Points not strictly below `ref` in every coordinate contribute
/// nothing. Supports 2 and 3 objectives; other arities throw
/// std::invalid_argument.
double hypervolume(std::span<const Point> points, std::span<const double> ref);

/// Normalizes with `bounds` and measures against kReferenceCoordinate in
/// every objective.
double normalized_hypervolume(std::span<const Point> points, const NormBounds& bounds);

}  // namespace vnfp
