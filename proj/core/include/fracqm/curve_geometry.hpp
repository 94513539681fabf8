#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace fracqm {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

class Staircase;

struct ParamInterval {
    double lo = 0.0;
    double hi = 1.0;

    double length() const noexcept { return hi - lo; }
};

// Finite-level sampling of a parameterized curve w: [a0, b0] -> R^3.
//
// Segments between consecutive nodes are either part of the curve or a gap
// (Cantor-like sets sampled as a polyline). Gap segments carry no measure.
class CurveGrid {
public:
    CurveGrid(std::vector<double> params, std::vector<Vec3> points, int level,
              std::vector<bool> gap_segments = {});

    std::size_t size() const noexcept { return params_.size(); }
    std::size_t segment_count() const noexcept { return params_.size() - 1; }
    int level() const noexcept { return level_; }
    ParamInterval domain() const noexcept { return {params_.front(), params_.back()}; }

    const std::vector<double>& params() const noexcept { return params_; }
    const std::vector<Vec3>& points() const noexcept { return points_; }
    double param(std::size_t i) const { return params_[i]; }
    const Vec3& point(std::size_t i) const { return points_[i]; }

    bool is_gap(std::size_t segment) const { return !gaps_.empty() && gaps_[segment]; }
    bool has_gaps() const noexcept { return !gaps_.empty(); }
    const std::vector<bool>& gap_segments() const noexcept { return gaps_; }

    // Sum of |w(v_{i+1}) - w(v_i)| over non-gap segments.
    double chord_length() const;

    // Index of the node nearest to `theta` together with its distance.
    std::pair<std::size_t, double> nearest_node(const Vec3& theta) const;

    // Index of the node whose parameter equals `v` within `tol`, or throws
    // AlignmentError.
    std::size_t node_at_param(double v, double tol = 1e-12) const;

    // Copy with every point multiplied by `factor` (parameters unchanged).
    CurveGrid scaled(double factor) const;

private:
    std::vector<double> params_;
    std::vector<Vec3> points_;
    std::vector<bool> gaps_;
    int level_;
};

// x -> scale * rotation * x + translation
struct SimilarityMap {
    double scale = 0.5;
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    Vec3 operator()(const Vec3& x) const { return scale * (rotation * x) + translation; }
};

// Ordered similarity maps replacing the unit segment [(0,0,0), (1,0,0)].
// Consecutive images must share endpoints so the iterated curve stays connected.
struct GeneratorSpec {
    std::vector<SimilarityMap> maps;
    bool closed = false;  // unused

    void validate() const;

    static GeneratorSpec koch();
    static GeneratorSpec line_bisection();
};

inline constexpr int kDefaultLevelCap = 10;

// Iterates `spec` `level` times on the unit segment. Parameters are uniform in
// generator address: v_i = i / g^level.
CurveGrid build_from_generator(const GeneratorSpec& spec, int level,
                               int level_cap = kDefaultLevelCap);

// Standard von Koch curve in the z = 0 plane, 4^level + 1 nodes.
CurveGrid build_koch(int level, int level_cap = kDefaultLevelCap);

// n + 1 equally spaced nodes from a to b, parameter in [0, 1].
CurveGrid build_line(const Vec3& a, const Vec3& b, std::size_t n);

// Middle-thirds Cantor set on [0, length] along the x axis, sampled as the
// endpoints of the 2^level kept intervals. Removed thirds become gap
// segments. Parameter equals the x coordinate.
CurveGrid build_cantor_dust(int level, double length = 1.0, int level_cap = 20);

// Cantor-like temporal support together with its devil's-staircase chart.
class TimeSet {
public:
    TimeSet(double duration, int level, double alpha, std::vector<ParamInterval> kept,
            std::shared_ptr<const Staircase> staircase);

    double duration() const noexcept { return duration_; }
    int level() const noexcept { return level_; }
    double alpha() const noexcept { return alpha_; }
    const std::vector<ParamInterval>& kept_intervals() const noexcept { return kept_; }
    const Staircase& staircase() const noexcept { return *staircase_; }
    std::shared_ptr<const Staircase> staircase_ptr() const noexcept { return staircase_; }

    double kept_length() const;

    // chi_F(t): 1 on the kept intervals, 0 on the removed gaps.
    bool contains(double t) const;

    // tau = S_F^alpha(t)
    double staircase_time(double t) const;

private:
    double duration_;
    int level_;
    double alpha_;
    std::vector<ParamInterval> kept_;
    std::shared_ptr<const Staircase> staircase_;
};

double cantor_time_alpha();  // log 2 / log 3

TimeSet build_cantor_time(double duration, int level, double alpha = cantor_time_alpha());

// Whole interval [0, T] with alpha = 1, so that tau = t.
TimeSet build_full_time(double duration);

}  // namespace fracqm
