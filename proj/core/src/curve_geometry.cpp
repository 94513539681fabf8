#include "fracqm/curve_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "compensated_sum.hpp"
#include "fracqm/errors.hpp"
#include "fracqm/fractal_measure.hpp"

namespace fracqm {

namespace {

constexpr double kJoinTol = 1e-12;

Mat3 rotation_z(double angle) {
    Mat3 r = Mat3::Identity();
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    r(0, 0) = c;
    r(0, 1) = -s;
    r(1, 0) = s;
    r(1, 1) = c;
    return r;
}

void check_level(int level, int cap) {
    if (level < 0) throw DomainError("level must be non-negative, got " + std::to_string(level));
    if (level > cap) {
        throw ResourceLimitError("level " + std::to_string(level) + " exceeds the configured cap " +
                                 std::to_string(cap));
    }
}

}  // namespace

CurveGrid::CurveGrid(std::vector<double> params, std::vector<Vec3> points, int level,
                     std::vector<bool> gap_segments)
    : params_(std::move(params)), points_(std::move(points)), gaps_(std::move(gap_segments)),
      level_(level) {
    if (params_.size() < 2) throw DegenerateCurveError("a curve grid needs at least two nodes");
    if (params_.size() != points_.size()) {
        throw DomainError("parameter and point counts differ");
    }
    if (!gaps_.empty() && gaps_.size() != params_.size() - 1) {
        throw DomainError("gap mask must have one entry per segment");
    }
    for (std::size_t i = 0; i + 1 < params_.size(); ++i) {
        if (!(params_[i + 1] > params_[i])) {
            throw DomainError("curve parameters must be strictly increasing (node " +
                              std::to_string(i + 1) + ")");
        }
        if ((points_[i + 1] - points_[i]).norm() <= 0.0) {
            throw DegenerateCurveError("consecutive nodes " + std::to_string(i) + " and " +
                                       std::to_string(i + 1) + " coincide");
        }
    }
    if (std::none_of(gaps_.begin(), gaps_.end(), [](bool g) { return g; })) gaps_.clear();
}

double CurveGrid::chord_length() const {
    detail::CompensatedSum<double> sum;
    for (std::size_t i = 0; i + 1 < size(); ++i) {
        if (!is_gap(i)) sum.add((points_[i + 1] - points_[i]).norm());
    }
    return sum.value();
}

std::pair<std::size_t, double> CurveGrid::nearest_node(const Vec3& theta) const {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size(); ++i) {
        const double d = (points_[i] - theta).norm();
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return {best, best_d};
}

std::size_t CurveGrid::node_at_param(double v, double tol) const {
    const double scale = std::max(1.0, domain().length());
    auto it = std::lower_bound(params_.begin(), params_.end(), v);
    std::size_t candidate = static_cast<std::size_t>(it - params_.begin());
    std::size_t best = candidate;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j : {candidate == 0 ? 0 : candidate - 1, candidate}) {
        if (j >= size()) continue;
        const double d = std::abs(params_[j] - v);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    if (best_d > tol * scale) {
        throw AlignmentError("parameter " + std::to_string(v) + " is not a grid node");
    }
    return best;
}

CurveGrid CurveGrid::scaled(double factor) const {
    std::vector<Vec3> pts(points_);
    for (auto& p : pts) p *= factor;
    std::vector<bool> gaps = gaps_;
    return CurveGrid(params_, std::move(pts), level_, std::move(gaps));
}

void GeneratorSpec::validate() const {
    if (maps.empty()) throw DomainError("generator needs at least one map");
    for (std::size_t k = 0; k < maps.size(); ++k) {
        const double s = maps[k].scale;
        if (!(s > 0.0 && s < 1.0)) {
            throw DomainError("generator scale factors must lie in (0,1); map " +
                              std::to_string(k) + " has " + std::to_string(s));
        }
    }
    const Vec3 origin = Vec3::Zero();
    const Vec3 unit = Vec3::UnitX();
    for (std::size_t k = 0; k + 1 < maps.size(); ++k) {
        if ((maps[k](unit) - maps[k + 1](origin)).norm() > kJoinTol) {
            throw DegenerateCurveError("generator images " + std::to_string(k) + " and " +
                                       std::to_string(k + 1) + " do not share an endpoint");
        }
    }
    if ((maps.front()(origin) - maps.back()(unit)).norm() <= kJoinTol) {
        throw DegenerateCurveError("generator maps the segment onto a closed loop");
    }
}

GeneratorSpec GeneratorSpec::koch() {
    const double third = 1.0 / 3.0;
    const double sixty = std::numbers::pi / 3.0;
    GeneratorSpec g;
    g.maps = {
        {third, Mat3::Identity(), Vec3::Zero()},
        {third, rotation_z(sixty), Vec3(third, 0.0, 0.0)},
        {third, rotation_z(-sixty), Vec3(0.5, std::sqrt(3.0) / 6.0, 0.0)},
        {third, Mat3::Identity(), Vec3(2.0 * third, 0.0, 0.0)},
    };
    return g;
}

GeneratorSpec GeneratorSpec::line_bisection() {
    GeneratorSpec g;
    g.maps = {
        {0.5, Mat3::Identity(), Vec3::Zero()},
        {0.5, Mat3::Identity(), Vec3(0.5, 0.0, 0.0)},
    };
    return g;
}

CurveGrid build_from_generator(const GeneratorSpec& spec, int level, int level_cap) {
    check_level(level, level_cap);
    spec.validate();

    std::vector<Vec3> nodes{Vec3::Zero(), Vec3::UnitX()};
    for (int l = 0; l < level; ++l) {
        std::vector<Vec3> next;
        next.reserve(spec.maps.size() * (nodes.size() - 1) + 1);
        next.push_back(spec.maps.front()(nodes.front()));
        for (const auto& map : spec.maps) {
            for (std::size_t i = 1; i < nodes.size(); ++i) next.push_back(map(nodes[i]));
        }
        nodes = std::move(next);
    }

    const std::size_t n = nodes.size();
    std::vector<double> params(n);
    const double denom = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) params[i] = static_cast<double>(i) / denom;
    params.back() = 1.0;
    return CurveGrid(std::move(params), std::move(nodes), level);
}

CurveGrid build_koch(int level, int level_cap) {
    return build_from_generator(GeneratorSpec::koch(), level, level_cap);
}

CurveGrid build_line(const Vec3& a, const Vec3& b, std::size_t n) {
    if (n < 1) throw DomainError("a line needs at least one segment");
    if ((b - a).norm() <= 0.0) throw DegenerateCurveError("line endpoints coincide");
    std::vector<double> params(n + 1);
    std::vector<Vec3> points(n + 1);
    const double denom = static_cast<double>(n);
    for (std::size_t i = 0; i <= n; ++i) {
        const double s = static_cast<double>(i) / denom;
        params[i] = s;
        points[i] = a + s * (b - a);
    }
    points.back() = b;
    return CurveGrid(std::move(params), std::move(points), 0);
}

namespace {

std::vector<ParamInterval> cantor_intervals(int level, double length) {
    std::vector<ParamInterval> kept{{0.0, length}};
    for (int l = 0; l < level; ++l) {
        std::vector<ParamInterval> next;
        next.reserve(2 * kept.size());
        for (const auto& iv : kept) {
            const double w = iv.length() / 3.0;
            next.push_back({iv.lo, iv.lo + w});
            next.push_back({iv.hi - w, iv.hi});
        }
        kept = std::move(next);
    }
    return kept;
}

}  // namespace

CurveGrid build_cantor_dust(int level, double length, int level_cap) {
    check_level(level, level_cap);
    if (!(length > 0.0)) throw DomainError("Cantor dust length must be positive");
    const auto kept = cantor_intervals(level, length);
    std::vector<double> params;
    std::vector<Vec3> points;
    std::vector<bool> gaps;
    params.reserve(2 * kept.size());
    for (std::size_t k = 0; k < kept.size(); ++k) {
        if (k > 0) gaps.push_back(true);
        params.push_back(kept[k].lo);
        params.push_back(kept[k].hi);
        gaps.push_back(false);
    }
    points.reserve(params.size());
    for (double x : params) points.emplace_back(x, 0.0, 0.0);
    return CurveGrid(std::move(params), std::move(points), level, std::move(gaps));
}

TimeSet::TimeSet(double duration, int level, double alpha, std::vector<ParamInterval> kept,
                 std::shared_ptr<const Staircase> staircase)
    : duration_(duration), level_(level), alpha_(alpha), kept_(std::move(kept)),
      staircase_(std::move(staircase)) {}

double TimeSet::kept_length() const {
    double sum = 0.0;
    for (const auto& iv : kept_) sum += iv.length();
    return sum;
}

bool TimeSet::contains(double t) const {
    auto it = std::upper_bound(kept_.begin(), kept_.end(), t,
                               [](double x, const ParamInterval& iv) { return x < iv.lo; });
    if (it == kept_.begin()) return false;
    --it;
    return t <= it->hi;
}

double TimeSet::staircase_time(double t) const { return staircase_->evaluate(t); }

double cantor_time_alpha() { return std::log(2.0) / std::log(3.0); }

TimeSet build_cantor_time(double duration, int level, double alpha) {
    if (!(duration > 0.0)) throw DomainError("time-set duration must be positive");
    auto grid = build_cantor_dust(level, duration);
    auto stair = std::make_shared<const Staircase>(build_staircase(grid, alpha, 0.0));
    return TimeSet(duration, level, alpha, cantor_intervals(level, duration), std::move(stair));
}

TimeSet build_full_time(double duration) {
    if (!(duration > 0.0)) throw DomainError("time-set duration must be positive");
    auto grid = build_line(Vec3::Zero(), Vec3(duration, 0.0, 0.0), 1);
    std::vector<Vec3> pts(grid.points());
    CurveGrid timeline({0.0, duration}, std::move(pts), 0);
    auto stair = std::make_shared<const Staircase>(build_staircase(timeline, 1.0, 0.0));
    return TimeSet(duration, 0, 1.0, {{0.0, duration}}, std::move(stair));
}

}  // namespace fracqm
