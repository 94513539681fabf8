#include "fracqm/fractal_measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "compensated_sum.hpp"
#include "fracqm/errors.hpp"

namespace fracqm {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw DomainError("exponent alpha must be positive and finite");
    }
}

// Sum of |chord|^alpha over the non-gap runs between nodes first and last.
double run_chord_sum(const CurveGrid& grid, double alpha, std::size_t first, std::size_t last) {
    if (!grid.has_gaps()) {
        return first == last ? 0.0 : std::pow((grid.point(last) - grid.point(first)).norm(), alpha);
    }
    double sum = 0.0;
    std::size_t run_start = first;
    for (std::size_t seg = first; seg < last; ++seg) {
        if (grid.is_gap(seg)) {
            if (run_start < seg) sum += std::pow((grid.point(seg) - grid.point(run_start)).norm(), alpha);
            run_start = seg + 1;
        }
    }
    if (run_start < last) sum += std::pow((grid.point(last) - grid.point(run_start)).norm(), alpha);
    return sum;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace

PreMeasureResult gamma_premeasure(const CurveGrid& grid, double alpha,
                                  std::span<const std::size_t> subdivision) {
    check_alpha(alpha);
    const double inv_gamma = 1.0 / std::tgamma(alpha + 1.0);
    PreMeasureResult out;
    out.alpha = alpha;
    out.level = grid.level();

    if (subdivision.empty()) {
        detail::CompensatedSum<double> sum;
        double mesh = 0.0;
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            mesh = std::max(mesh, grid.param(i + 1) - grid.param(i));
            if (grid.is_gap(i)) continue;
            sum.add(std::pow((grid.point(i + 1) - grid.point(i)).norm(), alpha));
        }
        out.value = sum.value() * inv_gamma;
        out.mesh = mesh;
        return out;
    }

    if (subdivision.front() != 0 || subdivision.back() != grid.size() - 1) {
        throw DomainError("subdivision must include the first and last node");
    }
    detail::CompensatedSum<double> sum;
    double mesh = 0.0;
    for (std::size_t k = 0; k + 1 < subdivision.size(); ++k) {
        const std::size_t a = subdivision[k];
        const std::size_t b = subdivision[k + 1];
        if (b <= a || b >= grid.size()) throw DomainError("subdivision must be strictly increasing");
        mesh = std::max(mesh, grid.param(b) - grid.param(a));
        sum.add(run_chord_sum(grid, alpha, a, b));
    }
    out.value = sum.value() * inv_gamma;
    out.mesh = mesh;
    return out;
}

double gamma_premeasure_range(const CurveGrid& grid, double alpha, std::size_t first,
                              std::size_t last) {
    check_alpha(alpha);
    if (first > last || last >= grid.size()) throw DomainError("invalid node range");
    detail::CompensatedSum<double> sum;
    for (std::size_t i = first; i < last; ++i) {
        if (grid.is_gap(i)) continue;
        sum.add(std::pow((grid.point(i + 1) - grid.point(i)).norm(), alpha));
    }
    return sum.value() / std::tgamma(alpha + 1.0);
}

Staircase::Staircase(double alpha, std::vector<double> params, std::vector<double> values,
                     std::size_t base_index)
    : alpha_(alpha), params_(std::move(params)), values_(std::move(values)), base_(base_index) {
    if (params_.size() < 2 || params_.size() != values_.size()) {
        throw DomainError("staircase needs matching parameter/value knots (at least two)");
    }
    if (base_ >= params_.size()) throw DomainError("staircase base index out of range");
    for (std::size_t i = 0; i + 1 < params_.size(); ++i) {
        if (!(params_[i + 1] > params_[i])) throw DomainError("staircase parameters must increase");
        if (values_[i + 1] < values_[i]) {
            throw DomainError("staircase values must be non-decreasing (knot " + std::to_string(i) +
                              ")");
        }
    }
}

double Staircase::evaluate(double v) const {
    if (v <= params_.front()) return values_.front();
    if (v >= params_.back()) return values_.back();
    auto it = std::upper_bound(params_.begin(), params_.end(), v);
    const std::size_t j = static_cast<std::size_t>(it - params_.begin());
    const double v0 = params_[j - 1];
    const double v1 = params_[j];
    if (v == v0) return values_[j - 1];
    const double w = (v - v0) / (v1 - v0);
    return values_[j - 1] + w * (values_[j] - values_[j - 1]);
}

double Staircase::inverse(double s) const {
    if (s <= values_.front()) return params_.front();
    if (s >= values_.back()) {
        // left end of a terminal plateau
        auto it = std::lower_bound(values_.begin(), values_.end(), values_.back());
        return params_[static_cast<std::size_t>(it - values_.begin())];
    }
    auto it = std::lower_bound(values_.begin(), values_.end(), s);
    const std::size_t j = static_cast<std::size_t>(it - values_.begin());
    if (values_[j] == s) return params_[j];
    const double s0 = values_[j - 1];
    const double s1 = values_[j];
    const double w = (s - s0) / (s1 - s0);
    return params_[j - 1] + w * (params_[j] - params_[j - 1]);
}

bool Staircase::has_plateau() const {
    for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
        if (!(values_[i + 1] > values_[i])) return true;
    }
    return false;
}

bool Staircase::same_knots(const Staircase& other) const {
    return this == &other || (params_ == other.params_ && values_ == other.values_);
}

Staircase build_staircase(const CurveGrid& grid, double alpha, double p0) {
    check_alpha(alpha);
    const auto dom = grid.domain();
    const double tol = 1e-9 * dom.length();
    if (p0 < dom.lo - tol || p0 > dom.hi + tol) {
        throw DomainError("staircase base point lies outside the parameter domain");
    }
    std::size_t base = 0;
    try {
        base = grid.node_at_param(p0, 1e-9);
    } catch (const AlignmentError&) {
        throw AlignmentError("staircase base point " + std::to_string(p0) + " is not a grid node");
    }

    const double inv_gamma = 1.0 / std::tgamma(alpha + 1.0);
    const std::size_t n = grid.size();
    std::vector<double> values(n, 0.0);
    auto seg = [&](std::size_t i) {
        return grid.is_gap(i) ? 0.0 : std::pow((grid.point(i + 1) - grid.point(i)).norm(), alpha);
    };
    detail::CompensatedSum<double> up;
    for (std::size_t i = base; i + 1 < n; ++i) {
        up.add(seg(i));
        values[i + 1] = up.value() * inv_gamma;
    }
    detail::CompensatedSum<double> down;
    for (std::size_t i = base; i > 0; --i) {
        down.add(seg(i - 1));
        values[i - 1] = -down.value() * inv_gamma;
    }
    return Staircase(alpha, grid.params(), std::move(values), base);
}

double j_of_point(const Staircase& stair, const CurveGrid& grid, const Vec3& theta,
                  double snap_tol) {
    if (stair.size() != grid.size()) throw AlignmentError("staircase and grid sizes differ");
    const auto [idx, dist] = grid.nearest_node(theta);
    if (dist > snap_tol) {
        std::ostringstream msg;
        msg << "point is " << dist << " away from the nearest node (tolerance " << snap_tol << ")";
        throw NotOnCurveError(msg.str());
    }
    return stair.value(idx);
}

std::vector<double> log_growth_per_level(std::span<const CurveGrid> grids, double alpha) {
    std::vector<double> out;
    out.reserve(grids.size() - 1);
    double prev = std::log(gamma_premeasure(grids[0], alpha).value);
    for (std::size_t i = 1; i < grids.size(); ++i) {
        const double cur = std::log(gamma_premeasure(grids[i], alpha).value);
        const double dl = static_cast<double>(grids[i].level() - grids[i - 1].level());
        out.push_back((cur - prev) / dl);
        prev = cur;
    }
    return out;
}

namespace {

// +1: pre-measure grows with level (alpha below the dimension),
// -1: decays (above), 0: flat within the tie threshold.
int classify(std::span<const CurveGrid> grids, double alpha, double tie) {
    const auto slopes = log_growth_per_level(grids, alpha);
    int pos = 0, neg = 0;
    for (double s : slopes) {
        if (!std::isfinite(s)) {
            throw EstimationFailure(alpha, slopes, "non-finite pre-measure growth");
        }
        if (s > tie) ++pos;
        else if (s < -tie) ++neg;
    }
    if (pos > 0 && neg > 0) {
        std::ostringstream msg;
        msg << "non-monotone pre-measure growth across levels at alpha = " << alpha;
        throw EstimationFailure(alpha, slopes, msg.str());
    }
    if (pos > 0) return 1;
    if (neg > 0) return -1;
    return 0;
}

}  // namespace

DimensionEstimate estimate_gamma_dimension(std::span<const CurveGrid> grids,
                                           const DimensionOptions& options) {
    if (grids.size() < 3) throw DomainError("dimension estimation needs at least three levels");
    if (!(options.tol > 0.0)) throw DomainError("tolerance must be positive");
    for (std::size_t i = 1; i < grids.size(); ++i) {
        if (grids[i].level() <= grids[i - 1].level()) {
            throw DomainError("grids must be supplied in strictly increasing level order");
        }
    }

    double lo = options.alpha_lo;
    double hi = options.alpha_hi;
    while (classify(grids, lo, options.tie_slope) < 0 && lo > 1e-8) lo *= 0.5;
    while (classify(grids, hi, options.tie_slope) > 0 && hi < 64.0) hi *= 2.0;
    if (classify(grids, lo, options.tie_slope) < 0 || classify(grids, hi, options.tie_slope) > 0) {
        throw EstimationFailure(hi, log_growth_per_level(grids, hi),
                                "could not bracket the dimension");
    }

    for (int it = 0; it < options.max_iterations && hi - lo > options.tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const int c = classify(grids, mid, options.tie_slope);
        if (c == 0) {
            lo = hi = mid;
            break;
        }
        (c > 0 ? lo : hi) = mid;
    }

    DimensionEstimate est;
    est.alpha_star = 0.5 * (lo + hi);
    est.bracket = {lo, hi};
    for (const auto& g : grids) est.levels_used.push_back(g.level());
    est.slopes_per_level = log_growth_per_level(grids, est.alpha_star);

    std::vector<double> levels, logs;
    for (const auto& g : grids) {
        levels.push_back(static_cast<double>(g.level()));
        logs.push_back(std::log(gamma_premeasure(g, est.alpha_star).value));
    }
    est.slope_at_alpha = least_squares_slope(levels, logs);
    return est;
}

}  // namespace fracqm
