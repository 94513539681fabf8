#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fracqm/curve_geometry.hpp"

namespace fracqm {

struct PreMeasureResult {
    double alpha = 0.0;
    int level = 0;
    double value = 0.0;
    double mesh = 0.0;  // largest parameter gap of the subdivision
};

// Gamma^alpha(F, v_first, v_last) over a node-aligned subdivision:
//   sum |w(v_{k+1}) - w(v_k)|^alpha / Gamma(alpha + 1).
// An empty subdivision means every node (finest available mesh). Steps that
// span gap segments contribute the chords of their non-gap runs only.
PreMeasureResult gamma_premeasure(const CurveGrid& grid, double alpha,
                                  std::span<const std::size_t> subdivision = {});

// Finest-mesh pre-measure between node indices first <= last.
double gamma_premeasure_range(const CurveGrid& grid, double alpha, std::size_t first,
                              std::size_t last);

// Monotone tabulated staircase S_F^alpha with knots at the grid nodes.
class Staircase {
public:
    Staircase(double alpha, std::vector<double> params, std::vector<double> values,
              std::size_t base_index);

    double alpha() const noexcept { return alpha_; }
    std::size_t size() const noexcept { return params_.size(); }
    const std::vector<double>& params() const noexcept { return params_; }
    const std::vector<double>& values() const noexcept { return values_; }
    double param(std::size_t i) const { return params_[i]; }
    double value(std::size_t i) const { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    std::size_t base_index() const noexcept { return base_; }
    double base_param() const { return params_[base_]; }

    double front() const { return values_.front(); }
    double back() const { return values_.back(); }
    double span() const { return values_.back() - values_.front(); }

    // S(v) by linear interpolation between knots; clamped outside the domain.
    double evaluate(double v) const;

    // Smallest v with S(v) = s. Plateaus invert to their left endpoint.
    double inverse(double s) const;

    // True if some pair of adjacent knots has zero increment.
    bool has_plateau() const;

    bool same_knots(const Staircase& other) const;

private:
    double alpha_;
    std::vector<double> params_;
    std::vector<double> values_;
    std::size_t base_;
};

// Signed cumulative pre-measure from the node at parameter p0. p0 must lie on
// a node (within 1e-9 of the domain length).
Staircase build_staircase(const CurveGrid& grid, double alpha, double p0);

// Point staircase J(theta) = S(w^{-1}(theta)) with nearest-node inversion.
double j_of_point(const Staircase& stair, const CurveGrid& grid, const Vec3& theta,
                  double snap_tol = 1e-9);

struct DimensionEstimate {
    double alpha_star = 0.0;
    std::pair<double, double> bracket{0.0, 0.0};
    std::vector<int> levels_used;
    double slope_at_alpha = 0.0;           // least-squares slope of log gamma_L vs L
    std::vector<double> slopes_per_level;  // log gamma_{L+1} - log gamma_L at alpha_star
};

struct DimensionOptions {
    double tol = 1e-3;
    double alpha_lo = 0.01;
    double alpha_hi = 4.0;
    double tie_slope = 1e-9;
    int max_iterations = 200;
};

// Bisection on alpha for the sign change of the per-level log-growth of the
// finest-mesh pre-measure. `grids` must hold >= 3 strictly increasing levels.
DimensionEstimate estimate_gamma_dimension(std::span<const CurveGrid> grids,
                                           const DimensionOptions& options = {});

// Per-level log increments of the pre-measure at a fixed alpha.
std::vector<double> log_growth_per_level(std::span<const CurveGrid> grids, double alpha);

}  // namespace fracqm
