#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "fracqm/curve_geometry.hpp"
#include "fracqm/fractal_measure.hpp"

namespace fracqm {

using Complex = std::complex<double>;

// Samples f(w(v_i)) at the knots of a staircase chart. The chart is shared
// and immutable; fields on the same chart are aligned by construction.
template <class T>
class FieldOnCurve {
public:
    FieldOnCurve(std::shared_ptr<const Staircase> chart, std::vector<T> values);

    // f sampled as a function of (v, S(v)).
    static FieldOnCurve from_function(std::shared_ptr<const Staircase> chart,
                                      const std::function<T(double v, double s)>& fn);

    static FieldOnCurve constant(std::shared_ptr<const Staircase> chart, T value);

    const Staircase& chart() const noexcept { return *chart_; }
    const std::shared_ptr<const Staircase>& chart_ptr() const noexcept { return chart_; }

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const T> values() const noexcept { return values_; }
    std::vector<T>& mutable_values() noexcept { return values_; }
    T operator[](std::size_t i) const { return values_[i]; }

    bool aligned_with(const FieldOnCurve& other) const {
        return chart_ == other.chart_ || chart_->same_knots(*other.chart_);
    }

private:
    std::shared_ptr<const Staircase> chart_;
    std::vector<T> values_;
};

using RealField = FieldOnCurve<double>;
using ComplexField = FieldOnCurve<Complex>;

template <class T>
struct VectorFieldOnCurve {
    std::array<FieldOnCurve<T>, 3> components;

    const FieldOnCurve<T>& operator[](std::size_t j) const { return components[j]; }
};

using RealVectorField = VectorFieldOnCurve<double>;
using ComplexVectorField = VectorFieldOnCurve<Complex>;

// Linear combination a*f + b*g on a shared chart.
template <class T>
FieldOnCurve<T> combine(T a, const FieldOnCurve<T>& f, T b, const FieldOnCurve<T>& g);

// Intrinsic derivative d/dS. Three-point Lagrange stencil in S: central at
// interior knots, one-sided second order at the two ends. Throws PlateauError
// if a stencil contains two knots with equal S.
template <class T>
FieldOnCurve<T> falpha_derivative(const FieldOnCurve<T>& f);

// (d/dS)^2 with the three-point second difference at interior knots and a
// four-point one-sided stencil at the ends.
template <class T>
FieldOnCurve<T> laplacian(const FieldOnCurve<T>& f);

// Midpoint (trapezoid-in-S) Riemann-Stieltjes sum over knots [first, last].
template <class T>
T falpha_integral_nodes(const FieldOnCurve<T>& f, std::size_t first, std::size_t last);

// Same, with node-aligned parameter bounds a <= b.
template <class T>
T falpha_integral(const FieldOnCurve<T>& f, double a, double b);

// g(v_j) = integral of f from the knot at parameter a to v_j (signed).
template <class T>
FieldOnCurve<T> falpha_antiderivative(const FieldOnCurve<T>& f, double a);

// Unit chord tangents: normalized w_{i+1} - w_{i-1}, one-sided at the ends.
std::vector<Vec3> chord_tangents(const CurveGrid& grid);

template <class T>
VectorFieldOnCurve<T> gradient(const FieldOnCurve<T>& f, const CurveGrid& grid);

// d/dS of the tangential component vf . t. For a gradient field this is the
// Laplacian of the potential.
template <class T>
FieldOnCurve<T> divergence(const VectorFieldOnCurve<T>& vf, const CurveGrid& grid);

// sum_{n=0}^{order} deltaS^n / n! * derivs[n]
template <class T>
T taylor_eval(std::span<const T> derivs, double delta_s, int order);

}  // namespace fracqm
