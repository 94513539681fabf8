#include "fracqm/falpha_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "compensated_sum.hpp"
#include "finite_difference.hpp"
#include "fracqm/errors.hpp"

namespace fracqm {

template <class T>
FieldOnCurve<T>::FieldOnCurve(std::shared_ptr<const Staircase> chart, std::vector<T> values)
    : chart_(std::move(chart)), values_(std::move(values)) {
    if (!chart_) throw DomainError("field requires a staircase chart");
    if (values_.size() != chart_->size()) {
        throw AlignmentError("field has " + std::to_string(values_.size()) +
                             " values but the chart has " + std::to_string(chart_->size()) +
                             " knots");
    }
}

template <class T>
FieldOnCurve<T> FieldOnCurve<T>::from_function(std::shared_ptr<const Staircase> chart,
                                               const std::function<T(double, double)>& fn) {
    std::vector<T> vals(chart->size());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = fn(chart->param(i), chart->value(i));
    return FieldOnCurve(std::move(chart), std::move(vals));
}

template <class T>
FieldOnCurve<T> FieldOnCurve<T>::constant(std::shared_ptr<const Staircase> chart, T value) {
    const std::size_t n = chart->size();
    return FieldOnCurve(std::move(chart), std::vector<T>(n, value));
}

template <class T>
FieldOnCurve<T> combine(T a, const FieldOnCurve<T>& f, T b, const FieldOnCurve<T>& g) {
    if (!f.aligned_with(g)) throw AlignmentError("fields live on different charts");
    std::vector<T> out(f.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * f[i] + b * g[i];
    return FieldOnCurve<T>(f.chart_ptr(), std::move(out));
}

namespace {

void require_rising(const Staircase& s, std::size_t first, std::size_t last) {
    for (std::size_t i = first; i < last; ++i) {
        if (!(s.value(i + 1) > s.value(i))) {
            throw PlateauError(i, "staircase plateau between knots " + std::to_string(i) + " and " +
                                      std::to_string(i + 1) + "; derivative undefined");
        }
    }
}

template <class T>
T apply_edge_stencil(const Staircase& s, std::span<const T> f, std::size_t at, std::size_t first,
                     std::size_t count, int order) {
    std::vector<double> xs(count);
    for (std::size_t k = 0; k < count; ++k) xs[k] = s.value(first + k);
    const auto w = detail::fd_weights(s.value(at), xs, order);
    T acc{};
    for (std::size_t k = 0; k < count; ++k) acc += w[static_cast<std::size_t>(order)][k] * f[first + k];
    return acc;
}

}  // namespace

template <class T>
FieldOnCurve<T> falpha_derivative(const FieldOnCurve<T>& f) {
    const Staircase& s = f.chart();
    const std::size_t n = f.size();
    require_rising(s, 0, n - 1);
    const auto v = f.values();
    std::vector<T> out(n);
    if (n == 2) {
        const T d = (v[1] - v[0]) / (s.value(1) - s.value(0));
        out[0] = out[1] = d;
        return FieldOnCurve<T>(f.chart_ptr(), std::move(out));
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hm = s.value(i) - s.value(i - 1);
        const double hp = s.value(i + 1) - s.value(i);
        const double wm = -hp / (hm * (hm + hp));
        const double w0 = (hp - hm) / (hm * hp);
        const double wp = hm / (hp * (hm + hp));
        out[i] = wm * v[i - 1] + w0 * v[i] + wp * v[i + 1];
    }
    out[0] = apply_edge_stencil<T>(s, v, 0, 0, 3, 1);
    out[n - 1] = apply_edge_stencil<T>(s, v, n - 1, n - 3, 3, 1);
    return FieldOnCurve<T>(f.chart_ptr(), std::move(out));
}

template <class T>
FieldOnCurve<T> laplacian(const FieldOnCurve<T>& f) {
    const Staircase& s = f.chart();
    const std::size_t n = f.size();
    if (n < 3) throw DomainError("the Laplacian needs at least three knots");
    require_rising(s, 0, n - 1);
    const auto v = f.values();
    std::vector<T> out(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hm = s.value(i) - s.value(i - 1);
        const double hp = s.value(i + 1) - s.value(i);
        out[i] = 2.0 * ((v[i + 1] - v[i]) / hp - (v[i] - v[i - 1]) / hm) / (hm + hp);
    }
    const std::size_t edge = std::min<std::size_t>(4, n);
    out[0] = apply_edge_stencil<T>(s, v, 0, 0, edge, 2);
    out[n - 1] = apply_edge_stencil<T>(s, v, n - 1, n - edge, edge, 2);
    return FieldOnCurve<T>(f.chart_ptr(), std::move(out));
}

template <class T>
T falpha_integral_nodes(const FieldOnCurve<T>& f, std::size_t first, std::size_t last) {
    if (first > last || last >= f.size()) throw AlignmentError("integration bounds out of range");
    const Staircase& s = f.chart();
    detail::CompensatedSum<T> acc;
    for (std::size_t i = first; i < last; ++i) {
        acc.add(0.5 * (f[i] + f[i + 1]) * (s.value(i + 1) - s.value(i)));
    }
    return acc.value();
}

namespace {

std::size_t knot_at(const Staircase& s, double v) {
    const auto& p = s.params();
    const double tol = 1e-12 * std::max(1.0, p.back() - p.front());
    auto it = std::lower_bound(p.begin(), p.end(), v - tol);
    if (it == p.end() || std::abs(*it - v) > tol) {
        throw AlignmentError("bound " + std::to_string(v) + " is not aligned with a knot");
    }
    return static_cast<std::size_t>(it - p.begin());
}

}  // namespace

template <class T>
T falpha_integral(const FieldOnCurve<T>& f, double a, double b) {
    if (a > b) throw DomainError("integration bounds must satisfy a <= b");
    return falpha_integral_nodes(f, knot_at(f.chart(), a), knot_at(f.chart(), b));
}

template <class T>
FieldOnCurve<T> falpha_antiderivative(const FieldOnCurve<T>& f, double a) {
    const Staircase& s = f.chart();
    const std::size_t base = knot_at(s, a);
    std::vector<T> out(f.size(), T{});
    for (std::size_t i = base; i + 1 < f.size(); ++i) {
        out[i + 1] = out[i] + 0.5 * (f[i] + f[i + 1]) * (s.value(i + 1) - s.value(i));
    }
    for (std::size_t i = base; i > 0; --i) {
        out[i - 1] = out[i] - 0.5 * (f[i] + f[i - 1]) * (s.value(i) - s.value(i - 1));
    }
    return FieldOnCurve<T>(f.chart_ptr(), std::move(out));
}

std::vector<Vec3> chord_tangents(const CurveGrid& grid) {
    const std::size_t n = grid.size();
    std::vector<Vec3> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
        const Vec3 d = grid.point(hi) - grid.point(lo);
        const double len = d.norm();
        if (len <= 0.0) throw DegenerateCurveError("zero chord at node " + std::to_string(i));
        t[i] = d / len;
    }
    return t;
}

template <class T>
VectorFieldOnCurve<T> gradient(const FieldOnCurve<T>& f, const CurveGrid& grid) {
    if (grid.size() != f.size()) throw AlignmentError("field and grid sizes differ");
    const auto df = falpha_derivative(f);
    const auto t = chord_tangents(grid);
    std::array<std::vector<T>, 3> comps;
    for (auto& c : comps) c.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (int j = 0; j < 3; ++j) comps[static_cast<std::size_t>(j)][i] = df[i] * t[i][j];
    }
    return VectorFieldOnCurve<T>{{FieldOnCurve<T>(f.chart_ptr(), std::move(comps[0])),
                                  FieldOnCurve<T>(f.chart_ptr(), std::move(comps[1])),
                                  FieldOnCurve<T>(f.chart_ptr(), std::move(comps[2]))}};
}

template <class T>
FieldOnCurve<T> divergence(const VectorFieldOnCurve<T>& vf, const CurveGrid& grid) {
    const auto& x = vf.components[0];
    if (!x.aligned_with(vf.components[1]) || !x.aligned_with(vf.components[2])) {
        throw AlignmentError("vector field components live on different charts");
    }
    if (grid.size() != x.size()) throw AlignmentError("vector field and grid sizes differ");
    const auto t = chord_tangents(grid);
    std::vector<T> tangential(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        tangential[i] = vf.components[0][i] * t[i][0] + vf.components[1][i] * t[i][1] +
                        vf.components[2][i] * t[i][2];
    }
    return falpha_derivative(FieldOnCurve<T>(x.chart_ptr(), std::move(tangential)));
}

template <class T>
T taylor_eval(std::span<const T> derivs, double delta_s, int order) {
    if (order < 0) throw DomainError("Taylor order must be non-negative");
    if (derivs.size() < static_cast<std::size_t>(order) + 1) {
        throw DomainError("not enough derivatives for the requested Taylor order");
    }
    T acc{};
    double coeff = 1.0;
    for (int k = 0; k <= order; ++k) {
        if (k > 0) coeff *= delta_s / static_cast<double>(k);
        acc += coeff * derivs[static_cast<std::size_t>(k)];
    }
    return acc;
}

#define FRACQM_INSTANTIATE(T)                                                                  \
    template class FieldOnCurve<T>;                                                            \
    template FieldOnCurve<T> combine(T, const FieldOnCurve<T>&, T, const FieldOnCurve<T>&);    \
    template FieldOnCurve<T> falpha_derivative(const FieldOnCurve<T>&);                        \
    template FieldOnCurve<T> laplacian(const FieldOnCurve<T>&);                                \
    template T falpha_integral_nodes(const FieldOnCurve<T>&, std::size_t, std::size_t);        \
    template T falpha_integral(const FieldOnCurve<T>&, double, double);                        \
    template FieldOnCurve<T> falpha_antiderivative(const FieldOnCurve<T>&, double);            \
    template VectorFieldOnCurve<T> gradient(const FieldOnCurve<T>&, const CurveGrid&);         \
    template FieldOnCurve<T> divergence(const VectorFieldOnCurve<T>&, const CurveGrid&);       \
    template T taylor_eval(std::span<const T>, double, int);

FRACQM_INSTANTIATE(double)
FRACQM_INSTANTIATE(Complex)

#undef FRACQM_INSTANTIATE

}  // namespace fracqm
