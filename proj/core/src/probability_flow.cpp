#include "fracqm/probability_flow.hpp"

#include <algorithm>
#include <cmath>

#include "fracqm/errors.hpp"

namespace fracqm {

DensityField probability_density(const WaveFunction& psi) {
    std::vector<double> rho(psi.size());
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = std::max(0.0, std::norm(psi.field[i]));
    return {RealField(psi.field.chart_ptr(), std::move(rho))};
}

CurrentField probability_current(const WaveFunction& psi, CurrentForm form) {
    const auto& c = psi.constants;
    const double pref = c.hbar / c.mass;
    std::vector<double> j(psi.size());
    if (form == CurrentForm::first_derivative) {
        // (hbar/2mi)(psi* psi' - psi psi'*) = (hbar/m) Im(psi* psi')
        const auto d = falpha_derivative(psi.field);
        for (std::size_t i = 0; i < j.size(); ++i) j[i] = pref * std::imag(std::conj(psi.field[i]) * d[i]);
    } else {
        // (hbar/2mi)(psi psi''* - psi* psi'') = -(hbar/m) Im(psi* psi'')
        const auto d2 = laplacian(psi.field);
        for (std::size_t i = 0; i < j.size(); ++i) {
            j[i] = -pref * std::imag(std::conj(psi.field[i]) * d2[i]);
        }
    }
    return {RealField(psi.field.chart_ptr(), std::move(j)), form};
}

double total_probability(const WaveFunction& psi) {
    const auto rho = probability_density(psi);
    return falpha_integral_nodes(rho.field, 0, psi.size() - 1);
}

RealField continuity_residual(const WaveFunction& prev, const WaveFunction& curr,
                              const WaveFunction& next) {
    if (!prev.field.aligned_with(curr.field) || !curr.field.aligned_with(next.field)) {
        throw AlignmentError("continuity snapshots use different charts");
    }
    const double d_tau = 0.5 * (next.tau - prev.tau);
    if (!(d_tau > 0.0)) throw AlignmentError("snapshots must be ordered in tau");
    if (std::abs((curr.tau - prev.tau) - d_tau) > 1e-9 * std::max(1.0, d_tau)) {
        throw AlignmentError("snapshots are not equally spaced in tau");
    }
    const auto j = probability_current(curr);
    const auto dj = falpha_derivative(j.field);
    std::vector<double> out(curr.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double drho = (std::norm(next.field[i]) - std::norm(prev.field[i])) / (2.0 * d_tau);
        out[i] = std::abs(drho + dj[i]);
    }
    return RealField(curr.field.chart_ptr(), std::move(out));
}

ResidualNorms residual_norms(const RealField& residual, std::size_t first, std::size_t last) {
    ResidualNorms n;
    std::vector<double> sq(residual.size(), 0.0);
    for (std::size_t i = first; i <= last; ++i) {
        n.max = std::max(n.max, residual[i]);
        sq[i] = residual[i] * residual[i];
    }
    n.l2 = std::sqrt(falpha_integral_nodes(RealField(residual.chart_ptr(), std::move(sq)), first, last));
    return n;
}

ResidualNorms residual_norms(const RealField& residual) {
    return residual_norms(residual, 0, residual.size() - 1);
}

}  // namespace fracqm
