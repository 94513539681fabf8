#pragma once

#include "fracqm/quantum_dynamics.hpp"

namespace fracqm {

struct DensityField {
    RealField field;
};

enum class CurrentForm {
    first_derivative,  // (hbar / 2mi)(psi* D psi - psi D psi*)
    second_derivative,     // (hbar / 2mi)(psi D^2 psi* - psi* D^2 psi)
};

struct CurrentField {
    RealField field;
    CurrentForm form = CurrentForm::first_derivative;
};

// rho = |psi|^2, clamped at zero.
DensityField probability_density(const WaveFunction& psi);

CurrentField probability_current(const WaveFunction& psi,
                                 CurrentForm form = CurrentForm::first_derivative);

// integral of rho dS over the whole curve
double total_probability(const WaveFunction& psi);

// |(rho(tau + d) - rho(tau - d)) / 2d + dJ/dS| at every knot, J in the
// first-derivative form.
RealField continuity_residual(const WaveFunction& prev, const WaveFunction& curr,
                              const WaveFunction& next);

struct ResidualNorms {
    double max = 0.0;
    double l2 = 0.0;  // sqrt(integral of r^2 dS)
};

ResidualNorms residual_norms(const RealField& residual);

// Restrict to knots [first, last] before taking norms.
ResidualNorms residual_norms(const RealField& residual, std::size_t first, std::size_t last);

}  // namespace fracqm
