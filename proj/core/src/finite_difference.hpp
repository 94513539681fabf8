#pragma once

#include <span>
#include <vector>

namespace fracqm::detail {

// Fornberg's recursion: weights for derivatives 0..max_order at x0 from the
// stencil points xs. Result is indexed [order][point].
std::vector<std::vector<double>> fd_weights(double x0, std::span<const double> xs, int max_order);

}  // namespace fracqm::detail
