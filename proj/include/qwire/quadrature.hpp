#pragma once

#include <vector>

namespace qwire {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int order);

/// Composite Gauss-Legendre rule: `panels` equal panels over [a, b].
QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order);

}  // namespace qwire
