#pragma once

// Adaptive bisection of a complex-valued curve, shared by phase tracking and
// Argand tracing.

#include "qwire/errors.hpp"
#include "qwire/units.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace qwire::detail {

struct SampledCurve {
    std::vector<double> params;
    std::vector<Complex> values;
    /// gap g means vertices g and g + 1 are not joined.
    std::vector<std::size_t> gaps;
};

/// Starts from `initial` uniform samples on [from, to] and bisects every
/// interval until accept(p0, z0, pm, zm, p1, z1) holds. An interval narrower
/// than min_step is handed to stuck(p0, z0, p1, z1), which either throws or
/// returns true to record a gap there.
template <class F, class Accept, class Stuck>
SampledCurve refine_curve(const F& f, double from, double to, int initial, const Accept& accept,
                          const Stuck& stuck, double min_step, std::size_t max_samples) {
    struct Interval {
        double p0;
        Complex z0;
        double p1;
        Complex z1;
    };
    SampledCurve out;
    const int n = initial < 2 ? 2 : initial;
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) grid[i] = from + (to - from) * i / (n - 1);
    grid.back() = to;

    out.params.push_back(grid[0]);
    out.values.push_back(f(grid[0]));
    std::vector<Interval> stack;
    for (int i = 1; i < n; ++i) {
        stack.push_back({out.params.back(), out.values.back(), grid[i], f(grid[i])});
        while (!stack.empty()) {
            const Interval iv = stack.back();
            stack.pop_back();
            const double pm = 0.5 * (iv.p0 + iv.p1);
            const Complex zm = f(pm);
            if (accept(iv.p0, iv.z0, pm, zm, iv.p1, iv.z1)) {
                out.params.push_back(pm);
                out.values.push_back(zm);
                out.params.push_back(iv.p1);
                out.values.push_back(iv.z1);
            } else if (std::abs(iv.p1 - iv.p0) < min_step) {
                if (stuck(iv.p0, iv.z0, iv.p1, iv.z1)) {
                    out.gaps.push_back(out.params.size() - 1);
                    out.params.push_back(iv.p1);
                    out.values.push_back(iv.z1);
                }
            } else {
                stack.push_back({pm, zm, iv.p1, iv.z1});
                stack.push_back({iv.p0, iv.z0, pm, zm});
            }
            if (out.params.size() > max_samples) {
                throw ResolutionError("adaptive sampling exceeded its sample budget", iv.p0,
                                      iv.p1);
            }
        }
    }
    return out;
}

}  // namespace qwire::detail
