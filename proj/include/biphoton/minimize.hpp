#ifndef BIPHOTON_MINIMIZE_HPP
#define BIPHOTON_MINIMIZE_HPP

#include <cmath>

namespace biphoton {

/// Golden-section minimum of a unimodal scalar function on [a, b].
template <class F>
double golden_section_min(F&& f, double a, double b, double rel_tol = 1e-10) {
    constexpr double phi = 0.6180339887498949;  // 1/golden ratio
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > rel_tol * (std::abs(a) + std::abs(b) + 1e-300)) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return (a + b) / 2.0;
}

}  // namespace biphoton

#endif
