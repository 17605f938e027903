#pragma once

#include <complex>

namespace congruence {

using Complex = std::complex<double>;

// Central-difference Wirtinger derivatives of a complex-valued function of
// (xi, conj xi). Truncation error is O(step^2); these are used by residual
// oracles only, never on the main evaluation path.

template <class F>
Complex d_fd(F&& f, Complex xi, double step) {
    const Complex ex(step, 0.0), ey(0.0, step);
    const Complex dx = (f(xi + ex) - f(xi - ex)) / (2.0 * step);
    const Complex dy = (f(xi + ey) - f(xi - ey)) / (2.0 * step);
    return 0.5 * (dx - Complex(0.0, 1.0) * dy);
}

template <class F>
Complex dbar_fd(F&& f, Complex xi, double step) {
    const Complex ex(step, 0.0), ey(0.0, step);
    const Complex dx = (f(xi + ex) - f(xi - ex)) / (2.0 * step);
    const Complex dy = (f(xi + ey) - f(xi - ey)) / (2.0 * step);
    return 0.5 * (dx + Complex(0.0, 1.0) * dy);
}

}  // namespace congruence
