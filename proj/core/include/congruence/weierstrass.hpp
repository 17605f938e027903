#pragma once

#include <array>
#include <complex>
#include <vector>

#include "congruence/section.hpp"

namespace congruence {

/// A polynomial holomorphic curve w(nu) = sum c_k nu^k feeding the classical
/// Weierstrass construction of a minimal surface.
class HolomorphicCurve {
  public:
    HolomorphicCurve() = default;
    explicit HolomorphicCurve(std::vector<Complex> coeffs);

    const std::vector<Complex>& coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    Complex w(Complex nu) const;
    Complex w1(Complex nu) const;  // w'
    Complex w2(Complex nu) const;  // w''
    Complex w3(Complex nu) const;  // w'''

    /// True when w''' vanishes identically (degree < 3 data): the embedded
    /// image degenerates to a single point.
    bool planar() const;

  private:
    std::vector<Complex> c_;
};

struct SurfacePoint {
    Complex z;  // x1 + i x2
    double t;   // x3, exactly real by construction
};

/// Euclidean position of the surface point attached to nu:
///   z = w''/2 - conj(nu)^2 conj(w'')/2 + conj(nu) conj(w') - conj(w),
///   t = Re(nu w'' - w').
SurfacePoint embed(const HolomorphicCurve& w, Complex nu);

struct LinePoint {
    Complex xi;
    Complex eta;
};

/// Oriented-line coordinates of the surface normal at nu: xi = -conj(nu) and
/// eta from the incidence relation eta = (z - 2 t xi - conj(z) xi^2)/2.
LinePoint to_line(const HolomorphicCurve& w, Complex nu);

/// Closed-form eta at xi from vertical derivatives of w(-conj(xi)):
///   eta = (1+|xi|^2)^3/4 * d^2/dconj(xi)^2 [w/(1+|xi|^2)] - conj(w)/2.
/// Cross-check oracle for to_line, evaluated term-wise.
Complex eta_derivative_form(const HolomorphicCurve& w, Complex xi);

/// |<e0(xi=-conj(nu)), d embed/d nu>| with the tangent estimated by central
/// differences; O(step^2) for any curve. Throws UmbilicPointError when
/// |w'''(nu)| < 1e-10.
double normal_check(const HolomorphicCurve& w, Complex nu, double step);

/// conj(h(xi)) + w'''(-conj(xi))/4; zero iff the curve and the section
/// describe the same surface.
Complex weierstrass_residual(const HolomorphicCurve& w, const SectionCoefficients& s, Complex xi);

/// Discrete mean curvature from first/second fundamental forms via central
/// differences at the given step, with one Richardson refinement at step/2
/// when the first estimate exceeds `refine_above`. Throws ImmersionFailure
/// when the first fundamental form is degenerate.
double mean_curvature_numeric(const HolomorphicCurve& w, Complex nu, double step,
                              double refine_above = 1e-4);

struct Mesh {
    int n = 0;  // grid subdivisions per side; (n+1)^2 vertices, n^2 quads
    std::vector<SurfacePoint> vertices;
    std::vector<std::array<int, 4>> faces;
};

/// Square grid of (n+1)^2 samples of embed over [center +- radius]^2 in nu,
/// with consistently oriented quads.
Mesh sample_mesh(const HolomorphicCurve& w, Complex center, double radius, int n);

/// Coefficient matching between the two pictures:
/// c_{n+3} = 4 (-1)^n conj(lambda_n) (and back). Lower-order c_0..c_2 are
/// rigid-motion freedom and are set to zero.
HolomorphicCurve curve_from_section(const SectionCoefficients& s);
SectionCoefficients section_from_curve(const HolomorphicCurve& w);

}  // namespace congruence
