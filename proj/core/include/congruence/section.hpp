#pragma once

#include <complex>
#include <vector>

namespace congruence {

using Complex = std::complex<double>;

/// Coefficients lambda_0..lambda_M of a minimal lagrangian section of the
/// oriented-line bundle. The truncated series is treated as the exact
/// definition of the surface, so every identity below holds to roundoff,
/// not to a truncation tolerance.
///
/// The holomorphic slope of the section is the polynomial
///   h(xi) = sum_n alpha_n xi^n,   alpha_n = -(n+1)(n+2)(n+3) lambda_n,
/// and the shear numerator is sigma0 = -(1+|xi|^2)^2 h(xi).
class SectionCoefficients {
  public:
    SectionCoefficients() = default;

    const std::vector<Complex>& lambda() const { return lambda_; }
    int truncation() const { return static_cast<int>(lambda_.size()) - 1; }

    /// alpha_n = -(n+1)(n+2)(n+3) lambda_n, recomputed exactly on demand.
    std::vector<Complex> alpha() const;

    Complex h(Complex xi) const;
    Complex h_prime(Complex xi) const;
    Complex h_second(Complex xi) const;

    /// Largest n with alpha_n != 0, or -1 when h vanishes identically.
    int h_degree() const;

    /// |h| threshold below which a point counts as umbilic/degenerate:
    /// 1e-12 * (1+|xi|)^deg.
    double degeneracy_scale(Complex xi) const;

    bool zero_slope() const { return h_degree() < 0; }

  private:
    friend SectionCoefficients build_section(std::vector<Complex> lambda, int truncation);
    std::vector<Complex> lambda_;
};

/// Validates and stores the coefficient list (length must be truncation+1,
/// all entries finite).
SectionCoefficients build_section(std::vector<Complex> lambda, int truncation);

/// Pointwise data of a section at one xi. dF and dbarF come from term-wise
/// closed-form differentiation of the series; sigma0 = -conj(dbarF) by
/// construction; h is evaluated from the alpha polynomial independently.
struct SectionJet {
    Complex xi;
    Complex F;
    Complex dF;     // dF/dxi
    Complex dbarF;  // dF/dconj(xi)
    Complex sigma0;
    Complex h;
    double r;      // potential, real by construction
    Complex psi;   // dF + r - 2 conj(xi) F / (1+|xi|^2); ~0 for these sections
};

SectionJet eval_jet(const SectionCoefficients& s, Complex xi);

/// | dF - conj(dF) + 2 (xi conj(F) - conj(xi) F) / (1+|xi|^2) |, the modulus
/// of the mixed metric coefficient; zero (to roundoff) for sections from
/// build_section.
double lagrangian_residual(const SectionCoefficients& s, Complex xi);

/// Central-difference estimate of dbar applied to dFbar/(1+|xi|^2)^2, where
/// dFbar is taken from the term-wise jet. O(step^2) for valid sections.
Complex minimality_residual(const SectionCoefficients& s, Complex xi, double step);

struct SpinCoefficients {
    Complex rho;
    Complex sigma;
};

/// rho and sigma of the congruence at the jet's point, with psi shifted by
/// the real distance rdist along the line (moving to a parallel surface).
/// Throws DegeneratePoint when |dbarF|^2 - |psi'|^2 vanishes.
SpinCoefficients spin_coefficients(const SectionJet& j, double rdist);

struct UmbilicRecord {
    Complex xi;
    int winding;  // contour winding of h around the zero, >= 1
    int index;    // reported as -winding
};

/// All zeros of the slope polynomial h inside the disc |xi - center| < radius.
/// Newton refinement (multiplicity-robust) from a uniform grid of starting
/// points, dedup radius 1e-8; winding from a 256-point contour sum of
/// delta arg h on a small circle around each zero.
/// Throws BoundaryZero when a zero lies on the search boundary and
/// InvalidInput for a section with identically vanishing slope.
std::vector<UmbilicRecord> umbilic_points(const SectionCoefficients& s, Complex center,
                                          double radius, int grid);

/// Winding number of t -> h(center + radius e^{it}) around 0, by a uniform
/// n-point sum of wrapped argument increments. Exposed for argument-principle
/// checks. Throws BoundaryZero if |h| comes within tol of 0 on the contour.
int contour_winding(const SectionCoefficients& s, Complex center, double radius, int n);

}  // namespace congruence
