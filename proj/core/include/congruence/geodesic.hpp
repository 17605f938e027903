#pragma once

#include <complex>
#include <span>
#include <vector>

#include "congruence/section.hpp"

namespace congruence {

/// Pointwise induced metric ds^2 = g_xixi dxi^2 + g_xibar_xibar dxibar^2
/// (+ mixed dxi dxibar, identically zero for lagrangian sections).
struct MetricAtPoint {
    Complex g_xixi;         // 2i sigma0 / (1+|xi|^2)^2
    Complex g_xibar_xibar;  // always -conj(g_xixi)
    Complex mixed;          // symmetrized dxi dxibar coefficient; 0 for induced_metric
    bool degenerate;        // |sigma0| below tolerance

    /// Real quadratic form on the tangent xidot d/dxi + conj.
    double norm(Complex xidot) const;
};

MetricAtPoint induced_metric(const SectionJet& j, double tol);

/// Oracle: the ambient neutral metric evaluated on the graph tangents with
/// central-difference derivatives of F. Agrees with induced_metric to
/// O(step^2); `mixed` vanishes at the same rate.
MetricAtPoint ambient_pullback(const SectionCoefficients& s, Complex xi, double step);

struct ChristoffelTriple {
    Complex xi_xixi;     // Gamma^xi_{xi xi}   = h'/(2h) for minimal sections
    Complex xibar_xixi;  // Gamma^xibar_{xi xi}, 0 for minimal sections
    Complex xi_xixibar;  // Gamma^xi_{xi xibar}, 0 for minimal sections
};

/// Closed-form symbols. Throws DegeneratePoint near umbilics.
ChristoffelTriple christoffels(const SectionCoefficients& s, Complex xi);

/// Oracle: metric-compatibility formula applied to induced_metric with
/// central-difference metric derivatives; matches christoffels to O(step^2).
ChristoffelTriple christoffels_fd(const SectionCoefficients& s, Complex xi, double step);

struct GeodesicState {
    Complex xi;
    Complex xidot;
    int branch = +1;  // sign of the continued sigma0^{1/2} vs the principal root
};

/// Reduced geodesic acceleration xiddot = -(h'/h) xidot^2 / 2.
Complex geodesic_rhs(const SectionCoefficients& s, const GeodesicState& st);

struct FirstIntegrals {
    double I1;
    double I2;
};

/// Metric normalization: I1 = 2i (sigma0 xidot^2 - conj)/(1+|xi|^2)^2,
/// I2 = 2 Re(sigma0^{1/2} xidot)/(1+|xi|^2) with the branch from the state.
FirstIntegrals first_integrals(const SectionCoefficients& s, const GeodesicState& st);

/// Slope normalization (the pure-harmonic convention): built from h instead
/// of sigma0, so I1 = 2i (h xidot^2 - conj) and I2 = 2 Re(h^{1/2} xidot).
/// Differs from the metric normalization by the sign absorbed with sigma0.
FirstIntegrals first_integrals_rescaled(const SectionCoefficients& s, const GeodesicState& st);

/// ds^2(T,T) at the state, through induced_metric.
double metric_norm(const SectionCoefficients& s, const GeodesicState& st);

enum class Termination { completed, umbilic_proximity, step_failure };

struct TrajectorySample {
    double t;
    GeodesicState state;
    double I1, I2;  // metric normalization, branch-continued
    double ds2;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    Termination termination = Termination::completed;
    std::size_t rejected_steps = 0;
};

/// Adaptive embedded Dormand-Prince 5(4) integration of the reduced geodesic
/// equation as a 4-dimensional real first-order system, with PI step control.
/// Step acceptance is additionally gated on per-step first-integral drift
/// (< 1e2 tol relative) and on the shear rotating less than a quarter turn
/// per step, which keeps the sigma0^{1/2} branch continuation unambiguous.
/// Terminates with umbilic_proximity when |h| < 1e3 * degeneracy scale.
Trajectory integrate(const SectionCoefficients& s, const GeodesicState& st0, double tmax,
                     double tol);

/// u(xi) = int h^{1/2} dzeta along the straight segment from base, with the
/// continuous branch fixed at base by `branch` applied to the principal root.
/// Throws BranchAmbiguity when the segment meets a zero of h.
Complex uniformize(const SectionCoefficients& s, Complex xi, Complex base, int branch);

/// Branch-continued u along a polyline, u[0] = 0 at pts[0].
std::vector<Complex> uniformize_polyline(const SectionCoefficients& s,
                                         std::span<const Complex> pts, int branch);

struct NullDirections {
    Complex d1;  // unit, sigma0 d1^2 real positive; arg in (-pi/2, pi/2]
    Complex d2;  // i * d1, sigma0 d2^2 real negative
};

NullDirections null_directions(const SectionJet& j);

}  // namespace congruence
