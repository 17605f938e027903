#include "congruence/geodesic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "congruence/errors.hpp"
#include "congruence/fd.hpp"

namespace congruence {

namespace {

constexpr Complex kI(0.0, 1.0);

double wfac(Complex xi) { return 1.0 + std::norm(xi); }

// Shear numerator from the slope polynomial: sigma0 = -(1+|xi|^2)^2 h(xi).
Complex sigma0_of(const SectionCoefficients& s, Complex xi) {
    const double w = wfac(xi);
    return -w * w * s.h(xi);
}

void require_nondegenerate(const SectionCoefficients& s, Complex xi, const char* who) {
    if (std::abs(s.h(xi)) <= s.degeneracy_scale(xi))
        throw DegeneratePoint(std::string(who) + ": umbilic proximity");
}

// Root of x closest to ref among the two square roots.
Complex continued_sqrt(Complex x, Complex ref) {
    const Complex p = std::sqrt(x);
    return (std::abs(p - ref) <= std::abs(-p - ref)) ? p : -p;
}

int branch_of(Complex root, Complex x) {
    const Complex p = std::sqrt(x);
    return (std::abs(root - p) <= std::abs(root + p)) ? +1 : -1;
}

}  // namespace

double MetricAtPoint::norm(Complex xidot) const {
    const Complex v = g_xixi * xidot * xidot + g_xibar_xibar * std::conj(xidot) * std::conj(xidot);
    return v.real();
}

MetricAtPoint induced_metric(const SectionJet& j, double tol) {
    if (!(tol > 0.0)) throw InvalidInput("induced_metric: tol must be > 0");
    const double w = wfac(j.xi);
    MetricAtPoint m;
    m.g_xixi = 2.0 * kI * j.sigma0 / (w * w);
    m.g_xibar_xibar = -std::conj(m.g_xixi);
    m.mixed = Complex(0.0, 0.0);
    m.degenerate = std::abs(j.sigma0) < tol;
    return m;
}

MetricAtPoint ambient_pullback(const SectionCoefficients& s, Complex xi, double step) {
    if (!(step > 0.0)) throw InvalidInput("ambient_pullback: step must be > 0");
    auto F = [&s](Complex z) { return eval_jet(s, z).F; };
    const Complex dF = d_fd(F, xi, step);
    const Complex dbarF = dbar_fd(F, xi, step);
    const Complex Fv = eval_jet(s, xi).F;
    const double w = wfac(xi);

    MetricAtPoint m;
    const Complex sigma0_fd = -std::conj(dbarF);
    m.g_xixi = 2.0 * kI * sigma0_fd / (w * w);
    m.g_xibar_xibar = 2.0 * kI * dbarF / (w * w);
    m.mixed = 2.0 * kI / (w * w) *
              (dF - std::conj(dF) + 2.0 * (xi * std::conj(Fv) - std::conj(xi) * Fv) / w);
    m.degenerate = std::abs(sigma0_fd) < 1e-12;
    return m;
}

ChristoffelTriple christoffels(const SectionCoefficients& s, Complex xi) {
    require_nondegenerate(s, xi, "christoffels");
    const Complex h = s.h(xi);
    const Complex hp = s.h_prime(xi);
    // For minimal sections the mixed symbols vanish identically and the
    // remaining one is the logarithmic derivative of the slope.
    return ChristoffelTriple{0.5 * hp / h, Complex(0.0, 0.0), Complex(0.0, 0.0)};
}

ChristoffelTriple christoffels_fd(const SectionCoefficients& s, Complex xi, double step) {
    if (!(step > 0.0)) throw InvalidInput("christoffels_fd: step must be > 0");
    require_nondegenerate(s, xi, "christoffels_fd");
    auto A = [&s](Complex z) {
        const double w = wfac(z);
        return 2.0 * kI * sigma0_of(s, z) / (w * w);  // g_xixi
    };
    const Complex a = A(xi);
    const Complex da = d_fd(A, xi, step);
    const Complex dbara = dbar_fd(A, xi, step);
    const Complex b = -std::conj(a);  // g_xibar_xibar
    return ChristoffelTriple{0.5 * da / a, -0.5 * dbara / b, 0.5 * dbara / a};
}

Complex geodesic_rhs(const SectionCoefficients& s, const GeodesicState& st) {
    require_nondegenerate(s, st.xi, "geodesic_rhs");
    return -0.5 * (s.h_prime(st.xi) / s.h(st.xi)) * st.xidot * st.xidot;
}

FirstIntegrals first_integrals(const SectionCoefficients& s, const GeodesicState& st) {
    require_nondegenerate(s, st.xi, "first_integrals");
    const double w = wfac(st.xi);
    const Complex sigma0 = sigma0_of(s, st.xi);
    const Complex z = sigma0 * st.xidot * st.xidot;
    const Complex i1 = 2.0 * kI * (z - std::conj(z)) / (w * w);
    const Complex root = static_cast<double>(st.branch) * std::sqrt(sigma0);
    const Complex i2 = (root * st.xidot + std::conj(root * st.xidot)) / w;
    return FirstIntegrals{i1.real(), i2.real()};
}

FirstIntegrals first_integrals_rescaled(const SectionCoefficients& s, const GeodesicState& st) {
    require_nondegenerate(s, st.xi, "first_integrals_rescaled");
    const Complex h = s.h(st.xi);
    const Complex z = h * st.xidot * st.xidot;
    const Complex i1 = 2.0 * kI * (z - std::conj(z));
    const Complex root = static_cast<double>(st.branch) * std::sqrt(h);
    const Complex i2 = root * st.xidot + std::conj(root * st.xidot);
    return FirstIntegrals{i1.real(), i2.real()};
}

double metric_norm(const SectionCoefficients& s, const GeodesicState& st) {
    const SectionJet j = eval_jet(s, st.xi);
    return induced_metric(j, 1e-300).norm(st.xidot);
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kE[7] = {71.0 / 57600,  0.0,        -71.0 / 16695, 71.0 / 1920,
                          -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

struct Phase {
    Complex xi, v;  // position and velocity: four real components
};

Phase axpy(const Phase& y, double hstep, const Phase& k) {
    return Phase{y.xi + hstep * k.xi, y.v + hstep * k.v};
}

}  // namespace

Trajectory integrate(const SectionCoefficients& s, const GeodesicState& st0, double tmax,
                     double tol) {
    if (!(tmax > 0.0)) throw InvalidInput("integrate: tmax must be > 0");
    if (!(tol > 0.0)) throw InvalidInput("integrate: tol must be > 0");
    if (st0.xidot == Complex(0.0, 0.0))
        throw InvalidInput("integrate: zero initial velocity is not a geodesic");
    if (st0.branch != 1 && st0.branch != -1)
        throw InvalidInput("integrate: branch must be +1 or -1");
    require_nondegenerate(s, st0.xi, "integrate");

    auto rhs = [&s](const Phase& y) {
        return Phase{y.v, -0.5 * (s.h_prime(y.xi) / s.h(y.xi)) * y.v * y.v};
    };
    // The conjugated half of the 4-real system must mirror the primary one;
    // complex arithmetic is conjugation-symmetric, checked per accepted step.
    std::vector<Complex> conj_lambda(s.lambda().size());
    for (std::size_t n = 0; n < conj_lambda.size(); ++n) conj_lambda[n] = std::conj(s.lambda()[n]);
    const SectionCoefficients conj_s = build_section(std::move(conj_lambda), s.truncation());
    auto conj_residual = [&conj_s](const Phase& y, const Phase& f) {
        const Complex acc = -0.5 *
                            (conj_s.h_prime(std::conj(y.xi)) / conj_s.h(std::conj(y.xi))) *
                            std::conj(y.v) * std::conj(y.v);
        return std::abs(acc - std::conj(f.v));
    };

    Trajectory traj;
    Phase y{st0.xi, st0.xidot};
    double t = 0.0;

    Complex sig = sigma0_of(s, y.xi);
    Complex root = static_cast<double>(st0.branch) * std::sqrt(sig);

    auto record = [&](double tt, const Phase& yy, Complex rr) {
        GeodesicState st{yy.xi, yy.v, branch_of(rr, sigma0_of(s, yy.xi))};
        const FirstIntegrals fi = first_integrals(s, st);
        traj.samples.push_back(TrajectorySample{tt, st, fi.I1, fi.I2, metric_norm(s, st)});
    };
    record(0.0, y, root);

    const double i1_scale = std::max(std::abs(traj.samples[0].I1), 1e-3);
    const double i2_scale = std::max(std::abs(traj.samples[0].I2), 1e-3);
    double i1_prev = traj.samples[0].I1;
    double i2_prev = traj.samples[0].I2;

    // Initial step from the velocity scale.
    double hstep = 0.01 * (1.0 + std::abs(y.xi)) / std::max(std::abs(y.v), 1e-8);
    hstep = std::min(hstep, tmax);
    double err_prev = 1.0;
    int rejects_in_row = 0;
    const std::size_t max_steps = 40'000'000;

    Phase k[7];
    k[0] = rhs(y);
    for (std::size_t nstep = 0; nstep < max_steps; ++nstep) {
        if (t >= tmax) break;
        hstep = std::min(hstep, tmax - t);

        bool bad = false;
        for (int i = 1; i < 7; ++i) {
            Phase yi = y;
            for (int j = 0; j < i; ++j) yi = axpy(yi, hstep * kA[i][j], k[j]);
            k[i] = rhs(yi);
        }
        Phase ynew = y;
        for (int j = 0; j < 6; ++j) ynew = axpy(ynew, hstep * kA[6][j], k[j]);

        Complex exi(0.0, 0.0), ev(0.0, 0.0);
        for (int j = 0; j < 7; ++j) {
            exi += hstep * kE[j] * k[j].xi;
            ev += hstep * kE[j] * k[j].v;
        }
        const double comp[4] = {exi.real(), exi.imag(), ev.real(), ev.imag()};
        const double ref[4] = {y.xi.real(), y.xi.imag(), y.v.real(), y.v.imag()};
        const double refn[4] = {ynew.xi.real(), ynew.xi.imag(), ynew.v.real(), ynew.v.imag()};
        double sum = 0.0;
        for (int c = 0; c < 4; ++c) {
            const double sc = tol + tol * std::max(std::abs(ref[c]), std::abs(refn[c]));
            sum += (comp[c] / sc) * (comp[c] / sc);
        }
        double err = std::sqrt(sum / 4.0);
        if (!std::isfinite(err)) {
            err = 2.0;
            bad = true;  // a stage fell into the umbilic zone
        }

        Complex signew(0.0, 0.0);
        bool umbilic_hit = false;
        if (!bad && err <= 1.0) {
            const double habs = std::abs(s.h(ynew.xi));
            if (habs < 1e3 * s.degeneracy_scale(ynew.xi)) {
                umbilic_hit = true;
            } else {
                signew = sigma0_of(s, ynew.xi);
                // Quarter-turn gate: branch continuation must be unambiguous.
                if ((signew * std::conj(sig)).real() <= 0.0) bad = true;
                if (!bad) {
                    const Complex rootnew = continued_sqrt(signew, root);
                    GeodesicState stnew{ynew.xi, ynew.v, branch_of(rootnew, signew)};
                    const FirstIntegrals fi = first_integrals(s, stnew);
                    if (std::abs(fi.I1 - i1_prev) > 1e2 * tol * i1_scale ||
                        std::abs(std::abs(fi.I2) - std::abs(i2_prev)) > 1e2 * tol * i2_scale)
                        bad = true;
                }
            }
        }

        if (umbilic_hit) {
            // Land the sample and stop: the equation is singular past here.
            const Complex rootnew = continued_sqrt(sigma0_of(s, ynew.xi), root);
            record(t + hstep, ynew, rootnew);
            traj.termination = Termination::umbilic_proximity;
            return traj;
        }

        if (!bad && err <= 1.0) {
            // Accept.
            t += hstep;
            y = ynew;
            sig = signew;
            root = continued_sqrt(signew, root);
            if (conj_residual(y, rhs(y)) > 1e-12 * (1.0 + std::abs(y.v)))
                throw ExperimentFailed("integrate: conjugate-consistency violated");
            record(t, y, root);
            i1_prev = traj.samples.back().I1;
            i2_prev = traj.samples.back().I2;
            k[0] = rhs(y);  // FSAL not exploited; one extra eval keeps this simple
            rejects_in_row = 0;
            const double fac =
                0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
            hstep *= std::clamp(fac, 0.2, 5.0);
            err_prev = std::max(err, 1e-10);
        } else {
            ++traj.rejected_steps;
            ++rejects_in_row;
            hstep *= bad ? 0.25 : std::clamp(0.9 * std::pow(err, -0.7 / 5.0), 0.1, 0.5);
            if (rejects_in_row > 60 || hstep < 1e-14 * std::max(1.0, t)) {
                traj.termination = Termination::step_failure;
                return traj;
            }
        }
    }
    traj.termination = (t >= tmax) ? Termination::completed : Termination::step_failure;
    return traj;
}

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGLx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                            0.7966664774136267,  0.9602898564975363};
constexpr double kGLw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                            0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                            0.2223810344533745, 0.1012285362903763};

// Integral of the continued sqrt(h) over [a, b] with `panels` subdivisions.
// Continues the branch node to node; `root` is the continued value at a on
// entry and at b on exit.
Complex sqrt_h_integral(const SectionCoefficients& s, Complex a, Complex b, int panels,
                        Complex& root) {
    Complex total(0.0, 0.0);
    const Complex d = (b - a) / static_cast<double>(panels);
    for (int p = 0; p < panels; ++p) {
        const Complex pa = a + static_cast<double>(p) * d;
        for (int g = 0; g < 8; ++g) {
            const Complex z = pa + (0.5 + 0.5 * kGLx[g]) * d;
            const Complex hz = s.h(z);
            if (std::abs(hz) <= s.degeneracy_scale(z))
                throw BranchAmbiguity("uniformize: path meets a zero of the slope");
            root = continued_sqrt(hz, root);
            total += 0.5 * kGLw[g] * d * root;
        }
    }
    const Complex hb = s.h(b);
    if (std::abs(hb) <= s.degeneracy_scale(b))
        throw BranchAmbiguity("uniformize: path endpoint is a zero of the slope");
    root = continued_sqrt(hb, root);
    return total;
}

}  // namespace

Complex uniformize(const SectionCoefficients& s, Complex xi, Complex base, int branch) {
    if (branch != 1 && branch != -1) throw InvalidInput("uniformize: branch must be +1 or -1");
    const Complex hb = s.h(base);
    if (std::abs(hb) <= s.degeneracy_scale(base))
        throw BranchAmbiguity("uniformize: base is a zero of the slope");
    if (xi == base) return Complex(0.0, 0.0);

    Complex prev(0.0, 0.0);
    for (int panels = 8; panels <= 4096; panels *= 2) {
        Complex root = static_cast<double>(branch) * std::sqrt(hb);
        const Complex u = sqrt_h_integral(s, base, xi, panels, root);
        if (panels > 8 && std::abs(u - prev) <= 1e-13 * (1.0 + std::abs(u))) return u;
        prev = u;
    }
    return prev;
}

std::vector<Complex> uniformize_polyline(const SectionCoefficients& s,
                                         std::span<const Complex> pts, int branch) {
    if (branch != 1 && branch != -1)
        throw InvalidInput("uniformize_polyline: branch must be +1 or -1");
    std::vector<Complex> u(pts.size(), Complex(0.0, 0.0));
    if (pts.empty()) return u;
    const Complex h0 = s.h(pts[0]);
    if (std::abs(h0) <= s.degeneracy_scale(pts[0]))
        throw BranchAmbiguity("uniformize_polyline: start is a zero of the slope");
    Complex root = static_cast<double>(branch) * std::sqrt(h0);
    Complex acc(0.0, 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i] != pts[i - 1]) {
            // Panel count scaled to the segment so the branch cannot skip.
            const int panels = 4;
            acc += sqrt_h_integral(s, pts[i - 1], pts[i], panels, root);
        }
        u[i] = acc;
    }
    return u;
}

NullDirections null_directions(const SectionJet& j) {
    const double mag = std::abs(j.sigma0);
    if (mag <= 1e-14 * (1.0 + std::abs(j.h)))
        throw DegeneratePoint("null_directions: degenerate metric");
    double theta = -0.5 * std::arg(j.sigma0);
    if (theta <= -0.5 * std::numbers::pi) theta += std::numbers::pi;
    const Complex d1 = std::polar(1.0, theta);
    return NullDirections{d1, kI * d1};
}

}  // namespace congruence
