#include "congruence/section.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "congruence/errors.hpp"
#include "congruence/fd.hpp"

namespace congruence {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Horner evaluation of sum c_n x^n.
Complex horner(const std::vector<Complex>& c, Complex x) {
    Complex acc(0.0, 0.0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

}  // namespace

std::vector<Complex> SectionCoefficients::alpha() const {
    std::vector<Complex> a(lambda_.size());
    for (std::size_t n = 0; n < lambda_.size(); ++n) {
        const double k = -static_cast<double>((n + 1) * (n + 2) * (n + 3));
        a[n] = k * lambda_[n];
    }
    return a;
}

Complex SectionCoefficients::h(Complex xi) const { return horner(alpha(), xi); }

Complex SectionCoefficients::h_prime(Complex xi) const {
    const auto a = alpha();
    Complex acc(0.0, 0.0);
    for (std::size_t n = a.size(); n-- > 1;) acc = acc * xi + static_cast<double>(n) * a[n];
    return acc;
}

Complex SectionCoefficients::h_second(Complex xi) const {
    const auto a = alpha();
    Complex acc(0.0, 0.0);
    for (std::size_t n = a.size(); n-- > 2;)
        acc = acc * xi + static_cast<double>(n * (n - 1)) * a[n];
    return acc;
}

int SectionCoefficients::h_degree() const {
    for (std::size_t n = lambda_.size(); n-- > 0;)
        if (lambda_[n] != Complex(0.0, 0.0)) return static_cast<int>(n);
    return -1;
}

double SectionCoefficients::degeneracy_scale(Complex xi) const {
    const int deg = std::max(h_degree(), 0);
    return 1e-12 * std::pow(1.0 + std::abs(xi), deg);
}

SectionCoefficients build_section(std::vector<Complex> lambda, int truncation) {
    if (truncation < 0) throw InvalidInput("build_section: truncation must be >= 0");
    if (lambda.size() != static_cast<std::size_t>(truncation) + 1)
        throw InvalidInput("build_section: coefficient list length must be truncation+1");
    for (const Complex& l : lambda)
        if (!finite(l)) throw InvalidInput("build_section: non-finite coefficient");
    SectionCoefficients s;
    s.lambda_ = std::move(lambda);
    return s;
}

SectionJet eval_jet(const SectionCoefficients& s, Complex xi) {
    if (!finite(xi)) throw InvalidInput("eval_jet: non-finite xi");
    const double q = std::norm(xi);  // xi conj(xi)
    const double w = 1.0 + q;
    const Complex xib = std::conj(xi);

    SectionJet j{};
    j.xi = xi;

    // Term-wise closed forms. For each n the section contributes
    //   F_n = 2 l xi^{n+3} - conj(l) conj(xi)^{n+1} (A + B q + C q^2)
    // with A=(n+2)(n+3), B=2(n+1)(n+3), C=(n+1)(n+2), and the potential
    //   r_n = -2 (3+n+(1+n)q) * 2 Re(l xi^{n+2}) / (1+q).
    Complex xn(1.0, 0.0);   // xi^n
    Complex xbn(1.0, 0.0);  // conj(xi)^n
    double r_sum = 0.0;
    for (std::size_t n = 0; n < s.lambda().size(); ++n) {
        const Complex l = s.lambda()[n];
        const Complex lb = std::conj(l);
        const double dn = static_cast<double>(n);
        const double A = static_cast<double>((n + 2) * (n + 3));
        const double B = 2.0 * static_cast<double>((n + 1) * (n + 3));
        const double C = static_cast<double>((n + 1) * (n + 2));
        const Complex xp1 = xn * xi;      // xi^{n+1}
        const Complex xp2 = xp1 * xi;     // xi^{n+2}
        const Complex xp3 = xp2 * xi;     // xi^{n+3}
        const Complex xbp1 = xbn * xib;   // conj(xi)^{n+1}
        const Complex xbp2 = xbp1 * xib;  // conj(xi)^{n+2}
        const Complex xbp3 = xbp2 * xib;  // conj(xi)^{n+3}

        j.F += 2.0 * l * xp3 - lb * xbp1 * (A + B * q + C * q * q);
        j.dF += 2.0 * (dn + 3.0) * l * xp2 - lb * (B * xbp2 + 2.0 * C * xi * xbp3);
        j.dbarF += -lb * xbn * ((dn + 1.0) * A + (dn + 2.0) * B * q + (dn + 3.0) * C * q * q);

        r_sum += (3.0 + dn + (1.0 + dn) * q) * 2.0 * (l * xp2).real();

        xn = xp1;
        xbn = xbp1;
    }

    j.r = -2.0 * r_sum / w;
    j.sigma0 = -std::conj(j.dbarF);
    j.h = s.h(xi);
    j.psi = j.dF + j.r - 2.0 * xib * j.F / w;
    return j;
}

double lagrangian_residual(const SectionCoefficients& s, Complex xi) {
    const SectionJet j = eval_jet(s, xi);
    const double w = 1.0 + std::norm(xi);
    const Complex res =
        j.dF - std::conj(j.dF) + 2.0 * (xi * std::conj(j.F) - std::conj(xi) * j.F) / w;
    return std::abs(res);
}

Complex minimality_residual(const SectionCoefficients& s, Complex xi, double step) {
    if (!(step > 0.0)) throw InvalidInput("minimality_residual: step must be > 0");
    auto slope = [&s](Complex z) {
        const SectionJet j = eval_jet(s, z);
        const double w = 1.0 + std::norm(z);
        return std::conj(j.dbarF) / (w * w);
    };
    return dbar_fd(slope, xi, step);
}

SpinCoefficients spin_coefficients(const SectionJet& j, double rdist) {
    const Complex psi = j.psi + rdist;
    const double denom = std::norm(j.dbarF) - std::norm(psi);
    const double scale = std::norm(j.dbarF) + std::norm(psi);
    if (std::abs(denom) <= 1e-14 * std::max(scale, 1e-300))
        throw DegeneratePoint("spin_coefficients: flat point, vanishing denominator");
    return SpinCoefficients{psi / denom, -std::conj(j.dbarF) / denom};
}

namespace {

// Multiplicity-robust Newton step on h/h' (simple zeros of h/h' at every zero
// of h regardless of order).
bool refine_zero(const SectionCoefficients& s, Complex& x, double box) {
    for (int it = 0; it < 80; ++it) {
        const Complex f = s.h(x);
        const Complex fp = s.h_prime(x);
        const Complex fpp = s.h_second(x);
        const Complex denom = fp * fp - f * fpp;
        if (std::abs(denom) == 0.0) return std::abs(f) <= 1e4 * s.degeneracy_scale(x);
        const Complex step = f * fp / denom;
        x -= step;
        if (!(std::isfinite(x.real()) && std::isfinite(x.imag()))) return false;
        if (std::abs(x) > 1e3 * box) return false;  // ran away
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    return std::abs(s.h(x)) <= 1e4 * s.degeneracy_scale(x);
}

int circle_winding(const SectionCoefficients& s, Complex center, double radius, int n,
                   double* min_abs = nullptr) {
    double total = 0.0;
    double prev_arg = 0.0;
    double mn = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n; ++k) {
        const double t = 2.0 * std::numbers::pi * k / n;
        const Complex z = center + radius * Complex(std::cos(t), std::sin(t));
        const Complex hz = s.h(z);
        mn = std::min(mn, std::abs(hz));
        const double a = std::arg(hz);
        if (k > 0) {
            double d = a - prev_arg;
            while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
            while (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
            total += d;
        }
        prev_arg = a;
    }
    if (min_abs) *min_abs = mn;
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

}  // namespace

int contour_winding(const SectionCoefficients& s, Complex center, double radius, int n) {
    double mn = 0.0;
    const int w = circle_winding(s, center, radius, n, &mn);
    if (mn <= 1e2 * s.degeneracy_scale(center + Complex(radius, 0.0)))
        throw BoundaryZero("contour_winding: slope vanishes on the contour");
    return w;
}

std::vector<UmbilicRecord> umbilic_points(const SectionCoefficients& s, Complex center,
                                          double radius, int grid) {
    if (!(radius > 0.0)) throw InvalidInput("umbilic_points: radius must be > 0");
    if (grid < 16) throw InvalidInput("umbilic_points: grid must be >= 16");
    if (s.zero_slope())
        throw InvalidInput("umbilic_points: slope vanishes identically, no isolated zeros");
    if (s.h_degree() == 0) return {};  // nonzero constant slope

    // Newton from a uniform grid over the bounding square, restricted to the disc.
    std::vector<Complex> zeros;
    const double dedup = 1e-8;
    for (int i = 0; i < grid; ++i) {
        for (int k = 0; k < grid; ++k) {
            Complex x = center + Complex(-radius + 2.0 * radius * (i + 0.5) / grid,
                                         -radius + 2.0 * radius * (k + 0.5) / grid);
            if (std::abs(x - center) > radius) continue;
            if (!refine_zero(s, x, std::abs(center) + radius)) continue;
            bool dup = false;
            for (const Complex& z : zeros)
                if (std::abs(z - x) < dedup) { dup = true; break; }
            if (!dup) zeros.push_back(x);
        }
    }

    const double band = std::max(1e-9, 1e-7 * radius);
    std::vector<UmbilicRecord> out;
    for (const Complex& z : zeros) {
        const double d = std::abs(z - center);
        if (d > radius + band) continue;
        if (std::abs(d - radius) <= band)
            throw BoundaryZero("umbilic_points: zero on the search boundary");
        // Small circle avoiding the other zeros and the boundary.
        double rr = 0.5 * (radius - d);
        for (const Complex& other : zeros)
            if (other != z) rr = std::min(rr, 0.5 * std::abs(other - z));
        rr = std::min(rr, 0.1 * std::max(1.0, radius));
        int w = 0;
        for (int attempt = 0; attempt < 8; ++attempt) {
            double mn = 0.0;
            w = circle_winding(s, z, rr, 256, &mn);
            if (mn > 1e2 * s.degeneracy_scale(z + Complex(rr, 0.0))) break;
            rr *= 0.5;
        }
        out.push_back(UmbilicRecord{z, w, -w});
    }
    std::sort(out.begin(), out.end(), [](const UmbilicRecord& a, const UmbilicRecord& b) {
        if (a.xi.real() != b.xi.real()) return a.xi.real() < b.xi.real();
        return a.xi.imag() < b.xi.imag();
    });
    return out;
}

}  // namespace congruence
