#include "congruence/weierstrass.hpp"

#include <cmath>

#include "congruence/errors.hpp"

namespace congruence {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

Complex horner(const std::vector<Complex>& c, Complex x, int drop) {
    // Evaluates the drop-th derivative of sum c_k x^k.
    Complex acc(0.0, 0.0);
    for (int k = static_cast<int>(c.size()) - 1; k >= drop; --k) {
        double f = 1.0;
        for (int m = 0; m < drop; ++m) f *= static_cast<double>(k - m);
        acc = acc * x + f * c[static_cast<std::size_t>(k)];
    }
    return acc;
}

struct Vec3 {
    double x, y, z;
};

Vec3 to_vec(const SurfacePoint& p) { return Vec3{p.z.real(), p.z.imag(), p.t}; }

Vec3 sub(Vec3 a, Vec3 b) { return Vec3{a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 scale(Vec3 a, double s) { return Vec3{a.x * s, a.y * s, a.z * s}; }
Vec3 add(Vec3 a, Vec3 b) { return Vec3{a.x + b.x, a.y + b.y, a.z + b.z}; }
double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Vec3 cross(Vec3 a, Vec3 b) {
    return Vec3{a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

}  // namespace

HolomorphicCurve::HolomorphicCurve(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(Complex(0.0, 0.0));
    for (const Complex& ck : c_)
        if (!finite(ck)) throw InvalidInput("HolomorphicCurve: non-finite coefficient");
}

Complex HolomorphicCurve::w(Complex nu) const { return horner(c_, nu, 0); }
Complex HolomorphicCurve::w1(Complex nu) const { return horner(c_, nu, 1); }
Complex HolomorphicCurve::w2(Complex nu) const { return horner(c_, nu, 2); }
Complex HolomorphicCurve::w3(Complex nu) const { return horner(c_, nu, 3); }

bool HolomorphicCurve::planar() const {
    for (std::size_t k = 3; k < c_.size(); ++k)
        if (c_[k] != Complex(0.0, 0.0)) return false;
    return true;
}

SurfacePoint embed(const HolomorphicCurve& w, Complex nu) {
    if (!finite(nu)) throw InvalidInput("embed: non-finite nu");
    const Complex nub = std::conj(nu);
    const Complex w0 = w.w(nu), d1 = w.w1(nu), d2 = w.w2(nu);
    SurfacePoint p;
    p.z = 0.5 * d2 - 0.5 * nub * nub * std::conj(d2) + nub * std::conj(d1) - std::conj(w0);
    p.t = (nu * d2 - d1).real();  // conjugate-symmetric expression, real part only
    return p;
}

LinePoint to_line(const HolomorphicCurve& w, Complex nu) {
    const SurfacePoint p = embed(w, nu);
    const Complex xi = -std::conj(nu);
    const Complex eta = 0.5 * (p.z - 2.0 * p.t * xi - std::conj(p.z) * xi * xi);
    return LinePoint{xi, eta};
}

Complex eta_derivative_form(const HolomorphicCurve& w, Complex xi) {
    // w is a function of nu = -conj(xi); expand term-wise:
    //   d^2/dxib^2 [ xib^k / (1+q) ] = k(k-1) xib^{k-2}/(1+q)
    //                                  - 2k xi xib^{k-1}/(1+q)^2
    //                                  + 2 xi^2 xib^k/(1+q)^3.
    const Complex xib = std::conj(xi);
    const double q = std::norm(xi);
    const double W = 1.0 + q;
    const auto& c = w.coeffs();
    std::vector<Complex> xbpow(c.size() + 1), xpow(c.size() + 1);
    xbpow[0] = xpow[0] = Complex(1.0, 0.0);
    for (std::size_t k = 1; k <= c.size(); ++k) {
        xbpow[k] = xbpow[k - 1] * xib;
        xpow[k] = xpow[k - 1] * xi;
    }
    Complex sum(0.0, 0.0);
    Complex wbar(0.0, 0.0);  // conj(w(-conj(xi))) = sum conj(c_k) (-1)^k xi^k
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double dk = static_cast<double>(k);
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        Complex term = 2.0 * xi * xi * xbpow[k];
        if (k >= 1) term -= 2.0 * dk * xi * xbpow[k - 1] * W;
        if (k >= 2) term += dk * (dk - 1.0) * xbpow[k - 2] * W * W;
        sum += c[k] * sgn * term;
        wbar += std::conj(c[k]) * sgn * xpow[k];
    }
    return 0.25 * sum - 0.5 * wbar;
}

double normal_check(const HolomorphicCurve& w, Complex nu, double step) {
    if (!(step > 0.0)) throw InvalidInput("normal_check: step must be > 0");
    if (std::abs(w.w3(nu)) < 1e-10)
        throw UmbilicPointError("normal_check: w''' vanishes, umbilic/branch point");

    const Complex xi = -std::conj(nu);
    const double W = 1.0 + std::norm(xi);
    // e0 components in the (x1, x2, x3) frame.
    const Complex P = 2.0 * xi / W;
    const Vec3 e0{P.real(), P.imag(), (1.0 - std::norm(xi)) / W};

    auto E = [&w](Complex v) { return to_vec(embed(w, v)); };
    const Vec3 dx = scale(sub(E(nu + step), E(nu - step)), 1.0 / (2.0 * step));
    const Vec3 dy = scale(sub(E(nu + Complex(0.0, step)), E(nu - Complex(0.0, step))),
                          1.0 / (2.0 * step));
    // d/dnu = (d/dx - i d/dy)/2, extended bilinearly against the real e0.
    const Complex inner(0.5 * (dot(e0, dx)), -0.5 * (dot(e0, dy)));
    return std::abs(inner);
}

Complex weierstrass_residual(const HolomorphicCurve& w, const SectionCoefficients& s,
                             Complex xi) {
    // d^3/dxib^3 of w(-xib) is -w'''(-xib); the display relates it to conj(h).
    return std::conj(s.h(xi)) + 0.25 * w.w3(-std::conj(xi));
}

namespace {

double mean_curvature_once(const HolomorphicCurve& w, Complex nu, double s, bool* ok) {
    auto E = [&w](Complex v) { return to_vec(embed(w, v)); };
    const Complex ex(s, 0.0), ey(0.0, s);
    const Vec3 c0 = E(nu);
    const Vec3 Xa = scale(sub(E(nu + ex), E(nu - ex)), 1.0 / (2.0 * s));
    const Vec3 Xb = scale(sub(E(nu + ey), E(nu - ey)), 1.0 / (2.0 * s));
    const Vec3 Xaa = scale(add(sub(E(nu + ex), scale(c0, 2.0)), E(nu - ex)), 1.0 / (s * s));
    const Vec3 Xbb = scale(add(sub(E(nu + ey), scale(c0, 2.0)), E(nu - ey)), 1.0 / (s * s));
    const Vec3 Xab = scale(sub(sub(E(nu + ex + ey), E(nu + ex - ey)),
                               sub(E(nu - ex + ey), E(nu - ex - ey))),
                           1.0 / (4.0 * s * s));

    const double Ec = dot(Xa, Xa), Fc = dot(Xa, Xb), Gc = dot(Xb, Xb);
    const double det = Ec * Gc - Fc * Fc;
    if (!(det > 1e-12 * (Ec + Gc) * (Ec + Gc) + 1e-300)) {
        *ok = false;
        return 0.0;
    }
    Vec3 n = cross(Xa, Xb);
    const double nn = std::sqrt(dot(n, n));
    n = scale(n, 1.0 / nn);
    const double L = dot(Xaa, n), M = dot(Xab, n), N = dot(Xbb, n);
    *ok = true;
    return (Ec * N - 2.0 * Fc * M + Gc * L) / (2.0 * det);
}

}  // namespace

double mean_curvature_numeric(const HolomorphicCurve& w, Complex nu, double step,
                              double refine_above) {
    if (!(step > 0.0)) throw InvalidInput("mean_curvature_numeric: step must be > 0");
    bool ok = false;
    const double H = mean_curvature_once(w, nu, step, &ok);
    if (!ok) throw ImmersionFailure("mean_curvature_numeric: degenerate first fundamental form");
    if (std::abs(H) <= refine_above) return H;
    bool ok2 = false;
    const double H2 = mean_curvature_once(w, nu, 0.5 * step, &ok2);
    if (!ok2) throw ImmersionFailure("mean_curvature_numeric: degenerate first fundamental form");
    return (4.0 * H2 - H) / 3.0;  // Richardson on the O(step^2) error
}

Mesh sample_mesh(const HolomorphicCurve& w, Complex center, double radius, int n) {
    if (n < 2) throw InvalidInput("sample_mesh: n must be >= 2");
    if (!(radius > 0.0)) throw InvalidInput("sample_mesh: radius must be > 0");
    Mesh m;
    m.n = n;
    m.vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            const Complex nu = center + Complex(-radius + 2.0 * radius * i / n,
                                                -radius + 2.0 * radius * j / n);
            m.vertices.push_back(embed(w, nu));
        }
    }
    m.faces.reserve(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int a = j * (n + 1) + i;
            m.faces.push_back({a, a + 1, a + n + 2, a + n + 1});
        }
    return m;
}

HolomorphicCurve curve_from_section(const SectionCoefficients& s) {
    std::vector<Complex> c(s.lambda().size() + 3, Complex(0.0, 0.0));
    for (std::size_t n = 0; n < s.lambda().size(); ++n) {
        const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
        c[n + 3] = 4.0 * sgn * std::conj(s.lambda()[n]);
    }
    return HolomorphicCurve(std::move(c));
}

SectionCoefficients section_from_curve(const HolomorphicCurve& w) {
    const auto& c = w.coeffs();
    const std::size_t m = (c.size() > 3) ? c.size() - 3 : 1;
    std::vector<Complex> lambda(m, Complex(0.0, 0.0));
    for (std::size_t n = 0; n + 3 < c.size(); ++n) {
        const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
        lambda[n] = 0.25 * sgn * std::conj(c[n + 3]);
    }
    return build_section(std::move(lambda), static_cast<int>(m) - 1);
}

}  // namespace congruence
