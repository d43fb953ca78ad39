#include "rieszlab/constants.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rieszlab {

namespace {

constexpr double kPi = std::numbers::pi;

// B_{2j} / (2j)! for j = 1..7; enough Euler-Maclaurin correction terms to
// push the truncation error below 1e-20 for exponents up to ~5 with a
// 24-term direct sum.
constexpr double kBernFact[7] = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
};

constexpr int kDirectTerms = 24;

// Euler-Maclaurin evaluation, valid for alpha > 1.
double zeta_em(double alpha) {
    double sum = 0.0;
    for (int k = kDirectTerms; k >= 1; --k) sum += std::pow(static_cast<double>(k), -alpha);
    const double x = kDirectTerms + 1.0;
    const double xa = std::pow(x, -alpha);
    sum += x * xa / (alpha - 1.0);  // x^(1-alpha)/(alpha-1)
    sum += 0.5 * xa;
    double poch = alpha;      // alpha (alpha+1) ... (alpha+2j-2)
    double xp = xa / x;       // x^(-alpha-2j+1)
    for (int j = 1; j <= 7; ++j) {
        sum += kBernFact[j - 1] * poch * xp;
        poch *= (alpha + 2.0 * j - 1.0) * (alpha + 2.0 * j);
        xp /= x * x;
    }
    return sum;
}

// Alternating-series evaluation with Chebyshev acceleration, valid for
// alpha > 0 away from 1; used on (0, 1) where Euler-Maclaurin's pole term
// flips sign.  The d_k weights make the truncation error decay like
// (3 + sqrt(8))^(-n).
double zeta_alternating(double alpha) {
    constexpr int n = 32;
    double d[n + 1];
    double t = 1.0 / n;  // term i of the binomial sum, starting at i = 0
    double acc = t;
    d[0] = n * acc;
    for (int i = 1; i <= n; ++i) {
        t *= 4.0 * (n + i - 1.0) * (n - i + 1.0) / ((2.0 * i) * (2.0 * i - 1.0));
        acc += t;
        d[i] = n * acc;
    }
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const double term = (d[k] - d[n]) / std::pow(k + 1.0, alpha);
        sum += (k % 2 == 0) ? term : -term;
    }
    const double eta = -sum / d[n];
    return eta / (1.0 - std::pow(2.0, 1.0 - alpha));
}

}  // namespace

double riemann_zeta(double alpha) {
    if (alpha == 1.0) throw std::domain_error("riemann_zeta: pole at alpha = 1");
    if (!(alpha > 0.0)) throw std::domain_error("riemann_zeta: requires alpha > 0");
    return alpha > 1.0 ? zeta_em(alpha) : zeta_alternating(alpha);
}

double dirichlet_L3(double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("dirichlet_L3: requires alpha > 0");

    // 3^alpha L(alpha) = sum_{k>=0} [(k+1/3)^-alpha - (k+2/3)^-alpha]; run
    // Euler-Maclaurin on both shifted tails with the terms paired so the
    // individual poles at alpha = 1 cancel explicitly.
    double sum = 0.0;
    for (int k = kDirectTerms - 1; k >= 0; --k)
        sum += std::pow(k + 1.0 / 3.0, -alpha) - std::pow(k + 2.0 / 3.0, -alpha);

    const double x = kDirectTerms + 1.0 / 3.0;
    const double y = kDirectTerms + 2.0 / 3.0;

    // (x^(1-alpha) - y^(1-alpha)) / (alpha - 1): the expm1 form subtracts the
    // two +1s exactly and stays conditioned through alpha -> 1, where the
    // limit is log(y/x).
    if (alpha == 1.0) {
        sum += std::log(y / x);
    } else {
        sum += (std::expm1((1.0 - alpha) * std::log(x)) -
                std::expm1((1.0 - alpha) * std::log(y))) /
               (alpha - 1.0);
    }

    const double xa = std::pow(x, -alpha), ya = std::pow(y, -alpha);
    sum += 0.5 * (xa - ya);
    double poch = alpha;
    double xp = xa / x, yp = ya / y;
    for (int j = 1; j <= 7; ++j) {
        sum += kBernFact[j - 1] * poch * (xp - yp);
        poch *= (alpha + 2.0 * j - 1.0) * (alpha + 2.0 * j);
        xp /= x * x;
        yp /= y * y;
    }
    return std::pow(3.0, -alpha) * sum;
}

double hex_zeta(double s) {
    if (s == 2.0) throw std::domain_error("hex_zeta: pole at s = 2");
    if (!(s > 0.0)) throw std::domain_error("hex_zeta: requires s > 0");
    // The norm form m^2 + mn + n^2 factors multiplicatively over the Eisenstein
    // integers; counting representations gives 6 * zeta * L3 at half the
    // exponent.
    return 6.0 * riemann_zeta(0.5 * s) * dirichlet_L3(0.5 * s);
}

double hex_zeta_direct(double s, double radius) {
    if (!(s > 2.0))
        throw std::domain_error("hex_zeta_direct: direct sum requires s > 2");
    if (!(radius >= 2.0)) throw std::invalid_argument("hex_zeta_direct: radius too small");

    const double r2max = radius * radius;
    const int bound = static_cast<int>(std::ceil(1.58 * radius)) + 2;
    double sum = 0.0;
    long count = 0;
    for (int m = -bound; m <= bound; ++m) {
        for (int n = -bound; n <= bound; ++n) {
            if (m == 0 && n == 0) continue;
            const double q = static_cast<double>(m) * m + static_cast<double>(m) * n +
                             static_cast<double>(n) * n;
            if (q > r2max) continue;
            sum += std::pow(q, -0.5 * s);
            ++count;
        }
    }
    // Replace the omitted terms by the continuum integral over the plane
    // beyond a disk of equal area (cell area sqrt(3)/2 per lattice point).
    const double cell = std::sqrt(3.0) / 2.0;
    const double r_eq = std::sqrt(static_cast<double>(count) * cell / kPi);
    const double tail = (2.0 * kPi / cell) * std::pow(r_eq, 2.0 - s) / (s - 2.0);
    return sum + tail;
}

double ewald_constant_with_radii(double real_radius, double dual_radius) {
    if (!(real_radius >= 10.0) || !(dual_radius >= 10.0))
        throw std::invalid_argument("ewald_constant: radii too small for the target accuracy");

    const double cell = std::sqrt(3.0) / 2.0;   // direct cell area
    const double dual_cell = 2.0 / std::sqrt(3.0);  // dual cell area

    // Direct-space part: exponentially screened lattice sum.
    double s1 = 0.0;
    {
        const double r2max = real_radius * real_radius;
        const int bound = static_cast<int>(std::ceil(1.58 * real_radius)) + 2;
        for (int m = -bound; m <= bound; ++m) {
            for (int n = -bound; n <= bound; ++n) {
                if (m == 0 && n == 0) continue;
                const double q = static_cast<double>(m) * m + static_cast<double>(m) * n +
                                 static_cast<double>(n) * n;
                if (q > r2max) continue;
                const double r = std::sqrt(q);
                s1 += std::exp(-r) / r;
            }
        }
    }

    // Dual-space part: algebraically decaying sum of
    // g(w) = 1 / (w sqrt(1+w^2) (w + sqrt(1+w^2))) at w = 2 pi |xi|,
    // with |xi|^2 = m^2 + (2n - m)^2 / 3 on the dual lattice.
    double s2 = 0.0;
    long count = 0;
    {
        const double r2max = dual_radius * dual_radius;
        const int bound = static_cast<int>(std::ceil(1.37 * dual_radius)) + 2;
        for (int m = -bound; m <= bound; ++m) {
            for (int n = -bound; n <= bound; ++n) {
                if (m == 0 && n == 0) continue;
                const double u = 2.0 * n - m;
                const double q = static_cast<double>(m) * m + u * u / 3.0;
                if (q > r2max) continue;
                const double w = 2.0 * kPi * std::sqrt(q);
                const double c = std::sqrt(1.0 + w * w);
                s2 += 1.0 / (w * c * (w + c));
                ++count;
            }
        }
    }
    // Continuum tail beyond the equal-area radius; the radial integral of
    // g(2 pi rho) rho is elementary (substitute w = sinh u).
    const double r_eq = std::sqrt(static_cast<double>(count) * dual_cell / kPi);
    const double w_eq = 2.0 * kPi * r_eq;
    const double tail = (1.0 / (2.0 * kPi * dual_cell)) /
                        (w_eq + std::sqrt(1.0 + w_eq * w_eq));

    const double continued = s1 + (2.0 * kPi / cell) * (s2 + tail) - 2.0 * kPi / cell - 1.0;
    // Half of the analytically continued lattice sum at exponent 1: the
    // screened constant that enters the surface-correction coefficients.
    return 0.5 * continued;
}

double ewald_constant() {
    static const double value = ewald_constant_with_radii(40.0, 120.0);
    return value;
}

double cs_coefficient(double s) {
    if (!(s > 0.0) || !(s < 2.0))
        throw std::domain_error("cs_coefficient: requires 0 < s < 2");
    return std::pow(std::sqrt(3.0) / (8.0 * kPi), 0.5 * s) * hex_zeta(s);
}

double basis_value(const ExpansionTerm& term, double n) {
    if (!(n > 0.0)) throw std::domain_error("basis_value: requires n > 0");
    double v = std::pow(n, term.power);
    if (term.log_factor) v *= std::log(n);
    return v;
}

double term_value(const ExpansionTerm& term, double n) {
    return term.coefficient * basis_value(term, n);
}

ExpansionCatalog expansion_catalog(int s) {
    constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
    ExpansionCatalog cat;
    cat.s = static_cast<double>(s);
    switch (s) {
        case 0:
            // Logarithmic case.  Leading terms are exact; the linear term has
            // a conjectured closed form recorded alongside the fitted value.
            cat.terms = {
                {"N^2", 2.0, false, 0.5 - std::log(2.0), Provenance::Proven, kNaN},
                {"NlogN", 1.0, true, -0.5, Provenance::Proven, kNaN},
                {"N", 1.0, false, -0.0547, Provenance::Free, -0.055605},
                {"logN", 0.0, true, 0.6000, Provenance::Free, kNaN},
                {"1", 0.0, false, -2.680, Provenance::Free, kNaN},
            };
            break;
        case 1:
            cat.terms = {
                {"N^2", 2.0, false, 1.0, Provenance::Proven, kNaN},
                {"N^1.5", 1.5, false, cs_coefficient(1.0), Provenance::Conjectured, kNaN},
                {"N", 1.0, false, 0.05123, Provenance::Free, kNaN},
                {"sqrtN", 0.5, false, -0.3207, Provenance::Free, kNaN},
            };
            break;
        case 2:
            cat.terms = {
                {"N^2logN", 2.0, true, 0.25, Provenance::Proven, kNaN},
                {"N^2", 2.0, false, -0.08576841030090248365, Provenance::Conjectured, kNaN},
                {"NlogN", 1.0, true, kNaN, Provenance::Free, kNaN},
                {"N", 1.0, false, kNaN, Provenance::Free, kNaN},
                {"logN", 0.0, true, kNaN, Provenance::Free, kNaN},
                {"1", 0.0, false, kNaN, Provenance::Free, kNaN},
            };
            break;
        case 3:
            cat.terms = {
                {"N^2.5", 2.5, false,
                 std::pow(std::sqrt(3.0) / (8.0 * kPi), 1.5) * hex_zeta(3.0),
                 Provenance::Conjectured, kNaN},
                {"N^2", 2.0, false, -0.25, Provenance::Conjectured, kNaN},
                {"N^1.5", 1.5, false, kNaN, Provenance::Free, kNaN},
                {"N", 1.0, false, kNaN, Provenance::Free, kNaN},
            };
            break;
        default:
            throw std::domain_error("expansion_catalog: catalogs exist for s in {0,1,2,3}");
    }
    return cat;
}

}  // namespace rieszlab
