#include "polarity/tailfit/hurwitz_zeta.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace polarity::tailfit {

namespace {

// B_{2j} / (2j)! for j = 1..8
constexpr std::array<double, 8> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
};

}  // namespace

double hurwitz_zeta(double s, double q) {
    if (!(s > 1.0) || !(q > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    // Sum the head directly until the shifted argument is large enough for
    // the asymptotic tail to converge quickly.
    const double shift_to = 20.0 + s;
    double sum = 0.0;
    double a = q;
    while (a < shift_to) {
        sum += std::pow(a, -s);
        a += 1.0;
    }
    const double a_pow = std::pow(a, -s);
    sum += a * a_pow / (s - 1.0) + 0.5 * a_pow;
    double rising = s;  // s (s+1) ... (s+2j-2)
    double a_term = a_pow / a;  // a^{-s-2j+1}
    const double inv_a2 = 1.0 / (a * a);
    for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
        const double term = kBernoulliOverFactorial[j] * rising * a_term;
        sum += term;
        if (std::abs(term) < 1e-17 * sum) break;
        const double k = static_cast<double>(2 * j + 2);
        rising *= (s + k - 1.0) * (s + k);
        a_term *= inv_a2;
    }
    return sum;
}

}  // namespace polarity::tailfit
