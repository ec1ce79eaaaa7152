#include "tripa/theory.hpp"

#include <algorithm>
#include <cmath>

namespace tripa {

double weight_tail_asymptote(const DerivedConstants& constants, double w) {
    if (constants.alpha <= 0)
        throw std::domain_error("weight_tail_asymptote requires alpha > 0");
    if (w <= 0) throw std::invalid_argument("w must be positive");
    const double a = constants.alpha;
    const double b = constants.beta;
    const double log_value = std::lgamma(1.0 + (b + 1.0) / a) - std::lgamma(1.0 + b / a) -
                             std::log(a) - (1.0 + 1.0 / a) * std::log(w);
    return std::exp(log_value);
}

std::vector<std::vector<double>> joint_rows(const DerivedConstants& constants,
                                            std::vector<unsigned> rows) {
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    if (rows.empty() || rows.front() < 1)
        throw std::invalid_argument("joint_rows requires row indices >= 1");

    std::vector<std::vector<double>> out;
    std::vector<double> prev, cur;
    prev.push_back(1.0 / (constants.alpha + constants.beta + 1.0));  // w = 1
    auto next_row = rows.begin();
    if (*next_row == 1) {
        out.push_back(prev);
        ++next_row;
    }
    for (unsigned w = 2; next_row != rows.end(); ++w) {
        cur.assign(2 * w - 1, 0.0);
        const double denom = constants.alpha * w + constants.beta + 1.0;
        const double a1w = constants.alpha1 * (w - 1);
        const double a2w = constants.alpha2 * (w - 1);
        const auto prev_at = [&](unsigned d) -> double {
            return (d >= 2 && d <= 2 * (w - 1)) ? prev[d - 2] : 0.0;
        };
        for (unsigned d = 2; d <= 2 * w; ++d)
            cur[d - 2] = (a1w * prev_at(d) + a2w * prev_at(d - 1) +
                          constants.beta * prev_at(d - 2)) /
                         denom;
        if (w == *next_row) {
            out.push_back(cur);
            ++next_row;
        }
        prev.swap(cur);
    }
    return out;
}

std::vector<BigInt> elementary_sums(unsigned n) {
    // S_n(k) = S_{n-1}(k) + n * S_{n-1}(k-1)
    std::vector<BigInt> s(n + 1);
    s[0] = 1;
    for (unsigned m = 1; m <= n; ++m)
        for (unsigned k = std::min(m, n); k >= 1; --k) s[k] += BigInt(m) * s[k - 1];
    return s;
}

BigInt elementary_sum(unsigned n, unsigned k) {
    if (k > n) return 0;
    return elementary_sums(n)[k];
}

Rational joint_explicit_exact(const RationalConstants& constants, unsigned d, unsigned w) {
    if (w < 1 || d < 2 || d > 2 * w) return Rational(0);
    const Rational cw = c_w_exact(constants, w);

    // polynomial route: coefficient of z^(d-2) in prod_{i=1}^{w-1} (i alpha1 + i alpha2 z + beta z^2)
    std::vector<Rational> coeffs{Rational(1)};
    for (unsigned i = 1; i <= w - 1; ++i) {
        std::vector<Rational> next(coeffs.size() + 2, Rational(0));
        const Rational c0 = constants.alpha1 * Rational(i);
        const Rational c1 = constants.alpha2 * Rational(i);
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            if (coeffs[j] == 0) continue;
            next[j] += coeffs[j] * c0;
            next[j + 1] += coeffs[j] * c1;
            next[j + 2] += coeffs[j] * constants.beta;
        }
        coeffs = std::move(next);
    }
    const Rational from_poly =
        (d - 2 < coeffs.size() ? coeffs[d - 2] : Rational(0)) / cw;

    // summation route over the number k of weight-2 degree increments
    const std::vector<BigInt> sums = elementary_sums(w - 1);
    Rational accum(0);
    for (unsigned k = 1; k <= w; ++k) {
        if (d < 2 * k) break;                    // binomial lower index negative
        const unsigned top = w - k;
        const unsigned pick = d - 2 * k;
        if (pick > top) continue;                // binomial zero
        Rational term(sums[top]);
        term *= Rational(binomial(top, pick));
        term *= pow_nn(constants.alpha1, w - d + k);
        term *= pow_nn(constants.alpha2, pick);
        term *= pow_nn(constants.beta, k - 1);
        accum += term;
    }
    const Rational from_sum = accum / cw;

    if (from_poly != from_sum)
        throw std::logic_error("explicit-formula routes disagree at (d=" +
                               std::to_string(d) + ", w=" + std::to_string(w) + ")");
    return from_poly;
}

double sum_law_mean(const DerivedConstants& constants, unsigned w) {
    double mean = 2.0;
    for (unsigned i = 2; i <= w; ++i) {
        const double denom = constants.alpha * (i - 1) + constants.beta;
        if (denom == 0) throw std::domain_error("xi law undefined: alpha(w-1)+beta = 0");
        mean += (constants.alpha2 * (i - 1) + 2.0 * constants.beta) / denom;
    }
    return mean;
}

double gaussian_joint(const DerivedConstants& constants, unsigned d, unsigned w,
                      double x_w) {
    if (constants.alpha1 <= 0 || constants.alpha2 <= 0)
        throw std::domain_error("gaussian_joint requires alpha1 > 0 and alpha2 > 0");
    if (w < 1) throw std::invalid_argument("gaussian_joint requires w >= 1");
    const double a1 = constants.alpha1;
    const double a2 = constants.alpha2;
    const double a = constants.alpha;
    const double dev = a * d - a2 * w;
    return x_w * a / std::sqrt(2.0 * M_PI * a1 * a2 * w) *
           std::exp(-dev * dev / (2.0 * a1 * a2 * w));
}

double gaussian_joint(const DerivedConstants& constants, unsigned d, unsigned w) {
    return gaussian_joint(constants, d, w, weight_dist(constants, w).at(w));
}

namespace {

unsigned auto_cutoff(const DerivedConstants& constants, double tail_tolerance) {
    double x = 1.0 / (constants.alpha + constants.beta + 1.0);
    unsigned w = 1;
    constexpr unsigned kMaxCutoff = 200'000'000;
    while (x * (constants.alpha * w + constants.beta) >= tail_tolerance) {
        ++w;
        if (w > kMaxCutoff)
            throw std::domain_error("degree_marginal: tail tolerance unreachable");
        x *= (constants.alpha * (w - 1) + constants.beta) /
             (constants.alpha * w + constants.beta + 1.0);
    }
    return w;
}

}  // namespace

DegreeMarginal degree_marginal(const DerivedConstants& constants, unsigned d_max,
                               double tail_tolerance, unsigned w_cutoff) {
    if (d_max < 2) throw std::invalid_argument("degree_marginal requires d_max >= 2");
    if (constants.alpha == 0 && constants.beta == 0)
        throw std::domain_error("degree_marginal undefined for alpha = beta = 0");
    if (w_cutoff == 0) w_cutoff = auto_cutoff(constants, tail_tolerance);

    DegreeMarginal result;
    result.d_max = d_max;
    result.w_cutoff = w_cutoff;
    result.values.assign(d_max - 1, 0.0);

    // rolling rows capped at d_max: entries with d > d_max never feed back
    // into d <= d_max because the recursion only looks at smaller d
    std::vector<double> prev(d_max + 1, 0.0), cur(d_max + 1, 0.0);
    double x_w = 1.0 / (constants.alpha + constants.beta + 1.0);
    prev[2] = x_w;
    result.values[0] = x_w;
    for (unsigned w = 2; w <= w_cutoff; ++w) {
        const double denom = constants.alpha * w + constants.beta + 1.0;
        const double a1w = constants.alpha1 * (w - 1);
        const double a2w = constants.alpha2 * (w - 1);
        const unsigned d_hi = std::min<unsigned>(d_max, 2 * w);
        for (unsigned d = 2; d <= d_hi; ++d)
            cur[d] = (a1w * prev[d] + a2w * prev[d - 1] + constants.beta * prev[d - 2]) /
                     denom;
        for (unsigned d = d_hi + 1; d <= d_max; ++d) cur[d] = 0.0;
        for (unsigned d = 2; d <= d_hi; ++d) result.values[d - 2] += cur[d];
        prev.swap(cur);
        x_w *= (constants.alpha * (w - 1) + constants.beta) / denom;
    }
    result.truncation_bound = weight_tail_mass(constants, x_w, w_cutoff);
    if (result.truncation_bound >= tail_tolerance)
        throw std::invalid_argument("degree_marginal: w_cutoff leaves tail above tolerance");
    return result;
}

double degree_tail_asymptote(const DerivedConstants& constants, double d) {
    if (constants.alpha <= 0 || constants.alpha2 <= 0)
        throw std::domain_error("degree_tail_asymptote requires alpha > 0 and alpha2 > 0");
    if (d <= 0) throw std::invalid_argument("d must be positive");
    const double a = constants.alpha;
    const double b = constants.beta;
    const double log_value = std::lgamma(1.0 + (b + 1.0) / a) - std::lgamma(1.0 + b / a) -
                             std::log(constants.alpha2) -
                             (1.0 + 1.0 / a) * std::log(a * d / constants.alpha2);
    return std::exp(log_value);
}

double participation_probability(const DerivedConstants& constants, std::uint64_t w,
                                 std::uint64_t n, std::uint64_t vertex_count) {
    if (n < 1 || vertex_count < 3 || w < 1 || w > n)
        throw std::invalid_argument("participation_probability: need n >= 1, V >= 3, 1 <= w <= n");
    const double value = constants.alpha * static_cast<double>(w) / static_cast<double>(n) +
                         constants.beta_p / static_cast<double>(vertex_count);
    if (value > 1.0)
        throw std::domain_error("participation probability exceeds 1: inconsistent state");
    return value;
}

}  // namespace tripa
