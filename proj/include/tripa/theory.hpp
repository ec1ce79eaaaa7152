#pragma once

#include "tripa/params.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace tripa {

// --- limiting weight distribution ------------------------------------------

// x_1 = 1/(alpha+beta+1), x_w = x_{w-1} * (alpha(w-1)+beta)/(alpha*w+beta+1)
template <class T>
struct WeightDistribution {
    unsigned w_max = 0;
    std::vector<T> values;  // values[w-1] = x_w

    const T& at(unsigned w) const {
        if (w < 1 || w > w_max) throw std::out_of_range("weight index");
        return values[w - 1];
    }
};

template <class T>
WeightDistribution<T> weight_dist(const Constants<T>& constants, unsigned w_max) {
    if (w_max < 1) throw std::invalid_argument("weight_dist requires W_max >= 1");
    if (constants.alpha == T(0) && constants.beta == T(0))
        throw std::domain_error("weight_dist undefined for alpha = beta = 0");
    WeightDistribution<T> dist;
    dist.w_max = w_max;
    dist.values.resize(w_max);
    dist.values[0] = T(1) / (constants.alpha + constants.beta + T(1));
    for (unsigned w = 2; w <= w_max; ++w)
        dist.values[w - 1] = dist.values[w - 2] *
                             (constants.alpha * T(w - 1) + constants.beta) /
                             (constants.alpha * T(w) + constants.beta + T(1));
    return dist;
}

// Exact remaining mass above w_cutoff: sum_{w > W} x_w = x_W * (alpha*W + beta).
// Follows from the recursion by telescoping; the floating version is used as
// the reported truncation bound.
template <class T>
T weight_tail_mass(const Constants<T>& constants, const T& x_at_cutoff, unsigned w_cutoff) {
    return x_at_cutoff * (constants.alpha * T(w_cutoff) + constants.beta);
}

// Gamma(1+(beta+1)/alpha) / (alpha*Gamma(1+beta/alpha)) * w^-(1+1/alpha);
// refuses alpha = 0 (the tail exponent would be infinite).
double weight_tail_asymptote(const DerivedConstants& constants, double w);

// --- joint weight/degree distribution ---------------------------------------

// Triangular array x_{d,w}, 1 <= w <= w_max, 2 <= d <= 2w; zero outside.
template <class T>
struct JointTable {
    unsigned w_max = 0;
    std::vector<T> data;  // row w at offset (w-1)^2, entries d = 2..2w

    explicit JointTable(unsigned w_max_) : w_max(w_max_) {
        data.resize(static_cast<std::size_t>(w_max) * w_max);
    }

    static std::size_t offset(unsigned w) {
        return static_cast<std::size_t>(w - 1) * (w - 1);
    }

    T at(unsigned d, unsigned w) const {
        if (w < 1 || w > w_max || d < 2 || d > 2 * w) return T(0);
        return data[offset(w) + (d - 2)];
    }

    T& cell(unsigned d, unsigned w) { return data[offset(w) + (d - 2)]; }

    T row_sum(unsigned w) const {
        T sum(0);
        for (unsigned d = 2; d <= 2 * w; ++d) sum += data[offset(w) + (d - 2)];
        return sum;
    }
};

// x_{2,1} = 1/(alpha+beta+1);
// x_{d,w} = [alpha1(w-1)x_{d,w-1} + alpha2(w-1)x_{d-1,w-1} + beta x_{d-2,w-1}]
//           / (alpha*w + beta + 1), out-of-range entries read as zero.
template <class T>
JointTable<T> joint_recursion(const Constants<T>& constants, unsigned w_max) {
    if (w_max < 1) throw std::invalid_argument("joint_recursion requires W_max >= 1");
    JointTable<T> table(w_max);
    table.cell(2, 1) = T(1) / (constants.alpha + constants.beta + T(1));
    for (unsigned w = 2; w <= w_max; ++w) {
        const T denom = constants.alpha * T(w) + constants.beta + T(1);
        const T a1w = constants.alpha1 * T(w - 1);
        const T a2w = constants.alpha2 * T(w - 1);
        for (unsigned d = 2; d <= 2 * w; ++d) {
            T value = a1w * table.at(d, w - 1) + a2w * table.at(d - 1, w - 1);
            if (d >= 4) value += constants.beta * table.at(d - 2, w - 1);
            table.cell(d, w) = value / denom;
        }
    }
    return table;
}

// Selected rows x_{.,w} (indexed d-2, length 2w-1) computed with two rolling
// rows; for w too large to store the full triangle.
std::vector<std::vector<double>> joint_rows(const DerivedConstants& constants,
                                            std::vector<unsigned> rows);

// --- explicit solution (exact oracle) ---------------------------------------

// S_n(k) for k = 0..n: elementary symmetric sums of {1,...,n}; S_n(0) = 1.
std::vector<BigInt> elementary_sums(unsigned n);

// single value; k > n yields 0 (empty sum)
BigInt elementary_sum(unsigned n, unsigned k);

// Closed form for x_{d,w}: coefficient of z^{d-2} in
//   (1/c_w) * prod_{i=1}^{w-1} (i*(alpha1 + alpha2 z) + beta z^2),
// cross-checked exactly against the equivalent summation
//   (1/c_w) * sum_k S_{w-1}(w-k) C(w-k, d-2k) alpha1^{w-d+k} alpha2^{d-2k} beta^{k-1}.
// Out-of-range (d,w) gives exact zero.
Rational joint_explicit_exact(const RationalConstants& constants, unsigned d, unsigned w);

// --- increment-law construction ---------------------------------------------

// Law of the degree increment xi_w attached to the w-th weight increment:
// xi_1 == 2; for w >= 2 the probabilities of {0,1,2} are
// alpha1(w-1), alpha2(w-1), beta over alpha(w-1)+beta.
template <class T>
struct XiLaw {
    unsigned w = 1;
    T prob0{}, prob1{}, prob2{};
};

template <class T>
XiLaw<T> xi_law(const Constants<T>& constants, unsigned w) {
    if (w < 1) throw std::invalid_argument("xi_law requires w >= 1");
    XiLaw<T> law;
    law.w = w;
    if (w == 1) {
        law.prob2 = T(1);
        return law;
    }
    const T denom = constants.alpha * T(w - 1) + constants.beta;
    if (denom == T(0))
        throw std::domain_error("xi_law undefined: alpha(w-1)+beta = 0");
    law.prob0 = constants.alpha1 * T(w - 1) / denom;
    law.prob1 = constants.alpha2 * T(w - 1) / denom;
    law.prob2 = constants.beta / denom;
    return law;
}

// pmf of S_w = xi_1 + ... + xi_w, indexed d-2 over support [2, 2w]
template <class T>
std::vector<T> sum_law_pmf(const Constants<T>& constants, unsigned w) {
    if (w < 1) throw std::invalid_argument("sum_law_pmf requires w >= 1");
    std::vector<T> pmf{T(1)};  // S_1 == 2
    for (unsigned i = 2; i <= w; ++i) {
        const XiLaw<T> law = xi_law(constants, i);
        std::vector<T> next(pmf.size() + 2, T(0));
        for (std::size_t j = 0; j < pmf.size(); ++j) {
            if (pmf[j] == T(0)) continue;
            next[j] += pmf[j] * law.prob0;
            next[j + 1] += pmf[j] * law.prob1;
            next[j + 2] += pmf[j] * law.prob2;
        }
        pmf = std::move(next);
    }
    return pmf;
}

// E S_w; the deviation from (alpha2/alpha)w grows like
// (alpha+alpha1)beta/alpha^2 * log w
double sum_law_mean(const DerivedConstants& constants, unsigned w);

// --- asymptotic forms --------------------------------------------------------

// x_w * alpha/sqrt(2 pi alpha1 alpha2 w) * exp(-(alpha d - alpha2 w)^2 / (2 alpha1 alpha2 w));
// requires alpha1 > 0 and alpha2 > 0.
double gaussian_joint(const DerivedConstants& constants, unsigned d, unsigned w, double x_w);
double gaussian_joint(const DerivedConstants& constants, unsigned d, unsigned w);

// u_d = sum_{w >= d/2} x_{d,w}, truncated at w_cutoff
struct DegreeMarginal {
    unsigned d_max = 0;
    unsigned w_cutoff = 0;
    double truncation_bound = 0;       // exact mass above w_cutoff
    std::vector<double> values;        // values[d-2] = u_d, d = 2..d_max

    double at(unsigned d) const {
        if (d < 2 || d > d_max) throw std::out_of_range("degree index");
        return values[d - 2];
    }
};

// w_cutoff == 0 selects the smallest cutoff whose remaining mass is below
// tail_tolerance; an explicit cutoff must still meet the tolerance.
DegreeMarginal degree_marginal(const DerivedConstants& constants, unsigned d_max,
                               double tail_tolerance = 1e-8, unsigned w_cutoff = 0);

// Gamma(1+(beta+1)/alpha) / (alpha2 * Gamma(1+beta/alpha)) * (alpha*d/alpha2)^-(1+1/alpha)
double degree_tail_asymptote(const DerivedConstants& constants, double d);

// Probability that a fixed vertex of weight w takes part in step n when the
// graph has V vertices: alpha*w/n + beta*p/V. Independent of the degree.
double participation_probability(const DerivedConstants& constants, std::uint64_t w,
                                 std::uint64_t n, std::uint64_t vertex_count);

}  // namespace tripa
