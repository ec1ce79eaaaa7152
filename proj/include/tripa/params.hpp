#pragma once

#include "tripa/rational.hpp"

#include <string>

namespace tripa {

// Model parameters (p, q, r). Kept as exact rationals so the floating and
// exact computation paths share a single source of truth.
//   p : probability of a new-vertex step (0 < p <= 1)
//   q : probability of weight-proportional triangle choice in an old step
//   r : probability of weight-proportional edge choice in a new-vertex step
struct ModelParams {
    Rational p, q, r;

    static ModelParams from_strings(const std::string& p_text,
                                    const std::string& q_text,
                                    const std::string& r_text);

    // throws std::invalid_argument when outside 0 < p <= 1, 0 <= q,r <= 1
    void validate() const;

    double pd() const { return to_double(p); }
    double qd() const { return to_double(q); }
    double rd() const { return to_double(r); }
};

// Constants driving every limit formula:
//   alpha1 = (1-p)q          weight-proportional old-step coefficient
//   alpha2 = 2pr/3           weight-proportional new-step coefficient
//   alpha  = alpha1 + alpha2 growth exponent
//   beta   = 2(1-r) + 3(1-p)(1-q)/p   uniform-selection coefficient
// A vertex of weight w takes part in step n with probability
// alpha*w/n + beta*p/V_{n-1}.
template <class T>
struct Constants {
    T alpha1{}, alpha2{}, alpha{}, beta{};
    T beta_p{};  // beta * p = 2p(1-r) + 3(1-p)(1-q), the 1/V coefficient
    // alpha == 0: no weight-proportional component. Accepted, but the
    // asymptotic operations refuse such constants.
    bool degenerate_alpha = false;
};

using DerivedConstants = Constants<double>;
using RationalConstants = Constants<Rational>;

RationalConstants derive_exact(const ModelParams& params);
DerivedConstants derive(const ModelParams& params);

// c_w = (alpha*w+beta+1)(alpha*(w-1)+beta+1)...(alpha+beta+1), the
// normalizing product for the explicit joint-distribution formula. The
// log form is usable where the product itself would overflow.
struct CwValue {
    double value;
    double log_value;
};

CwValue c_w(const DerivedConstants& constants, unsigned w);
Rational c_w_exact(const RationalConstants& constants, unsigned w);

}  // namespace tripa
