#include "tripa/params.hpp"

#include <cmath>
#include <stdexcept>

namespace tripa {

ModelParams ModelParams::from_strings(const std::string& p_text,
                                      const std::string& q_text,
                                      const std::string& r_text) {
    ModelParams params{parse_rational(p_text), parse_rational(q_text),
                       parse_rational(r_text)};
    params.validate();
    return params;
}

void ModelParams::validate() const {
    if (!(p > 0 && p <= 1))
        throw std::invalid_argument("p must satisfy 0 < p <= 1, got " + format_rational(p));
    if (!(q >= 0 && q <= 1))
        throw std::invalid_argument("q must satisfy 0 <= q <= 1, got " + format_rational(q));
    if (!(r >= 0 && r <= 1))
        throw std::invalid_argument("r must satisfy 0 <= r <= 1, got " + format_rational(r));
}

RationalConstants derive_exact(const ModelParams& params) {
    params.validate();
    const Rational one = 1;
    RationalConstants c;
    c.alpha1 = (one - params.p) * params.q;
    c.alpha2 = Rational(2) * params.p * params.r / 3;
    c.alpha = c.alpha1 + c.alpha2;
    c.beta = 2 * (one - params.r) + 3 * (one - params.p) * (one - params.q) / params.p;
    c.beta_p = c.beta * params.p;
    c.degenerate_alpha = c.alpha == 0;

    // sharp bound from the model: alpha <= 1 - p/3 < 1
    if (c.alpha1 < 0 || c.alpha2 < 0 || c.beta < 0 || c.alpha > one - params.p / 3)
        throw std::logic_error("derived constants out of range");
    return c;
}

DerivedConstants derive(const ModelParams& params) {
    const RationalConstants exact = derive_exact(params);
    DerivedConstants c;
    c.alpha1 = to_double(exact.alpha1);
    c.alpha2 = to_double(exact.alpha2);
    c.alpha = to_double(exact.alpha);
    c.beta = to_double(exact.beta);
    c.beta_p = to_double(exact.beta_p);
    c.degenerate_alpha = exact.degenerate_alpha;
    return c;
}

CwValue c_w(const DerivedConstants& constants, unsigned w) {
    if (w < 1) throw std::invalid_argument("c_w requires w >= 1");
    double value = 1.0;
    double log_value = 0.0;
    for (unsigned i = 1; i <= w; ++i) {
        const double factor = constants.alpha * i + constants.beta + 1.0;
        value *= factor;
        log_value += std::log(factor);
    }
    return {value, log_value};
}

Rational c_w_exact(const RationalConstants& constants, unsigned w) {
    if (w < 1) throw std::invalid_argument("c_w requires w >= 1");
    Rational value = 1;
    for (unsigned i = 1; i <= w; ++i)
        value *= constants.alpha * i + constants.beta + 1;
    return value;
}

}  // namespace tripa
