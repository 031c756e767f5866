#include "mfront/function_catalog.hpp"

#include <cmath>
#include <stdexcept>

namespace mfront {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_ = {0.0};
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double u) const {
    double r = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * u + *it;
    return r;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial({0.0});
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k)
        d[k - 1] = coeffs_[k] * static_cast<double>(k);
    return Polynomial(std::move(d));
}

std::vector<double> Polynomial::recentered(double u0) const {
    // Repeated synthetic division: after the k-th pass the running remainder
    // is the coefficient of t^k in p(u0 + t).
    std::vector<double> work = coeffs_;
    const std::size_t n = work.size();
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        double rem = work[n - 1];
        for (std::size_t j = n - 1; j-- > k;) {
            rem = work[j] + rem * u0;
            work[j] = rem;
        }
        out[k] = work[k];
    }
    return out;
}

double Polynomial::increment_from(double u0, double t) const {
    const std::vector<double> c = recentered(u0);
    double r = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) r = r * t + c[k];
    return r * t;
}

Polynomial Polynomial::shifted_by_constant(double c) const {
    std::vector<double> out = coeffs_;
    out[0] += c;
    return Polynomial(std::move(out));
}

namespace {

const std::vector<double>& require_param(
    const std::map<std::string, std::vector<double>>& params, const std::string& name,
    const std::string& kind) {
    auto it = params.find(name);
    if (it == params.end())
        throw std::invalid_argument("spatial function '" + kind + "': missing parameter '" +
                                    name + "'");
    return it->second;
}

double require_scalar(const std::map<std::string, std::vector<double>>& params,
                      const std::string& name, const std::string& kind) {
    const auto& v = require_param(params, name, kind);
    if (v.size() != 1)
        throw std::invalid_argument("spatial function '" + kind + "': parameter '" + name +
                                    "' must be a single number");
    return v[0];
}

}  // namespace

SpatialFunction make_constant(double value) {
    SpatialFunction f;
    f.kind = "constant";
    f.params = {{"value", {value}}};
    f.eval = [value](double) { return value; };
    f.deriv = [](double) { return 0.0; };
    return f;
}

SpatialFunction make_exponential(double scale, double rate) {
    SpatialFunction f;
    f.kind = "exponential";
    f.params = {{"scale", {scale}}, {"rate", {rate}}};
    f.eval = [scale, rate](double x) { return scale * std::exp(rate * x); };
    f.deriv = [scale, rate](double x) { return scale * rate * std::exp(rate * x); };
    return f;
}

SpatialFunction make_polynomial(std::vector<double> coeffs) {
    SpatialFunction f;
    f.kind = "polynomial";
    f.params = {{"coeffs", coeffs}};
    Polynomial p(std::move(coeffs));
    Polynomial dp = p.derivative();
    f.eval = [p](double x) { return p(x); };
    f.deriv = [dp](double x) { return dp(x); };
    return f;
}

SpatialFunction make_rational(std::vector<double> num, std::vector<double> den) {
    SpatialFunction f;
    f.kind = "rational";
    f.params = {{"num", num}, {"den", den}};
    Polynomial p(std::move(num)), q(std::move(den));
    Polynomial dp = p.derivative(), dq = q.derivative();
    f.eval = [p, q](double x) {
        const double qx = q(x);
        if (qx == 0.0) throw std::domain_error("rational coefficient: denominator zero");
        return p(x) / qx;
    };
    f.deriv = [p, q, dp, dq](double x) {
        const double qx = q(x);
        if (qx == 0.0) throw std::domain_error("rational coefficient: denominator zero");
        return (dp(x) * qx - p(x) * dq(x)) / (qx * qx);
    };
    return f;
}

SpatialFunction make_spatial_function(
    const std::string& kind, const std::map<std::string, std::vector<double>>& params) {
    if (kind == "constant") return make_constant(require_scalar(params, "value", kind));
    if (kind == "exponential")
        return make_exponential(require_scalar(params, "scale", kind),
                                require_scalar(params, "rate", kind));
    if (kind == "polynomial") return make_polynomial(require_param(params, "coeffs", kind));
    if (kind == "rational")
        return make_rational(require_param(params, "num", kind),
                             require_param(params, "den", kind));
    throw std::invalid_argument("spatial function: unknown kind '" + kind + "'");
}

}  // namespace mfront
