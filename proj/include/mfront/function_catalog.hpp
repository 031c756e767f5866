#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace mfront {

// Dense univariate polynomial, coefficients in ascending order.  Used for
// flux functions: keeping fluxes polynomial lets the steady-state machinery
// evaluate increments f(u0 + t) - f(u0) without cancellation (recentering is
// exact in exact arithmetic and backward-stable in floating point), which is
// what keeps branch constants meaningful when they differ from the boundary
// flux level by amounts far below machine epsilon relative to f itself.
class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);

    double operator()(double u) const;
    Polynomial derivative() const;
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<double>& coeffs() const { return coeffs_; }

    // Coefficients of p(u0 + t) as a polynomial in t (Taylor recentering by
    // repeated synthetic division).
    std::vector<double> recentered(double u0) const;

    // p(u0 + t) - p(u0), evaluated from the recentered coefficients with the
    // constant term dropped, so the result has full relative accuracy even
    // for |t| far below machine epsilon relative to |u0|.
    double increment_from(double u0, double t) const;

    Polynomial shifted_by_constant(double c) const;  // p + c

  private:
    std::vector<double> coeffs_;
};

// A spatial coefficient a(x) together with its derivative, built from a
// small named catalog so configuration files can select it declaratively:
//   constant:    value
//   exponential: scale * exp(rate * x)
//   polynomial:  coefficients c0 + c1 x + ...
//   rational:    p(x) / q(x), both polynomials
struct SpatialFunction {
    std::string kind;
    std::map<std::string, std::vector<double>> params;
    std::function<double(double)> eval;
    std::function<double(double)> deriv;

    double operator()(double x) const { return eval(x); }
};

SpatialFunction make_constant(double value);
SpatialFunction make_exponential(double scale, double rate);
SpatialFunction make_polynomial(std::vector<double> coeffs);
SpatialFunction make_rational(std::vector<double> num, std::vector<double> den);

// Dispatch by catalog name; throws std::invalid_argument for unknown kinds
// or malformed parameter lists.
SpatialFunction make_spatial_function(const std::string& kind,
                                      const std::map<std::string, std::vector<double>>& params);

}  // namespace mfront
