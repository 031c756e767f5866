#pragma once

#include <vector>

namespace mfront {

// One-dimensional mesh on [-ell, ell].  Nodes are strictly increasing and
// include both endpoints.  The uniform factory is the default; the stretched
// factory clusters nodes around a given center with a tanh map, for runs
// where the interface location is known in advance.
struct Grid1D {
    double ell = 0.0;
    std::vector<double> x;
    bool uniform = true;
    double h = 0.0;  // node spacing when uniform, max cell width otherwise

    int n() const { return static_cast<int>(x.size()); }
    double cell_width(int i) const { return x[i + 1] - x[i]; }
    double min_cell_width() const;
    double min_cell_width_near(double center, double radius) const;

    static Grid1D make_uniform(double ell, int n);
    static Grid1D make_tanh_stretched(double ell, int n, double center, double strength);
};

// Trapezoid inner product of two nodal samples (the discrete L2 pairing used
// for all projections; endpoint values get half weight).
double inner_product(const Grid1D& g, const std::vector<double>& u, const std::vector<double>& v);
double l2_norm(const Grid1D& g, const std::vector<double>& u);
double linf_norm(const std::vector<double>& u);

}  // namespace mfront
