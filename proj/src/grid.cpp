#include "mfront/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfront {

namespace {
void validate(const Grid1D& g) {
    if (g.ell <= 0.0) throw std::invalid_argument("Grid1D: ell must be positive");
    if (g.n() < 5) throw std::invalid_argument("Grid1D: need at least 5 nodes");
    for (int i = 0; i + 1 < g.n(); ++i)
        if (g.x[i + 1] <= g.x[i])
            throw std::invalid_argument("Grid1D: nodes must be strictly increasing");
}
}  // namespace

double Grid1D::min_cell_width() const {
    double w = x[1] - x[0];
    for (int i = 1; i + 1 < n(); ++i) w = std::min(w, x[i + 1] - x[i]);
    return w;
}

double Grid1D::min_cell_width_near(double center, double radius) const {
    double w = 2.0 * ell;
    for (int i = 0; i + 1 < n(); ++i) {
        const double mid = 0.5 * (x[i] + x[i + 1]);
        if (std::fabs(mid - center) <= radius) w = std::min(w, x[i + 1] - x[i]);
    }
    return w;
}

Grid1D Grid1D::make_uniform(double ell, int n) {
    Grid1D g;
    g.ell = ell;
    g.uniform = true;
    g.x.resize(n);
    g.h = 2.0 * ell / (n - 1);
    for (int i = 0; i < n; ++i) g.x[i] = -ell + g.h * i;
    g.x.front() = -ell;
    g.x.back() = ell;
    validate(g);
    return g;
}

Grid1D Grid1D::make_tanh_stretched(double ell, int n, double center, double strength) {
    if (std::fabs(center) >= ell)
        throw std::invalid_argument("Grid1D: stretch center must lie inside (-ell, ell)");
    if (strength <= 0.0) throw std::invalid_argument("Grid1D: stretch strength must be positive");
    Grid1D g;
    g.ell = ell;
    g.uniform = false;
    g.x.resize(n);
    const double t0 = std::tanh(strength);
    for (int i = 0; i < n; ++i) {
        const double eta = -1.0 + 2.0 * i / (n - 1);  // uniform reference coordinate
        // inverse-tanh grading: flat near eta = 0, so nodes bunch at the center
        const double s = std::atanh(eta * t0) / strength;
        g.x[i] = center + s * (s >= 0.0 ? (ell - center) : (ell + center));
    }
    g.x.front() = -ell;
    g.x.back() = ell;
    g.h = 0.0;
    for (int i = 0; i + 1 < n; ++i) g.h = std::max(g.h, g.x[i + 1] - g.x[i]);
    validate(g);
    return g;
}

double inner_product(const Grid1D& g, const std::vector<double>& u, const std::vector<double>& v) {
    if (static_cast<int>(u.size()) != g.n() || static_cast<int>(v.size()) != g.n())
        throw std::invalid_argument("inner_product: sample size does not match grid");
    double s = 0.0;
    for (int i = 0; i + 1 < g.n(); ++i)
        s += 0.5 * (u[i] * v[i] + u[i + 1] * v[i + 1]) * (g.x[i + 1] - g.x[i]);
    return s;
}

double l2_norm(const Grid1D& g, const std::vector<double>& u) {
    return std::sqrt(inner_product(g, u, u));
}

double linf_norm(const std::vector<double>& u) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::fabs(v));
    return m;
}

}  // namespace mfront
