#include "lpfsi/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace lpfsi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 4-point Gauss-Legendre on [0, 1].
constexpr double kG4x[4] = {0.06943184420297371, 0.33000947820757187,
                            0.6699905217924281, 0.9305681557970262};
constexpr double kG4w[4] = {0.1739274225687269, 0.3260725774312731,
                            0.3260725774312731, 0.1739274225687269};

// Degree-5 7-point rule on the reference triangle (barycentric).
constexpr double kT7b[7][3] = {
    {1.0 / 3, 1.0 / 3, 1.0 / 3},
    {0.7974269853530873, 0.1012865073234563, 0.1012865073234563},
    {0.1012865073234563, 0.7974269853530873, 0.1012865073234563},
    {0.1012865073234563, 0.1012865073234563, 0.7974269853530873},
    {0.0597158717897698, 0.4701420641051151, 0.4701420641051151},
    {0.4701420641051151, 0.0597158717897698, 0.4701420641051151},
    {0.4701420641051151, 0.4701420641051151, 0.0597158717897698}};
constexpr double kT7w[7] = {0.225,
                            0.1259391805448271, 0.1259391805448271, 0.1259391805448271,
                            0.1323941527885062, 0.1323941527885062, 0.1323941527885062};

struct CellMap {
    std::function<Vec2(double, double)> point;
    std::function<double(double, double)> jacobian;
};

double cell_rule(const Integrand& f, const CellMap& map, double a, double b, double c,
                 double d) {
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double u = a + (b - a) * kG4x[i];
        for (int j = 0; j < 4; ++j) {
            const double v = c + (d - c) * kG4x[j];
            sum += kG4w[i] * kG4w[j] * f(map.point(u, v)) * map.jacobian(u, v);
        }
    }
    return sum * (b - a) * (d - c);
}

struct Cell {
    double a, b, c, d;
    double coarse;
    int depth;
};

std::vector<Cell> initial_grid(int nu, int nv) {
    std::vector<Cell> cells;
    cells.reserve(nu * nv);
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j)
            cells.push_back({double(i) / nu, double(i + 1) / nu, double(j) / nv,
                             double(j + 1) / nv, 0.0, 0});
    return cells;
}

QuadratureResult adapt_pass(const Integrand& f, const CellMap& map,
                            const std::vector<Cell>& grid, double tol_total,
                            const QuadratureSpec& spec) {
    QuadratureResult res;
    std::vector<Cell> stack = grid;
    for (Cell& cell : stack) cell.coarse = cell_rule(f, map, cell.a, cell.b, cell.c, cell.d);
    const double per_cell_tol = 0.5 * tol_total / std::max<size_t>(stack.size(), 1);

    while (!stack.empty()) {
        const Cell cell = stack.back();
        stack.pop_back();
        ++res.cells;
        if (res.cells > spec.max_cells) {
            res.value += cell.coarse;
            for (const Cell& rest : stack) res.value += rest.coarse;
            res.error = std::max(res.error, tol_total);
            throw quadrature_error("quadrature cell budget exhausted", res);
        }
        const double am = 0.5 * (cell.a + cell.b), cm = 0.5 * (cell.c + cell.d);
        const Cell kids[4] = {{cell.a, am, cell.c, cm, 0.0, cell.depth + 1},
                              {am, cell.b, cell.c, cm, 0.0, cell.depth + 1},
                              {cell.a, am, cm, cell.d, 0.0, cell.depth + 1},
                              {am, cell.b, cm, cell.d, 0.0, cell.depth + 1}};
        double fine = 0.0, kid_val[4];
        for (int k = 0; k < 4; ++k) {
            kid_val[k] = cell_rule(f, map, kids[k].a, kids[k].b, kids[k].c, kids[k].d);
            fine += kid_val[k];
        }
        const double err = std::abs(fine - cell.coarse);
        const double local_tol = std::max(per_cell_tol * std::pow(0.7, cell.depth),
                                          0.02 * per_cell_tol);
        if (err < local_tol || cell.depth >= 26) {
            res.value += fine;
            res.error += err / 15.0;
        } else {
            for (int k = 0; k < 4; ++k) {
                Cell kid = kids[k];
                kid.coarse = kid_val[k];
                stack.push_back(kid);
            }
        }
    }
    return res;
}

/// Run passes until the accumulated estimate meets the spec tolerance,
/// bootstrapping the scale from a coarse sweep.
QuadratureResult adapt_until(const Integrand& f, const CellMap& map,
                             const std::vector<Cell>& grid, const QuadratureSpec& spec) {
    std::vector<Cell> scout = grid;
    double i0 = 0.0;
    for (Cell& cell : scout) i0 += cell_rule(f, map, cell.a, cell.b, cell.c, cell.d);

    double scale = std::abs(i0);
    QuadratureResult res;
    for (int attempt = 0; attempt < 3; ++attempt) {
        const double tol = std::max(spec.abs_tolerance, spec.rel_tolerance * std::max(scale, 1e-30));
        res = adapt_pass(f, map, grid, tol, spec);
        scale = std::max(scale, std::abs(res.value));
        if (res.error <= std::max(spec.abs_tolerance, spec.rel_tolerance * scale)) return res;
    }
    throw quadrature_error("quadrature failed to meet tolerance", res);
}

// Piecewise-rational polygon radius about a star center, with a binary-search
// lookup over vertex angles.
class StarProfile {
public:
    StarProfile(const PanelBoundary& body, const Vec2& center) : center_(center) {
        const int n = body.n_panels();
        verts_.reserve(n);
        for (int i = 0; i < n; ++i) verts_.push_back(body.endpoints[i] - center);
        angles_.resize(n);
        int start = 0;
        for (int i = 0; i < n; ++i) {
            angles_[i] = std::atan2(verts_[i].y, verts_[i].x);
            if (i > 0 && angles_[i] < angles_[start]) start = i;
        }
        // Rotate so that angles increase, then verify monotonicity.
        std::rotate(verts_.begin(), verts_.begin() + start, verts_.end());
        std::rotate(angles_.begin(), angles_.begin() + start, angles_.end());
        ok_ = true;
        for (int i = 1; i < n; ++i) {
            if (angles_[i] <= angles_[i - 1]) {
                ok_ = false;
                break;
            }
        }
    }

    bool ok() const { return ok_; }

    double radius(double theta) const {
        // Reduce into [angles_[0], angles_[0] + 2pi).
        const int n = static_cast<int>(verts_.size());
        double t = std::remainder(theta - angles_[0], kTwoPi);
        if (t < 0) t += kTwoPi;
        t += angles_[0];
        const auto it = std::upper_bound(angles_.begin(), angles_.end(), t);
        const int i = (static_cast<int>(it - angles_.begin()) - 1 + n) % n;
        const Vec2& p = verts_[i];
        const Vec2& q = verts_[(i + 1) % n];
        const Vec2 dir{std::cos(t), std::sin(t)};
        const double s = dir.cross(p) / (dir.cross(p) - dir.cross(q));
        return (p + (q - p) * std::clamp(s, 0.0, 1.0)).dot(dir);
    }

private:
    Vec2 center_;
    std::vector<Vec2> verts_;
    std::vector<double> angles_;
    bool ok_ = false;
};

}  // namespace

double truncation_radius(const PanelBoundary& body, const QuadratureSpec& spec) {
    const Vec2 c = body.centroid();
    double rad = 0.0;
    for (const Vec2& p : body.endpoints) rad = std::max(rad, (p - c).norm());
    return spec.rmax_factor * 2.0 * rad;
}

QuadratureResult integrate_exterior(const PanelBoundary& body, double r_max,
                                    const Integrand& f, const QuadratureSpec& spec) {
    const Vec2 center = body.centroid();
    const auto profile = std::make_shared<StarProfile>(body, center);

    CellMap map;
    if (profile->ok()) {
        // Conforming chart: u in [0,1] maps geometrically from the boundary
        // radius at angle v to r_max.
        map.point = [center, profile, r_max](double u, double v) {
            const double th = kTwoPi * v;
            const double r0 = profile->radius(th);
            const double r = r0 * std::pow(r_max / r0, u);
            return center + r * Vec2{std::cos(th), std::sin(th)};
        };
        map.jacobian = [profile, r_max](double u, double v) {
            const double r0 = profile->radius(kTwoPi * v);
            const double L = std::log(r_max / r0);
            const double r = r0 * std::exp(L * u);
            return r * r * L * kTwoPi;
        };
        return adapt_until(f, map, initial_grid(8, 16), spec);
    }

    // Masked polar chart from a radius safely inside the body.
    double r_in = std::numeric_limits<double>::max();
    for (const Vec2& p : body.endpoints) r_in = std::min(r_in, (p - center).norm());
    r_in *= 0.5;
    map.point = [center, r_in, r_max](double u, double v) {
        const double th = kTwoPi * v;
        const double r = r_in * std::pow(r_max / r_in, u);
        return center + r * Vec2{std::cos(th), std::sin(th)};
    };
    map.jacobian = [r_in, r_max](double u, double) {
        const double L = std::log(r_max / r_in);
        const double r = r_in * std::exp(L * u);
        return r * r * L * kTwoPi;
    };
    const Integrand masked = [&body, &f](const Vec2& p) {
        return body.contains(p) ? 0.0 : f(p);
    };
    return adapt_until(masked, map, initial_grid(8, 16), spec);
}

QuadratureResult integrate_annulus(const Vec2& center, double r0, double r1,
                                   const Integrand& f, const QuadratureSpec& spec) {
    if (!(r1 > r0 && r0 >= 0.0)) throw std::invalid_argument("bad annulus radii");
    CellMap map;
    map.point = [center, r0, r1](double u, double v) {
        const double th = kTwoPi * v;
        const double r = r0 + (r1 - r0) * u;
        return center + r * Vec2{std::cos(th), std::sin(th)};
    };
    map.jacobian = [r0, r1](double u, double) {
        return (r0 + (r1 - r0) * u) * (r1 - r0) * kTwoPi;
    };
    return adapt_until(f, map, initial_grid(4, 8), spec);
}

namespace {

double triangle_rule(const Integrand& f, const Vec2& p0, const Vec2& p1, const Vec2& p2) {
    const double area = 0.5 * std::abs((p1 - p0).cross(p2 - p0));
    double sum = 0.0;
    for (int k = 0; k < 7; ++k) {
        const Vec2 p = p0 * kT7b[k][0] + p1 * kT7b[k][1] + p2 * kT7b[k][2];
        sum += kT7w[k] * f(p);
    }
    return sum * area;
}

double triangle_adaptive(const Integrand& f, const Vec2& p0, const Vec2& p1, const Vec2& p2,
                         double tol, int depth, double& err_acc) {
    const double whole = triangle_rule(f, p0, p1, p2);
    const Vec2 m01 = (p0 + p1) * 0.5, m12 = (p1 + p2) * 0.5, m20 = (p2 + p0) * 0.5;
    const double split = triangle_rule(f, p0, m01, m20) + triangle_rule(f, m01, p1, m12) +
                         triangle_rule(f, m20, m12, p2) + triangle_rule(f, m01, m12, m20);
    const double err = std::abs(split - whole);
    if (err < tol || depth >= 18) {
        err_acc += err / 63.0;
        return split;
    }
    double out = 0.0;
    out += triangle_adaptive(f, p0, m01, m20, 0.25 * tol, depth + 1, err_acc);
    out += triangle_adaptive(f, m01, p1, m12, 0.25 * tol, depth + 1, err_acc);
    out += triangle_adaptive(f, m20, m12, p2, 0.25 * tol, depth + 1, err_acc);
    out += triangle_adaptive(f, m01, m12, m20, 0.25 * tol, depth + 1, err_acc);
    return out;
}

}  // namespace

QuadratureResult integrate_polygon(const PanelBoundary& body, const Integrand& f,
                                   const QuadratureSpec& spec) {
    const Vec2 c = body.centroid();
    double scale = 0.0;
    for (int i = 0; i < body.n_panels(); i += std::max(1, body.n_panels() / 8))
        scale += std::abs(triangle_rule(f, c, body.endpoints[i], body.endpoints[i + 1]));
    const double tol = std::max(spec.abs_tolerance,
                                spec.rel_tolerance * std::max(scale, 1e-30)) /
                       body.n_panels();
    QuadratureResult res;
    for (int i = 0; i < body.n_panels(); ++i)
        res.value +=
            triangle_adaptive(f, c, body.endpoints[i], body.endpoints[i + 1], tol, 0, res.error);
    res.cells = body.n_panels();
    return res;
}

double integrate_polygon_fixed(const PanelBoundary& body, const Integrand& f, int levels) {
    const Vec2 c = body.centroid();
    double total = 0.0;
    const std::function<double(const Vec2&, const Vec2&, const Vec2&, int)> rec =
        [&](const Vec2& p0, const Vec2& p1, const Vec2& p2, int lvl) -> double {
        if (lvl == 0) return triangle_rule(f, p0, p1, p2);
        const Vec2 m01 = (p0 + p1) * 0.5, m12 = (p1 + p2) * 0.5, m20 = (p2 + p0) * 0.5;
        return rec(p0, m01, m20, lvl - 1) + rec(m01, p1, m12, lvl - 1) +
               rec(m20, m12, p2, lvl - 1) + rec(m01, m12, m20, lvl - 1);
    };
    for (int i = 0; i < body.n_panels(); ++i)
        total += rec(c, body.endpoints[i], body.endpoints[i + 1], levels);
    return total;
}

}  // namespace lpfsi
