#include "lpfsi/panels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lpfsi {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct PanelFrame {
    Vec2 t, n;
    double length;
    double s, h;  // local coordinates of the evaluation point
};

inline PanelFrame local_frame(const Vec2& a, const Vec2& b, const Vec2& p) {
    PanelFrame f;
    const Vec2 e = b - a;
    f.length = e.norm();
    f.t = e / f.length;
    f.n = Vec2{e.y, -e.x} / f.length;
    const Vec2 d = p - a;
    f.s = d.dot(f.t);
    f.h = d.dot(f.n);
    return f;
}

}  // namespace

Vec2 source_panel_velocity(const Vec2& a, const Vec2& b, const Vec2& p) {
    const PanelFrame f = local_frame(a, b, p);
    const double r1 = f.s * f.s + f.h * f.h;
    const double r2 = (f.s - f.length) * (f.s - f.length) + f.h * f.h;
    const double ut = std::log(r1 / r2) / (4.0 * kPi);
    const double un =
        (std::atan2(f.h, f.s - f.length) - std::atan2(f.h, f.s)) / kTwoPi;
    return f.t * ut + f.n * un;
}

Mat2 source_panel_gradient(const Vec2& a, const Vec2& b, const Vec2& p) {
    const PanelFrame f = local_frame(a, b, p);
    const double r1 = f.s * f.s + f.h * f.h;
    const double r2 = (f.s - f.length) * (f.s - f.length) + f.h * f.h;
    const double A = (f.s / r1 - (f.s - f.length) / r2) / kTwoPi;
    const double B = (f.h / r1 - f.h / r2) / kTwoPi;
    const Mat2 local{A, B, B, -A};
    const Mat2 R{f.t.x, f.n.x, f.t.y, f.n.y};
    return R * local * R.transpose();
}

double source_panel_potential(const Vec2& a, const Vec2& b, const Vec2& p) {
    const PanelFrame f = local_frame(a, b, p);
    const auto G = [&](double tau) {
        const double r2 = tau * tau + f.h * f.h;
        if (r2 == 0.0) return 0.0;
        double g = tau * std::log(r2) - 2.0 * tau;
        if (f.h != 0.0) g += 2.0 * f.h * std::atan(tau / f.h);
        return g;
    };
    return (G(f.s) - G(f.s - f.length)) / (4.0 * kPi);
}

// ---------------------------------------------------------------------------
// PanelBoundary
// ---------------------------------------------------------------------------

double PanelBoundary::perimeter() const {
    double p = 0.0;
    for (double l : lengths) p += l;
    return p;
}

double PanelBoundary::self_normal_coeff(int i) const {
    // The curvature term is the diagonal limit of the Neumann kernel on a
    // curved boundary; flat panels drop it, which costs an order of accuracy.
    return 0.5 + curvature[i] * lengths[i] / (4.0 * kPi);
}

double PanelBoundary::enclosed_area() const {
    std::vector<Vec2> v(endpoints.begin(), endpoints.end() - 1);
    return polygon_area(v);
}

Vec2 PanelBoundary::centroid() const {
    // Area centroid via the shoelace moments.
    double a2 = 0.0;
    Vec2 c{0.0, 0.0};
    const int n = n_panels();
    for (int i = 0; i < n; ++i) {
        const Vec2& p = endpoints[i];
        const Vec2& q = endpoints[i + 1];
        const double w = p.cross(q);
        a2 += w;
        c += (p + q) * w;
    }
    return c / (3.0 * a2);
}

double PanelBoundary::distance_to_boundary(const Vec2& p) const {
    double best = std::numeric_limits<double>::max();
    const int n = n_panels();
    for (int i = 0; i < n; ++i) {
        const Vec2& a = endpoints[i];
        const Vec2 e = endpoints[i + 1] - a;
        const double t = std::clamp((p - a).dot(e) / e.squared_norm(), 0.0, 1.0);
        best = std::min(best, (p - (a + e * t)).norm());
    }
    return best;
}

bool PanelBoundary::contains(const Vec2& p) const {
    std::vector<Vec2> v(endpoints.begin(), endpoints.end() - 1);
    return point_in_polygon(p, v);
}

void PanelBoundary::validate() const {
    const int n = n_panels();
    if (n < 3 || static_cast<int>(endpoints.size()) != n + 1)
        throw chart_error("boundary must be a closed loop of panels");
    if ((endpoints.front() - endpoints.back()).norm() > 1e-12 * perimeter())
        throw chart_error("boundary loop does not close");
    for (int i = 0; i < n; ++i) {
        if (std::abs(normals[i].norm() - 1.0) > 1e-12)
            throw chart_error("normal is not unit length");
        if (std::abs(normals[i].dot(tangents[i])) > 1e-12)
            throw chart_error("normal is not orthogonal to the panel");
    }
    // Outward orientation: contour integral of x.n equals twice the area.
    double flux = 0.0;
    for (int i = 0; i < n; ++i) flux += midpoints[i].dot(normals[i]) * lengths[i];
    if (flux <= 0.0) throw chart_error("normals are not consistently outward");
}

// ---------------------------------------------------------------------------
// SigmaField
// ---------------------------------------------------------------------------

SigmaField::SigmaField(std::shared_ptr<const PanelBoundary> boundary,
                       Eigen::VectorXd source_strengths)
    : boundary_(std::move(boundary)), strengths_(std::move(source_strengths)) {
    if (strengths_.size() != boundary_->n_panels())
        throw solver_error("strength vector does not match panel count");
}

Vec2 SigmaField::velocity(const Vec2& p) const {
    Vec2 u{0.0, 0.0};
    const auto& bd = *boundary_;
    for (int j = 0; j < bd.n_panels(); ++j)
        u += strengths_[j] * source_panel_velocity(bd.endpoints[j], bd.endpoints[j + 1], p);
    return u;
}

Mat2 SigmaField::gradient(const Vec2& p) const {
    Mat2 g = Mat2::zero();
    const auto& bd = *boundary_;
    for (int j = 0; j < bd.n_panels(); ++j)
        g = g + source_panel_gradient(bd.endpoints[j], bd.endpoints[j + 1], p) * strengths_[j];
    return g;
}

double SigmaField::potential(const Vec2& p) const {
    double phi = 0.0;
    const auto& bd = *boundary_;
    for (int j = 0; j < bd.n_panels(); ++j)
        phi += strengths_[j] * source_panel_potential(bd.endpoints[j], bd.endpoints[j + 1], p);
    return phi;
}

Vec2 SigmaField::velocity_at_midpoint(int i) const {
    const auto& bd = *boundary_;
    Vec2 u = bd.self_normal_coeff(i) * strengths_[i] * bd.normals[i];
    for (int j = 0; j < bd.n_panels(); ++j) {
        if (j == i) continue;
        u += strengths_[j] *
             source_panel_velocity(bd.endpoints[j], bd.endpoints[j + 1], bd.midpoints[i]);
    }
    return u;
}

double SigmaField::potential_at_midpoint(int i) const {
    return potential(boundary_->midpoints[i]);
}

double SigmaField::net_strength() const {
    double s = 0.0;
    for (int j = 0; j < boundary_->n_panels(); ++j) s += strengths_[j] * boundary_->lengths[j];
    return s;
}

SigmaField SigmaField::operator*(double s) const { return {boundary_, strengths_ * s}; }

SigmaField SigmaField::operator+(const SigmaField& other) const {
    if (boundary_ != other.boundary_)
        throw solver_error("cannot combine fields on different boundaries");
    return {boundary_, strengths_ + other.strengths_};
}

// ---------------------------------------------------------------------------
// NeumannSolver
// ---------------------------------------------------------------------------

NeumannSolver::NeumannSolver(std::shared_ptr<const PanelBoundary> boundary)
    : boundary_(std::move(boundary)) {
    boundary_->validate();
    const auto& bd = *boundary_;
    const int n = bd.n_panels();
    normal_influence_.resize(n, n);
    tangent_influence_.resize(n, n);
    potential_influence_.resize(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Vec2 u;
            if (i == j) {
                u = bd.self_normal_coeff(i) * bd.normals[i];
            } else {
                u = source_panel_velocity(bd.endpoints[j], bd.endpoints[j + 1], bd.midpoints[i]);
            }
            normal_influence_(i, j) = u.dot(bd.normals[i]);
            tangent_influence_(i, j) = u.dot(bd.tangents[i]);
            potential_influence_(i, j) =
                source_panel_potential(bd.endpoints[j], bd.endpoints[j + 1], bd.midpoints[i]);
        }
    }
    // Equality-constrained least squares via the KKT system:
    //   [A'A  L] [x     ]   [A'd]
    //   [L'   0] [lambda] = [0  ]
    // with L the panel lengths. Keeps the net strength exactly zero.
    Eigen::MatrixXd kkt(n + 1, n + 1);
    kkt.topLeftCorner(n, n) = normal_influence_.transpose() * normal_influence_;
    for (int j = 0; j < n; ++j) {
        kkt(n, j) = bd.lengths[j];
        kkt(j, n) = bd.lengths[j];
    }
    kkt(n, n) = 0.0;
    kkt_lu_.compute(kkt);
    if (kkt_lu_.rcond() < 1e-14)
        throw solver_error("influence matrix is numerically singular (degenerate boundary)");
}

SigmaField NeumannSolver::solve(const Eigen::VectorXd& data) const {
    const auto& bd = *boundary_;
    const int n = bd.n_panels();
    if (data.size() != n) throw solver_error("normal data size does not match panel count");

    double flux = 0.0, amp = 0.0;
    for (int i = 0; i < n; ++i) {
        flux += data[i] * bd.lengths[i];
        amp = std::max(amp, std::abs(data[i]));
    }
    if (std::abs(flux) > 1e-8 * bd.perimeter() * std::max(amp, 1e-300) && amp > 0.0)
        throw solver_error("incompatible Neumann data: net boundary flux " +
                           std::to_string(flux));

    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = normal_influence_.transpose() * data;
    rhs(n) = 0.0;
    Eigen::VectorXd sol = kkt_lu_.solve(rhs);
    return SigmaField(boundary_, sol.head(n));
}

double NeumannSolver::bc_residual(const SigmaField& field,
                                  const Eigen::VectorXd& data) const {
    const Eigen::VectorXd un = normal_influence_ * field.strengths();
    return (un - data).cwiseAbs().maxCoeff();
}

SigmaField solve_neumann(const PanelBoundary& boundary, const Eigen::VectorXd& data) {
    NeumannSolver solver(std::make_shared<PanelBoundary>(boundary));
    return solver.solve(data);
}

Eigen::VectorXd neumann_data(const BodyChart& chart, const BodyCoords& coords,
                             const PanelBoundary& boundary) {
    const auto v = boundary_velocity(chart, coords, boundary);
    Eigen::VectorXd data(boundary.n_panels());
    for (int i = 0; i < boundary.n_panels(); ++i) data[i] = v[i].dot(boundary.normals[i]);
    return data;
}

SigmaField sigma(const BodyChart& chart, const BodyCoords& coords, const NeumannSolver& solver) {
    return solver.solve(neumann_data(chart, coords, solver.boundary()));
}

SigmaField sigma(const BodyChart& chart, const BodyCoords& coords, int n_panels) {
    auto boundary = std::make_shared<PanelBoundary>(embed_boundary(chart, coords.q, n_panels));
    NeumannSolver solver(boundary);
    return sigma(chart, coords, solver);
}

std::vector<Vec2> eval_velocity(const SigmaField& field, const std::vector<Vec2>& points) {
    const auto& bd = field.boundary();
    const double min_dist = 1e-6 * bd.perimeter();
    std::vector<Vec2> out;
    out.reserve(points.size());
    for (const Vec2& p : points) {
        if (bd.contains(p) || bd.distance_to_boundary(p) < min_dist)
            throw solver_error("evaluation point inside body or on a panel");
        out.push_back(field.velocity(p));
    }
    return out;
}

double boundary_energy_pairing(const SigmaField& f, const Eigen::VectorXd& g_data) {
    const auto& bd = f.boundary();
    double e = 0.0;
    for (int i = 0; i < bd.n_panels(); ++i)
        e -= f.potential_at_midpoint(i) * g_data[i] * bd.lengths[i];
    return e;
}

double boundary_kinetic_energy(const SigmaField& field, const Eigen::VectorXd& data) {
    return 0.5 * boundary_energy_pairing(field, data);
}

}  // namespace lpfsi
