#include "lpfsi/fields.hpp"

#include <cmath>
#include <numbers>

namespace lpfsi {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double VortexState::total_circulation() const {
    double g = bound_circulation;
    for (double s : strengths) g += s;
    return g;
}

void VortexState::validate() const {
    if (positions.size() != strengths.size())
        throw solver_error("vortex positions and strengths differ in length");
    if (!(delta > 0.0)) throw solver_error("blob radius must be positive");
    for (const Vec2& p : positions)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw solver_error("non-finite vortex position");
}

Vec2 blob_velocity(const Vec2& d, double delta) {
    const double q = d.squared_norm() + delta * delta;
    return d.perp() / (kTwoPi * q);
}

Mat2 blob_gradient(const Vec2& d, double delta) {
    const double q = d.squared_norm() + delta * delta;
    const double q2 = q * q;
    Mat2 g;
    g.a11 = 2.0 * d.x * d.y / q2;
    g.a12 = -1.0 / q + 2.0 * d.y * d.y / q2;
    g.a21 = 1.0 / q - 2.0 * d.x * d.x / q2;
    g.a22 = -2.0 * d.x * d.y / q2;
    return g * (1.0 / kTwoPi);
}

Vec2 blob_laplacian(const Vec2& d, double delta) {
    const double q = d.squared_norm() + delta * delta;
    const double c = 4.0 * delta * delta / (kPi * q * q * q);
    return {c * d.y, -c * d.x};
}

double blob_streamfunction(const Vec2& d, double delta) {
    return -std::log(d.squared_norm() + delta * delta) / (4.0 * kPi);
}

// ---------------------------------------------------------------------------
// BlobField
// ---------------------------------------------------------------------------

BlobField::BlobField(VortexState vortices) : vortices_(std::move(vortices)) {
    vortices_.validate();
}

Vec2 BlobField::velocity(const Vec2& p) const {
    Vec2 u{0.0, 0.0};
    for (int i = 0; i < vortices_.size(); ++i)
        u += vortices_.strengths[i] * blob_velocity(p - vortices_.positions[i], vortices_.delta);
    return u;
}

Mat2 BlobField::gradient(const Vec2& p) const {
    Mat2 g = Mat2::zero();
    for (int i = 0; i < vortices_.size(); ++i)
        g = g + blob_gradient(p - vortices_.positions[i], vortices_.delta) *
                    vortices_.strengths[i];
    return g;
}

Vec2 BlobField::laplacian(const Vec2& p) const {
    Vec2 l{0.0, 0.0};
    for (int i = 0; i < vortices_.size(); ++i)
        l += vortices_.strengths[i] * blob_laplacian(p - vortices_.positions[i], vortices_.delta);
    return l;
}

double BlobField::streamfunction(const Vec2& p) const {
    double psi = 0.0;
    for (int i = 0; i < vortices_.size(); ++i)
        psi += vortices_.strengths[i] *
               blob_streamfunction(p - vortices_.positions[i], vortices_.delta);
    return psi;
}

Vec2 biot_savart(const VortexState& vortices, const Vec2& p) {
    Vec2 u{0.0, 0.0};
    for (int i = 0; i < vortices.size(); ++i)
        u += vortices.strengths[i] * blob_velocity(p - vortices.positions[i], vortices.delta);
    return u;
}

// ---------------------------------------------------------------------------
// CombinedField
// ---------------------------------------------------------------------------

CombinedField::CombinedField(std::vector<FieldPtr> parts, std::vector<double> weights)
    : parts_(std::move(parts)), weights_(std::move(weights)) {
    if (parts_.size() != weights_.size())
        throw solver_error("combined field parts and weights differ in length");
}

Vec2 CombinedField::velocity(const Vec2& p) const {
    Vec2 u{0.0, 0.0};
    for (size_t i = 0; i < parts_.size(); ++i) u += weights_[i] * parts_[i]->velocity(p);
    return u;
}

Mat2 CombinedField::gradient(const Vec2& p) const {
    Mat2 g = Mat2::zero();
    for (size_t i = 0; i < parts_.size(); ++i) g = g + parts_[i]->gradient(p) * weights_[i];
    return g;
}

Vec2 CombinedField::laplacian(const Vec2& p) const {
    Vec2 l{0.0, 0.0};
    for (size_t i = 0; i < parts_.size(); ++i) l += weights_[i] * parts_[i]->laplacian(p);
    return l;
}

// ---------------------------------------------------------------------------
// CompletedVortexField
// ---------------------------------------------------------------------------

CompletedVortexField::CompletedVortexField(VortexState vortices,
                                           std::shared_ptr<const PanelBoundary> boundary,
                                           SigmaField correction, Vec2 bound_center)
    : vortices_(std::move(vortices)),
      boundary_(std::move(boundary)),
      correction_(std::move(correction)),
      bound_center_(bound_center) {}

Vec2 CompletedVortexField::velocity(const Vec2& p) const {
    Vec2 u = biot_savart(vortices_, p) + correction_.velocity(p);
    if (vortices_.bound_circulation != 0.0)
        u += vortices_.bound_circulation * blob_velocity(p - bound_center_, vortices_.delta);
    return u;
}

Vec2 CompletedVortexField::velocity_excluding(const Vec2& p, int skip) const {
    Vec2 u = correction_.velocity(p);
    for (int i = 0; i < vortices_.size(); ++i) {
        if (i == skip) continue;
        u += vortices_.strengths[i] * blob_velocity(p - vortices_.positions[i], vortices_.delta);
    }
    if (vortices_.bound_circulation != 0.0)
        u += vortices_.bound_circulation * blob_velocity(p - bound_center_, vortices_.delta);
    return u;
}

Mat2 CompletedVortexField::gradient(const Vec2& p) const {
    Mat2 g = correction_.gradient(p);
    for (int i = 0; i < vortices_.size(); ++i)
        g = g + blob_gradient(p - vortices_.positions[i], vortices_.delta) *
                    vortices_.strengths[i];
    if (vortices_.bound_circulation != 0.0)
        g = g + blob_gradient(p - bound_center_, vortices_.delta) * vortices_.bound_circulation;
    return g;
}

Vec2 CompletedVortexField::laplacian(const Vec2& p) const {
    // The panel correction is harmonic; only the blobs contribute.
    Vec2 l{0.0, 0.0};
    for (int i = 0; i < vortices_.size(); ++i)
        l += vortices_.strengths[i] * blob_laplacian(p - vortices_.positions[i], vortices_.delta);
    if (vortices_.bound_circulation != 0.0)
        l += vortices_.bound_circulation * blob_laplacian(p - bound_center_, vortices_.delta);
    return l;
}

double CompletedVortexField::tangency_residual() const {
    double r = 0.0;
    const auto& bd = *boundary_;
    for (int i = 0; i < bd.n_panels(); ++i) {
        Vec2 u = biot_savart(vortices_, bd.midpoints[i]) +
                 correction_.velocity_at_midpoint(i);
        if (vortices_.bound_circulation != 0.0)
            u += vortices_.bound_circulation *
                 blob_velocity(bd.midpoints[i] - bound_center_, vortices_.delta);
        r = std::max(r, std::abs(u.dot(bd.normals[i])));
    }
    return r;
}

std::shared_ptr<const CompletedVortexField> complete_vertical(const VortexState& vortices,
                                                              const NeumannSolver& solver) {
    vortices.validate();
    const auto& bd = solver.boundary();
    for (const Vec2& p : vortices.positions)
        if (bd.contains(p)) throw solver_error("vortex lies inside the body");

    const Vec2 center = bd.centroid();
    const int n = bd.n_panels();
    Eigen::VectorXd data(n);
    for (int i = 0; i < n; ++i) {
        Vec2 u = biot_savart(vortices, bd.midpoints[i]);
        if (vortices.bound_circulation != 0.0)
            u += vortices.bound_circulation *
                 blob_velocity(bd.midpoints[i] - center, vortices.delta);
        data[i] = -u.dot(bd.normals[i]);
    }
    // A vortex field has zero net flux through the boundary in the continuum;
    // the midpoint-rule data misses that by quadrature error only. Project out
    // the mean so the constrained solve sees compatible data.
    double flux = 0.0;
    const double perim = bd.perimeter();
    for (int i = 0; i < n; ++i) flux += data[i] * bd.lengths[i];
    for (int i = 0; i < n; ++i) data[i] -= flux / perim;

    SigmaField corr = solver.solve(data);
    return std::make_shared<CompletedVortexField>(vortices, solver.boundary_ptr(),
                                                  std::move(corr), center);
}

std::shared_ptr<const CompletedVortexField> complete_vertical(
    const VortexState& vortices, std::shared_ptr<const PanelBoundary> boundary) {
    NeumannSolver solver(std::move(boundary));
    return complete_vertical(vortices, solver);
}

// ---------------------------------------------------------------------------
// Hodge splitting
// ---------------------------------------------------------------------------

HodgeParts hodge_decompose(const BodyChart& chart, const BodyCoords& coords,
                           const FieldPtr& u, const NeumannSolver& solver,
                           double tolerance) {
    const auto& bd = solver.boundary();
    const auto bvel = boundary_velocity(chart, coords, bd);

    // No-penetration check on the input.
    double scale = 1.0, defect = 0.0;
    for (int i = 0; i < bd.n_panels(); ++i) {
        // Midpoints sit on the panels; probe just off the boundary.
        const Vec2 probe = bd.midpoints[i] + bd.normals[i] * (1e-7 * bd.perimeter());
        const Vec2 uv = u->velocity(probe);
        scale = std::max(scale, uv.norm());
        defect = std::max(defect, std::abs((uv - bvel[i]).dot(bd.normals[i])));
    }
    if (defect > tolerance * scale)
        throw solver_error("input field violates the no-penetration condition");

    SigmaField s = sigma(chart, coords, solver);
    auto sp = std::make_shared<PanelField>(std::move(s));
    auto xi = std::make_shared<CombinedField>(std::vector<FieldPtr>{u, sp},
                                              std::vector<double>{1.0, -1.0});
    HodgeParts parts;
    parts.coords = coords;
    parts.vertical = xi;
    parts.tangency_residual = defect;
    return parts;
}

// ---------------------------------------------------------------------------
// Circulation
// ---------------------------------------------------------------------------

namespace {

// 7-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGx[7] = {-0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
                           0.0,
                           0.4058451513773972, 0.7415311855993945, 0.9491079123427585};
constexpr double kGw[7] = {0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
                           0.4179591836734694,
                           0.3818300505051189, 0.2797053914892766, 0.1294849661688697};

double edge_integral(const Field& f, const Vec2& a, const Vec2& b) {
    const Vec2 e = b - a;
    double s = 0.0;
    for (int k = 0; k < 7; ++k) {
        const Vec2 p = a + e * (0.5 * (1.0 + kGx[k]));
        s += kGw[k] * f.velocity(p).dot(e);
    }
    return 0.5 * s;
}

double edge_integral_adaptive(const Field& f, const Vec2& a, const Vec2& b,
                              double tol, int depth) {
    const double whole = edge_integral(f, a, b);
    const Vec2 m = (a + b) * 0.5;
    const double split = edge_integral(f, a, m) + edge_integral(f, m, b);
    if (std::abs(split - whole) < tol || depth >= 24) return split;
    return edge_integral_adaptive(f, a, m, 0.5 * tol, depth + 1) +
           edge_integral_adaptive(f, m, b, 0.5 * tol, depth + 1);
}

}  // namespace

double circulation(const Field& field, const std::vector<Vec2>& loop,
                   const PanelBoundary* body, const VortexState* vortices,
                   double tolerance) {
    if (loop.size() < 3) throw solver_error("circulation loop needs at least 3 vertices");
    if (body) {
        for (size_t i = 0; i < loop.size(); ++i) {
            const Vec2& a = loop[i];
            if (body->contains(a)) throw solver_error("circulation loop intersects the body");
        }
    }
    if (vortices) {
        for (const Vec2& vp : vortices->positions) {
            double dmin = std::numeric_limits<double>::max();
            for (size_t i = 0; i < loop.size(); ++i) {
                const Vec2& a = loop[i];
                const Vec2& b = loop[(i + 1) % loop.size()];
                const Vec2 e = b - a;
                const double t = std::clamp((vp - a).dot(e) / e.squared_norm(), 0.0, 1.0);
                dmin = std::min(dmin, (vp - (a + e * t)).norm());
            }
            if (dmin < 3.0 * vortices->delta)
                throw solver_error("circulation loop passes too close to a blob");
        }
    }
    double total = 0.0;
    for (size_t i = 0; i < loop.size(); ++i)
        total += edge_integral_adaptive(field, loop[i], loop[(i + 1) % loop.size()],
                                        tolerance / static_cast<double>(loop.size()), 0);
    return total;
}

double circulation(const Field& field, const std::vector<Vec2>& loop, double tolerance) {
    return circulation(field, loop, nullptr, nullptr, tolerance);
}

}  // namespace lpfsi
