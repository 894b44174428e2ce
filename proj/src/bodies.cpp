#include "lpfsi/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lpfsi/panels.hpp"

namespace lpfsi {

namespace {
constexpr double kPi = std::numbers::pi;

// Fractional widening of the seam-side capsule edge. The two-link boundary
// joins the links with two short bridge panels; the asymmetric half-widths
// rho and rho*(1 + kSeamStep) keep the bridges non-degenerate at the
// straight configuration while the seam cross terms in the shoelace area
// cancel exactly, so the enclosed area is independent of the hinge angle.
constexpr double kSeamStep = 0.5;
}  // namespace

double GeneralizedCovector::norm() const {
    double s = 0.0;
    for (double c : components) s += c * c;
    return std::sqrt(s);
}

BodyChart BodyChart::rigid_disc(double radius) {
    BodyChart c;
    c.kind = BodyKind::RigidDisc;
    c.radius = radius;
    c.validate();
    return c;
}

BodyChart BodyChart::rigid_ellipse(double a, double b) {
    BodyChart c;
    c.kind = BodyKind::RigidEllipse;
    c.ellipse_a = a;
    c.ellipse_b = b;
    c.validate();
    return c;
}

BodyChart BodyChart::two_link(double L1, double L2, double M1, double M2,
                              double I1, double I2, double k, double rest_angle) {
    BodyChart c;
    c.kind = BodyKind::TwoLink;
    c.link_half_length1 = L1;
    c.link_half_length2 = L2;
    c.link_mass1 = M1;
    c.link_mass2 = M2;
    c.link_inertia1 = I1;
    c.link_inertia2 = I2;
    c.spring_k = k;
    c.rest_angle = rest_angle;
    c.link_width = 0.25 * std::min(L1, L2);
    c.validate();
    return c;
}

double BodyChart::rigid_mass() const {
    if (mass > 0.0) return mass;
    if (kind == BodyKind::RigidDisc) return kPi * radius * radius;
    return kPi * ellipse_a * ellipse_b;
}

double BodyChart::rigid_inertia() const {
    if (inertia > 0.0) return inertia;
    if (kind == BodyKind::RigidDisc) return 0.5 * rigid_mass() * radius * radius;
    return rigid_mass() * (ellipse_a * ellipse_a + ellipse_b * ellipse_b) / 4.0;
}

void BodyChart::validate() const {
    switch (kind) {
        case BodyKind::RigidDisc:
            if (!(radius > 0.0)) throw chart_error("disc radius must be positive");
            break;
        case BodyKind::RigidEllipse:
            if (!(ellipse_a >= ellipse_b && ellipse_b > 0.0))
                throw chart_error("ellipse semi-axes must satisfy a >= b > 0");
            break;
        case BodyKind::TwoLink:
            if (!(link_half_length1 > 0.0 && link_half_length2 > 0.0))
                throw chart_error("link half-lengths must be positive");
            if (!(link_mass1 > 0.0 && link_mass2 > 0.0))
                throw chart_error("link masses must be positive");
            if (!(link_inertia1 > 0.0 && link_inertia2 > 0.0))
                throw chart_error("link inertias must be positive");
            if (spring_k < 0.0) throw chart_error("spring constant must be nonnegative");
            if (!(link_width > 0.0 &&
                  link_width < std::min(link_half_length1, link_half_length2)))
                throw chart_error("link width must lie in (0, min half-length)");
            break;
    }
    if (mass == 0.0 || inertia == 0.0)
        throw chart_error("explicit mass/inertia must be positive");
}

namespace {

void check_coords(const BodyChart& chart, const BodyCoords& coords, bool need_qdot) {
    if (coords.dim() != chart.dim())
        throw chart_error("coordinate dimension does not match chart");
    if (need_qdot && static_cast<int>(coords.qdot.size()) != chart.dim())
        throw chart_error("velocity dimension does not match chart");
    for (double v : coords.q)
        if (!std::isfinite(v)) throw chart_error("non-finite coordinate");
    for (double v : coords.qdot)
        if (!std::isfinite(v)) throw chart_error("non-finite velocity");
}

double two_link_kinetic(const BodyChart& c, const BodyCoords& s, int i) {
    const double L = (i == 0) ? c.link_half_length1 : c.link_half_length2;
    const double M = (i == 0) ? c.link_mass1 : c.link_mass2;
    const double I = (i == 0) ? c.link_inertia1 : c.link_inertia2;
    const double phi = s.q[i], phid = s.qdot[i];
    const double xd = s.qdot[2], yd = s.qdot[3];
    const double vx = xd - L * std::sin(phi) * phid;
    const double vy = yd + L * std::cos(phi) * phid;
    return 0.5 * I * phid * phid + 0.5 * M * (vx * vx + vy * vy);
}

}  // namespace

double body_lagrangian(const BodyChart& chart, const BodyCoords& coords) {
    check_coords(chart, coords, true);
    if (chart.kind == BodyKind::TwoLink) {
        const double K = two_link_kinetic(chart, coords, 0) + two_link_kinetic(chart, coords, 1);
        const double gap = coords.q[0] - coords.q[1] - chart.rest_angle;
        const double U = 0.5 * chart.spring_k * gap * gap;
        return K - U;
    }
    const double m = chart.rigid_mass();
    const double I = chart.rigid_inertia();
    const auto& qd = coords.qdot;
    return 0.5 * I * qd[0] * qd[0] + 0.5 * m * (qd[1] * qd[1] + qd[2] * qd[2]);
}

void body_lagrangian_derivatives(const BodyChart& chart, const BodyCoords& coords,
                                 GeneralizedCovector& dL_dq,
                                 GeneralizedCovector& dL_dqdot) {
    check_coords(chart, coords, true);
    const int n = chart.dim();
    dL_dq = GeneralizedCovector(n);
    dL_dqdot = GeneralizedCovector(n);

    if (chart.kind != BodyKind::TwoLink) {
        const double m = chart.rigid_mass();
        const double I = chart.rigid_inertia();
        dL_dqdot[0] = I * coords.qdot[0];
        dL_dqdot[1] = m * coords.qdot[1];
        dL_dqdot[2] = m * coords.qdot[2];
        return;
    }

    const double xd = coords.qdot[2], yd = coords.qdot[3];
    for (int i = 0; i < 2; ++i) {
        const double L = (i == 0) ? chart.link_half_length1 : chart.link_half_length2;
        const double M = (i == 0) ? chart.link_mass1 : chart.link_mass2;
        const double I = (i == 0) ? chart.link_inertia1 : chart.link_inertia2;
        const double phi = coords.q[i], phid = coords.qdot[i];
        const double s = std::sin(phi), c = std::cos(phi);
        const double vx = xd - L * s * phid;
        const double vy = yd + L * c * phid;
        dL_dq[i] += M * (vx * (-L * c * phid) + vy * (-L * s * phid));
        dL_dqdot[i] += I * phid + M * (vx * (-L * s) + vy * (L * c));
        dL_dqdot[2] += M * vx;
        dL_dqdot[3] += M * vy;
    }
    const double gap = coords.q[0] - coords.q[1] - chart.rest_angle;
    dL_dq[0] -= chart.spring_k * gap;
    dL_dq[1] += chart.spring_k * gap;
}

void body_mass_matrix(const BodyChart& chart, const std::vector<double>& q,
                      std::vector<double>& m_flat) {
    const int n = chart.dim();
    m_flat.assign(n * n, 0.0);
    if (chart.kind != BodyKind::TwoLink) {
        m_flat[0] = chart.rigid_inertia();
        m_flat[1 * n + 1] = chart.rigid_mass();
        m_flat[2 * n + 2] = chart.rigid_mass();
        return;
    }
    const double M1 = chart.link_mass1, M2 = chart.link_mass2;
    for (int i = 0; i < 2; ++i) {
        const double L = (i == 0) ? chart.link_half_length1 : chart.link_half_length2;
        const double M = (i == 0) ? chart.link_mass1 : chart.link_mass2;
        const double I = (i == 0) ? chart.link_inertia1 : chart.link_inertia2;
        const double s = std::sin(q[i]), c = std::cos(q[i]);
        m_flat[i * n + i] = I + M * L * L;
        m_flat[i * n + 2] = m_flat[2 * n + i] = -M * L * s;
        m_flat[i * n + 3] = m_flat[3 * n + i] = M * L * c;
    }
    m_flat[2 * n + 2] = M1 + M2;
    m_flat[3 * n + 3] = M1 + M2;
}

// ---------------------------------------------------------------------------
// Boundary embedding
// ---------------------------------------------------------------------------

namespace {

PanelBoundary assemble_boundary(std::vector<Vec2> vertices, std::vector<int> vertex_link,
                                std::vector<double> ref_lengths) {
    const int n = static_cast<int>(vertices.size());
    PanelBoundary b;
    b.endpoints = std::move(vertices);
    b.endpoints.push_back(b.endpoints.front());
    b.endpoint_link = std::move(vertex_link);
    b.midpoints.resize(n);
    b.tangents.resize(n);
    b.normals.resize(n);
    b.lengths.resize(n);
    b.material_arc.resize(n);
    b.curvature.resize(n);
    double arc = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2 e = b.endpoints[i + 1] - b.endpoints[i];
        const double len = e.norm();
        if (!(len > 0.0)) throw chart_error("degenerate panel in boundary");
        b.midpoints[i] = (b.endpoints[i] + b.endpoints[i + 1]) * 0.5;
        b.tangents[i] = e / len;
        b.normals[i] = Vec2{e.y, -e.x} / len;  // outward for a CCW loop
        b.lengths[i] = len;
        b.material_arc[i] = arc;
        arc += ref_lengths.empty() ? len : ref_lengths[i];
    }
    for (int i = 0; i < n; ++i) {
        const int ip = (i + 1) % n, im = (i + n - 1) % n;
        const double turn = std::atan2(b.tangents[im].cross(b.tangents[ip]),
                                       b.tangents[im].dot(b.tangents[ip]));
        b.curvature[i] = turn / (0.5 * b.lengths[im] + b.lengths[i] + 0.5 * b.lengths[ip]);
    }
    return b;
}

PanelBoundary embed_rigid(const BodyChart& chart, const std::vector<double>& q, int n) {
    const double theta = q[0];
    const Vec2 center{q[1], q[2]};
    const Mat2 R = Mat2::rotation(theta);
    const double a = (chart.kind == BodyKind::RigidDisc) ? chart.radius : chart.ellipse_a;
    const double b = (chart.kind == BodyKind::RigidDisc) ? chart.radius : chart.ellipse_b;
    std::vector<Vec2> verts(n);
    std::vector<int> links(n, 0);
    for (int k = 0; k < n; ++k) {
        const double t = 2.0 * kPi * k / n;
        verts[k] = center + R * Vec2{a * std::cos(t), b * std::sin(t)};
    }
    return assemble_boundary(std::move(verts), std::move(links), {});
}

// Material outline of one link in its own frame: the hinge at the origin,
// the link axis along +x. Runs from a = (0, -rho) along the narrow side,
// around the far cap, back along the wide side to b = (0, rho*(1+e)).
// Returns the open chain a .. b inclusive.
std::vector<Vec2> link_chain_material(double half_length, double rho, int n_side1,
                                      int n_cap, int n_side2) {
    const double len = 2.0 * half_length;
    const double e = kSeamStep;
    const double cap_r = rho * (1.0 + 0.5 * e);
    const Vec2 cap_c{len, 0.5 * e * rho};
    std::vector<Vec2> pts;
    pts.reserve(n_side1 + n_cap + n_side2 + 1);
    for (int k = 0; k <= n_side1; ++k)
        pts.push_back(Vec2{len * k / n_side1, -rho});
    for (int k = 1; k <= n_cap; ++k) {
        const double ang = -0.5 * kPi + kPi * k / n_cap;
        pts.push_back(cap_c + cap_r * Vec2{std::cos(ang), std::sin(ang)});
    }
    for (int k = 1; k <= n_side2; ++k)
        pts.push_back(Vec2{len * (n_side2 - k) / n_side2, rho * (1.0 + e)});
    return pts;
}

PanelBoundary embed_two_link(const BodyChart& chart, const std::vector<double>& q, int n) {
    const Vec2 hinge{q[2], q[3]};
    const double rho = chart.link_width;

    // Split n-2 chain panels between the links in proportion to arc length,
    // then within a chain between sides and cap the same way.
    const auto chain_len = [&](double L) {
        return 4.0 * L + kPi * rho * (1.0 + 0.5 * kSeamStep);
    };
    const double c1 = chain_len(chart.link_half_length1);
    const double c2 = chain_len(chart.link_half_length2);
    int alloc1 = std::max(6, static_cast<int>(std::lround((n - 2) * c1 / (c1 + c2))));
    int alloc2 = std::max(6, n - 2 - alloc1);

    const auto split_chain = [&](double L, int total, int out[3]) {
        const double side = 2.0 * L, cap = kPi * rho * (1.0 + 0.5 * kSeamStep);
        const double tot = 2.0 * side + cap;
        out[0] = std::max(2, static_cast<int>(std::lround(total * side / tot)));
        out[1] = std::max(2, static_cast<int>(std::lround(total * cap / tot)));
        out[2] = std::max(2, total - out[0] - out[1]);
    };
    int n1[3], n2[3];
    split_chain(chart.link_half_length1, alloc1, n1);
    split_chain(chart.link_half_length2, alloc2, n2);

    const auto c1pts = link_chain_material(chart.link_half_length1, rho, n1[0], n1[1], n1[2]);
    const auto c2pts = link_chain_material(chart.link_half_length2, rho, n2[0], n2[1], n2[2]);

    const Mat2 R1 = Mat2::rotation(q[0]);
    const Mat2 R2 = Mat2::rotation(q[1]);

    std::vector<Vec2> verts;
    std::vector<int> links;
    std::vector<double> ref_len;
    verts.reserve(c1pts.size() + c2pts.size());
    const auto append_chain = [&](const std::vector<Vec2>& mat, const Mat2& R, int link) {
        for (size_t k = 0; k < mat.size(); ++k) {
            verts.push_back(hinge + R * mat[k]);
            links.push_back(link);
            if (k + 1 < mat.size()) ref_len.push_back((mat[k + 1] - mat[k]).norm());
        }
        ref_len.push_back(rho * kSeamStep);  // bridge reference length
    };
    append_chain(c1pts, R1, 0);
    append_chain(c2pts, R2, 1);

    if (polygon_self_intersects(verts))
        throw chart_error("two-link embedding self-intersects at this configuration");

    PanelBoundary b = assemble_boundary(std::move(verts), std::move(links), std::move(ref_len));
    if (b.enclosed_area() <= 0.0)
        throw chart_error("two-link embedding is degenerate (non-positive area)");
    return b;
}

}  // namespace

PanelBoundary embed_boundary(const BodyChart& chart, const std::vector<double>& q,
                             int n_panels) {
    chart.validate();
    if (static_cast<int>(q.size()) != chart.dim())
        throw chart_error("coordinate dimension does not match chart");
    if (n_panels < 16) throw chart_error("need at least 16 panels");
    if (chart.kind == BodyKind::TwoLink) return embed_two_link(chart, q, n_panels);
    return embed_rigid(chart, q, n_panels);
}

std::vector<Vec2> boundary_endpoint_velocity(const BodyChart& chart,
                                             const BodyCoords& coords,
                                             const PanelBoundary& boundary) {
    check_coords(chart, coords, true);
    const int n = boundary.n_panels();
    std::vector<Vec2> v(n);
    if (chart.kind != BodyKind::TwoLink) {
        const Vec2 center{coords.q[1], coords.q[2]};
        const Vec2 vc{coords.qdot[1], coords.qdot[2]};
        const double omega = coords.qdot[0];
        for (int i = 0; i < n; ++i)
            v[i] = vc + omega * (boundary.endpoints[i] - center).perp();
        return v;
    }
    const Vec2 hinge{coords.q[2], coords.q[3]};
    const Vec2 vh{coords.qdot[2], coords.qdot[3]};
    for (int i = 0; i < n; ++i) {
        const double omega = coords.qdot[boundary.endpoint_link[i]];
        v[i] = vh + omega * (boundary.endpoints[i] - hinge).perp();
    }
    return v;
}

std::vector<Vec2> boundary_velocity(const BodyChart& chart, const BodyCoords& coords,
                                    const PanelBoundary& boundary) {
    const auto ev = boundary_endpoint_velocity(chart, coords, boundary);
    const int n = boundary.n_panels();
    std::vector<Vec2> v(n);
    for (int i = 0; i < n; ++i) v[i] = (ev[i] + ev[(i + 1) % n]) * 0.5;
    return v;
}

}  // namespace lpfsi
