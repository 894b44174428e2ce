#pragma once

#include <stdexcept>
#include <vector>

#include "lpfsi/geometry.hpp"

namespace lpfsi {

struct PanelBoundary;  // panels.hpp

/// Chart coordinates and velocity of a body configuration.
/// Rigid charts are (theta, x, y); the hinged two-link chart is
/// (phi1, phi2, x, y) with (x, y) the hinge position. Angles are stored
/// unwrapped on the real line.
struct BodyCoords {
    std::vector<double> q;
    std::vector<double> qdot;

    BodyCoords() = default;
    BodyCoords(std::vector<double> q_, std::vector<double> qdot_)
        : q(std::move(q_)), qdot(std::move(qdot_)) {}

    int dim() const { return static_cast<int>(q.size()); }
};

/// Covector paired with chart velocities (energy per unit chart velocity).
struct GeneralizedCovector {
    std::vector<double> components;

    GeneralizedCovector() = default;
    explicit GeneralizedCovector(int dim) : components(dim, 0.0) {}

    int dim() const { return static_cast<int>(components.size()); }
    double& operator[](int i) { return components[i]; }
    double operator[](int i) const { return components[i]; }
    double norm() const;
};

enum class BodyKind { RigidDisc, RigidEllipse, TwoLink };

/// Finite-dimensional body configuration chart: geometry, inertia and the
/// boundary embedding. Rigid charts carry unit-density solid inertia unless
/// overridden; the two-link chart follows the hinged-pair kinetic energy
///   K_i = I_i/2 phi_i'^2
///       + M_i/2 ((x' - L_i sin(phi_i) phi_i')^2 + (y' + L_i cos(phi_i) phi_i')^2)
/// with a linear hinge spring U = k/2 (phi1 - phi2 - rest_angle)^2.
struct BodyChart {
    BodyKind kind = BodyKind::RigidDisc;

    // RigidDisc / RigidEllipse geometry (ellipse semi-axes a >= b).
    double radius = 1.0;
    double ellipse_a = 1.0;
    double ellipse_b = 1.0;

    // Rigid inertia. Negative values mean "derive from unit density".
    double mass = -1.0;
    double inertia = -1.0;

    // TwoLink parameters. Link i spans the segment from the hinge to
    // 2*L_i in direction phi_i; its center of mass sits at distance L_i.
    double link_half_length1 = 1.0;
    double link_half_length2 = 1.0;
    double link_mass1 = 1.0;
    double link_mass2 = 1.0;
    double link_inertia1 = 1.0;
    double link_inertia2 = 1.0;
    double spring_k = 0.0;
    double rest_angle = 0.0;
    double link_width = 0.25;  // capsule half-width

    static BodyChart rigid_disc(double radius);
    static BodyChart rigid_ellipse(double a, double b);
    static BodyChart two_link(double L1, double L2, double M1, double M2,
                              double I1, double I2, double k, double rest_angle);

    int dim() const { return kind == BodyKind::TwoLink ? 4 : 3; }

    /// Solid mass at unit density unless overridden.
    double rigid_mass() const;
    /// Moment of inertia about the body center unless overridden.
    double rigid_inertia() const;

    void validate() const;
};

/// Chart mismatch or invalid configuration.
struct chart_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// L_B(q, qdot) = K - U for the chart.
double body_lagrangian(const BodyChart& chart, const BodyCoords& coords);

/// Analytic partials (dL/dq, dL/dqdot).
void body_lagrangian_derivatives(const BodyChart& chart, const BodyCoords& coords,
                                 GeneralizedCovector& dL_dq,
                                 GeneralizedCovector& dL_dqdot);

/// Chart kinetic-energy matrix M_B(q), so K = qdot' M_B qdot / 2.
void body_mass_matrix(const BodyChart& chart, const std::vector<double>& q,
                      std::vector<double>& m_flat);

/// Discretize the embedded boundary at configuration q into n_panels
/// straight panels with material labels stable under q. Throws chart_error
/// for self-intersecting embeddings.
PanelBoundary embed_boundary(const BodyChart& chart, const std::vector<double>& q,
                             int n_panels);

/// Material velocity of the boundary, sampled at panel midpoints
/// (the Eulerian trace of the chart velocity). Linear in qdot.
std::vector<Vec2> boundary_velocity(const BodyChart& chart, const BodyCoords& coords,
                                    const PanelBoundary& boundary);

/// Velocity of boundary panel ENDPOINTS for the given chart velocity.
/// Midpoint velocities are the endpoint averages, which makes the discrete
/// no-penetration flux vanish identically for area-preserving charts.
std::vector<Vec2> boundary_endpoint_velocity(const BodyChart& chart,
                                             const BodyCoords& coords,
                                             const PanelBoundary& boundary);

}  // namespace lpfsi
