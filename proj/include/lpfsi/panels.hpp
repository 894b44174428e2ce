#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "lpfsi/bodies.hpp"
#include "lpfsi/geometry.hpp"

namespace lpfsi {

/// Discretized body boundary: a closed loop of straight panels with
/// outward normals pointing into the fluid. Panel i spans
/// endpoints[i] -> endpoints[i+1]; material labels are stable under the
/// chart configuration (panel i always images the same reference arc).
struct PanelBoundary {
    std::vector<Vec2> endpoints;   ///< n+1 points, last == first
    std::vector<Vec2> midpoints;   ///< n
    std::vector<Vec2> tangents;    ///< n, unit
    std::vector<Vec2> normals;     ///< n, unit, outward into the fluid
    std::vector<double> lengths;   ///< n, positive
    std::vector<double> material_arc;  ///< reference arc-length label per panel
    std::vector<int> endpoint_link;    ///< material frame of endpoints[i] (0 or 1)
    std::vector<double> curvature;     ///< signed, from tangent turning angles

    int n_panels() const { return static_cast<int>(lengths.size()); }

    /// Fluid-side self coefficient of the source-sheet normal velocity at
    /// midpoint i: 1/2 plus the curved-boundary diagonal kappa L / (4 pi).
    double self_normal_coeff(int i) const;
    double perimeter() const;
    double enclosed_area() const;  ///< shoelace area (positive, CCW loop)
    Vec2 centroid() const;         ///< area centroid of the enclosed polygon

    /// Distance from p to the nearest panel segment.
    double distance_to_boundary(const Vec2& p) const;
    bool contains(const Vec2& p) const;

    /// Consistency checks from construction: closure, unit normals,
    /// orthogonality, outward orientation. Throws on violation.
    void validate() const;
};

struct solver_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Velocity field of a constant-strength source sheet on a panel boundary.
/// Curl- and divergence-free off the panels; single-valued potential.
/// May also be a fiber-linear combination built by scaling/addition.
class SigmaField {
public:
    SigmaField(std::shared_ptr<const PanelBoundary> boundary,
               Eigen::VectorXd source_strengths);

    const PanelBoundary& boundary() const { return *boundary_; }
    const Eigen::VectorXd& strengths() const { return strengths_; }

    /// Velocity at a point strictly off the panels.
    Vec2 velocity(const Vec2& p) const;
    /// Velocity gradient (Hessian of the potential) at a point off the panels.
    Mat2 gradient(const Vec2& p) const;
    /// Single-valued potential at any point (finite on the panels).
    double potential(const Vec2& p) const;

    /// Fluid-side velocity limit at panel midpoint i (principal value plus
    /// the half-strength jump along the outward normal).
    Vec2 velocity_at_midpoint(int i) const;
    /// Potential at panel midpoint i (finite; includes the self panel).
    double potential_at_midpoint(int i) const;

    /// sum(strengths * lengths): net emitted flux, zero by the solver gauge.
    double net_strength() const;

    SigmaField operator*(double s) const;
    SigmaField operator+(const SigmaField& other) const;

private:
    std::shared_ptr<const PanelBoundary> boundary_;
    Eigen::VectorXd strengths_;
};

/// Closed-form influence of a unit-strength source panel (a -> b) at point p.
Vec2 source_panel_velocity(const Vec2& a, const Vec2& b, const Vec2& p);
Mat2 source_panel_gradient(const Vec2& a, const Vec2& b, const Vec2& p);
double source_panel_potential(const Vec2& a, const Vec2& b, const Vec2& p);

/// Dense collocation solver for the exterior Neumann problem on a fixed
/// panel boundary. Precomputes the influence matrices and the factorization
/// of the constrained normal-velocity system
///     u.n = data at midpoints,  sum(strength*length) = 0,
/// the discrete form of "grad Phi . n prescribed, potential unique up to a
/// constant" with decay at infinity. The zero-net-strength gauge is enforced
/// exactly via a Lagrange multiplier; incompatible data beyond tolerance is
/// rejected.
class NeumannSolver {
public:
    explicit NeumannSolver(std::shared_ptr<const PanelBoundary> boundary);

    const PanelBoundary& boundary() const { return *boundary_; }
    std::shared_ptr<const PanelBoundary> boundary_ptr() const { return boundary_; }

    /// Solve for panel strengths given midpoint normal data. Throws
    /// solver_error on incompatible flux or a degenerate system.
    SigmaField solve(const Eigen::VectorXd& normal_data) const;

    /// Normal-velocity residual max|u.n - data| of a solution.
    double bc_residual(const SigmaField& field, const Eigen::VectorXd& normal_data) const;

    /// Influence matrices (midpoint row, panel column).
    const Eigen::MatrixXd& normal_matrix() const { return normal_influence_; }
    const Eigen::MatrixXd& potential_matrix() const { return potential_influence_; }
    const Eigen::MatrixXd& tangent_matrix() const { return tangent_influence_; }

private:
    std::shared_ptr<const PanelBoundary> boundary_;
    Eigen::MatrixXd normal_influence_;     // n x n, A_ij = n_i . u_j(m_i)
    Eigen::MatrixXd tangent_influence_;    // n x n, t_i . u_j(m_i)
    Eigen::MatrixXd potential_influence_;  // n x n, Phi_j(m_i)
    Eigen::PartialPivLU<Eigen::MatrixXd> kkt_lu_;  // constrained normal system
};

/// One-shot exterior Neumann solve (see NeumannSolver).
SigmaField solve_neumann(const PanelBoundary& boundary, const Eigen::VectorXd& normal_data);

/// Neumann connection: the potential-flow field induced by the chart
/// velocity, sigma(q, qdot) = grad Phi with dPhi/dn = <bdot o b^-1, n>.
/// Fiber-linear in qdot.
SigmaField sigma(const BodyChart& chart, const BodyCoords& coords, int n_panels);
SigmaField sigma(const BodyChart& chart, const BodyCoords& coords, const NeumannSolver& solver);

/// Midpoint normal data <boundary velocity, n> for a chart velocity.
Eigen::VectorXd neumann_data(const BodyChart& chart, const BodyCoords& coords,
                             const PanelBoundary& boundary);

/// Kernel evaluation over many points; throws if any point is inside the
/// body or closer than 1e-6 * perimeter to a panel.
std::vector<Vec2> eval_velocity(const SigmaField& field, const std::vector<Vec2>& points);

/// Kinetic energy of the pure potential field by exact boundary quadrature,
///   KE = -1/2 sum Phi(m_i) data_i L_i
/// (normals point into the fluid; the domain is the unbounded exterior).
double boundary_kinetic_energy(const SigmaField& field, const Eigen::VectorXd& normal_data);

/// Asymmetric energy pairing B(f, g) = -sum Phi_f(m_i) g_data_i L_i.
/// Symmetric in (f, g) up to discretization (Neumann-to-Dirichlet
/// self-adjointness); the symmetrized value feeds the added-mass matrix.
double boundary_energy_pairing(const SigmaField& f, const Eigen::VectorXd& g_normal_data);

}  // namespace lpfsi
