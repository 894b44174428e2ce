#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "lpfsi/panels.hpp"

namespace lpfsi {

/// Regularized point vortices representing the vertical variable: a
/// divergence-free field tangent to the body boundary once completed.
/// Strengths are circulations and are never mutated by the dynamics.
struct VortexState {
    std::vector<Vec2> positions;
    std::vector<double> strengths;
    double delta = 0.05;              ///< blob radius
    double bound_circulation = 0.0;   ///< circulation carried on the body

    int size() const { return static_cast<int>(positions.size()); }
    double total_circulation() const;
    void validate() const;
};

/// Closure over a concrete velocity field: pointwise velocity, velocity
/// gradient, and (where the kernel provides one) the vector Laplacian.
class Field {
public:
    virtual ~Field() = default;
    virtual Vec2 velocity(const Vec2& p) const = 0;
    virtual Mat2 gradient(const Vec2& p) const = 0;
    virtual Vec2 laplacian(const Vec2& p) const = 0;
};

using FieldPtr = std::shared_ptr<const Field>;

/// Free-space blob kernel sum (no boundary correction).
class BlobField : public Field {
public:
    explicit BlobField(VortexState vortices);
    Vec2 velocity(const Vec2& p) const override;
    Mat2 gradient(const Vec2& p) const override;
    Vec2 laplacian(const Vec2& p) const override;
    /// Streamfunction (single-valued).
    double streamfunction(const Vec2& p) const;
    const VortexState& vortices() const { return vortices_; }

private:
    VortexState vortices_;
};

/// Potential-flow field wrapper (panel sources; harmonic, Laplacian zero).
class PanelField : public Field {
public:
    explicit PanelField(SigmaField field) : field_(std::move(field)) {}
    Vec2 velocity(const Vec2& p) const override { return field_.velocity(p); }
    Mat2 gradient(const Vec2& p) const override { return field_.gradient(p); }
    Vec2 laplacian(const Vec2&) const override { return {0.0, 0.0}; }
    const SigmaField& panels() const { return field_; }

private:
    SigmaField field_;
};

/// Fixed-coefficient combination of fields.
class CombinedField : public Field {
public:
    CombinedField(std::vector<FieldPtr> parts, std::vector<double> weights);
    Vec2 velocity(const Vec2& p) const override;
    Mat2 gradient(const Vec2& p) const override;
    Vec2 laplacian(const Vec2& p) const override;

private:
    std::vector<FieldPtr> parts_;
    std::vector<double> weights_;
};

/// The completed vertical field: blob sum, the pinned interior blob carrying
/// the bound circulation, and the panel-source correction cancelling the
/// normal component on the boundary.
class CompletedVortexField : public Field {
public:
    CompletedVortexField(VortexState vortices, std::shared_ptr<const PanelBoundary> boundary,
                         SigmaField correction, Vec2 bound_center);
    Vec2 velocity(const Vec2& p) const override;
    Mat2 gradient(const Vec2& p) const override;
    Vec2 laplacian(const Vec2& p) const override;

    const VortexState& vortices() const { return vortices_; }
    const SigmaField& correction() const { return correction_; }
    const PanelBoundary& boundary() const { return *boundary_; }
    Vec2 bound_center() const { return bound_center_; }

    /// Velocity excluding blob i's own kernel (for advection).
    Vec2 velocity_excluding(const Vec2& p, int skip_blob) const;
    /// max |u.n| over panel midpoints: the tangency residual.
    double tangency_residual() const;

private:
    VortexState vortices_;
    std::shared_ptr<const PanelBoundary> boundary_;
    SigmaField correction_;
    Vec2 bound_center_;
};

/// Blob kernel primitives for a unit-circulation vortex at the origin.
Vec2 blob_velocity(const Vec2& d, double delta);
Mat2 blob_gradient(const Vec2& d, double delta);
Vec2 blob_laplacian(const Vec2& d, double delta);
double blob_streamfunction(const Vec2& d, double delta);

/// Free-space induced velocity of the vortex set at a point.
Vec2 biot_savart(const VortexState& vortices, const Vec2& p);

/// Complete the vortex field against the boundary: panel solve cancelling
/// the normal trace, bound circulation pinned at the body centroid.
/// Throws if a vortex lies inside the body.
std::shared_ptr<const CompletedVortexField> complete_vertical(
    const VortexState& vortices, std::shared_ptr<const PanelBoundary> boundary);
std::shared_ptr<const CompletedVortexField> complete_vertical(
    const VortexState& vortices, const NeumannSolver& solver);

/// Reduced state: chart coordinates plus the vertical variable.
struct LPState {
    BodyChart chart;
    BodyCoords coords;
    VortexState vortices;
    double time = 0.0;
};

struct HodgeParts {
    BodyCoords coords;        ///< the horizontal part (b, bdot)
    FieldPtr vertical;        ///< xi = u - sigma(b, bdot), boundary-tangent
    double tangency_residual = 0.0;
};

/// The bundle splitting: subtract the Neumann-connection field from u and
/// validate that the remainder is tangent to the boundary (the generalized
/// Helmholtz-Hodge decomposition). Throws if the input violates the
/// no-penetration condition beyond tolerance.
HodgeParts hodge_decompose(const BodyChart& chart, const BodyCoords& coords,
                           const FieldPtr& u, const NeumannSolver& solver,
                           double tolerance = 1e-3);

/// Loop integral of the field velocity around a closed polygonal loop by
/// composite adaptive Gauss quadrature. The loop must keep clear of blobs
/// and the body. Counterclockwise positive.
double circulation(const Field& field, const std::vector<Vec2>& loop,
                   double tolerance = 1e-9);
double circulation(const Field& field, const std::vector<Vec2>& loop,
                   const PanelBoundary* body, const VortexState* vortices,
                   double tolerance);

}  // namespace lpfsi
