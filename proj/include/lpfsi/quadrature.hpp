#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "lpfsi/panels.hpp"

namespace lpfsi {

struct QuadratureSpec {
    double rel_tolerance = 1e-6;
    double abs_tolerance = 1e-12;
    int max_cells = 400000;
    double rmax_factor = 50.0;  ///< outer truncation radius in body diameters
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  ///< accumulated refinement estimate
    long cells = 0;
};

/// Carries the best available estimate when refinement stalls.
struct quadrature_error : std::runtime_error {
    quadrature_error(const std::string& what, QuadratureResult partial)
        : std::runtime_error(what), partial_result(partial) {}
    QuadratureResult partial_result;
};

using Integrand = std::function<double(const Vec2&)>;

/// Adaptive integral over the truncated fluid exterior: the disc of radius
/// r_max about the body centroid minus the body polygon. Uses a polar map
/// conforming to the (star-shaped) boundary; falls back to masking when the
/// polygon is not star-shaped about its centroid.
QuadratureResult integrate_exterior(const PanelBoundary& body, double r_max,
                                    const Integrand& f, const QuadratureSpec& spec);

/// Adaptive integral over an annulus r in [r0, r1] about a center.
QuadratureResult integrate_annulus(const Vec2& center, double r0, double r1,
                                   const Integrand& f, const QuadratureSpec& spec);

/// Adaptive integral over the body polygon interior.
QuadratureResult integrate_polygon(const PanelBoundary& body, const Integrand& f,
                                   const QuadratureSpec& spec);

/// Outer truncation radius for a boundary under the given spec.
double truncation_radius(const PanelBoundary& body, const QuadratureSpec& spec);

/// Fixed (non-adaptive) integral over the body polygon: a centroid fan with
/// `levels` uniform triangle subdivisions and a degree-5 rule per triangle.
/// Smooth in the vertex positions, which adaptive refinement is not.
double integrate_polygon_fixed(const PanelBoundary& body, const Integrand& f, int levels);

}  // namespace lpfsi
