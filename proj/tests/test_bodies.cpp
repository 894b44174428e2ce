#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lpfsi/bodies.hpp"
#include "lpfsi/panels.hpp"

using namespace lpfsi;

namespace {
constexpr double kPi = std::numbers::pi;

BodyChart default_two_link() { return BodyChart::two_link(1, 1, 1, 1, 1, 1, 0, 0); }

double boundary_flux(const BodyChart& chart, const BodyCoords& coords,
                     const PanelBoundary& b) {
    const auto v = boundary_velocity(chart, coords, b);
    double flux = 0.0;
    for (int i = 0; i < b.n_panels(); ++i) flux += v[i].dot(b.normals[i]) * b.lengths[i];
    return flux;
}

double qdot_norm(const std::vector<double>& qd) {
    double s = 0.0;
    for (double v : qd) s += v * v;
    return std::sqrt(s);
}
}  // namespace

TEST_CASE("two-link Lagrangian matches the hinged-pair formulas") {
    auto chart = default_two_link();
    // Pure hinge translation: K1 = K2 = 1/2.
    CHECK(body_lagrangian(chart, {{0, 0, 0, 0}, {0, 0, 1, 0}}) == doctest::Approx(1.0));
    // Pure rotation of link 1 at unit rate: K1 = 1/2 + 1/2, K2 = 0.
    CHECK(body_lagrangian(chart, {{0, 0, 0, 0}, {1, 0, 0, 0}}) == doctest::Approx(1.0));

    auto sprung = BodyChart::two_link(1, 1, 1, 1, 1, 1, 1.0, 0.0);
    // Zero velocity, zero spring extension at phi1 == phi2.
    CHECK(body_lagrangian(sprung, {{0.7, 0.7, 3.0, -2.0}, {0, 0, 0, 0}}) ==
          doctest::Approx(0.0));
}

TEST_CASE("two-link spring gradient") {
    auto chart = BodyChart::two_link(1, 1, 1, 1, 1, 1, 1.0, 0.0);
    GeneralizedCovector dq, dqd;
    body_lagrangian_derivatives(chart, {{0.3, 0.1, 0, 0}, {0, 0, 0, 0}}, dq, dqd);
    CHECK(dq[0] == doctest::Approx(-0.2));
    CHECK(dq[1] == doctest::Approx(0.2));
    CHECK(dq[2] == doctest::Approx(0.0));
    CHECK(dq[3] == doctest::Approx(0.0));
    for (int i = 0; i < 4; ++i) CHECK(dqd[i] == doctest::Approx(0.0));
}

TEST_CASE("two-link momentum for hinge translation") {
    auto chart = default_two_link();
    GeneralizedCovector dq, dqd;
    body_lagrangian_derivatives(chart, {{0, 0, 0, 0}, {0, 0, 1, 0}}, dq, dqd);
    CHECK(dqd[2] == doctest::Approx(2.0));
    CHECK(dqd[3] == doctest::Approx(0.0));
}

TEST_CASE("Lagrangian derivatives match central finite differences") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double h = 1e-5;
    for (int trial = 0; trial < 100; ++trial) {
        BodyChart chart;
        switch (trial % 3) {
            case 0: chart = BodyChart::rigid_disc(0.5 + 0.5 * std::abs(u(rng))); break;
            case 1: chart = BodyChart::rigid_ellipse(2.0, 1.0); break;
            default:
                chart = BodyChart::two_link(1.0 + 0.2 * u(rng), 1.0, 1.5, 0.7, 1.1, 0.9,
                                            0.5 + 0.4 * u(rng), 0.3);
        }
        BodyCoords s;
        for (int i = 0; i < chart.dim(); ++i) {
            s.q.push_back(u(rng));
            s.qdot.push_back(u(rng));
        }
        GeneralizedCovector dq, dqd;
        body_lagrangian_derivatives(chart, s, dq, dqd);
        for (int i = 0; i < chart.dim(); ++i) {
            BodyCoords sp = s, sm = s;
            sp.q[i] += h;
            sm.q[i] -= h;
            const double fd_q =
                (body_lagrangian(chart, sp) - body_lagrangian(chart, sm)) / (2 * h);
            sp = s;
            sm = s;
            sp.qdot[i] += h;
            sm.qdot[i] -= h;
            const double fd_qd =
                (body_lagrangian(chart, sp) - body_lagrangian(chart, sm)) / (2 * h);
            CHECK(dq[i] == doctest::Approx(fd_q).epsilon(1e-6).scale(1.0));
            CHECK(dqd[i] == doctest::Approx(fd_qd).epsilon(1e-6).scale(1.0));
        }
    }
}

TEST_CASE("disc boundary: perimeter, rotation invariance, velocities") {
    auto chart = BodyChart::rigid_disc(1.0);
    auto b = embed_boundary(chart, {0, 0, 0}, 64);
    CHECK(b.perimeter() == doctest::Approx(2 * kPi).epsilon(2e-3));
    b.validate();

    // Rotation maps the vertex set onto a rotated copy.
    auto br = embed_boundary(chart, {0.3, 0, 0}, 64);
    const Mat2 R = Mat2::rotation(0.3);
    for (int i = 0; i < 64; ++i) {
        const Vec2 expect = R * b.endpoints[i];
        CHECK((br.endpoints[i] - expect).norm() < 1e-12);
    }

    // Pure translation: every panel velocity is the translation.
    auto v = boundary_velocity(chart, {{0, 0, 0}, {0, 1, 0}}, b);
    for (const auto& vi : v) {
        CHECK(vi.x == doctest::Approx(1.0));
        CHECK(vi.y == doctest::Approx(0.0));
    }

    // Pure rotation: panel velocities are omega x r about the center; the
    // material point embedded at (1, 0) moves along +y.
    auto ve = boundary_endpoint_velocity(chart, {{0, 0, 0}, {1, 0, 0}}, b);
    CHECK((b.endpoints[0] - Vec2{1.0, 0.0}).norm() < 1e-14);
    CHECK(ve[0].x == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(ve[0].y == doctest::Approx(1.0));
    auto vr = boundary_velocity(chart, {{0, 0, 0}, {1, 0, 0}}, b);
    for (int i = 0; i < 64; ++i) {
        const Vec2 expect = b.midpoints[i].perp();
        CHECK((vr[i] - expect).norm() < 1e-13);
    }

    // Zero chart velocity.
    auto v0 = boundary_velocity(chart, {{0, 0, 0}, {0, 0, 0}}, b);
    for (const auto& vi : v0) CHECK(vi.norm() == 0.0);
}

TEST_CASE("ellipse area via shoelace") {
    auto chart = BodyChart::rigid_ellipse(2.0, 1.0);
    auto b = embed_boundary(chart, {0.4, 1.0, -2.0}, 128);
    CHECK(b.enclosed_area() == doctest::Approx(2 * kPi).epsilon(2e-3));
}

TEST_CASE("two-link enclosed area is independent of configuration") {
    auto chart = default_two_link();
    const double a0 = embed_boundary(chart, {0.0, kPi, 0.0, 0.0}, 96).enclosed_area();
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 12; ++trial) {
        const double phi1 = 0.8 * u(rng);
        const double phi2 = phi1 + kPi + 0.85 * u(rng);
        const auto b = embed_boundary(chart, {phi1, phi2, 2 * u(rng), 2 * u(rng)}, 96);
        CHECK(b.enclosed_area() == doctest::Approx(a0).epsilon(1e-12));
    }
}

TEST_CASE("boundary flux vanishes for every chart and velocity") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        BodyChart chart;
        BodyCoords s;
        switch (trial % 3) {
            case 0: chart = BodyChart::rigid_disc(1.0); break;
            case 1: chart = BodyChart::rigid_ellipse(1.5, 0.6); break;
            default: chart = default_two_link(); break;
        }
        for (int i = 0; i < chart.dim(); ++i) {
            s.q.push_back(0.4 * u(rng));
            s.qdot.push_back(u(rng));
        }
        if (chart.kind == BodyKind::TwoLink) s.q[1] = s.q[0] + kPi + 0.8 * u(rng);
        const auto b = embed_boundary(chart, s.q, 80);
        const double flux = boundary_flux(chart, s, b);
        CHECK(std::abs(flux) < 1e-10 * b.perimeter() * std::max(qdot_norm(s.qdot), 1e-300));
    }
}

TEST_CASE("boundary velocity is exactly linear in qdot") {
    auto chart = default_two_link();
    std::vector<double> q{0.2, kPi - 0.4, 0.5, -0.3};
    const auto b = embed_boundary(chart, q, 64);
    std::vector<double> qd1{0.3, -0.7, 1.1, 0.2}, qd2{-1.0, 0.4, 0.0, 0.9};
    const double a = 2.5;
    std::vector<double> qd3(4);
    for (int i = 0; i < 4; ++i) qd3[i] = a * qd1[i] + qd2[i];
    auto v1 = boundary_velocity(chart, {q, qd1}, b);
    auto v2 = boundary_velocity(chart, {q, qd2}, b);
    auto v3 = boundary_velocity(chart, {q, qd3}, b);
    for (int i = 0; i < b.n_panels(); ++i) {
        CHECK(v3[i].x == doctest::Approx(a * v1[i].x + v2[i].x).epsilon(1e-14));
        CHECK(v3[i].y == doctest::Approx(a * v1[i].y + v2[i].y).epsilon(1e-14));
    }
}

TEST_CASE("overlapping two-link embedding is rejected") {
    auto chart = default_two_link();
    // Both links pointing the same way self-intersect.
    CHECK_THROWS_AS(embed_boundary(chart, {0.0, 0.05, 0.0, 0.0}, 64), chart_error);
}

TEST_CASE("dimension mismatch is a contract violation") {
    auto chart = BodyChart::rigid_disc(1.0);
    CHECK_THROWS_AS(body_lagrangian(chart, {{0, 0}, {0, 0}}), chart_error);
    CHECK_THROWS_AS(embed_boundary(chart, {0, 0, 0, 0}, 64), chart_error);
    CHECK_THROWS_AS(embed_boundary(chart, {0, 0, 0}, 8), chart_error);
}

TEST_CASE("chart parameter validation") {
    CHECK_THROWS_AS(BodyChart::rigid_disc(-1.0), chart_error);
    CHECK_THROWS_AS(BodyChart::rigid_ellipse(1.0, 2.0), chart_error);
    CHECK_THROWS_AS(BodyChart::two_link(1, 1, -1, 1, 1, 1, 0, 0), chart_error);
}
