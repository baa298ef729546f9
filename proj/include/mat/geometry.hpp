#pragma once
/**
 * @file   geometry.hpp
 * @brief  Angular and planar geometry used by the controllers and the analysis.
 *
 * Controllers only ever see angles; the point-based helpers at the bottom of
 * this header are for the simulator and the offline analysis.
 */

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>

namespace mat
{
    using Point = Eigen::Vector2d;

    inline constexpr double kPi = std::numbers::pi;
    inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

    /// Wrap to [0, 2π).
    [[nodiscard]] inline double wrap_two_pi (double a) noexcept
    {
        double m = std::fmod (a, kTwoPi);
        if (m < 0.0)
            m += kTwoPi;
        if (m >= kTwoPi)
            m = 0.0;
        return m;
    }

    /// Wrap to (−π, π].
    [[nodiscard]] inline double wrap_signed (double a) noexcept
    {
        double m = wrap_two_pi (a);
        return m > kPi ? m - kTwoPi : m;
    }

    /// An angle in radians, always stored in [0, 2π).
    class Angle
    {
      public:
        constexpr Angle () = default;
        explicit Angle (double radians) : value_ (wrap_two_pi (radians)) {}

        [[nodiscard]] double rad () const noexcept { return value_; }
        [[nodiscard]] Angle opposite () const { return Angle (value_ + kPi); }

        friend Angle operator+ (Angle a, double d) { return Angle (a.value_ + d); }
        friend Angle operator- (Angle a, double d) { return Angle (a.value_ - d); }
        friend bool operator== (Angle a, Angle b) noexcept { return a.value_ == b.value_; }

      private:
        double value_ = 0.0;
    };

    /// Unsigned angular distance in [0, π]; symmetric.
    [[nodiscard]] inline double angular_diff (Angle a, Angle b) noexcept
    {
        const double d = std::abs (a.rad () - b.rad ());
        return d > kPi ? kTwoPi - d : d;
    }

    /// Counterclockwise sweep from `from` to `to`, in [0, 2π).
    [[nodiscard]] inline double ccw_sweep (Angle from, Angle to) noexcept { return wrap_two_pi (to.rad () - from.rad ()); }

    /// Midpoint of the shorter arc between a and b.
    [[nodiscard]] inline Angle bisector (Angle a, Angle b)
    {
        const double s = ccw_sweep (a, b);
        return s <= kPi ? a + 0.5 * s : b + 0.5 * (kTwoPi - s);
    }

    struct InnerAngles
    {
        double theta_left = 0.0;  ///< angle at the left frontier neighbour
        double theta_right = 0.0; ///< angle at the right frontier neighbour
    };

    struct FatnessParams
    {
        double rho = 1.0;   ///< longest / shortest edge
        double alpha = 0.0; ///< smallest angle (rad)
    };

    struct UndefinedNeighbor : std::logic_error
    {
        using std::logic_error::logic_error;
    };

    struct DegenerateTriangle : std::domain_error
    {
        using std::domain_error::domain_error;
    };

    // -- bearing quantization -------------------------------------------------

    /// Number of sectors for a resolution; throws std::invalid_argument when the
    /// resolution is not positive or does not tile the circle.
    [[nodiscard]] int sector_count (double resolution);
    [[nodiscard]] int sector_index (Angle exact, double resolution);
    [[nodiscard]] Angle sector_center (int index, double resolution);

    /// Center of the sector containing `exact`.
    [[nodiscard]] Angle quantize_bearing (Angle exact, double resolution);

    // -- controller-side geometry ---------------------------------------------

    /// Inner angles of Δ(u, u.L, u.R) from the two neighbours' own bearings.
    [[nodiscard]] InnerAngles inner_angles_from_bearings (Angle left_to_u, Angle left_to_right, Angle right_to_u,
                                                          Angle right_to_left) noexcept;

    /// Robot is inside the polygon spanned by the observed vertices iff no
    /// circular gap between consecutive bearings exceeds π (+ slack).
    [[nodiscard]] bool occupancy_test (std::span<const Angle> bearings, double slack = 0.0);

    /// Which way unexplored space is swept from the right neighbour's bearing.
    enum class UnexploredSweep
    {
        CounterClockwise,
        Clockwise
    };

    struct FrontierAngle
    {
        double theta_f = 0.0;
        Angle normal;
    };

    [[nodiscard]] FrontierAngle frontier_angle (std::optional<Angle> to_left, std::optional<Angle> to_right,
                                                UnexploredSweep sweep = UnexploredSweep::CounterClockwise);

    [[nodiscard]] inline bool triangle_quality (double theta_f, double k) noexcept { return theta_f < k; }

    // -- ground-truth geometry (simulator / analysis only) --------------------

    struct TriangleMetrics
    {
        double min_angle = 0.0;
        double max_angle = 0.0;
        double edge_ratio = 1.0;
        double area = 0.0;
    };

    inline constexpr double kDegenerateArea = 1e-12;

    [[nodiscard]] TriangleMetrics triangle_metrics (const Point &a, const Point &b, const Point &c);

    [[nodiscard]] inline double cross (const Point &a, const Point &b) noexcept { return a.x () * b.y () - a.y () * b.x (); }

    /// Twice the signed area of (a, b, c); positive when counterclockwise.
    [[nodiscard]] inline double orient (const Point &a, const Point &b, const Point &c) noexcept { return cross (b - a, c - a); }

    [[nodiscard]] inline Angle direction (const Point &from, const Point &to)
    {
        const Point d = to - from;
        return Angle (std::atan2 (d.y (), d.x ()));
    }

    [[nodiscard]] inline Point unit (Angle a) { return {std::cos (a.rad ()), std::sin (a.rad ())}; }

    /// Closed point-in-triangle by signed areas.
    [[nodiscard]] bool point_in_triangle (const Point &p, const Point &a, const Point &b, const Point &c, double tol = 0.0);

    /// Distance from p to the closest of the triangle's three edges.
    [[nodiscard]] double distance_to_triangle_boundary (const Point &p, const Point &a, const Point &b, const Point &c);

    [[nodiscard]] double distance_to_segment (const Point &p, const Point &a, const Point &b, Point *closest = nullptr);

    /// Segments [p1,p2] and [q1,q2] share at least one point.
    [[nodiscard]] bool segments_intersect (const Point &p1, const Point &p2, const Point &q1, const Point &q2);

    /// Segments cross at a single interior point of both.
    [[nodiscard]] bool segments_cross_properly (const Point &p1, const Point &p2, const Point &q1, const Point &q2);

    [[nodiscard]] double polygon_signed_area (std::span<const Point> ring);

    /// Ray-casting containment (boundary points may go either way).
    [[nodiscard]] bool point_in_ring (const Point &p, std::span<const Point> ring);

    /// Area of the intersection of two triangles.
    [[nodiscard]] double triangle_overlap_area (const std::array<Point, 3> &t1, const std::array<Point, 3> &t2);

} // namespace mat
