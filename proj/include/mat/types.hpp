#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <string_view>
#include <utility>

namespace mat
{
    using RobotId = std::uint32_t;

    /// Sorted ID triple; identifies a triangle regardless of who built it.
    using TriKey = std::array<RobotId, 3>;

    /// Sorted ID pair.
    using EdgeKey = std::pair<RobotId, RobotId>;

    [[nodiscard]] inline TriKey make_key (RobotId a, RobotId b, RobotId c)
    {
        TriKey k{a, b, c};
        std::sort (k.begin (), k.end ());
        return k;
    }

    [[nodiscard]] inline EdgeKey make_edge (RobotId a, RobotId b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

    [[nodiscard]] inline std::array<EdgeKey, 3> edges_of (const TriKey &k)
    {
        return {EdgeKey{k[0], k[1]}, EdgeKey{k[0], k[2]}, EdgeKey{k[1], k[2]}};
    }

    [[nodiscard]] inline bool contains (const TriKey &k, RobotId id) { return k[0] == id || k[1] == id || k[2] == id; }

    /// Two distinct triangles sharing exactly two vertices.
    [[nodiscard]] inline bool adjacent (const TriKey &a, const TriKey &b)
    {
        int shared = 0;
        for (RobotId id : a)
            shared += contains (b, id) ? 1 : 0;
        return shared == 2;
    }

    enum class FsmState : std::uint8_t
    {
        NavInternal,
        ExpandTriangle,
        WallFollow,
        Frontier,
        FrontierWall,
        Internal
    };

    [[nodiscard]] constexpr std::string_view to_string (FsmState s)
    {
        switch (s)
        {
        case FsmState::NavInternal:
            return "NavInternal";
        case FsmState::ExpandTriangle:
            return "ExpandTriangle";
        case FsmState::WallFollow:
            return "WallFollow";
        case FsmState::Frontier:
            return "Frontier";
        case FsmState::FrontierWall:
            return "FrontierWall";
        case FsmState::Internal:
            return "Internal";
        }
        return "?";
    }

    [[nodiscard]] inline bool is_mobile (FsmState s)
    {
        return s == FsmState::NavInternal || s == FsmState::ExpandTriangle || s == FsmState::WallFollow;
    }

} // namespace mat
