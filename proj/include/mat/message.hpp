#pragma once
/**
 * @file   message.hpp
 * @brief  The per-round broadcast and its bit-packed wire format.
 *
 * Every ID field is ⌈log₂ n⌉ bits wide and every table is capped, so the
 * encoded size is bounded by a constant that depends on n only through the
 * ID width.
 */

#include "mat/types.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mat
{
    inline constexpr int kMaxDegree = 16;
    inline constexpr int kMaxOwned = 8;
    inline constexpr int kMaxFrontierUpdates = 2;

    struct NeighborAngle
    {
        RobotId id = 0;
        std::uint32_t sector = 0; ///< sender's bearing sector to `id`
        friend bool operator== (const NeighborAngle &, const NeighborAngle &) = default;
    };

    struct TriangleHop
    {
        TriKey key{};
        std::optional<std::uint32_t> hop;
        /// index into `key` of the vertex opposite the edge that leads downhill
        std::optional<std::uint8_t> descent;
        friend bool operator== (const TriangleHop &, const TriangleHop &) = default;
    };

    /// "Replace your frontier neighbour `old_nbr` by `new_nbr`"; an empty
    /// `new_nbr` drops the link.
    struct FrontierUpdate
    {
        RobotId target = 0;
        RobotId old_nbr = 0;
        std::optional<RobotId> new_nbr;
        friend bool operator== (const FrontierUpdate &, const FrontierUpdate &) = default;
    };

    struct RoundMessage
    {
        RobotId sender = 0;
        FsmState state = FsmState::NavInternal;
        std::optional<RobotId> left_fnbr;
        std::optional<RobotId> right_fnbr;
        std::vector<NeighborAngle> neighbor_angle_table;
        std::vector<TriangleHop> triangle_hop_table;
        std::vector<FrontierUpdate> frontier_payload;
        std::vector<RobotId> disconnect_payload;
        std::optional<std::uint32_t> frontier_angle; ///< sector index of θ_F

        friend bool operator== (const RoundMessage &, const RoundMessage &) = default;

        [[nodiscard]] const NeighborAngle *angle_to (RobotId id) const
        {
            for (const auto &e : neighbor_angle_table)
                if (e.id == id)
                    return &e;
            return nullptr;
        }
    };

    struct CodecParams
    {
        int id_bits = 1;
        int sector_bits = 4;
        int max_degree = kMaxDegree;
        int max_owned = kMaxOwned;
    };

    struct MessageTooLarge : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    /// ⌈log₂ n⌉, at least 1.
    [[nodiscard]] int id_bits_for (std::uint64_t n_robots);

    /// Bits needed for indices 0..count-1.
    [[nodiscard]] int index_bits_for (std::uint64_t count);

    [[nodiscard]] CodecParams make_codec_params (std::uint64_t n_robots, double bearing_resolution);

    [[nodiscard]] std::size_t encoded_bits (const RoundMessage &m, const CodecParams &p);

    /// Largest possible encoded size, in bytes.
    [[nodiscard]] std::size_t size_budget_bytes (const CodecParams &p);

    /// Bits of the largest message that are not ID fields.
    [[nodiscard]] std::size_t budget_non_id_bits (const CodecParams &p);

    /// Number of ID-width fields in the largest message.
    [[nodiscard]] std::size_t budget_id_fields (const CodecParams &p);

    /// Throws MessageTooLarge when a table exceeds its cap or a value does not fit.
    [[nodiscard]] std::vector<std::uint8_t> encode (const RoundMessage &m, const CodecParams &p);
    [[nodiscard]] RoundMessage decode (const std::vector<std::uint8_t> &bytes, const CodecParams &p);

} // namespace mat
