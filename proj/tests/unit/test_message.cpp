#include "mat/message.hpp"

#include "mat/geometry.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mat;

namespace
{
    RoundMessage random_message (std::mt19937_64 &rng, const CodecParams &p, std::uint64_t n, bool full = false)
    {
        std::uniform_int_distribution<RobotId> id (0, static_cast<RobotId> (n - 1));
        std::uniform_int_distribution<std::uint32_t> sector (0, 15);
        std::uniform_int_distribution<int> coin (0, 1);
        auto count = [&] (int cap) { return full ? cap : std::uniform_int_distribution<int> (0, cap) (rng); };
        RoundMessage m;
        m.sender = id (rng);
        m.state = static_cast<FsmState> (std::uniform_int_distribution<int> (0, 5) (rng));
        if (full || coin (rng))
            m.left_fnbr = id (rng);
        if (full || coin (rng))
            m.right_fnbr = id (rng);
        for (int i = count (p.max_degree); i > 0; --i)
            m.neighbor_angle_table.push_back ({id (rng), sector (rng)});
        for (int i = count (p.max_owned); i > 0; --i)
        {
            TriangleHop h{make_key (id (rng), id (rng), id (rng)), std::nullopt, std::nullopt};
            if (full || coin (rng))
                h.hop = std::uniform_int_distribution<std::uint32_t> (0, static_cast<std::uint32_t> (n)) (rng);
            if (full || coin (rng))
                h.descent = static_cast<std::uint8_t> (std::uniform_int_distribution<int> (0, 2) (rng));
            m.triangle_hop_table.push_back (h);
        }
        for (int i = count (kMaxFrontierUpdates); i > 0; --i)
        {
            FrontierUpdate u{id (rng), id (rng), std::nullopt};
            if (full || coin (rng))
                u.new_nbr = id (rng);
            m.frontier_payload.push_back (u);
        }
        for (int i = count (p.max_owned); i > 0; --i)
            m.disconnect_payload.push_back (id (rng));
        if (full || coin (rng))
            m.frontier_angle = sector (rng);
        return m;
    }
} // namespace

TEST (Codec, IdWidth)
{
    EXPECT_EQ (id_bits_for (2), 1);
    EXPECT_EQ (id_bits_for (8), 3);
    EXPECT_EQ (id_bits_for (9), 4);
    EXPECT_EQ (id_bits_for (64), 6);
    EXPECT_EQ (id_bits_for (512), 9);
    EXPECT_EQ (make_codec_params (12, kPi / 8.0).sector_bits, 4);
}

TEST (Codec, RoundTrip)
{
    for (std::uint64_t n : {8u, 64u, 512u})
    {
        const auto p = make_codec_params (n, kPi / 8.0);
        std::mt19937_64 rng (n);
        for (int i = 0; i < 500; ++i)
        {
            const auto m = random_message (rng, p, n);
            const auto bytes = encode (m, p);
            EXPECT_EQ (bytes.size (), (encoded_bits (m, p) + 7) / 8);
            EXPECT_EQ (decode (bytes, p), m);
        }
    }
}

TEST (Codec, DescentSurvivesRoundTrip)
{
    const auto p = make_codec_params (16, kPi / 8.0);
    RoundMessage m;
    m.triangle_hop_table = {{make_key (1, 2, 3), 4u, std::uint8_t{2}}, {make_key (4, 5, 6), std::nullopt, std::nullopt}};
    const auto back = decode (encode (m, p), p);
    ASSERT_EQ (back.triangle_hop_table.size (), 2u);
    EXPECT_EQ (back.triangle_hop_table[0].descent, std::uint8_t{2});
    EXPECT_FALSE (back.triangle_hop_table[1].descent.has_value ());
    EXPECT_FALSE (back.triangle_hop_table[1].hop.has_value ());
}

TEST (Codec, FullMessageHitsBudget)
{
    for (std::uint64_t n : {8u, 64u, 512u})
    {
        const auto p = make_codec_params (n, kPi / 8.0);
        std::mt19937_64 rng (n + 1);
        const auto m = random_message (rng, p, n, true);
        EXPECT_EQ (encoded_bits (m, p), budget_non_id_bits (p) + budget_id_fields (p) * static_cast<std::size_t> (p.id_bits));
        EXPECT_EQ (encode (m, p).size (), size_budget_bytes (p));
    }
}

TEST (Codec, NonIdBudgetIndependentOfNetworkSize)
{
    const auto a = make_codec_params (8, kPi / 8.0);
    const auto b = make_codec_params (64, kPi / 8.0);
    const auto c = make_codec_params (512, kPi / 8.0);
    EXPECT_EQ (budget_non_id_bits (a), budget_non_id_bits (b));
    EXPECT_EQ (budget_non_id_bits (b), budget_non_id_bits (c));
    EXPECT_EQ (budget_id_fields (a), budget_id_fields (c));
    EXPECT_LT (size_budget_bytes (a), size_budget_bytes (c));
}

TEST (Codec, RejectsOversizedTables)
{
    const auto p = make_codec_params (64, kPi / 8.0);
    RoundMessage m;
    m.neighbor_angle_table.resize (static_cast<std::size_t> (p.max_degree) + 1);
    EXPECT_THROW ((void) encode (m, p), MessageTooLarge);
    RoundMessage big_id;
    big_id.sender = 64;
    EXPECT_THROW ((void) encode (big_id, p), MessageTooLarge);
}

TEST (Codec, TruncatedInputThrows)
{
    const auto p = make_codec_params (8, kPi / 8.0);
    std::mt19937_64 rng (9);
    auto bytes = encode (random_message (rng, p, 8, true), p);
    bytes.resize (bytes.size () / 2);
    EXPECT_ANY_THROW ((void) decode (bytes, p));
}
