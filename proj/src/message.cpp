#include "mat/message.hpp"

#include "mat/geometry.hpp"

#include <bit>
#include <string>

namespace mat
{
    namespace
    {
        class BitWriter
        {
          public:
            void put (std::uint64_t value, int bits)
            {
                if (bits < 64 && value >> bits)
                    throw MessageTooLarge ("value " + std::to_string (value) + " does not fit in " + std::to_string (bits) + " bits");
                for (int i = bits - 1; i >= 0; --i)
                {
                    if (nbits_ % 8 == 0)
                        bytes_.push_back (0);
                    if ((value >> i) & 1U)
                        bytes_.back () |= static_cast<std::uint8_t> (0x80U >> (nbits_ % 8));
                    ++nbits_;
                }
            }
            [[nodiscard]] std::vector<std::uint8_t> take () { return std::move (bytes_); }

          private:
            std::vector<std::uint8_t> bytes_;
            std::size_t nbits_ = 0;
        };

        class BitReader
        {
          public:
            explicit BitReader (const std::vector<std::uint8_t> &b) : bytes_ (b) {}
            std::uint64_t get (int bits)
            {
                std::uint64_t v = 0;
                for (int i = 0; i < bits; ++i)
                {
                    const std::size_t byte = pos_ / 8;
                    if (byte >= bytes_.size ())
                        throw std::out_of_range ("truncated message");
                    v = (v << 1) | ((bytes_[byte] >> (7 - pos_ % 8)) & 1U);
                    ++pos_;
                }
                return v;
            }

          private:
            const std::vector<std::uint8_t> &bytes_;
            std::size_t pos_ = 0;
        };

        constexpr int kStateBits = 3;
        constexpr int kDescentBits = 2; // opposite-vertex index 0..2, 3 = none

        int hop_bits (const CodecParams &p) { return p.id_bits + 1; }
        std::uint64_t hop_unset (const CodecParams &p) { return (std::uint64_t{1} << hop_bits (p)) - 1; }
        int degree_count_bits (const CodecParams &p) { return index_bits_for (static_cast<std::uint64_t> (p.max_degree) + 1); }
        int owned_count_bits (const CodecParams &p) { return index_bits_for (static_cast<std::uint64_t> (p.max_owned) + 1); }
        int update_count_bits () { return index_bits_for (kMaxFrontierUpdates + 1); }
    } // namespace

    int index_bits_for (std::uint64_t count)
    {
        if (count <= 2)
            return 1;
        return static_cast<int> (std::bit_width (count - 1));
    }

    int id_bits_for (std::uint64_t n_robots) { return index_bits_for (n_robots); }

    CodecParams make_codec_params (std::uint64_t n_robots, double bearing_resolution)
    {
        CodecParams p;
        p.id_bits = id_bits_for (n_robots);
        p.sector_bits = index_bits_for (static_cast<std::uint64_t> (sector_count (bearing_resolution)));
        return p;
    }

    std::size_t encoded_bits (const RoundMessage &m, const CodecParams &p)
    {
        const std::size_t id = static_cast<std::size_t> (p.id_bits);
        std::size_t bits = id + kStateBits;
        bits += 2 * (1 + id);
        bits += degree_count_bits (p) + m.neighbor_angle_table.size () * (id + p.sector_bits);
        bits += owned_count_bits (p) + m.triangle_hop_table.size () * (3 * id + hop_bits (p) + kDescentBits);
        bits += update_count_bits () + m.frontier_payload.size () * (3 * id + 1);
        bits += owned_count_bits (p) + m.disconnect_payload.size () * id;
        bits += 1 + p.sector_bits;
        return bits;
    }

    std::size_t budget_id_fields (const CodecParams &p)
    {
        // sender, two frontier links, angle table, hop table (3 ids + a hop of
        // id width), frontier updates, disconnects
        return 3 + p.max_degree + 4 * p.max_owned + 3 * kMaxFrontierUpdates + p.max_owned;
    }

    std::size_t budget_non_id_bits (const CodecParams &p)
    {
        return kStateBits + 2 + degree_count_bits (p) + p.max_degree * p.sector_bits + owned_count_bits (p) + p.max_owned * (1 + kDescentBits) +
               update_count_bits () + kMaxFrontierUpdates + owned_count_bits (p) + 1 + p.sector_bits;
    }

    std::size_t size_budget_bytes (const CodecParams &p)
    {
        const std::size_t bits = budget_non_id_bits (p) + budget_id_fields (p) * p.id_bits;
        return (bits + 7) / 8;
    }

    std::vector<std::uint8_t> encode (const RoundMessage &m, const CodecParams &p)
    {
        if (m.neighbor_angle_table.size () > static_cast<std::size_t> (p.max_degree))
            throw MessageTooLarge ("neighbor angle table exceeds MAX_DEGREE");
        if (m.triangle_hop_table.size () > static_cast<std::size_t> (p.max_owned))
            throw MessageTooLarge ("triangle hop table exceeds MAX_OWNED");
        if (m.frontier_payload.size () > kMaxFrontierUpdates)
            throw MessageTooLarge ("too many frontier updates");
        if (m.disconnect_payload.size () > static_cast<std::size_t> (p.max_owned))
            throw MessageTooLarge ("too many disconnects");

        BitWriter w;
        auto opt_id = [&] (const std::optional<RobotId> &v) {
            w.put (v ? 1 : 0, 1);
            w.put (v.value_or (0), p.id_bits);
        };
        w.put (m.sender, p.id_bits);
        w.put (static_cast<std::uint64_t> (m.state), kStateBits);
        opt_id (m.left_fnbr);
        opt_id (m.right_fnbr);
        w.put (m.neighbor_angle_table.size (), degree_count_bits (p));
        for (const auto &e : m.neighbor_angle_table)
        {
            w.put (e.id, p.id_bits);
            w.put (e.sector, p.sector_bits);
        }
        w.put (m.triangle_hop_table.size (), owned_count_bits (p));
        for (const auto &t : m.triangle_hop_table)
        {
            for (RobotId id : t.key)
                w.put (id, p.id_bits);
            if (t.hop && *t.hop >= hop_unset (p))
                throw MessageTooLarge ("hop value does not fit");
            w.put (t.hop ? *t.hop : hop_unset (p), hop_bits (p));
            if (t.descent && *t.descent > 2)
                throw MessageTooLarge ("descent index out of range");
            w.put (t.descent ? *t.descent : 3u, kDescentBits);
        }
        w.put (m.frontier_payload.size (), update_count_bits ());
        for (const auto &u : m.frontier_payload)
        {
            w.put (u.target, p.id_bits);
            w.put (u.old_nbr, p.id_bits);
            opt_id (u.new_nbr);
        }
        w.put (m.disconnect_payload.size (), owned_count_bits (p));
        for (RobotId id : m.disconnect_payload)
            w.put (id, p.id_bits);
        w.put (m.frontier_angle ? 1 : 0, 1);
        w.put (m.frontier_angle.value_or (0), p.sector_bits);
        return w.take ();
    }

    RoundMessage decode (const std::vector<std::uint8_t> &bytes, const CodecParams &p)
    {
        BitReader r (bytes);
        RoundMessage m;
        auto opt_id = [&] () -> std::optional<RobotId> {
            const bool present = r.get (1) != 0;
            const auto v = static_cast<RobotId> (r.get (p.id_bits));
            return present ? std::optional<RobotId> (v) : std::nullopt;
        };
        m.sender = static_cast<RobotId> (r.get (p.id_bits));
        m.state = static_cast<FsmState> (r.get (kStateBits));
        m.left_fnbr = opt_id ();
        m.right_fnbr = opt_id ();
        const auto na = r.get (degree_count_bits (p));
        for (std::uint64_t i = 0; i < na; ++i)
        {
            NeighborAngle e;
            e.id = static_cast<RobotId> (r.get (p.id_bits));
            e.sector = static_cast<std::uint32_t> (r.get (p.sector_bits));
            m.neighbor_angle_table.push_back (e);
        }
        const auto nt = r.get (owned_count_bits (p));
        for (std::uint64_t i = 0; i < nt; ++i)
        {
            TriangleHop t;
            for (auto &id : t.key)
                id = static_cast<RobotId> (r.get (p.id_bits));
            const auto h = r.get (hop_bits (p));
            if (h != hop_unset (p))
                t.hop = static_cast<std::uint32_t> (h);
            if (const auto d = r.get (kDescentBits); d != 3)
                t.descent = static_cast<std::uint8_t> (d);
            m.triangle_hop_table.push_back (t);
        }
        const auto nu = r.get (update_count_bits ());
        for (std::uint64_t i = 0; i < nu; ++i)
        {
            FrontierUpdate u;
            u.target = static_cast<RobotId> (r.get (p.id_bits));
            u.old_nbr = static_cast<RobotId> (r.get (p.id_bits));
            u.new_nbr = opt_id ();
            m.frontier_payload.push_back (u);
        }
        const auto nd = r.get (owned_count_bits (p));
        for (std::uint64_t i = 0; i < nd; ++i)
            m.disconnect_payload.push_back (static_cast<RobotId> (r.get (p.id_bits)));
        const bool has_angle = r.get (1) != 0;
        const auto a = static_cast<std::uint32_t> (r.get (p.sector_bits));
        if (has_angle)
            m.frontier_angle = a;
        return m;
    }

} // namespace mat
