#pragma once
/**
 * @file   trace.hpp
 * @brief  JSONL round traces and JSON snapshots.
 */

#include "mat/simulation.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace mat
{
    struct TraceError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    class TraceWriter
    {
      public:
        explicit TraceWriter (std::ostream &out) : out_ (out) {}

        void header (const Scenario &s);
        void round (const WorldT &w);
        void footer (const RunResult &r);

      private:
        std::ostream &out_;
    };

    struct TraceRobot
    {
        std::uint64_t round = 0;
        RobotId id = 0;
        FsmState state = FsmState::NavInternal;
        Pose pose;
        std::vector<RobotId> neighbors;
        FrontierLinks fnbrs;
        std::vector<TriangleRecord> owned;
        std::size_t msg_bytes = 0;
    };

    struct Trace
    {
        Scenario scenario;
        std::vector<TraceRobot> records;
        std::uint64_t rounds = 0;
    };

    /// Throws TraceError when the header or footer is missing or a line is malformed.
    [[nodiscard]] Trace read_trace (std::istream &in);

    /// Snapshot at the last recorded round of a trace.
    [[nodiscard]] Snapshot final_snapshot (const Trace &t);

    void write_snapshot (std::ostream &out, const Snapshot &s, const Scenario &scenario);

    struct SnapshotFile
    {
        Snapshot snapshot;
        Scenario scenario;
    };

    [[nodiscard]] SnapshotFile read_snapshot (std::istream &in);

    [[nodiscard]] FsmState parse_state (const std::string &name);
    [[nodiscard]] TriangleKind parse_kind (const std::string &name);

} // namespace mat
