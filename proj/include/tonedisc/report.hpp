#ifndef TONEDISC_REPORT_HPP
#define TONEDISC_REPORT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace tonedisc {

// Per-node outcome of a discovery run. Both the tone-code simulator and the
// baseline simulator fill this, so density sweeps can compare them directly.
struct NodeReport {
    std::optional<uint32_t> tnid;              // final identifier, if any
    uint32_t acquired_slot = 0;                // slot of the first acquisition
    uint32_t reacquisitions = 0;
    std::map<uint32_t, uint32_t> neighbor_table;  // tnid -> first slot decoded
    std::map<uint32_t, uint32_t> discovered;      // node id -> first slot heard
    bool complete = false;                     // all true neighbors heard
    uint32_t completion_slot = 0;              // horizon when incomplete
    uint64_t listen_slots = 0;
    std::map<uint32_t, uint64_t> heard_count;  // node id -> slots it was heard in
};

struct RunResult {
    std::vector<NodeReport> nodes;
    uint32_t slots_run = 0;
};

}  // namespace tonedisc

#endif
