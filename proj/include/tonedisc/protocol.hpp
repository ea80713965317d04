#ifndef TONEDISC_PROTOCOL_HPP
#define TONEDISC_PROTOCOL_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "tonedisc/channel.hpp"
#include "tonedisc/report.hpp"
#include "tonedisc/rng.hpp"
#include "tonedisc/topology.hpp"

namespace tonedisc {

// Knobs of the slotted discovery protocol. Every window and count is in
// discovery slots; the period-1 sleep slots in between carry no signaling,
// so the simulator skips them and slot indices here scale by `period` to
// give wall-clock time.
struct ProtocolConfig {
    double p = 0.35;          // transmit probability per discovery slot
    uint32_t period = 100;    // total slots per discovery slot (bookkeeping only)
    uint32_t m = 16;          // acquisition picks uniformly among the m quietest channels
    uint32_t w = 50;          // observation / occupancy window, in listening slots
    double jam_margin = -1.0;  // occupancy above p + margin flags a channel for
                               // jamming; negative means 3 sigma of a rate
                               // estimate from w Bernoulli(p) slots
    double jam_prob = 0.5;    // chance an idle node jams some flagged channel
    uint32_t c = 2;           // own-channel hits within the window forcing re-acquisition
    uint32_t max_slots = 2000;

    double resolved_jam_margin() const;
    // channels = number of selectable identifiers. Throws std::invalid_argument.
    void validate(uint64_t channels) const;
};

enum class Phase : uint8_t { Acquiring, Discovering };

enum class ActionKind : uint8_t { Listen, Transmit, Jam };

struct Action {
    ActionKind kind = ActionKind::Listen;
    Tnid tnid = 0;  // channel being energized, for Transmit and Jam
};

// Uniform random pick among the m smallest entries of avg_energy, ties
// broken toward the lower index before the draw. Returns the chosen index.
size_t acquire_tnid(std::span<const double> avg_energy, uint32_t m, Rng& rng);

// Indices whose detection frequency exceeds p + margin. One honest occupant
// transmitting with probability p stays below the threshold except for
// binomial estimation noise; two or more push the frequency toward
// 1 - (1-p)^2 and land above it.
std::vector<size_t> hidden_check(std::span<const double> occupancy, double p, double margin);

// Physical-layer side of a discovery run. Identifiers are single field
// symbols drawn from 1..d-1: symbol 0 would put every tone of its codeword
// on bin 0, turning one channel into a collector for every stray detection,
// so it is left out of the pool.
struct SimParams {
    Field field;
    double gamma = 8.0;      // detection threshold factor over the median bin
    uint32_t tau = 0;        // decode score cutoff; 0 picks 1 + (n-1)/2
    uint32_t delta_max = 0;  // frequency-offset search radius
    ChannelModel model{};    // defaults to a clean unit-gain channel
    double tone_energy = 1.0;
    bool dense_grid = false;  // force full-grid synthesis even when noiseless

    uint32_t resolved_tau() const;
};

// One protocol participant. Each slot splits in two: decide() picks the
// slot's action from the state left by earlier slots, and, when the pick was
// Listen, hear() folds in the identifiers decoded off the air. Acquiring
// nodes additionally take per-channel energies through absorb_energy()
// while their observation window fills. Transmitting and jamming nodes hear
// nothing (half duplex).
class Node {
public:
    // pool = number of selectable identifiers; identifier i+1 corresponds to
    // energy/occupancy index i. A forced identifier skips acquisition and
    // starts the node in Discovering at slot 0.
    Node(const ProtocolConfig& cfg, uint64_t pool, std::optional<Tnid> forced = std::nullopt);

    Phase phase() const { return phase_; }
    std::optional<Tnid> tnid() const { return tnid_; }
    // True when the node is acquiring, past its backoff, and still filling
    // its observation window; the simulator then owes it channel energies.
    bool observing() const { return phase_ == Phase::Acquiring && backoff_ == 0; }
    uint32_t acquired_slot() const { return acquired_slot_; }
    bool ever_acquired() const { return ever_acquired_; }
    uint32_t reacquisitions() const { return reacquisitions_; }
    const std::map<uint32_t, uint32_t>& neighbor_table() const { return table_; }
    const std::set<Tnid>& flagged() const { return flags_; }

    Action decide(uint32_t slot, Rng& rng);

    // Digest one listening slot. decoded holds the identifiers recovered this
    // slot (no duplicates; the caller filters out identifier 0). Returns the
    // ids admitted past the flag filter, i.e. the ones a neighbor table
    // update was attempted for. May consume rng when a re-acquisition backoff
    // gets scheduled.
    std::vector<Tnid> hear(uint32_t slot, std::span<const Tnid> decoded, Rng& rng);

    // One observation slot's per-channel energy, indexed by identifier - 1.
    void absorb_energy(std::span<const double> channel_energy);

private:
    void reacquire(Rng& rng);

    ProtocolConfig cfg_;
    uint64_t pool_;
    double margin_;
    Phase phase_ = Phase::Acquiring;
    std::optional<Tnid> tnid_;
    uint32_t backoff_ = 0;    // listening slots left before observation restarts
    uint32_t observed_ = 0;   // observation slots absorbed so far
    std::vector<double> esum_;  // per-channel energy accumulated while observing

    // Occupancy over the last w listening slots while discovering: the ring
    // keeps each slot's decoded set so counts_ can be maintained exactly.
    std::deque<std::vector<Tnid>> ring_;
    std::unordered_map<Tnid, uint32_t> counts_;
    std::set<Tnid> flags_;
    std::unordered_map<Tnid, uint32_t> over_thr_;  // consecutive over-threshold evals
    std::deque<uint64_t> own_hits_;  // listening-slot ordinals of own-id decodes
    uint64_t listen_count_ = 0;

    std::map<uint32_t, uint32_t> table_;  // identifier -> first slot decoded
    uint32_t acquired_slot_ = 0;
    bool ever_acquired_ = false;
    uint32_t reacquisitions_ = 0;
};

// Simulate the full protocol on a topology: acquisition from channel
// energies, probabilistic transmission, decoding through the configured
// channel model, collision self-detection and hidden-device jamming.
// Per node the report carries the identifier it ended on, its neighbor
// table, when each true neighbor was first decoded, and the slot its last
// true neighbor was learned (= completion; acquisition slot when it has no
// neighbors; max_slots when it never finished).
//
// Determinism: every draw comes from a stream derived from master_seed, the
// node index or the (slot, listener) pair, so a run is a pure function of
// (topology, cfg, sim, master_seed, forced_tnids).
//
// forced_tnids, when non-empty, must have one entry per node; engaged values
// pre-assign that node's identifier.
RunResult run_discovery(const Topology& topo, const ProtocolConfig& cfg, const SimParams& sim,
                        uint64_t master_seed,
                        std::span<const std::optional<Tnid>> forced_tnids = {},
                        bool stop_when_complete = true);

}  // namespace tonedisc

#endif
