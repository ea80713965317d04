#ifndef TONEDISC_BASELINE_HPP
#define TONEDISC_BASELINE_HPP

#include <cstdint>

#include "tonedisc/report.hpp"
#include "tonedisc/rng.hpp"
#include "tonedisc/topology.hpp"

namespace tonedisc {

// Classic random-access discovery: every device transmits its identifier
// with probability p each slot, and a listener learns a neighbor only in
// slots where exactly one of its neighbors transmits.

// Probability that a device with l neighbors discovers a given neighbor
// within t slots, assuming it listens in every slot:
// 1 - (1 - p * (1-p)^(l-1))^t.
double p_discover(double p, uint32_t l, uint64_t t);

// Same, at the per-slot optimum p = 1/l.
double p_discover_opt(uint32_t l, uint64_t t);

// Slotted simulation of the baseline on an arbitrary topology. A listener
// hears neighbor j in a slot iff the listener itself is not transmitting, j
// transmits, and no other neighbor of the listener transmits. Nodes that
// never hear all their neighbors report max_slots as their completion slot.
RunResult simulate_baseline(const Topology& topo, double p, uint32_t max_slots, Rng& rng,
                            bool stop_when_complete = true);

}  // namespace tonedisc

#endif
