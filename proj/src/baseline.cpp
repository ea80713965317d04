#include "tonedisc/baseline.hpp"

#include <cmath>
#include <stdexcept>

namespace tonedisc {

double p_discover(double p, uint32_t l, uint64_t t) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must lie in [0, 1]");
    if (l < 1) throw std::invalid_argument("need at least one neighbor");
    const double per_slot = p * std::pow(1.0 - p, static_cast<double>(l - 1));
    return 1.0 - std::pow(1.0 - per_slot, static_cast<double>(t));
}

double p_discover_opt(uint32_t l, uint64_t t) {
    if (l < 1) throw std::invalid_argument("need at least one neighbor");
    return p_discover(1.0 / static_cast<double>(l), l, t);
}

RunResult simulate_baseline(const Topology& topo, double p, uint32_t max_slots, Rng& rng,
                            bool stop_when_complete) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must lie in [0, 1]");
    const uint32_t n = topo.size();
    RunResult res;
    res.nodes.resize(n);

    uint32_t incomplete = 0;
    for (uint32_t i = 0; i < n; ++i) {
        res.nodes[i].completion_slot = max_slots;
        if (topo.neighbors(i).empty()) {
            res.nodes[i].complete = true;  // nothing to learn
            res.nodes[i].completion_slot = 0;
        } else {
            ++incomplete;
        }
    }

    std::vector<uint8_t> transmits(n);
    for (uint32_t slot = 0; slot < max_slots; ++slot) {
        if (stop_when_complete && incomplete == 0) break;
        res.slots_run = slot + 1;
        for (uint32_t i = 0; i < n; ++i) transmits[i] = rng.bernoulli(p);
        for (uint32_t i = 0; i < n; ++i) {
            if (transmits[i]) continue;
            NodeReport& me = res.nodes[i];
            ++me.listen_slots;
            uint32_t heard = n;  // sentinel: none or collision
            uint32_t count = 0;
            for (uint32_t j : topo.neighbors(i)) {
                if (transmits[j]) {
                    heard = j;
                    if (++count > 1) break;
                }
            }
            if (count != 1) continue;
            ++me.heard_count[heard];
            if (me.discovered.emplace(heard, slot).second && !me.complete &&
                me.discovered.size() == topo.neighbors(i).size()) {
                me.complete = true;
                me.completion_slot = slot;
                --incomplete;
            }
        }
    }
    return res;
}

}  // namespace tonedisc
