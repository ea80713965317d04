#include "tonedisc/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace tonedisc {

double ProtocolConfig::resolved_jam_margin() const {
    if (jam_margin >= 0.0) return jam_margin;
    return 3.0 * std::sqrt(p * (1.0 - p) / w);
}

void ProtocolConfig::validate(uint64_t channels) const {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must be in (0, 1)");
    if (period == 0) throw std::invalid_argument("period must be at least 1");
    if (m == 0 || m > channels) throw std::invalid_argument("m must be in [1, channels]");
    if (w == 0) throw std::invalid_argument("w must be at least 1");
    if (jam_prob < 0.0 || jam_prob > 1.0) throw std::invalid_argument("jam_prob must be in [0, 1]");
    if (c == 0) throw std::invalid_argument("c must be at least 1");
    if (max_slots == 0) throw std::invalid_argument("max_slots must be at least 1");
}

size_t acquire_tnid(std::span<const double> avg_energy, uint32_t m, Rng& rng) {
    if (m == 0 || m > avg_energy.size()) {
        throw std::invalid_argument("m must be in [1, channels]");
    }
    std::vector<size_t> idx(avg_energy.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        if (avg_energy[a] != avg_energy[b]) return avg_energy[a] < avg_energy[b];
        return a < b;
    });
    return idx[rng.below(m)];
}

std::vector<size_t> hidden_check(std::span<const double> occupancy, double p, double margin) {
    std::vector<size_t> flagged;
    for (size_t i = 0; i < occupancy.size(); ++i) {
        if (occupancy[i] > p + margin) flagged.push_back(i);
    }
    return flagged;
}

uint32_t SimParams::resolved_tau() const {
    return tau > 0 ? tau : 1 + (field.n() - 1) / 2;
}

// Consecutive over-threshold evaluations needed before a flag goes up. A
// genuinely collided channel sits far enough above the line to clear all
// three back to back; an honest channel brushing the threshold from
// sampling noise almost never strings three crossings together.
constexpr uint32_t kFlagPersistence = 3;

Node::Node(const ProtocolConfig& cfg, uint64_t pool, std::optional<Tnid> forced)
    : cfg_(cfg), pool_(pool), margin_(cfg.resolved_jam_margin()), esum_(pool, 0.0) {
    if (forced) {
        tnid_ = *forced;
        phase_ = Phase::Discovering;
        ever_acquired_ = true;
    }
}

Action Node::decide(uint32_t slot, Rng& rng) {
    if (phase_ == Phase::Acquiring) {
        if (backoff_ > 0) {
            --backoff_;
            return {};
        }
        if (observed_ < cfg_.w) return {};
        // window full: settle on one of the quietest channels and start
        // discovering in this very slot
        std::vector<double> avg(esum_);
        for (double& e : avg) e /= cfg_.w;
        tnid_ = static_cast<Tnid>(acquire_tnid(avg, cfg_.m, rng)) + 1;
        phase_ = Phase::Discovering;
        acquired_slot_ = slot;
        ever_acquired_ = true;
        observed_ = 0;
        std::fill(esum_.begin(), esum_.end(), 0.0);
    }
    if (rng.bernoulli(cfg_.p)) return {ActionKind::Transmit, *tnid_};
    if (!flags_.empty() && rng.bernoulli(cfg_.jam_prob)) return {ActionKind::Jam, *flags_.begin()};
    return {};
}

std::vector<Tnid> Node::hear(uint32_t slot, std::span<const Tnid> decoded, Rng& rng) {
    std::vector<Tnid> accepted;
    accepted.reserve(decoded.size());
    if (phase_ == Phase::Acquiring) {
        // no identity yet: the node only measures channel energy. Decoded
        // identifiers are not recorded, since at this point a jam is
        // indistinguishable from a real occupant and would plant a stale
        // table entry for a channel that is being vacated.
        return accepted;
    }

    ++listen_count_;
    ring_.emplace_back(decoded.begin(), decoded.end());
    for (Tnid k : decoded) ++counts_[k];
    if (ring_.size() > cfg_.w) {
        for (Tnid k : ring_.front()) {
            auto it = counts_.find(k);
            if (--it->second == 0) counts_.erase(it);
        }
        ring_.pop_front();
    }

    // Re-evaluate the jam flags with this slot included, so the decode that
    // pushes a channel over the threshold is itself kept out of the table.
    // Raising a flag takes occupancy above p + margin on kFlagPersistence
    // consecutive slots; clearing one takes a single dip below p + margin/2.
    // Both asymmetries protect honest channels: occupancy near p crosses the
    // raise level for a slot or two at a time and rarely persists, while a
    // collided channel (two transmitters) sits well above it continuously.
    // A flag on an honest channel is costly, because the jams make its owner
    // hear its own identifier and eventually give the channel up. Flagged
    // entries leave the table: two devices behind one identifier make the
    // entry meaningless until the jam sorts them out.
    const double unflag_level = cfg_.p + margin_ / 2.0;
    for (auto it = flags_.begin(); it != flags_.end();) {
        const auto cit = counts_.find(*it);
        const double freq =
            cit == counts_.end() ? 0.0 : static_cast<double>(cit->second) / cfg_.w;
        if (freq <= unflag_level) {
            it = flags_.erase(it);
        } else {
            ++it;
        }
    }
    for (auto it = over_thr_.begin(); it != over_thr_.end();) {
        const auto cit = counts_.find(it->first);
        const bool over = cit != counts_.end() &&
                          static_cast<double>(cit->second) / cfg_.w > cfg_.p + margin_;
        if (over) ++it; else it = over_thr_.erase(it);
    }
    for (const auto& [k, cnt] : counts_) {
        if (k == *tnid_) continue;
        if (static_cast<double>(cnt) / cfg_.w > cfg_.p + margin_ &&
            ++over_thr_[k] >= kFlagPersistence) {
            flags_.insert(k);
        }
    }
    for (Tnid k : flags_) table_.erase(static_cast<uint32_t>(k));

    bool own_heard = false;
    for (Tnid k : decoded) {
        if (k == *tnid_) {
            own_heard = true;
            continue;
        }
        if (flags_.count(k) != 0) continue;
        table_.emplace(static_cast<uint32_t>(k), slot);
        accepted.push_back(k);
    }
    if (own_heard) {
        // someone else is on this channel; c hits inside the window and the
        // identifier goes back in the pot
        own_hits_.push_back(listen_count_);
        while (!own_hits_.empty() && own_hits_.front() + cfg_.w <= listen_count_) {
            own_hits_.pop_front();
        }
        if (own_hits_.size() >= cfg_.c) reacquire(rng);
    }
    return accepted;
}

void Node::absorb_energy(std::span<const double> channel_energy) {
    if (channel_energy.size() != esum_.size()) {
        throw std::invalid_argument("channel energy span does not cover the pool");
    }
    for (size_t i = 0; i < esum_.size(); ++i) esum_[i] += channel_energy[i];
    ++observed_;
}

void Node::reacquire(Rng& rng) {
    phase_ = Phase::Acquiring;
    tnid_.reset();
    backoff_ = 1 + static_cast<uint32_t>(rng.below(cfg_.w));
    observed_ = 0;
    std::fill(esum_.begin(), esum_.end(), 0.0);
    ring_.clear();
    counts_.clear();
    flags_.clear();
    over_thr_.clear();
    own_hits_.clear();
    listen_count_ = 0;
    ++reacquisitions_;
}

namespace {

double pathloss_amplitude(const ChannelModel& model, double distance) {
    if (distance <= 0.0 && model.pathloss_exp != 0.0) {
        throw std::invalid_argument("distance must be positive under path loss");
    }
    return std::sqrt(model.ref_gain * std::pow(distance, -model.pathloss_exp));
}

}  // namespace

RunResult run_discovery(const Topology& topo, const ProtocolConfig& cfg, const SimParams& sim,
                        uint64_t master_seed, std::span<const std::optional<Tnid>> forced_tnids,
                        bool stop_when_complete) {
    const Field& f = sim.field;
    const uint32_t d = f.d();
    const uint32_t n = f.n();
    const uint64_t pool = d - 1;
    const uint32_t nn = topo.size();
    cfg.validate(pool);
    if (sim.gamma <= 0.0) throw std::invalid_argument("gamma must be positive");
    if (sim.tone_energy <= 0.0) throw std::invalid_argument("tone energy must be positive");
    if (sim.model.ref_gain < 0.0) throw std::invalid_argument("ref_gain must be non-negative");
    if (sim.model.noise_var < 0.0) throw std::invalid_argument("noise_var must be non-negative");
    if (!forced_tnids.empty() && forced_tnids.size() != nn) {
        throw std::invalid_argument("forced identifiers must cover every node");
    }
    for (const auto& t : forced_tnids) {
        if (t && (*t == 0 || *t > pool)) {
            throw std::invalid_argument("forced identifier outside the pool");
        }
    }
    const uint32_t tau = sim.resolved_tau();
    const CodeTable table(f);

    // With a clean flat channel the received grid is sparse (a handful of
    // energized bins against exact zeros), so slots are synthesized as
    // bin -> amplitude maps instead of full n x d grids. Detection matches
    // the dense path bit for bit as long as fewer than half of a symbol's
    // bins are occupied, and falls back to a real median when not.
    const bool sparse =
        !sim.dense_grid && sim.model.noise_var == 0.0 && sim.model.kind == FadingKind::Awgn;

    std::vector<Rng> node_rng;
    node_rng.reserve(nn);
    std::vector<Node> nodes;
    nodes.reserve(nn);
    for (uint32_t i = 0; i < nn; ++i) {
        node_rng.push_back(Rng::stream(master_seed, "node", i));
        nodes.emplace_back(cfg, pool, forced_tnids.empty() ? std::nullopt : forced_tnids[i]);
    }
    Rng phy = Rng::stream(master_seed, "phy", 0);

    RunResult res;
    res.nodes.resize(nn);
    std::vector<bool> done(nn, false);
    std::vector<bool> seen_acq(nn, false);
    std::vector<uint32_t> first_acq(nn, 0);
    std::vector<uint32_t> last_disc(nn, 0);
    uint32_t incomplete = nn;

    std::vector<Action> actions(nn);
    std::unordered_map<Tnid, std::vector<uint32_t>> tx_by_id;
    std::vector<std::unordered_map<uint32_t, std::complex<double>>> amp(n);
    std::vector<double> row_energy;
    std::vector<double> channel_energy(pool);
    std::vector<Transmission> txs;
    std::vector<Tnid> decoded;
    DetectedTones det(n);

    for (uint32_t slot = 0; slot < cfg.max_slots; ++slot) {
        if (stop_when_complete && incomplete == 0) break;
        res.slots_run = slot + 1;

        tx_by_id.clear();
        for (uint32_t i = 0; i < nn; ++i) {
            actions[i] = nodes[i].decide(slot, node_rng[i]);
            if (actions[i].kind == ActionKind::Transmit) tx_by_id[actions[i].tnid].push_back(i);
            if (!seen_acq[i] && nodes[i].ever_acquired()) {
                seen_acq[i] = true;
                first_acq[i] = nodes[i].acquired_slot();
            }
        }

        for (uint32_t i = 0; i < nn; ++i) {
            if (actions[i].kind != ActionKind::Listen) continue;
            ++res.nodes[i].listen_slots;
            const double amp_scale = std::sqrt(sim.tone_energy);

            for (auto& sym : det.symbols) sym.clear();
            if (sparse) {
                for (auto& m : amp) m.clear();
                for (uint32_t j : topo.neighbors(i)) {
                    if (actions[j].kind == ActionKind::Listen) continue;
                    const double pl = pathloss_amplitude(sim.model, topo.distance(i, j));
                    const double phase = phy.uniform(0.0, 6.283185307179586476925286766559);
                    const std::complex<double> g =
                        amp_scale * pl * std::complex<double>(std::cos(phase), std::sin(phase));
                    const auto cw = table.codeword(static_cast<uint32_t>(actions[j].tnid));
                    for (uint32_t row = 0; row < n; ++row) amp[row][cw[row]] += g;
                }
                for (uint32_t row = 0; row < n; ++row) {
                    double median = 0.0;
                    if (2 * amp[row].size() >= d) {
                        // crowded symbol: compute the same median the dense
                        // detector would (d is prime, hence odd)
                        row_energy.assign(d, 0.0);
                        for (const auto& [bin, a] : amp[row]) row_energy[bin] = std::norm(a);
                        std::nth_element(row_energy.begin(), row_energy.begin() + d / 2,
                                         row_energy.end());
                        median = row_energy[d / 2];
                    }
                    const double thr = sim.gamma * std::max(median, kDetectionFloor);
                    for (const auto& [bin, a] : amp[row]) {
                        if (std::norm(a) > thr) det.symbols[row].push_back(bin);
                    }
                }
                if (nodes[i].observing()) {
                    // each occupied bin belongs to exactly one channel's
                    // codeword, so the pool energies come from the occupied
                    // cells alone
                    std::fill(channel_energy.begin(), channel_energy.end(), 0.0);
                    for (uint32_t row = 0; row < n; ++row) {
                        for (const auto& [bin, a] : amp[row]) {
                            const uint32_t u = table.channel_of(row, bin);
                            if (u != 0) channel_energy[u - 1] += std::norm(a);
                        }
                    }
                    nodes[i].absorb_energy(channel_energy);
                }
            } else {
                txs.clear();
                for (uint32_t j : topo.neighbors(i)) {
                    if (actions[j].kind == ActionKind::Listen) continue;
                    const auto cw = table.codeword(static_cast<uint32_t>(actions[j].tnid));
                    txs.push_back({std::vector<uint32_t>(cw.begin(), cw.end()), sim.tone_energy,
                                   draw_link(sim.model, d, topo.distance(i, j), phy), 0});
                }
                const ToneGrid grid = synthesize_slot(txs, n, d, sim.model, phy);
                const DetectedTones dense_det = detect_tones(grid, sim.gamma);
                det.symbols = dense_det.symbols;
                if (nodes[i].observing()) {
                    for (uint64_t u = 1; u <= pool; ++u) {
                        const auto cw = table.codeword(static_cast<uint32_t>(u));
                        double e = 0.0;
                        for (uint32_t row = 0; row < n; ++row) e += grid.at(row, cw[row]);
                        channel_energy[u - 1] = e;
                    }
                    nodes[i].absorb_energy(channel_energy);
                }
            }

            decoded.clear();
            for (const DecodeResult& r : decode_with_offset_search(det, f, 1, tau, sim.delta_max)) {
                if (r.tnid != 0) decoded.push_back(r.tnid);
            }
            const std::vector<Tnid> accepted = nodes[i].hear(slot, decoded, node_rng[i]);

            // credit real discoveries: a decoded identifier maps back to the
            // in-range nodes that deliberately transmitted it this slot
            // (jams spoof a channel and earn no credit)
            for (Tnid k : accepted) {
                const auto it = tx_by_id.find(k);
                if (it == tx_by_id.end()) continue;
                const auto& nb = topo.neighbors(i);
                for (uint32_t j : it->second) {
                    if (!std::binary_search(nb.begin(), nb.end(), j)) continue;
                    ++res.nodes[i].heard_count[j];
                    if (res.nodes[i].discovered.emplace(j, slot).second) last_disc[i] = slot;
                }
            }
        }

        for (uint32_t i = 0; i < nn; ++i) {
            if (done[i] || !nodes[i].ever_acquired()) continue;
            if (res.nodes[i].discovered.size() != topo.neighbors(i).size()) continue;
            done[i] = true;
            --incomplete;
            res.nodes[i].complete = true;
            res.nodes[i].completion_slot =
                topo.neighbors(i).empty() ? first_acq[i] : std::max(first_acq[i], last_disc[i]);
        }
    }

    for (uint32_t i = 0; i < nn; ++i) {
        NodeReport& rep = res.nodes[i];
        if (nodes[i].tnid()) rep.tnid = static_cast<uint32_t>(*nodes[i].tnid());
        rep.acquired_slot = first_acq[i];
        rep.reacquisitions = nodes[i].reacquisitions();
        rep.neighbor_table = nodes[i].neighbor_table();
        if (!done[i]) rep.completion_slot = cfg.max_slots;
    }
    return res;
}

}  // namespace tonedisc
