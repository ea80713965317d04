#ifndef TONEDISC_TOPOLOGY_HPP
#define TONEDISC_TOPOLOGY_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "tonedisc/rng.hpp"

namespace tonedisc {

// Node positions plus the common radio range. Adjacency is symmetric:
// i and j are neighbors iff their distance is at most range. With wrap set,
// distances are taken on the torus of the given side so uniform drops have
// no boundary effects and the mean degree is density * pi * range^2.
class Topology {
public:
    Topology(std::vector<std::pair<double, double>> positions, double range, double side = 0.0,
             bool wrap = false);

    uint32_t size() const { return static_cast<uint32_t>(positions_.size()); }
    double range() const { return range_; }
    double distance(uint32_t i, uint32_t j) const;
    const std::vector<uint32_t>& neighbors(uint32_t i) const { return adjacency_[i]; }
    const std::pair<double, double>& position(uint32_t i) const { return positions_[i]; }
    double mean_degree() const;

private:
    std::vector<std::pair<double, double>> positions_;
    double range_;
    double side_;
    bool wrap_;
    std::vector<std::vector<uint32_t>> adjacency_;
};

// nodes dropped uniformly on a square of the given area.
Topology random_topology(uint32_t nodes, double area, double range, bool wrap, Rng& rng);

// Evenly spaced nodes on a line: node i at (i * spacing, 0).
Topology line_topology(uint32_t nodes, double spacing, double range);

// Node 0 at the origin, spokes on a circle of radius range / 2.
Topology star_topology(uint32_t spokes, double range);

}  // namespace tonedisc

#endif
