#include "tonedisc/topology.hpp"

#include <cmath>
#include <stdexcept>

namespace tonedisc {

Topology::Topology(std::vector<std::pair<double, double>> positions, double range, double side,
                   bool wrap)
    : positions_(std::move(positions)), range_(range), side_(side), wrap_(wrap) {
    if (range_ <= 0.0) throw std::invalid_argument("range must be positive");
    if (wrap_ && side_ <= 0.0) throw std::invalid_argument("wrapping needs a positive side");
    adjacency_.resize(positions_.size());
    for (uint32_t i = 0; i < size(); ++i) {
        for (uint32_t j = i + 1; j < size(); ++j) {
            if (distance(i, j) <= range_) {
                adjacency_[i].push_back(j);
                adjacency_[j].push_back(i);
            }
        }
    }
}

double Topology::distance(uint32_t i, uint32_t j) const {
    double dx = std::abs(positions_[i].first - positions_[j].first);
    double dy = std::abs(positions_[i].second - positions_[j].second);
    if (wrap_) {
        dx = std::min(dx, side_ - dx);
        dy = std::min(dy, side_ - dy);
    }
    return std::hypot(dx, dy);
}

double Topology::mean_degree() const {
    if (positions_.empty()) return 0.0;
    size_t total = 0;
    for (const auto& a : adjacency_) total += a.size();
    return static_cast<double>(total) / static_cast<double>(positions_.size());
}

Topology random_topology(uint32_t nodes, double area, double range, bool wrap, Rng& rng) {
    if (area <= 0.0) throw std::invalid_argument("area must be positive");
    const double side = std::sqrt(area);
    std::vector<std::pair<double, double>> pos(nodes);
    for (auto& p : pos) {
        p.first = rng.uniform(0.0, side);
        p.second = rng.uniform(0.0, side);
    }
    return Topology(std::move(pos), range, side, wrap);
}

Topology line_topology(uint32_t nodes, double spacing, double range) {
    std::vector<std::pair<double, double>> pos(nodes);
    for (uint32_t i = 0; i < nodes; ++i) pos[i] = {i * spacing, 0.0};
    return Topology(std::move(pos), range);
}

Topology star_topology(uint32_t spokes, double range) {
    std::vector<std::pair<double, double>> pos;
    pos.reserve(spokes + 1);
    pos.emplace_back(0.0, 0.0);
    const double r = range / 2.0;
    for (uint32_t i = 0; i < spokes; ++i) {
        const double a = 6.283185307179586 * i / spokes;
        pos.emplace_back(r * std::cos(a), r * std::sin(a));
    }
    return Topology(std::move(pos), range);
}

}  // namespace tonedisc
