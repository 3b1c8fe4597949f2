#include "gbfi/time_grid.hpp"

#include <cmath>

namespace gbfi {

TimeGrid::TimeGrid(std::vector<double> nodes) {
    if (nodes.size() < 3)
        throw InvalidParameter("time grid needs at least 2 cells");
    if (nodes.front() != 0.0)
        throw InvalidParameter("time grid must start at t = 0");
    for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
        if (!(nodes[j + 1] > nodes[j]) || !std::isfinite(nodes[j + 1]))
            throw InvalidParameter("time grid nodes must be finite and strictly increasing");
    }
    nodes_ = std::make_shared<const std::vector<double>>(std::move(nodes));
}

TimeGrid TimeGrid::uniform(double horizon, int cells) {
    if (!(horizon > 0.0) || cells < 2)
        throw InvalidParameter("uniform grid needs horizon > 0 and at least 2 cells");
    std::vector<double> nodes(static_cast<std::size_t>(cells) + 1);
    for (int j = 0; j <= cells; ++j)
        nodes[static_cast<std::size_t>(j)] = horizon * static_cast<double>(j) / cells;
    nodes.back() = horizon;
    return TimeGrid(std::move(nodes));
}

bool TimeGrid::same_as(const TimeGrid& other) const {
    if (nodes_ == other.nodes_)
        return true;
    return *nodes_ == *other.nodes_;
}

} // namespace gbfi
