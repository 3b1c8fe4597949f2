#pragma once

#include <memory>
#include <vector>

#include "gbfi/errors.hpp"

namespace gbfi {

// Partition 0 = t_0 < t_1 < ... < t_n = T of the time horizon.
// Cheap to copy; the node vector is shared.
class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> nodes);
    static TimeGrid uniform(double horizon, int cells);

    double horizon() const { return nodes_->back(); }
    int cells() const { return static_cast<int>(nodes_->size()) - 1; }
    double node(int j) const { return (*nodes_)[static_cast<std::size_t>(j)]; }
    double dt(int j) const { return node(j + 1) - node(j); }
    double mid(int j) const { return node(j) + 0.5 * dt(j); }
    const std::vector<double>& nodes() const { return *nodes_; }

    bool same_as(const TimeGrid& other) const;

private:
    std::shared_ptr<const std::vector<double>> nodes_;
};

} // namespace gbfi
