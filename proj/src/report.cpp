#include "hamdual/report.hpp"

#include <cmath>

namespace hamdual {

namespace {

// NaN ranks below every number so a failed evaluation is always reported.
bool ranks_worse(double gap, std::uint64_t index, double than_gap, std::uint64_t than_index) {
    const double a = std::isnan(gap) ? -std::numeric_limits<double>::infinity() : gap;
    const double b = std::isnan(than_gap) ? -std::numeric_limits<double>::infinity() : than_gap;
    if (a != b) return a < b;
    if (std::isnan(gap) != std::isnan(than_gap)) return std::isnan(gap);
    return index < than_index;
}

}  // namespace

void ViolationReport::record(double gap, std::uint64_t index, const std::vector<double>& location,
                             const std::string& check) {
    ++n_checked;
    if (!(gap >= -tol)) ++n_violations;
    if (n_checked == 1 || ranks_worse(gap, index, worst_gap, worst_index)) {
        worst_gap = gap;
        worst_index = index;
        worst_location = location;
        worst_check = check;
    }
}

void ViolationReport::merge(const ViolationReport& other) {
    if (other.n_checked == 0) return;
    const bool take =
        n_checked == 0 || ranks_worse(other.worst_gap, other.worst_index, worst_gap, worst_index);
    n_checked += other.n_checked;
    n_violations += other.n_violations;
    if (take) {
        worst_gap = other.worst_gap;
        worst_index = other.worst_index;
        worst_location = other.worst_location;
        worst_check = other.worst_check;
    }
}

}  // namespace hamdual
