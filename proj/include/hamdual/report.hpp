#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace hamdual {

/// Worst-case summary of a sweep over an inequality "gap >= 0".
struct ViolationReport {
    double worst_gap = std::numeric_limits<double>::infinity();
    std::vector<double> worst_location;
    std::string worst_check;
    std::uint64_t worst_index = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t n_checked = 0;
    std::uint64_t n_violations = 0;
    double tol = 0.0;

    explicit ViolationReport(double tolerance = 0.0) : tol(tolerance) {}

    /// Records one gap. `index` orders cells; ties in worst_gap go to the
    /// lowest index so the result does not depend on evaluation order.
    void record(double gap, std::uint64_t index, const std::vector<double>& location,
                const std::string& check = {});

    /// Folds another report (same tolerance) into this one.
    void merge(const ViolationReport& other);

    bool clean() const { return n_violations == 0; }
};

}  // namespace hamdual
