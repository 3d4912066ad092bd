#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qsl/propagator.hpp"

namespace qsl::cli {

struct SeededTrajectory {
    std::optional<std::uint64_t> seed;
    Trajectory trajectory;
};

// 17 significant digits, enough to round-trip any double.
std::string format_number(double x);

inline constexpr const char* kCsvHeader = "seed,t,purity,purity_deviation,bound_floor,bound_ceiling,eq12_floor";

void write_csv(std::ostream& os, const std::vector<SeededTrajectory>& runs);
void write_json(std::ostream& os, const std::string& scenario, const std::vector<SeededTrajectory>& runs);

}  // namespace qsl::cli
