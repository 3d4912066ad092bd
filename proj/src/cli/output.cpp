#include "output.hpp"

#include <cstdio>

#include <json.hpp>

namespace qsl::cli {

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::string column(const std::vector<double>& values, std::size_t k) {
    return values.empty() ? std::string() : format_number(values[k]);
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<SeededTrajectory>& runs) {
    os << kCsvHeader << '\n';
    for (const auto& run : runs) {
        const Trajectory& tr = run.trajectory;
        const std::string seed = run.seed ? std::to_string(*run.seed) : std::string();
        for (std::size_t k = 0; k < tr.purity.size(); ++k) {
            os << seed << ',' << format_number(tr.grid.time(k)) << ',' << format_number(tr.purity[k]) << ','
               << column(tr.purity_deviation, k) << ',' << column(tr.bound_floor, k) << ','
               << column(tr.bound_ceiling, k) << ',' << column(tr.eq12_floor, k) << '\n';
        }
    }
}

void write_json(std::ostream& os, const std::string& scenario, const std::vector<SeededTrajectory>& runs) {
    nlohmann::json doc;
    doc["scenario"] = scenario;
    doc["runs"] = nlohmann::json::array();
    for (const auto& run : runs) {
        const Trajectory& tr = run.trajectory;
        nlohmann::json r;
        r["seed"] = run.seed ? nlohmann::json(*run.seed) : nlohmann::json();
        r["method"] = std::string(to_string(tr.method));
        r["t"] = tr.grid.times();
        r["purity"] = tr.purity;
        r["purity_deviation"] = tr.has_reference() ? nlohmann::json(tr.purity_deviation) : nlohmann::json();
        r["bound_floor"] = tr.bound_floor;
        r["bound_ceiling"] = tr.bound_ceiling;
        r["eq12_floor"] = tr.eq12_floor.empty() ? nlohmann::json() : nlohmann::json(tr.eq12_floor);
        doc["runs"].push_back(std::move(r));
    }
    os << doc.dump(2) << '\n';
}

}  // namespace qsl::cli
