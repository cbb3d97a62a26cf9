#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace favlab {

// One per-n row of the experiment tables. Optional fields stay empty for
// models the pair machinery does not cover.
struct ReportRow {
    std::string model;
    int n = 0;
    double favard = 0.0;
    double favard_error = 0.0;
    std::optional<double> zeta;  // pi * favard, sierpinski convention
    std::optional<double> median;
    std::optional<double> reciprocal_integral;
    std::optional<double> total_overlap;
    std::optional<double> energy;
    std::optional<double> bucket_max_ratio;
};

struct FitResult {
    double c_lower = 0.0;    // min over n>=2 of n*favard/ln n
    std::optional<double> C_pairsum;  // max of total_overlap/n
    std::optional<double> C_energy;   // max of energy/n
    std::optional<double> C_bucket;   // max bound ratio
    std::vector<std::pair<int, double>> trend;  // (n, n*favard)
};

// Throws insufficient_data_error unless the rows cover >= 2 values of n >= 2.
FitResult fit_constants(const std::vector<ReportRow>& rows);

// Locale-independent number formatting: shortest-or-17-significant-digit
// decimal with '.' separator, used for every CSV cell.
std::string format_g17(double v);

std::string rows_to_csv(const std::vector<ReportRow>& rows);
nlohmann::json rows_to_json(const std::vector<ReportRow>& rows);
nlohmann::json fits_to_json(const FitResult& fits);

// Structural validation against the subset of JSON Schema used by
// schemas/report.schema.json: type, required, properties, items, enum.
bool matches_schema(const nlohmann::json& doc, const nlohmann::json& schema,
                    std::string* error = nullptr);

nlohmann::json report_schema();  // the schema shipped in schemas/, embedded

inline constexpr int kReportSchemaVersion = 1;

}  // namespace favlab
