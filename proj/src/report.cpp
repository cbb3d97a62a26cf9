#include "favlab/report.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "favlab/errors.hpp"

namespace favlab {

FitResult fit_constants(const std::vector<ReportRow>& rows) {
    int usable = 0;
    for (const ReportRow& row : rows)
        if (row.n >= 2) ++usable;
    if (usable < 2)
        throw insufficient_data_error(
            "constant fitting needs at least 2 rows with n >= 2");

    FitResult fits;
    fits.c_lower = std::numeric_limits<double>::infinity();
    double pairsum = -1.0, energy = -1.0, bucket = -1.0;
    for (const ReportRow& row : rows) {
        fits.trend.emplace_back(row.n, row.n * row.favard);
        if (row.n >= 2)
            fits.c_lower = std::min(
                fits.c_lower, row.n * row.favard / std::log(static_cast<double>(row.n)));
        if (row.total_overlap && row.n >= 1)
            pairsum = std::max(pairsum, *row.total_overlap / row.n);
        if (row.energy && row.n >= 1)
            energy = std::max(energy, *row.energy / row.n);
        if (row.bucket_max_ratio)
            bucket = std::max(bucket, *row.bucket_max_ratio);
    }
    if (pairsum >= 0.0) fits.C_pairsum = pairsum;
    if (energy >= 0.0) fits.C_energy = energy;
    if (bucket >= 0.0) fits.C_bucket = bucket;
    return fits;
}

std::string format_g17(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

std::string opt_cell(const std::optional<double>& v) {
    return v ? format_g17(*v) : std::string();
}

}  // namespace

std::string rows_to_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    out << "model,n,favard,favard_error,zeta,median,reciprocal_integral,"
           "total_overlap,energy,bucket_max_ratio\n";
    for (const ReportRow& r : rows) {
        out << r.model << ',' << r.n << ',' << format_g17(r.favard) << ','
            << format_g17(r.favard_error) << ',' << opt_cell(r.zeta) << ','
            << opt_cell(r.median) << ',' << opt_cell(r.reciprocal_integral)
            << ',' << opt_cell(r.total_overlap) << ',' << opt_cell(r.energy)
            << ',' << opt_cell(r.bucket_max_ratio) << '\n';
    }
    return out.str();
}

nlohmann::json rows_to_json(const std::vector<ReportRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ReportRow& r : rows) {
        nlohmann::json row;
        row["model"] = r.model;
        row["n"] = r.n;
        row["favard"] = r.favard;
        row["favard_error"] = r.favard_error;
        if (r.zeta) row["zeta"] = *r.zeta;
        if (r.median) row["median"] = *r.median;
        if (r.reciprocal_integral)
            row["reciprocal_integral"] = *r.reciprocal_integral;
        if (r.total_overlap) row["total_overlap"] = *r.total_overlap;
        if (r.energy) row["energy"] = *r.energy;
        if (r.bucket_max_ratio) row["bucket_max_ratio"] = *r.bucket_max_ratio;
        arr.push_back(std::move(row));
    }
    return arr;
}

nlohmann::json fits_to_json(const FitResult& fits) {
    nlohmann::json out;
    out["c_lower"] = fits.c_lower;
    out["log_base"] = "e";
    if (fits.C_pairsum) out["C_pairsum"] = *fits.C_pairsum;
    if (fits.C_energy) out["C_energy"] = *fits.C_energy;
    if (fits.C_bucket) out["C_bucket"] = *fits.C_bucket;
    nlohmann::json trend = nlohmann::json::array();
    for (const auto& [n, v] : fits.trend)
        trend.push_back({{"n", n}, {"n_favard", v}});
    out["trend"] = std::move(trend);
    return out;
}

bool matches_schema(const nlohmann::json& doc, const nlohmann::json& schema,
                    std::string* error) {
    auto fail = [&](const std::string& msg) {
        if (error) *error = msg;
        return false;
    };
    if (schema.contains("type")) {
        const std::string type = schema["type"].get<std::string>();
        const bool ok =
            (type == "object" && doc.is_object()) ||
            (type == "array" && doc.is_array()) ||
            (type == "string" && doc.is_string()) ||
            (type == "number" && doc.is_number()) ||
            (type == "integer" && doc.is_number_integer()) ||
            (type == "boolean" && doc.is_boolean());
        if (!ok) return fail("expected type " + type + " at " + doc.dump().substr(0, 60));
    }
    if (schema.contains("enum")) {
        bool found = false;
        for (const auto& v : schema["enum"]) found = found || v == doc;
        if (!found) return fail("value not in enum: " + doc.dump());
    }
    if (schema.contains("required")) {
        for (const auto& key : schema["required"]) {
            if (!doc.contains(key.get<std::string>()))
                return fail("missing required key: " + key.get<std::string>());
        }
    }
    if (schema.contains("properties") && doc.is_object()) {
        for (const auto& [key, sub] : schema["properties"].items()) {
            if (doc.contains(key) && !matches_schema(doc.at(key), sub, error))
                return false;
        }
    }
    if (schema.contains("items") && doc.is_array()) {
        for (const auto& item : doc) {
            if (!matches_schema(item, schema["items"], error)) return false;
        }
    }
    return true;
}

nlohmann::json report_schema() {
    // Kept in sync with schemas/report.schema.json (verified by a test).
    static const char* kSchema = R"JSON(
{
  "$id": "favlab-report",
  "title": "favlab report",
  "type": "object",
  "required": ["schema", "schema_version", "model", "rows"],
  "properties": {
    "schema": {"type": "string", "enum": ["favlab-report"]},
    "schema_version": {"type": "integer", "enum": [1]},
    "model": {"type": "string", "enum": ["fourcorner", "sierpinski", "random"]},
    "config": {"type": "object"},
    "rows": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["model", "n", "favard", "favard_error"],
        "properties": {
          "model": {"type": "string"},
          "n": {"type": "integer"},
          "favard": {"type": "number"},
          "favard_error": {"type": "number"},
          "zeta": {"type": "number"},
          "median": {"type": "number"},
          "reciprocal_integral": {"type": "number"},
          "total_overlap": {"type": "number"},
          "energy": {"type": "number"},
          "bucket_max_ratio": {"type": "number"}
        }
      }
    },
    "fits": {
      "type": "object",
      "required": ["c_lower", "trend"],
      "properties": {
        "c_lower": {"type": "number"},
        "C_pairsum": {"type": "number"},
        "C_energy": {"type": "number"},
        "C_bucket": {"type": "number"},
        "log_base": {"type": "string", "enum": ["e"]},
        "c_sector": {"type": "number"},
        "trend": {
          "type": "array",
          "items": {
            "type": "object",
            "required": ["n", "n_favard"],
            "properties": {
              "n": {"type": "integer"},
              "n_favard": {"type": "number"}
            }
          }
        }
      }
    }
  }
}
)JSON";
    return nlohmann::json::parse(kSchema);
}

}  // namespace favlab
