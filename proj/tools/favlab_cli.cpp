// Command-line front end: experiment configuration, CSV/JSON emission, and
// constant-fitting summaries. Exit codes: 0 success, 1 usage error, 2 budget
// exceeded, 3 quadrature non-convergence.
#include <algorithm>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "favlab/energy.hpp"
#include "favlab/errors.hpp"
#include "favlab/favard.hpp"
#include "favlab/numeric.hpp"
#include "favlab/pairs.hpp"
#include "favlab/parallel.hpp"
#include "favlab/report.hpp"

namespace {

using nlohmann::json;
using namespace favlab;

struct CommonOptions {
    std::string model = "fourcorner";
    int n = -1;
    std::string n_range;
    std::uint64_t seed = 1;
    unsigned threads = default_threads();
    std::string out;
    std::string format;  // csv | json; per-command default
    QuadratureSpec quad;
    bool any_unconverged = false;
};

std::vector<int> levels(const CommonOptions& opt) {
    if (!opt.n_range.empty()) {
        const auto sep = opt.n_range.find("..");
        if (sep == std::string::npos)
            throw CLI::ValidationError("--n-range", "expected form a..b");
        const int a = std::stoi(opt.n_range.substr(0, sep));
        const int b = std::stoi(opt.n_range.substr(sep + 2));
        if (a > b) throw CLI::ValidationError("--n-range", "expected a <= b");
        std::vector<int> out;
        for (int n = a; n <= b; ++n) out.push_back(n);
        return out;
    }
    if (opt.n < 0) throw CLI::ValidationError("--n", "level required");
    return {opt.n};
}

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_model = true) {
    if (with_model)
        cmd->add_option("--model", opt.model, "fourcorner | sierpinski | random")
            ->envname("FAVLAB_MODEL");
    cmd->add_option("--n", opt.n, "generation level");
    cmd->add_option("--n-range", opt.n_range, "level range a..b");
    cmd->add_option("--seed", opt.seed, "64-bit seed")->envname("FAVLAB_SEED");
    cmd->add_option("--threads", opt.threads, "worker threads")
        ->envname("FAVLAB_THREADS");
    cmd->add_option("--out", opt.out, "output path (default stdout)");
    cmd->add_option("--format", opt.format, "csv | json");
    cmd->add_option("--panels", opt.quad.panel_count, "quadrature panels");
    cmd->add_option("--nodes", opt.quad.nodes_per_panel, "nodes per panel");
    cmd->add_option("--tol", opt.quad.refinement_tolerance,
                    "relative refinement tolerance");
    cmd->add_option("--max-ref", opt.quad.max_refinements, "refinement cap");
}

void write_output(const CommonOptions& opt, const std::string& text) {
    if (opt.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(opt.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file: " + opt.out);
    file << text;
}

// ---------------------------------------------------------------- favard --

int run_favard(CommonOptions& opt, int median_grid) {
    const ModelId model = parse_model(opt.model, opt.seed);
    std::vector<ReportRow> rows;
    for (int n : levels(opt)) {
        const FavardResult f = favard(model, n, opt.quad, opt.threads);
        opt.any_unconverged |= !f.converged;
        ReportRow row;
        row.model = model_name(model);
        row.n = n;
        row.favard = f.value;
        row.favard_error = f.error_estimate;
        if (model.kind == ModelKind::sierpinski) row.zeta = M_PI * f.value;
        if (median_grid > 0) {
            const MedianResult med =
                median_support(model, n, median_grid, opt.threads);
            row.median = med.median;
            row.reciprocal_integral = med.reciprocal_integral;
        }
        rows.push_back(row);
    }
    if (opt.format == "csv") {
        std::ostringstream out;
        out << "model,n,favard,error,median,reciprocal_integral\n";
        for (const ReportRow& r : rows) {
            out << r.model << ',' << r.n << ',' << format_g17(r.favard) << ','
                << format_g17(r.favard_error) << ','
                << (r.median ? format_g17(*r.median) : "") << ','
                << (r.reciprocal_integral ? format_g17(*r.reciprocal_integral)
                                          : "")
                << '\n';
        }
        write_output(opt, out.str());
    } else {
        json doc;
        doc["schema"] = "favlab-favard";
        doc["rows"] = rows_to_json(rows);
        write_output(opt, doc.dump(2) + "\n");
    }
    return 0;
}

// ---------------------------------------------------------------- needle --

int run_needle(CommonOptions& opt, std::uint64_t trials) {
    const ModelId model = parse_model(opt.model, opt.seed);
    std::ostringstream csv;
    csv << "model,n,trials,hits,estimate,std_error,seed\n";
    json rows = json::array();
    for (int n : levels(opt)) {
        const MonteCarloResult mc =
            buffon_estimate(model, n, trials, opt.seed, opt.threads);
        csv << model_name(model) << ',' << n << ',' << mc.trials << ','
            << mc.hits << ',' << format_g17(mc.estimate) << ','
            << format_g17(mc.std_error) << ',' << mc.seed << '\n';
        rows.push_back({{"model", model_name(model)},
                        {"n", n},
                        {"trials", mc.trials},
                        {"hits", mc.hits},
                        {"estimate", mc.estimate},
                        {"std_error", mc.std_error},
                        {"favard_estimate", mc.favard_estimate},
                        {"seed", mc.seed}});
    }
    if (opt.format == "json") {
        json doc;
        doc["schema"] = "favlab-needle";
        doc["rows"] = std::move(rows);
        write_output(opt, doc.dump(2) + "\n");
    } else {
        write_output(opt, csv.str());
    }
    return 0;
}

// --------------------------------------------------------------- profile --

int run_profile(CommonOptions& opt, int grid, const std::string& dump_cells) {
    const ModelId model = parse_model(opt.model, opt.seed);
    if (!dump_cells.empty()) {
        std::ostringstream cells;
        cells << "level,corner_x,corner_y,side\n";
        for (int n : levels(opt)) {
            if (model.kind == ModelKind::sierpinski) {
                for_each_triangle(n, [&](const Triangle& t) {
                    cells << n << ',' << format_g17(t.x0) << ','
                          << format_g17(t.y0) << ','
                          << format_g17(t.x1 - t.x0) << '\n';
                });
            } else {
                for_each_square(model, n, [&](const Square& s) {
                    cells << n << ',' << format_g17(s.x) << ','
                          << format_g17(s.y) << ',' << format_g17(s.side)
                          << '\n';
                });
            }
        }
        std::ofstream file(dump_cells, std::ios::binary);
        if (!file)
            throw std::runtime_error("cannot open output file: " + dump_cells);
        file << cells.str();
    }

    std::ostringstream csv;
    csv << "theta,support_length,first_moment,second_moment\n";
    json rows = json::array();
    for (int n : levels(opt)) {
        for (int i = 0; i < grid; ++i) {
            const double theta = (i + 0.5) * M_PI / grid;
            const ProjectionProfile p =
                profile(model, n, Direction::from_angle(theta));
            csv << format_g17(theta) << ',' << format_g17(p.support_length)
                << ',' << format_g17(p.first_moment) << ','
                << format_g17(p.second_moment) << '\n';
            rows.push_back({{"n", n},
                            {"theta", theta},
                            {"support_length", p.support_length},
                            {"first_moment", p.first_moment},
                            {"second_moment", p.second_moment}});
        }
    }
    if (opt.format == "json") {
        json doc;
        doc["schema"] = "favlab-profile";
        doc["rows"] = std::move(rows);
        write_output(opt, doc.dump(2) + "\n");
    } else {
        write_output(opt, csv.str());
    }
    return 0;
}

// ----------------------------------------------------------------- pairs --

int run_pairs(CommonOptions& opt, const std::string& task, int j,
              const SectorSpec& sector, int samples, bool quad_overridden) {
    // overlap integrals default to 512 Gauss nodes per half-pi panel
    QuadratureSpec overlap_spec = opt.quad;
    if (!quad_overridden) {
        overlap_spec.panel_count = 2;
        overlap_spec.nodes_per_panel = 512;
    }
    std::ostringstream out;
    json doc;
    doc["schema"] = "favlab-pairs-" + task;
    doc["rows"] = json::array();
    for (int n : levels(opt)) {
        if (task == "buckets") {
            const BucketTable table = count_buckets(n, opt.threads);
            if (out.tellp() == 0) out << "n,j,k,count,bound,ratio\n";
            for (const auto& [bucket, count] : table.counts) {
                const double bound = pow4(2 * n - bucket.second - 2 * bucket.first);
                out << n << ',' << bucket.first << ',' << bucket.second << ','
                    << count << ',' << format_g17(bound) << ','
                    << format_g17(static_cast<double>(count) / bound) << '\n';
            }
            doc["rows"].push_back(
                {{"n", n}, {"max_bound_ratio", table.max_bound_ratio()}});
        } else if (task == "overlap") {
            const OverlapTable table = total_overlap(n, overlap_spec, opt.threads);
            opt.any_unconverged |= !table.quality.converged;
            if (out.tellp() == 0) out << "n,j,k,partial_sum\n";
            for (const auto& [bucket, sum] : table.bucket_sums)
                out << n << ',' << bucket.first << ',' << bucket.second << ','
                    << format_g17(sum) << '\n';
            out << "# n=" << n << " total=" << format_g17(table.total)
                << " diagonal=" << format_g17(table.diagonal) << '\n';
            doc["rows"].push_back({{"n", n},
                                   {"total", table.total},
                                   {"diagonal", table.diagonal}});
        } else if (task == "check") {
            const ViolationReport rep = sector_pair_check(
                n, j, sector, samples, opt.seed, opt.threads);
            if (out.tellp() == 0)
                out << "theta,square1,square2,j_expected,j_actual,ds,dy\n";
            for (const Violation& v : rep.violations)
                out << format_g17(v.theta) << ',' << v.sigma1 << ',' << v.sigma2
                    << ',' << v.j_expected << ',' << v.j_actual << ','
                    << format_g17(v.ds) << ',' << format_g17(v.dy) << '\n';
            out << "# n=" << n << " j=" << j
                << " overlapping_pairs=" << rep.overlapping_pairs
                << " violations=" << rep.violations.size() << '\n';
            doc["rows"].push_back({{"n", n},
                                   {"j", j},
                                   {"overlapping_pairs", rep.overlapping_pairs},
                                   {"violations", rep.violations.size()}});
        } else {
            throw CLI::ValidationError("--task", "buckets | overlap | check");
        }
    }
    if (opt.format == "json")
        write_output(opt, doc.dump(2) + "\n");
    else
        write_output(opt, out.str());
    return 0;
}

// ---------------------------------------------------------------- energy --

int run_energy(CommonOptions& opt, double epsilon) {
    const ModelId model = parse_model(opt.model, opt.seed);
    const std::vector<int> ns = levels(opt);
    int max_n = 0;
    for (int n : ns) max_n = std::max(max_n, n);

    std::ostringstream out;
    out << "n,energy,energy_over_n";
    for (int k = -1; k < max_n; ++k) out << ",scale_" << k;
    if (epsilon > 0.0) out << ",ball_average,epsilon";
    out << '\n';
    json rows = json::array();
    for (int n : ns) {
        const EnergyResult e = riesz_energy(model, n, opt.threads);
        out << n << ',' << format_g17(e.energy) << ','
            << format_g17(n > 0 ? e.energy / n : 0.0);
        for (int k = -1; k < max_n; ++k) {
            const auto it = e.per_scale.find(k);
            out << ',' << (it != e.per_scale.end() ? format_g17(it->second) : "");
        }
        json row = {{"model", model_name(model)},
                    {"n", n},
                    {"energy", e.energy}};
        if (epsilon > 0.0) {
            const QuadratureResult ball =
                ball_average(model, n, epsilon, opt.quad, opt.threads);
            opt.any_unconverged |= !ball.converged;
            out << ',' << format_g17(ball.value) << ',' << format_g17(epsilon);
            row["ball_average"] = ball.value;
            row["epsilon"] = epsilon;
        }
        out << '\n';
        json scales = json::object();
        for (const auto& [k, v] : e.per_scale) scales[std::to_string(k)] = v;
        row["per_scale"] = std::move(scales);
        rows.push_back(std::move(row));
    }
    if (opt.format == "json") {
        json doc;
        doc["schema"] = "favlab-energy";
        doc["rows"] = std::move(rows);
        write_output(opt, doc.dump(2) + "\n");
    } else {
        write_output(opt, out.str());
    }
    return 0;
}

// ---------------------------------------------------------------- median --

int run_median(CommonOptions& opt, int grid) {
    const ModelId model = parse_model(opt.model, opt.seed);
    std::ostringstream out;
    out << "model,n,median,sample_count,reciprocal_integral\n";
    json rows = json::array();
    for (int n : levels(opt)) {
        const MedianResult med = median_support(model, n, grid, opt.threads);
        out << model_name(model) << ',' << n << ',' << format_g17(med.median)
            << ',' << med.sample_count << ','
            << format_g17(med.reciprocal_integral) << '\n';
        rows.push_back({{"model", model_name(model)},
                        {"n", n},
                        {"median", med.median},
                        {"sample_count", med.sample_count},
                        {"reciprocal_integral", med.reciprocal_integral}});
    }
    if (opt.format == "json") {
        json doc;
        doc["schema"] = "favlab-median";
        doc["rows"] = std::move(rows);
        write_output(opt, doc.dump(2) + "\n");
    } else {
        write_output(opt, out.str());
    }
    return 0;
}

// ------------------------------------------------------------ sierpinski --

int run_sierpinski(CommonOptions& opt) {
    std::ostringstream out;
    out << "n,favard,error,zeta,n_zeta\n";
    json rows = json::array();
    const ModelId model{ModelKind::sierpinski, 0};
    for (int n : levels(opt)) {
        const FavardResult f = favard(model, n, opt.quad, opt.threads);
        opt.any_unconverged |= !f.converged;
        const double zeta = M_PI * f.value;
        out << n << ',' << format_g17(f.value) << ','
            << format_g17(f.error_estimate) << ',' << format_g17(zeta) << ','
            << format_g17(n * zeta) << '\n';
        rows.push_back({{"n", n},
                        {"favard", f.value},
                        {"favard_error", f.error_estimate},
                        {"zeta", zeta},
                        {"n_zeta", n * zeta}});
    }
    if (opt.format == "json") {
        json doc;
        doc["schema"] = "favlab-sierpinski";
        doc["rows"] = std::move(rows);
        write_output(opt, doc.dump(2) + "\n");
    } else {
        write_output(opt, out.str());
    }
    return 0;
}

// ---------------------------------------------------------------- random --

int run_random(CommonOptions& opt, int seeds) {
    std::ostringstream out;
    out << "n,seed,favard,error\n";
    json per_seed = json::array();
    json means = json::array();
    for (int n : levels(opt)) {
        KahanSum mean;
        for (int s = 0; s < seeds; ++s) {
            const std::uint64_t seed = opt.seed + static_cast<std::uint64_t>(s);
            const ModelId model{ModelKind::random_four_corner, seed};
            const FavardResult f = favard(model, n, opt.quad, opt.threads);
            opt.any_unconverged |= !f.converged;
            mean.add(f.value);
            out << n << ',' << seed << ',' << format_g17(f.value) << ','
                << format_g17(f.error_estimate) << '\n';
            per_seed.push_back({{"n", n}, {"seed", seed}, {"favard", f.value}});
        }
        const double avg = mean.value() / seeds;
        out << "# n=" << n << " mean_favard=" << format_g17(avg)
            << " n_mean_favard=" << format_g17(n * avg) << '\n';
        means.push_back(
            {{"n", n}, {"mean_favard", avg}, {"n_mean_favard", n * avg}});
    }
    if (opt.format == "json") {
        json doc;
        doc["schema"] = "favlab-random";
        doc["seeds"] = seeds;
        doc["base_seed"] = opt.seed;
        doc["rows"] = std::move(per_seed);
        doc["means"] = std::move(means);
        write_output(opt, doc.dump(2) + "\n");
    } else {
        write_output(opt, out.str());
    }
    return 0;
}

// ---------------------------------------------------------------- report --

int run_report(CommonOptions& opt, int median_grid, const SectorSpec& sector) {
    const ModelId model = parse_model(opt.model, opt.seed);
    if (model.kind == ModelKind::random_four_corner)
        throw CLI::ValidationError("--model",
                                   "report covers fourcorner and sierpinski");
    const Limits limits;
    std::vector<ReportRow> rows;
    for (int n : levels(opt)) {
        ReportRow row;
        row.model = model_name(model);
        row.n = n;
        const FavardResult f = favard(model, n, opt.quad, opt.threads);
        opt.any_unconverged |= !f.converged;
        row.favard = f.value;
        row.favard_error = f.error_estimate;
        if (model.kind == ModelKind::sierpinski) row.zeta = M_PI * f.value;
        const MedianResult med = median_support(model, n, median_grid, opt.threads);
        row.median = med.median;
        row.reciprocal_integral = med.reciprocal_integral;
        if (model.kind == ModelKind::four_corner) {
            if (n <= limits.max_class_level) {
                const OverlapTable table = total_overlap(n, opt.quad, opt.threads);
                opt.any_unconverged |= !table.quality.converged;
                row.total_overlap = table.total;
                row.energy = riesz_energy(model, n, opt.threads).energy;
            }
            if (n <= limits.max_bucket_level && n >= 1)
                row.bucket_max_ratio = count_buckets(n, opt.threads).max_bound_ratio();
        } else if (cell_count(model, n) <=
                   static_cast<std::uint64_t>(limits.max_direct_pair_cells)) {
            row.energy = riesz_energy(model, n, opt.threads).energy;
        }
        rows.push_back(row);
    }

    json doc;
    doc["schema"] = "favlab-report";
    doc["schema_version"] = kReportSchemaVersion;
    doc["model"] = model_name(model);
    doc["config"] = {{"panels", opt.quad.panel_count},
                     {"nodes", opt.quad.nodes_per_panel},
                     {"tol", opt.quad.refinement_tolerance},
                     {"max_refinements", opt.quad.max_refinements},
                     {"median_grid", median_grid},
                     {"c1", sector.c1},
                     {"c2", sector.c2},
                     {"slack", sector.slack},
                     {"seed", opt.seed}};
    doc["rows"] = rows_to_json(rows);
    try {
        doc["fits"] = fits_to_json(fit_constants(rows));
        if (model.kind == ModelKind::four_corner) {
            // smallest scaled sector mass over the usable sector range
            double c_sector = std::numeric_limits<double>::infinity();
            for (const ReportRow& row : rows) {
                if (row.n < 2) continue;
                const int jmax = floor_log4(static_cast<double>(row.n));
                for (int j = 0; j <= jmax; ++j) {
                    const SectorResult sr =
                        sector_integral(model, row.n, j, sector.c1, sector.c2,
                                        opt.quad, opt.threads);
                    opt.any_unconverged |= !sr.integral.converged;
                    c_sector = std::min(c_sector, row.n * sr.integral.value);
                }
            }
            if (std::isfinite(c_sector)) doc["fits"]["c_sector"] = c_sector;
        }
    } catch (const insufficient_data_error&) {
        // single-level reports carry no fits block
    }
    std::string err;
    if (!matches_schema(doc, report_schema(), &err))
        throw std::runtime_error("internal: report fails its schema: " + err);

    if (opt.format == "csv") {
        std::ostringstream out;
        out << rows_to_csv(rows);
        if (doc.contains("fits")) {
            out << "# c_lower=" << format_g17(doc["fits"]["c_lower"].get<double>());
            if (doc["fits"].contains("C_pairsum"))
                out << " C_pairsum="
                    << format_g17(doc["fits"]["C_pairsum"].get<double>());
            if (doc["fits"].contains("C_energy"))
                out << " C_energy="
                    << format_g17(doc["fits"]["C_energy"].get<double>());
            if (doc["fits"].contains("C_bucket"))
                out << " C_bucket="
                    << format_g17(doc["fits"]["C_bucket"].get<double>());
            out << '\n';
            out << "# trend:n_favard";
            for (const auto& t : doc["fits"]["trend"])
                out << ' ' << t["n"].get<int>() << ':'
                    << format_g17(t["n_favard"].get<double>());
            out << '\n';
        }
        write_output(opt, out.str());
    } else {
        write_output(opt, doc.dump(2) + "\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"favlab: Favard length laboratory for Cantor-type sets"};
    app.require_subcommand(1);

    CommonOptions opt;
    int median_grid = 4096;
    int profile_grid = 64;
    std::uint64_t trials = 1000000;
    std::string dump_cells;
    std::string pairs_task = "buckets";
    int sector_j = 0;
    SectorSpec sector;
    int samples = 48;
    double epsilon = 0.0;
    int seeds = 20;

    auto* c_favard = app.add_subcommand("favard", "Favard length table");
    add_common(c_favard, opt);
    c_favard->add_option("--grid", median_grid, "median grid (0 disables)");

    auto* c_needle = app.add_subcommand("needle", "Buffon needle Monte Carlo");
    add_common(c_needle, opt);
    c_needle->add_option("--trials", trials, "number of throws")
        ->check(CLI::PositiveNumber);

    auto* c_profile = app.add_subcommand("profile", "projection profiles");
    add_common(c_profile, opt);
    c_profile->add_option("--grid", profile_grid, "theta grid size");
    c_profile->add_option("--dump-cells", dump_cells, "also write cells CSV");

    auto* c_pairs = app.add_subcommand("pairs", "pair census and overlaps");
    add_common(c_pairs, opt, false);
    c_pairs->add_option("--task", pairs_task, "buckets | overlap | check");
    c_pairs->add_option("--j", sector_j, "sector index (check task)");
    c_pairs->add_option("--c1", sector.c1, "sector lower constant");
    c_pairs->add_option("--c2", sector.c2, "sector upper constant");
    c_pairs->add_option("--slack", sector.slack, "bucket slack");
    c_pairs->add_option("--samples", samples, "sampled angles (check task)");

    auto* c_energy = app.add_subcommand("energy", "Riesz 1-energy");
    add_common(c_energy, opt);
    c_energy->add_option("--epsilon", epsilon, "ball diagnostic radius");

    auto* c_median = app.add_subcommand("median", "median support length");
    add_common(c_median, opt);
    c_median->add_option("--grid", median_grid, "direction grid");

    auto* c_sier = app.add_subcommand("sierpinski", "zeta table");
    add_common(c_sier, opt, false);

    auto* c_random = app.add_subcommand("random", "random-model table");
    add_common(c_random, opt, false);
    c_random->add_option("--seeds", seeds, "number of seeds");

    auto* c_report = app.add_subcommand("report", "full table + fits");
    add_common(c_report, opt);
    c_report->add_option("--grid", median_grid, "median grid");
    c_report->add_option("--c1", sector.c1, "sector lower constant");
    c_report->add_option("--c2", sector.c2, "sector upper constant");
    c_report->add_option("--slack", sector.slack, "bucket slack");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // --help prints usage and exits 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message and usage hint
        return 1;     // usage errors exit 1
    }

    try {
        int rc = 0;
        if (c_favard->parsed()) rc = run_favard(opt, median_grid);
        else if (c_needle->parsed()) rc = run_needle(opt, trials);
        else if (c_profile->parsed()) rc = run_profile(opt, profile_grid, dump_cells);
        else if (c_pairs->parsed())
            rc = run_pairs(opt, pairs_task, sector_j, sector, samples,
                           c_pairs->count("--panels") > 0 ||
                               c_pairs->count("--nodes") > 0);
        else if (c_energy->parsed()) rc = run_energy(opt, epsilon);
        else if (c_median->parsed()) rc = run_median(opt, median_grid);
        else if (c_sier->parsed()) rc = run_sierpinski(opt);
        else if (c_random->parsed()) rc = run_random(opt, seeds);
        else if (c_report->parsed()) rc = run_report(opt, median_grid, sector);
        if (rc == 0 && opt.any_unconverged) return 3;
        return rc;
    } catch (const budget_error& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 2;
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
