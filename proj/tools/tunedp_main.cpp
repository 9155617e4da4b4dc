#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tunedp/datagen.hpp"
#include "tunedp/harness.hpp"

namespace {

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

tunedp::CsvSchema schema_from_option(const std::string& schema_path) {
    return schema_path.empty() ? tunedp::CsvSchema::promise_default()
                               : tunedp::CsvSchema::from_json_file(schema_path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Defect-prediction tuning toolkit"};
    app.require_subcommand(1);

    // ---- run ----
    auto* run = app.add_subcommand(
        "run", "Run tuned and untuned experiments over release triples");
    std::string run_manifest, run_out, run_schema;
    std::string run_learners = "where,cart,rf,lr";
    std::string run_goals = "prec,f";
    std::string run_triples;
    int run_np = 10, run_life = 5, run_repeats = 1, run_threads = 1;
    double run_f = 0.75, run_cr = 0.3;
    std::uint64_t run_seed = 1;
    run->add_option("--manifest", run_manifest, "Directory of *.manifest files")
        ->required();
    run->add_option("--out", run_out, "Output directory for reports")
        ->required();
    run->add_option("--learners", run_learners, "Comma list: where,cart,rf,lr");
    run->add_option("--goals", run_goals, "Comma list of tuning goals: pd,pf,prec,f");
    run->add_option("--triples", run_triples,
                    "Comma list of triple names (default: all)");
    run->add_option("--np", run_np, "DE population size");
    run->add_option("--life", run_life, "DE patience in generations");
    run->add_option("--f", run_f, "DE extrapolation factor");
    run->add_option("--cr", run_cr, "DE crossover probability");
    run->add_option("--seed", run_seed, "Master seed");
    run->add_option("--repeats", run_repeats, "Repeats with derived seeds");
    run->add_option("--threads", run_threads, "Parallel experiment cells");
    run->add_option("--schema", run_schema, "Optional CSV schema JSON");

    // ---- report ----
    auto* report = app.add_subcommand(
        "report", "Re-emit report tables from an existing records.csv");
    std::string report_in;
    report->add_option("--in", report_in, "Directory holding records.csv")
        ->required();

    // ---- validate-data ----
    auto* validate = app.add_subcommand(
        "validate-data",
        "Check per-release defective/total counts against the bundled catalog");
    std::string validate_manifest, validate_schema;
    validate
        ->add_option("--manifest", validate_manifest,
                     "Directory of *.manifest files")
        ->required();
    validate->add_option("--schema", validate_schema, "Optional CSV schema JSON");

    // ---- gen-data ----
    auto* gen = app.add_subcommand(
        "gen-data", "Write synthetic PROMISE-format releases for the catalog");
    std::string gen_out;
    std::uint64_t gen_seed = 42;
    gen->add_option("--out", gen_out, "Output directory")->required();
    gen->add_option("--seed", gen_seed, "Generator seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            tunedp::ExperimentPlan plan;
            plan.triples = split_list(run_triples);
            plan.learners.clear();
            for (const auto& name : split_list(run_learners)) {
                plan.learners.push_back(tunedp::learner_from_name(name));
            }
            plan.goals.clear();
            for (const auto& name : split_list(run_goals)) {
                plan.goals.push_back(tunedp::goal_from_name(name));
            }
            plan.np = run_np;
            plan.life = run_life;
            plan.f = run_f;
            plan.cr = run_cr;
            plan.seed = run_seed;
            plan.repeats = run_repeats;
            plan.threads = run_threads;

            const auto triples = tunedp::load_manifest_dir(
                run_manifest, schema_from_option(run_schema));
            const auto records = tunedp::run_plan(triples, plan);
            tunedp::emit_reports(records, run_out);
            std::cout << records.size() << " records -> " << run_out << "\n";
        } else if (*report) {
            const auto records = tunedp::read_records_csv(
                std::filesystem::path(report_in) / "records.csv");
            tunedp::emit_reports(records, report_in);
            std::cout << "reports rebuilt from " << records.size()
                      << " records in " << report_in << "\n";
        } else if (*validate) {
            const auto triples = tunedp::load_manifest_dir(
                validate_manifest, schema_from_option(validate_schema));
            const auto result = tunedp::validate_counts(triples);
            std::cout << result.report;
            return result.ok ? 0 : 1;
        } else if (*gen) {
            const int releases =
                tunedp::generate_promise_style_data(gen_out, gen_seed);
            std::cout << releases << " releases -> " << gen_out << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
