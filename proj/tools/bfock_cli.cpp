// Command-line front end: job-file simulation (`run`), parameter sweeps to
// CSV (`scan`), and the randomized analytic-vs-numeric verification suite
// (`suite`). Exit codes: 0 success/agreement, 1 usage or job-file error,
// 2 analytic/numeric disagreement.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bfock/job.hpp"

namespace {

int write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        return 1;
    }
    out << content;
    return 0;
}

std::vector<double> parse_grid(const std::string& list) {
    std::vector<double> grid;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        grid.push_back(std::stod(item, &used));
        if (used != item.size()) throw bfock::JobError("bad grid value: " + item);
    }
    return grid;
}

std::vector<int> parse_dims(const std::string& list) {
    std::vector<int> dims;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        dims.push_back(std::stoi(item));
    }
    return dims;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "bfock: linear-optical network simulator over the Bargmann-Fock\n"
        "representation, with a Fock-basis oracle and the analytic\n"
        "product/entangled classification of pure product inputs.\n\n"
        "Tolerance knobs can be overridden via environment variables:\n"
        "BFOCK_PRODUCT_TOL, BFOCK_LAMBDA_TOL, BFOCK_PHASE_TOL,\n"
        "BFOCK_ZERO_THRESHOLD, BFOCK_VACUUM_FLOOR, BFOCK_SEPARABILITY_TOL."};
    app.require_subcommand(1);

    std::string job_path;
    std::string dump_series_path, dump_fock_path;
    auto* run = app.add_subcommand("run", "simulate one job file and report");
    run->add_option("job", job_path, "JSON job file")->required();
    run->add_option("--dump-series", dump_series_path,
                    "write the output BF series (graded-lex \"n1 .. nN re im\" lines)");
    run->add_option("--dump-fock", dump_fock_path, "write the output Fock amplitudes");

    std::string scan_job_path, param_path, grid_list, csv_path;
    auto* scan_cmd = app.add_subcommand("scan", "sweep one parameter of a job into CSV");
    scan_cmd->add_option("job", scan_job_path, "JSON job file")->required();
    scan_cmd->add_option("--param", param_path, "parameter path, e.g. modes[1].gamma or network.theta")
        ->required();
    scan_cmd->add_option("--grid", grid_list, "comma-separated values")->required();
    scan_cmd->add_option("--out", csv_path, "CSV output path (default stdout)");

    std::uint64_t suite_seed = 7;
    int suite_count = 100;
    std::string suite_dims = "2,3";
    int suite_cutoff = 12;
    auto* suite_cmd =
        app.add_subcommand("suite", "randomized analytic-vs-numeric verification suite");
    suite_cmd->add_option("--seed", suite_seed, "master seed");
    suite_cmd->add_option("--count", suite_count, "number of cases");
    suite_cmd->add_option("--dims", suite_dims, "comma-separated network dimensions");
    suite_cmd->add_option("--cutoff", suite_cutoff, "total-photon cutoff");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            bfock::JobSpec job = bfock::parse_job_file(job_path);
            if (!dump_series_path.empty()) job.dump_series_path = dump_series_path;
            if (!dump_fock_path.empty()) job.dump_fock_path = dump_fock_path;
            const bfock::RunResult res = bfock::run_job(job);
            if (job.want_report) std::cout << res.report_text;
            if (!job.dump_series_path.empty())
                if (const int rc = write_file(job.dump_series_path, res.series_dump)) return rc;
            if (!job.dump_fock_path.empty())
                if (const int rc = write_file(job.dump_fock_path, res.fock_dump)) return rc;
            return res.exit_code;
        }
        if (*scan_cmd) {
            std::ifstream in(scan_job_path);
            if (!in) throw bfock::JobError("cannot open job file: " + scan_job_path);
            bfock::json base;
            try {
                base = bfock::json::parse(in);
            } catch (const bfock::json::parse_error& e) {
                throw bfock::JobError(std::string("job file: ") + e.what());
            }
            const bfock::ScanResult res = bfock::scan(base, param_path, parse_grid(grid_list));
            if (csv_path.empty()) {
                std::cout << res.csv;
            } else if (const int rc = write_file(csv_path, res.csv)) {
                return rc;
            }
            return res.exit_code;
        }
        if (*suite_cmd) {
            const bfock::SuiteResult res =
                bfock::random_suite(suite_seed, suite_count, parse_dims(suite_dims), suite_cutoff);
            std::cout << res.summary << "\n";
            return res.exit_code;
        }
    } catch (const bfock::JobError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
