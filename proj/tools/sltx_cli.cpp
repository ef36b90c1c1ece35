// Command-line front end: reads JSON problem files, runs the solvers and
// emits CSV or JSON tables with deterministic 17-significant-digit numbers.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sltx/characteristic.hpp"
#include "sltx/fd_oracle.hpp"
#include "sltx/hilbert.hpp"
#include "sltx/phase.hpp"
#include "sltx/problem.hpp"
#include "sltx/resolvent.hpp"
#include "sltx/spectrum.hpp"
#include "sltx/targets.hpp"

namespace {

using nlohmann::json;

std::string
fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    // Extra key/value lines appended after the CSV body (the scalar
    // component of an eigen-element, the resolvent footer, ...).
    std::vector<std::pair<std::string, std::string>> footer;
    bool footer_as_json = false;

    void
    add_row(std::initializer_list<std::string> cells)
    {
        rows.emplace_back(cells);
    }
};

void
emit(const Table& table, const std::string& format, std::ostream& os)
{
    if (format == "json") {
        json out;
        out["rows"] = json::array();
        for (const auto& row : table.rows) {
            json obj;
            for (std::size_t c = 0; c < table.header.size(); ++c) {
                // Numbers went through fmt17; parse back so JSON holds numbers.
                try {
                    std::size_t pos = 0;
                    const double v = std::stod(row[c], &pos);
                    if (pos == row[c].size()) {
                        obj[table.header[c]] = v;
                        continue;
                    }
                } catch (const std::exception&) {
                }
                obj[table.header[c]] = row[c];
            }
            out["rows"].push_back(obj);
        }
        for (const auto& [key, value] : table.footer) {
            try {
                out[key] = std::stod(value);
            } catch (const std::exception&) {
                out[key] = value;
            }
        }
        os << out.dump() << '\n';
        return;
    }
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        os << table.header[c] << (c + 1 < table.header.size() ? "," : "");
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            os << row[c] << (c + 1 < row.size() ? "," : "");
        }
        os << '\n';
    }
    if (!table.footer.empty()) {
        if (table.footer_as_json) {
            json f;
            for (const auto& [key, value] : table.footer) {
                try {
                    f[key] = std::stod(value);
                } catch (const std::exception&) {
                    f[key] = value;
                }
            }
            os << f.dump() << '\n';
        } else {
            for (const auto& [key, value] : table.footer) {
                os << key << ',' << value << '\n';
            }
        }
    }
}

void
write_output(const Table& table, const std::string& format, const std::string& output_path)
{
    if (output_path.empty()) {
        emit(table, format, std::cout);
        return;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out) {
        throw sltx::BadInput("cannot open output file: " + output_path);
    }
    emit(table, format, out);
}

void
warn_to_stderr(const std::string& message)
{
    json obj;
    obj["code"] = "warning";
    obj["message"] = message;
    std::cerr << obj.dump() << '\n';
}

int
exit_code_for(const sltx::Error& e)
{
    const std::string& code = e.code();
    if (code == "bad_input" || code == "degenerate_left_bc" || code == "non_positive_determinant" ||
        code == "bad_interfaces" || code == "zero_leading_coefficient" || code == "grid_mismatch") {
        return 2;
    }
    if (code == "eta_is_eigenvalue" || code == "scan_exhausted") {
        return 4;
    }
    return 3;
}

int
fail(const sltx::Error& e, const std::string& subcommand)
{
    json obj;
    obj["code"] = e.code();
    obj["message"] = e.what();
    obj["context"] = {{"subcommand", subcommand}};
    if (const auto* scan = dynamic_cast<const sltx::ScanExhausted*>(&e)) {
        obj["context"]["found"] = scan->found;
        obj["context"]["requested"] = scan->requested;
    }
    std::cerr << obj.dump() << '\n';
    return exit_code_for(e);
}

struct CommonArgs {
    std::string problem_path;
    std::string output_path;
    std::string format = "csv";
};

void
add_common(CLI::App* cmd, CommonArgs& args)
{
    cmd->add_option("problem", args.problem_path, "problem JSON file")->required();
    cmd->add_option("-o,--output", args.output_path, "write output to a file instead of stdout");
    cmd->add_option("--format", args.format, "output format")->check(CLI::IsMember({"csv", "json"}));
}

sltx::SpectrumOptions
spectrum_options(std::optional<double> from, std::size_t nodes)
{
    sltx::SpectrumOptions opts;
    opts.lambda_start = from;
    opts.grid_nodes = nodes;
    opts.on_warning = warn_to_stderr;
    return opts;
}

} // namespace

int
main(int argc, char** argv)
{
    CLI::App app{"Spectral solver for a Sturm-Liouville problem on [-1,1] with "
                 "piecewise leading coefficient, transmission conditions at three "
                 "interior points and a boundary condition affine in the eigenvalue "
                 "parameter.\n\nBuiltin function specs (expand --target, resolvent --rhs):\n"
                 "  poly:[c0,c1,...]x4            same polynomial on all four segments\n"
                 "  poly:[...],[...],[...],[...]  per-segment coefficient lists\n"
                 "  gauss:a,b                     exp(-a(x-b)^2)\n"};
    app.require_subcommand(1);

    CommonArgs validate_args;
    CLI::App* cmd_validate = app.add_subcommand("validate", "validate a problem file and report the determinants");
    add_common(cmd_validate, validate_args);

    CommonArgs spectrum_args;
    int spectrum_count = 5;
    std::optional<double> spectrum_from;
    std::size_t spectrum_nodes = 2049;
    CLI::App* cmd_spectrum = app.add_subcommand("spectrum", "locate the smallest eigenvalues");
    add_common(cmd_spectrum, spectrum_args);
    cmd_spectrum->add_option("--count", spectrum_count, "number of eigenvalues")->check(CLI::PositiveNumber);
    cmd_spectrum->add_option("--from", spectrum_from, "scan start (default: automatic lower bound)");
    cmd_spectrum->add_option("--nodes", spectrum_nodes, "quadrature nodes per segment (odd)");

    CommonArgs eigfun_args;
    int eigfun_index = 1;
    int eigfun_samples = 201;
    CLI::App* cmd_eigfun = app.add_subcommand("eigfun", "sample one normalized eigenfunction");
    add_common(cmd_eigfun, eigfun_args);
    cmd_eigfun->add_option("--index", eigfun_index, "1-based eigenvalue index")->check(CLI::PositiveNumber);
    cmd_eigfun->add_option("--samples", eigfun_samples, "samples per segment")->check(CLI::Range(2, 100000));

    CommonArgs expand_args;
    std::string expand_target;
    int expand_terms = 20;
    std::optional<double> expand_scalar;
    std::size_t expand_nodes = 2049;
    CLI::App* cmd_expand = app.add_subcommand("expand", "expand a target element in the eigenbasis");
    add_common(cmd_expand, expand_args);
    cmd_expand->add_option("--target", expand_target, "builtin target spec")->required();
    cmd_expand->add_option("--terms", expand_terms, "number of expansion terms")->check(CLI::PositiveNumber);
    cmd_expand->add_option("--scalar", expand_scalar, "override the scalar component (default N'(f))");
    cmd_expand->add_option("--nodes", expand_nodes, "quadrature nodes per segment (odd)");

    CommonArgs resolvent_args;
    double resolvent_eta = 0.0;
    std::string resolvent_rhs;
    std::optional<double> resolvent_scalar;
    std::size_t resolvent_nodes = 2049;
    CLI::App* cmd_resolvent = app.add_subcommand("resolvent", "solve (A - eta)Y = F for eta outside the spectrum");
    add_common(cmd_resolvent, resolvent_args);
    cmd_resolvent->add_option("--eta", resolvent_eta, "spectral shift")->required();
    cmd_resolvent->add_option("--rhs", resolvent_rhs, "builtin right-hand side spec")->required();
    cmd_resolvent->add_option("--scalar", resolvent_scalar, "override the scalar component (default N'(f))");
    cmd_resolvent->add_option("--nodes", resolvent_nodes, "sample nodes per segment (odd)");

    CommonArgs compare_args;
    int compare_count = 5;
    int compare_mesh = 2000;
    CLI::App* cmd_compare = app.add_subcommand("compare", "shooting eigenvalues vs the finite-difference oracle");
    add_common(cmd_compare, compare_args);
    cmd_compare->add_option("--count", compare_count, "number of eigenvalues")->check(CLI::PositiveNumber);
    cmd_compare->add_option("--mesh", compare_mesh, "fd nodes per segment")->check(CLI::Range(16, 100000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        json obj;
        obj["code"] = "bad_arguments";
        obj["message"] = e.what();
        obj["context"] = json::object();
        std::cerr << obj.dump() << '\n';
        return 2;
    }

    std::string subcommand = "?";
    try {
        if (cmd_validate->parsed()) {
            subcommand = "validate";
            const sltx::Problem problem = sltx::Problem::validate(sltx::load_problem_file(validate_args.problem_path));
            json report;
            report["valid"] = true;
            report["theta"] = problem.constants().theta;
            report["gamma"] = problem.constants().gamma;
            report["xi"] = problem.constants().xi;
            report["rho"] = problem.constants().rho;
            if (validate_args.output_path.empty()) {
                std::cout << report.dump() << '\n';
            } else {
                std::ofstream out(validate_args.output_path, std::ios::binary);
                out << report.dump() << '\n';
            }
            return 0;
        }

        if (cmd_spectrum->parsed()) {
            subcommand = "spectrum";
            const sltx::Problem problem = sltx::Problem::validate(sltx::load_problem_file(spectrum_args.problem_path));
            const auto pairs =
                sltx::find_eigenvalues(problem, spectrum_count, spectrum_options(spectrum_from, spectrum_nodes));
            Table table;
            table.header = {"index", "eigenvalue", "delta_at_root", "w_prime", "c1", "bracket_lo", "bracket_hi"};
            for (const auto& pair : pairs) {
                table.add_row({std::to_string(pair.index), fmt17(pair.mu), fmt17(pair.delta_at_root),
                               fmt17(pair.w_prime), fmt17(pair.c1), fmt17(pair.bracket_lo), fmt17(pair.bracket_hi)});
            }
            write_output(table, spectrum_args.format, spectrum_args.output_path);
            return 0;
        }

        if (cmd_eigfun->parsed()) {
            subcommand = "eigfun";
            const sltx::Problem problem = sltx::Problem::validate(sltx::load_problem_file(eigfun_args.problem_path));
            const auto pairs = sltx::find_eigenvalues(problem, eigfun_index, spectrum_options(std::nullopt, 2049));
            const sltx::Eigenpair& pair = pairs.back();
            const int samples = eigfun_samples % 2 == 0 ? eigfun_samples + 1 : eigfun_samples;
            const sltx::PiecewiseSolution dense = sltx::left_solution(problem, pair.mu, samples);
            Table table;
            table.header = {"x", "segment", "phi", "dphi"};
            for (int s = 0; s < 4; ++s) {
                const auto& traj = dense.seg[static_cast<std::size_t>(s)];
                for (std::size_t k = 0; k < traj.x.size(); ++k) {
                    table.add_row({fmt17(traj.x[k]), std::to_string(s + 1), fmt17(pair.scale * traj.state[k].u),
                                   fmt17(pair.scale * traj.state[k].du)});
                }
            }
            table.footer.emplace_back("scalar", fmt17(pair.element.h));
            write_output(table, eigfun_args.format, eigfun_args.output_path);
            return 0;
        }

        if (cmd_expand->parsed()) {
            subcommand = "expand";
            const sltx::Problem problem = sltx::Problem::validate(sltx::load_problem_file(expand_args.problem_path));
            const sltx::TargetSpec target = sltx::parse_target(expand_target);
            const auto pairs = sltx::find_eigenvalues(problem, expand_terms, spectrum_options(std::nullopt, expand_nodes));
            const auto grid = pairs.front().element.grid;
            const sltx::HElement F = sltx::sample_target(problem, grid, target, expand_scalar);
            std::vector<sltx::HElement> elements;
            elements.reserve(pairs.size());
            for (const auto& pair : pairs) elements.push_back(pair.element);
            const sltx::Expansion expansion = sltx::expand(problem, F, elements);
            Table table;
            table.header = {"N", "coefficient", "residual"};
            for (std::size_t n = 0; n < expansion.coeff.size(); ++n) {
                table.add_row({std::to_string(n + 1), fmt17(expansion.coeff[n]), fmt17(expansion.residual[n])});
            }
            write_output(table, expand_args.format, expand_args.output_path);
            return 0;
        }

        if (cmd_resolvent->parsed()) {
            subcommand = "resolvent";
            const sltx::Problem problem =
                sltx::Problem::validate(sltx::load_problem_file(resolvent_args.problem_path));
            const sltx::TargetSpec rhs = sltx::parse_target(resolvent_rhs);
            const std::size_t nodes = resolvent_nodes % 2 == 0 ? resolvent_nodes + 1 : resolvent_nodes;
            const auto grid = sltx::make_grid(problem, nodes);
            const sltx::HElement F = sltx::sample_target(problem, grid, rhs, resolvent_scalar);
            const sltx::ResolventSolution sol = sltx::resolvent_solve(problem, resolvent_eta, F);
            Table table;
            table.header = {"x", "segment", "y", "dy"};
            for (int s = 0; s < 4; ++s) {
                const auto si = static_cast<std::size_t>(s);
                for (std::size_t k = 0; k < grid->x[si].size(); ++k) {
                    table.add_row(
                        {fmt17(grid->x[si][k]), std::to_string(s + 1), fmt17(sol.y.y[si][k]), fmt17(sol.y.dy[si][k])});
                }
            }
            table.footer_as_json = true;
            table.footer.emplace_back("eta", fmt17(sol.eta));
            table.footer.emplace_back("d", fmt17(sol.d));
            table.footer.emplace_back("residual", fmt17(sol.residual));
            write_output(table, resolvent_args.format, resolvent_args.output_path);
            return 0;
        }

        if (cmd_compare->parsed()) {
            subcommand = "compare";
            const sltx::Problem problem = sltx::Problem::validate(sltx::load_problem_file(compare_args.problem_path));
            const auto pairs = sltx::find_eigenvalues(problem, compare_count, spectrum_options(std::nullopt, 2049));
            const sltx::PhaseModel model = sltx::make_phase_model(problem);
            const double lo = sltx::auto_lambda_start(problem);
            const double hi = pairs.back().mu + 0.5 * model.step(pairs.back().mu);
            const std::vector<double> oracle =
                sltx::oracle_eigenvalues(problem, compare_count, compare_mesh, lo, hi);
            Table table;
            table.header = {"index", "shooting", "oracle", "rel_diff"};
            for (int i = 0; i < compare_count; ++i) {
                const double shooting = pairs[static_cast<std::size_t>(i)].mu;
                const double fd = oracle[static_cast<std::size_t>(i)];
                const double rel = std::abs(shooting - fd) / std::max(std::abs(shooting), 1e-300);
                table.add_row({std::to_string(i + 1), fmt17(shooting), fmt17(fd), fmt17(rel)});
            }
            write_output(table, compare_args.format, compare_args.output_path);
            return 0;
        }
    } catch (const sltx::Error& e) {
        return fail(e, subcommand);
    } catch (const std::exception& e) {
        json obj;
        obj["code"] = "internal_error";
        obj["message"] = e.what();
        obj["context"] = {{"subcommand", subcommand}};
        std::cerr << obj.dump() << '\n';
        return 3;
    }
    return 2;
}
