#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "loopcoh/loopcoh.hpp"

namespace {

struct CliArgs {
    std::string builtin;
    std::string space_file;
    std::vector<std::uint32_t> primes;
    std::vector<std::uint32_t> excluded;
    int max_degree = -1;  // -1: take the space file's truncation
    std::string format = "text";
    std::string out_file;
    bool strict = false;
};

void add_common_options(CLI::App* cmd, CliArgs& args) {
    auto* b = cmd->add_option("--builtin", args.builtin, "Name of a builtin space");
    auto* s = cmd->add_option("--space", args.space_file, "Path to a space JSON file");
    b->excludes(s);
    cmd->add_option("--prime", args.primes,
                    "Prime field to work over; 0 selects the rationals (repeatable; "
                    "defaults to the space file's prime list)");
    cmd->add_option("--max-degree", args.max_degree,
                    "Report degrees up to this bound (defaults to the space file's truncation)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--format", args.format, "Output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--out", args.out_file, "Write the report to a file instead of stdout");
    cmd->add_flag("--strict", args.strict,
                  "Exit with status 3 when a verdict comes back unknown");
}

int run(const std::string& command, const CliArgs& args) {
    using namespace loopcoh;
    if (args.builtin.empty() && args.space_file.empty())
        throw schema_error("one of --builtin or --space is required");
    SpaceSpec spec = args.builtin.empty() ? SpaceSpec::load_file(args.space_file)
                                          : SpaceSpec::builtin(args.builtin);

    RunOptions opt;
    opt.primes = args.primes.empty() ? spec.primes : args.primes;
    for (std::uint32_t p : opt.primes) require_characteristic(p);
    opt.max_degree = args.max_degree > 0 ? args.max_degree : spec.truncation;
    opt.excluded.insert(args.excluded.begin(), args.excluded.end());
    if (opt.primes.empty())
        throw schema_error("no primes requested and the space file lists none");

    json report = run_command(command, spec, opt);
    std::string rendered =
        args.format == "json" ? report.dump(2) + "\n" : render_text(report);

    if (!args.out_file.empty()) {
        std::ofstream out(args.out_file, std::ios::binary);
        if (!out) throw schema_error("cannot write to '" + args.out_file + "'");
        out << rendered;
    } else {
        std::cout << rendered;
    }

    if (args.strict && report_has_unknown(report)) {
        std::cerr << "strict: at least one verdict is unknown (hypotheses not met)\n";
        return 3;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "loopcoh: cohomology of loop spaces of Thom spaces of spherical fibrations,\n"
        "computed exactly through the collapsed second page of the loop-space\n"
        "spectral sequence"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"classify", "Structure verdict (polynomial/exterior/truncated) with generator counts"},
        {"e2", "Second-page bidegree table from bar homology"},
        {"series", "Loop-space dimension series (collapse case)"},
        {"generators", "Minimal generator counts of the loop-space cohomology"},
        {"massey", "Sphere-bundle relation v^2 = s + t v, Wu class, consistency"},
        {"split-check", "Graded-dimension check of the stable splitting"},
        {"local-global", "Polynomiality over a localized integer ring from residue fields"},
    };

    CliArgs args;
    std::string chosen;
    for (const auto& [name, help] : commands) {
        CLI::App* cmd = app.add_subcommand(name, help);
        add_common_options(cmd, args);
        if (name == "local-global")
            cmd->add_option("--exclude-prime", args.excluded,
                            "Prime to invert in the ground ring (repeatable)");
        cmd->callback([&chosen, name = name]() { chosen = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        return run(chosen, args);
    } catch (const loopcoh::schema_error& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const loopcoh::hypothesis_error& e) {
        std::cerr << "hypothesis not met: " << e.what() << "\n";
        return 3;
    } catch (const loopcoh::invariant_error& e) {
        std::cerr << "internal invariant failure: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
