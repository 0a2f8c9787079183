#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "ringlab/cli.hpp"
#include "ringlab/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Level-set convexity lab for harmonic potentials on ring domains"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    int workers = 0;
    std::string dump_field;
    std::string load_field;
    app.add_option("--config", config_path, "Scenario file (JSON)");
    auto* seed_opt = app.add_option("--seed", seed, "Random seed");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--dump-field", dump_field, "Write the fitted field to this file");
    app.add_option("--load-field", load_field, "Read a fitted field instead of solving");

    const std::map<std::string, std::string> about = {
        {"solve", "Fit the capacity potential and certify the ring"},
        {"psi-check", "Check admissibility of the configured psi"},
        {"check-mp", "Search for a strict interior extremum of the two-point function"},
        {"check-cmy", "Compare interior and boundary minima of |Du| kappa_1"},
        {"rr-verify", "Verify the level-preserving map on random samples"},
        {"report", "Run every check and write one combined report"}};
    for (const auto& name : ringlab::subcommands()) app.add_subcommand(name, about.at(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ringlab::exit_error;
    }

    ringlab::RunConfig config;
    try {
        const ringlab::Json doc = config_path.empty() ? ringlab::Json::object() : ringlab::read_json_file(config_path);
        config = ringlab::parse_config(doc);
    } catch (const ringlab::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ringlab::exit_error;
    }
    if (*seed_opt) config.seed = seed;
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (workers > 0) config.workers = workers;
    if (!dump_field.empty()) config.dump_field = dump_field;
    if (!load_field.empty()) config.load_field = load_field;

    const std::string sub = app.get_subcommands().front()->get_name();
    const int code = ringlab::run(config, sub, std::cerr);
    std::cout << sub << ": " << (code == 0 ? "ok" : code == 2 ? "property violation" : "error") << '\n';
    return code;
}
