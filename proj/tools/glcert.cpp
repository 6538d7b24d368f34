// glcert command-line driver: solve | sweep | certify | field-check.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "glcert/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Ginzburg-Landau lattice minimizer and lower-bound certificate harness"};
    app.set_version_flag("--version", std::string(glcert::kVersion));
    app.require_subcommand(1);

    std::string config_path, state_path;
    for (const char* name : {"solve", "sweep", "certify", "field-check"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        if (std::string(name) == "certify")
            sub->add_option("--state", state_path, "state snapshot (defaults to output.state_path)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    return glcert::cli::run(command, config_path, state_path, std::cout, std::cerr);
}
