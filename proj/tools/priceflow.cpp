#include "priceflow/config.hpp"
#include "priceflow/error.hpp"
#include "priceflow/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

struct Options {
    std::string config_path;
    std::string out_dir;
};

int execute(priceflow::Command command, const Options& opts) {
    using namespace priceflow;
    try {
        std::string text;
        if (!opts.config_path.empty()) {
            std::ifstream in(opts.config_path);
            if (!in) throw Error(ErrorKind::IoError, "cannot read config " + opts.config_path);
            std::ostringstream buffer;
            buffer << in.rdbuf();
            text = buffer.str();
        }
        RunConfig cfg = parse_config(text);
        if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
        return run(cfg, command, std::cout, std::cerr);
    } catch (const Error& e) {
        std::cerr << "error kind=" << to_string(e.kind()) << " message=\"" << e.what() << "\"\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"priceflow: price formation free boundary solver"};
    app.require_subcommand(1);

    const std::pair<const char*, const char*> commands[] = {
        {"simulate", "price trajectory with the configured method (t,p,lambda,method CSV)"},
        {"fd", "finite-difference reference run with density snapshots"},
        {"field", "heat field F and F_x on an (x, t) grid"},
        {"dump-transform", "transformed initial datum F_I on an x window"},
        {"asympt", "large-time law, optionally fitted against a trajectory CSV"},
        {"compare", "heat-transform vs finite-difference report"},
    };

    Options opts;
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opts.config_path, "flat TOML run configuration");
        sub->add_option("--out", opts.out_dir, "output directory (overrides out_dir)");
    }

    CLI11_PARSE(app, argc, argv);

    for (CLI::App* sub : app.get_subcommands()) {
        const auto command = priceflow::parse_command(sub->get_name());
        if (command) return execute(*command, opts);
    }
    return 2;
}
