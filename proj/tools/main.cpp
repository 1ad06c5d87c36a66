#include "zigzag/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

struct Overrides {
    std::string config;
    std::optional<uint64_t> seed;
    std::optional<double> tol;
    std::optional<int> trunc;
    std::optional<int> points;
    std::string report;
    bool square_mode = false;
    std::string shapes;
    std::string flip;
};

void add_common(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "seed for the random suites");
    cmd->add_option("--tol", o.tol, "tolerance for numerical comparisons");
    cmd->add_option("--trunc", o.trunc, "truncation order of series evaluations");
    cmd->add_option("--points", o.points, "Gauss-Legendre points per simplex axis");
    cmd->add_option("--report", o.report, "write the JSON report here");
    cmd->add_flag("--square-mode", o.square_mode, "holonomy2 on a non-bigon: drop the left-edge factor");
    cmd->add_option("--shapes", o.shapes, "exhaustive zigzag shapes, e.g. 'n<=2,k<=2'");
    cmd->add_option("--debug-flip-sign", o.flip, "flip one sign convention (negative control)");
}

zz::RunConfig resolve(const std::string& command, const Overrides& o)
{
    zz::RunConfig c = o.config.empty() ? zz::default_config(command) : zz::load_config(o.config);
    if (c.command != command)
        throw std::invalid_argument("config is for '" + c.command + "', not '" + command + "'");
    if (o.seed)
        c.seed = *o.seed;
    if (o.tol)
        c.tolerance = *o.tol;
    if (o.trunc)
        c.quadrature.trunc = *o.trunc;
    if (o.points)
        c.quadrature.points = *o.points;
    if (!o.report.empty())
        c.output = o.report;
    if (o.square_mode)
        c.square_mode = true;
    if (!o.shapes.empty())
        c.shapes = o.shapes;
    if (!o.flip.empty())
        c.debug_flip_sign = o.flip;
    return c;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"zigzag Hochschild complexes, iterated integrals and holonomy"};
    app.require_subcommand(1);
    Overrides o;
    std::string chosen;
    const std::map<std::string, std::string> about = {
        {"verify-algebra", "exact identity suites: D^2 = 0, derivation, collapse, curved, rect, sign searches"},
        {"verify-chainmap", "d(It c) against It(D c) by finite differences on the bundled path families"},
        {"transport", "ordered series against the ODE for parallel transport"},
        {"holonomy2", "surface-ordered series against the 2-holonomy ODE"}};
    for (auto& name : zz::command_names()) {
        auto* cmd = app.add_subcommand(name, about.at(name));
        add_common(cmd, o);
        cmd->callback([&chosen, name] { chosen = name; });
    }
    std::string print_for;
    auto* print = app.add_subcommand("print-config", "print the default configuration of a command");
    print->add_option("command", print_for)->required()->check(CLI::IsMember(zz::command_names()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*print) {
            std::cout << zz::print_config(zz::default_config(print_for)) << "\n";
            return 0;
        }
        auto cfg = resolve(chosen, o);
        auto out = zz::run_command(cfg);
        std::cout << out.summary;
        if (!cfg.output.empty()) {
            std::ofstream f(cfg.output);
            if (!f)
                throw std::runtime_error("cannot write report '" + cfg.output + "'");
            f << out.report.dump(2) << "\n";
        }
        return out.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
