// confal: exact checks and classifications for the loop Virasoro conformal
// algebra. Exit status: 0 all checks pass, 1 check failures, 2 usage errors,
// 3 internal errors.

#include <iostream>

#include <CLI11.hpp>

#include "confal/cli.hpp"

using namespace confal;

namespace {

void add_common(CLI::App* cmd, RunConfig& cfg, std::string& format)
{
    cmd->add_option("--builtin", cfg.builtin, "builtin algebra {cw}");
    cmd->add_option("--window", cfg.window, "checks quantify over [-N, N]");
    cmd->add_option("--deg-bound", cfg.deg_bound, "polynomial degree bound");
    cmd->add_option("--format", format, "output format {text,json}");
    cmd->add_option("--input", cfg.input_path, "document path (json)");
    cmd->add_option("--seed", [&cfg](const std::vector<std::string>& vals) {
        cfg.seed = std::stoull(vals.at(0));
        return true;
    }, "seed for randomized campaigns");
    cmd->add_option("--alpha-band", cfg.alpha_band, "alpha truncation band [-N, N]");
    cmd->add_option("--i", cfg.index_i, "first basis index");
    cmd->add_option("--j", cfg.index_j, "second basis index");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exact kernel for the loop Virasoro conformal algebra"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string format = "text";

    std::map<std::string, RunConfig::Command> commands{
        {"check-algebra", RunConfig::Command::CheckAlgebra},
        {"check-module", RunConfig::Command::CheckModule},
        {"classify-rank1", RunConfig::Command::ClassifyRank1},
        {"classify-graded", RunConfig::Command::ClassifyGraded},
        {"check-derivation", RunConfig::Command::CheckDerivation},
        {"fourier", RunConfig::Command::Fourier},
        {"mutate-test", RunConfig::Command::MutateTest},
    };
    for (auto& [name, command] : commands) {
        CLI::App* sub = app.add_subcommand(name);
        add_common(sub, cfg, format);
        sub->callback([&cfg, command] { cfg.command = command; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (format == "json")
            cfg.format = RunConfig::Format::Json;
        else if (format != "text")
            throw UsageError("--format must be text or json");

        Report rep = run(cfg);
        if (cfg.format == RunConfig::Format::Json)
            std::cout << rep.to_json().dump(2) << "\n";
        else
            std::cout << rep.to_text();
        return rep.exit_status();
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
