#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "stepanov/commands.hpp"
#include "stepanov/errors.hpp"

namespace {

void add_source_flags(CLI::App* cmd, stepanov::RunConfig& cfg) {
    cmd->add_option("--manifest", cfg.manifest_path, "manifest JSON file");
    cmd->add_option("--zoo", cfg.zoo_name, "built-in metric by name");
}

int emit(const stepanov::RunResult& res, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << res.output;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot open '" << out_path << "' for writing\n";
            return 2;
        }
        f << res.output;
    }
    return res.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"curvature checks and energy-momentum classification for metric manifests"};
    app.require_subcommand(1);

    stepanov::RunConfig cfg;
    std::string out_path;
    std::string export_name;

    auto* checks = app.add_subcommand("checks", "structure axioms, divergence and trace identities");
    auto* classify = app.add_subcommand("classify", "pointwise class-membership table");
    auto* verify = app.add_subcommand("verify", "theorem verification runs");
    auto* zoo = app.add_subcommand("zoo", "built-in metric catalog");
    auto* zoo_ls = zoo->add_subcommand("list", "list catalog entries");
    auto* zoo_exp = zoo->add_subcommand("export", "print an entry's manifest JSON");
    zoo_exp->add_option("name", export_name, "entry name")->required();
    zoo_exp->add_option("--out", out_path, "write to file instead of stdout");
    zoo->require_subcommand(1);

    for (CLI::App* cmd : {checks, classify, verify}) {
        add_source_flags(cmd, cfg);
        cmd->add_option("--points", cfg.points, "sample points per run")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", cfg.seed, "sampling / generation seed");
        cmd->add_option("--tol", cfg.tol, "tolerance override (exact jets)");
        cmd->add_option("--fd-tol", cfg.fd_tol, "tolerance override (finite differences)");
        cmd->add_flag("--fd", cfg.use_fd, "use finite-difference jets");
        cmd->add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));
        cmd->add_option("--out", out_path, "write the report to a file");
    }
    verify->add_option("--theorem", cfg.theorem, "theorem to verify")->check(CLI::Range(1, 3))->required();
    verify->add_option("--trials", cfg.trials, "synthetic instances per run")->check(CLI::PositiveNumber);
    verify->add_option("--dim", cfg.dim, "instance dimension (even, 4..8)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (zoo_ls->parsed()) {
            std::cout << stepanov::zoo_table();
            return 0;
        }
        if (zoo_exp->parsed()) {
            stepanov::RunResult r;
            r.output = stepanov::zoo_export(export_name);
            return emit(r, out_path);
        }
        if (checks->parsed()) {
            cfg.command = "checks";
            return emit(stepanov::run_checks(cfg), out_path);
        }
        if (classify->parsed()) {
            cfg.command = "classify";
            return emit(stepanov::run_classify(cfg), out_path);
        }
        cfg.command = "verify";
        return emit(stepanov::run_verify(cfg), out_path);
    } catch (const stepanov::PreconditionError& e) {
        std::cerr << "refusal: " << e.what() << "\n";
        return stepanov::kExitRefusal;
    } catch (const stepanov::ManifestError& e) {
        std::cerr << "manifest error: " << e.what() << "\n";
        return stepanov::kExitManifestError;
    } catch (const stepanov::ParseError& e) {
        std::cerr << "manifest error: " << e.what() << "\n";
        return stepanov::kExitManifestError;
    } catch (const stepanov::StructuralError& e) {
        std::cerr << "manifest error: " << e.what() << "\n";
        return stepanov::kExitManifestError;
    } catch (const stepanov::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return stepanov::kExitToleranceFailure;
    }
}
