#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "claimgen/config.hpp"
#include "claimgen/version.hpp"
#include "commands.hpp"

namespace {

using claimgen::cli::Context;

struct CliOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_dir;
};

// Shared options on every subcommand: a config file, dotted-path overrides,
// and an output directory shortcut.
void add_common_options(CLI::App& cmd, CliOptions& opts) {
    cmd.add_option("-c,--config", opts.config_path, "JSON run configuration")
        ->check(CLI::ExistingFile);
    cmd.add_option("-s,--set", opts.overrides,
                   "override a config field, e.g. --set pipeline.k_selected=5");
    cmd.add_option("-o,--output-dir", opts.output_dir,
                   "where artifacts are written (default: paths.output_dir)");
}

Context make_context(const CliOptions& opts) {
    Context ctx;
    std::vector<std::string> overrides = opts.overrides;
    if (!opts.output_dir.empty()) overrides.push_back("paths.output_dir=" + opts.output_dir);
    if (opts.config_path.empty())
        ctx.config = claimgen::config::config_from_json(claimgen::json::object(), overrides);
    else ctx.config = claimgen::config::load_config(opts.config_path, overrides);
    ctx.out = ctx.config.paths.output_dir;
    return ctx;
}

// Machine-readable failure report on stderr; the exit code separates bad
// input (1) from a failed run (2).
int report_error(const std::string& type, const std::exception& e,
                 const std::vector<std::string>* violations = nullptr) {
    claimgen::json body{{"type", type}, {"message", e.what()}};
    if (violations) body["violations"] = *violations;
    std::cerr << claimgen::json{{"error", body}}.dump() << "\n";
    return type == "runtime" ? 2 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"topic-conditioned claim generation pipeline"};
    app.set_version_flag("--version", std::string(claimgen::kVersion));
    app.require_subcommand(1);

    struct Subcommand {
        const char* name;
        const char* help;
        int (*run)(const Context&);
    };
    const Subcommand subcommands[] = {
        {"prepare", "split topics, filter claims, render training sequences", claimgen::cli::cmd_prepare},
        {"finetune", "train the toy backend on prepared sequences", claimgen::cli::cmd_finetune},
        {"generate", "sample candidate claims for each topic", claimgen::cli::cmd_generate},
        {"rank", "score candidates and mark the top k per topic", claimgen::cli::cmd_rank},
        {"evaluate", "perplexity, prefix ranking, and predicted-score metrics", claimgen::cli::cmd_evaluate},
        {"aggregate", "crowd judgments to per-item labels and agreement", claimgen::cli::cmd_aggregate},
        {"novelty", "match generated claims against a curated corpus", claimgen::cli::cmd_novelty},
        {"report", "summarize the artifacts in the output directory", claimgen::cli::cmd_report},
    };

    CliOptions opts;
    int (*selected)(const Context&) = nullptr;
    for (const auto& sub : subcommands) {
        CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
        add_common_options(*cmd, opts);
        cmd->callback([&selected, run = sub.run] { selected = run; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        return selected(make_context(opts));
    } catch (const claimgen::ConfigError& e) {
        return report_error("config", e, &e.violations);
    } catch (const claimgen::ParseError& e) {
        return report_error("parse", e);
    } catch (const std::exception& e) {
        return report_error("runtime", e);
    }
}
