#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "claimgen/config.hpp"

namespace claimgen::cli {

// Shared per-invocation state: the effective configuration and where
// artifacts land.
struct Context {
    config::RunConfig config;
    std::filesystem::path out;
};

int cmd_prepare(const Context& ctx);
int cmd_finetune(const Context& ctx);
int cmd_generate(const Context& ctx);
int cmd_rank(const Context& ctx);
int cmd_evaluate(const Context& ctx);
int cmd_aggregate(const Context& ctx);
int cmd_novelty(const Context& ctx);
int cmd_report(const Context& ctx);

} // namespace claimgen::cli
