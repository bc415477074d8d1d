// patprof: synthesize a syntactic profile (a small set of regex-like
// patterns) for a collection of strings, refine it to a requested number of
// clusters, or pick representative examples from it.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "patprof/patprof.hpp"

namespace {

void add_common_flags(CLI::App* cmd, patprof::RunConfig& cfg, std::string& column,
                      std::string& atoms, std::string& cache, std::string& format) {
  cmd->add_option("--input", cfg.input, "Input file (newline-delimited or CSV)")
      ->required();
  cmd->add_option("--column", column,
                  "CSV column to profile: header name, or 0-based index for "
                  "headerless files");
  cmd->add_flag("--newline-mode", cfg.newline_mode,
                "Treat the input as one string per line (default without --column)");
  cmd->add_option("--atoms", atoms, "Atom-config JSON with custom atoms");
  cmd->add_option("--min-patterns", cfg.params.min_patterns,
                  "Lower bound on profile size (default 1)");
  cmd->add_option("--max-patterns", cfg.params.max_patterns,
                  "Upper bound on profile size (default 10)");
  cmd->add_option("--theta", cfg.params.theta,
                  "Pattern-sampling factor, >= 1.0 (default 1.25)");
  cmd->add_option("--mu", cfg.params.mu, "String-sampling factor, >= 1.0 (default 4.0)");
  cmd->add_option("--seed", cfg.params.seed, "Random seed (default 0)");
  cmd->add_option("--format", format, "Output format: text | structured");
  cmd->add_option("--cache", cache, "Hierarchy cache file for fast refinement");
}

void finalize_config(patprof::RunConfig& cfg, const std::string& column,
                     const std::string& atoms, const std::string& cache,
                     const std::string& format) {
  if (!column.empty()) cfg.column = column;
  if (!atoms.empty()) cfg.atoms_path = atoms;
  if (!cache.empty()) cfg.cache_path = cache;
  if (format == "structured") {
    cfg.format = patprof::RunConfig::Format::Structured;
  } else if (format == "text" || format.empty()) {
    cfg.format = patprof::RunConfig::Format::Text;
  } else {
    throw patprof::UsageError("unknown format '" + format + "' (use text|structured)");
  }
  cfg.state_budget = patprof::state_budget_from_env();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"patprof: syntactic profiles for string datasets"};
  app.require_subcommand(1);

  patprof::RunConfig cfg;
  std::string column, atoms, cache, format;
  int refine_k = 0;
  int suggest_n = 0;

  CLI::App* profile = app.add_subcommand("profile", "Learn a profile for a dataset");
  add_common_flags(profile, cfg, column, atoms, cache, format);

  CLI::App* refine =
      app.add_subcommand("refine", "Re-cut a profiled dataset into exactly k patterns");
  add_common_flags(refine, cfg, column, atoms, cache, format);
  refine->add_option("--k", refine_k, "Desired number of patterns")->required();

  CLI::App* suggest = app.add_subcommand(
      "suggest-examples", "Pick representative inputs, most dissimilar first");
  add_common_flags(suggest, cfg, column, atoms, cache, format);
  suggest->add_option("--n", suggest_n, "Number of examples to suggest")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    finalize_config(cfg, column, atoms, cache, format);
    patprof::CmdResult result;
    if (profile->parsed()) {
      result = patprof::cmd_profile(cfg);
    } else if (refine->parsed()) {
      result = patprof::cmd_refine(cfg, refine_k);
    } else {
      result = patprof::cmd_suggest_examples(cfg, suggest_n);
    }
    if (!result.warn.empty()) std::fputs(result.warn.c_str(), stderr);
    std::fputs(result.out.c_str(), stdout);
    return 0;
  } catch (const patprof::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const patprof::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const patprof::CapacityError& e) {
    std::fprintf(stderr, "capacity error: %s\n", e.what());
    return 4;
  } catch (const patprof::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
