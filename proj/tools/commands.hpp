#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spa/io.hpp"
#include "spa/power.hpp"

namespace spa::cli {

struct TestOptions {
    std::filesystem::path genotype_path;
    std::filesystem::path phenotype_path;
    std::string method = "i1";
    double maf_cutoff = 0.01;
    std::size_t n_permutations = 999;
    std::uint64_t seed = 1;
    TraitMode trait = TraitMode::Auto;
    unsigned workers = 1;
};

/// Filters rare variants, runs one method and writes a JSON result.
void cmd_test(const TestOptions& opt, std::ostream& out);

struct SimulateOptions {
    std::string scenario = "null1";
    TraitMode trait = TraitMode::Dichotomous;
    std::optional<std::size_t> n;
    std::optional<std::size_t> n_cases;
    std::optional<std::size_t> n_controls;
    std::optional<std::size_t> n_variants;
    std::optional<std::string> maf_model;  // "uniform:LOW:HIGH" or "fixed:Q"
    std::uint64_t seed = 1;
    std::string out_prefix = "cohort";
};

/// Writes <prefix>.geno.tsv and <prefix>.pheno.tsv (with a stratum column
/// when the scenario has an environmental factor) and a JSON summary.
void cmd_simulate(const SimulateOptions& opt, std::ostream& out);

/// Applies the simulate/power overrides to a catalogue model.
ScenarioSpec build_scenario(const std::string& id, TraitMode trait, std::optional<std::size_t> n_variants,
                            const std::optional<std::string>& maf_model);

struct PowerOptions {
    std::vector<std::string> scenarios;
    TraitMode trait = TraitMode::Dichotomous;
    std::vector<std::string> methods;
    std::vector<std::size_t> sizes{1000};
    std::size_t n_replicates = 200;
    std::size_t n_permutations = 999;
    std::vector<double> alphas{0.05, 0.01};
    std::uint64_t seed = 1;
    std::string out_prefix = "power";
    std::optional<std::size_t> n_variants;
    std::optional<std::string> maf_model;
    double cmc_cutoff = 0.5;
    unsigned workers = 1;
    bool quiet = false;
};

/// Runs the grid and writes <prefix>.tsv, <prefix>.wide.tsv and
/// <prefix>.json; progress goes to `log`.
void cmd_power(const PowerOptions& opt, std::ostream& out, std::ostream& log);

}  // namespace spa::cli
