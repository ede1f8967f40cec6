#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "commands.hpp"
#include "spa/error.hpp"

namespace {

int exit_code(spa::ErrorCategory c) {
    switch (c) {
        case spa::ErrorCategory::InvalidArgument: return 2;
        case spa::ErrorCategory::Parse: return 3;
        case spa::ErrorCategory::InvalidData: return 4;
        case spa::ErrorCategory::Ascertainment: return 5;
    }
    return 1;
}

spa::TraitMode trait_from(const std::string& s) {
    return spa::parse_trait_mode(s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Summation-of-partition rare-variant association tests"};
    app.require_subcommand(1);
    unsigned workers = 1;
    app.add_option("--workers", workers, "Worker threads (0 = all cores)")->capture_default_str();

    spa::cli::TestOptions test;
    std::string test_trait = "auto";
    auto* t = app.add_subcommand("test", "Test one gene region for association");
    t->add_option("--genotypes,-g", test.genotype_path, "Genotype TSV")->required()->check(CLI::ExistingFile);
    t->add_option("--phenotypes,-p", test.phenotype_path, "Phenotype TSV (id, value[, stratum])")
        ->required()
        ->check(CLI::ExistingFile);
    t->add_option("--method,-m", test.method, "i1, i2, pstar, i2star-global, i2star-local, cmc, ws, vt")
        ->capture_default_str();
    t->add_option("--maf-cutoff", test.maf_cutoff, "Keep variants with sample MAF at or below this")
        ->capture_default_str();
    t->add_option("--perms,-B", test.n_permutations, "Permutations")->capture_default_str();
    t->add_option("--seed", test.seed, "Random seed")->capture_default_str();
    t->add_option("--trait", test_trait, "auto, dichotomous or continuous")->capture_default_str();

    spa::cli::SimulateOptions sim;
    std::string sim_trait = "dichotomous";
    auto* s = app.add_subcommand("simulate", "Simulate one cohort from a catalogue scenario");
    s->add_option("--scenario", sim.scenario, "null1, null2, s1 ... s8")->capture_default_str();
    s->add_option("--trait", sim_trait, "dichotomous or continuous")->capture_default_str();
    s->add_option("-n,--individuals", sim.n, "Sample size (split evenly for dichotomous traits)");
    s->add_option("--cases", sim.n_cases, "Number of cases");
    s->add_option("--controls", sim.n_controls, "Number of controls");
    s->add_option("--variants", sim.n_variants, "Number of variants K");
    s->add_option("--maf", sim.maf_model, "fixed:Q or uniform:LOW:HIGH");
    s->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
    s->add_option("--out,-o", sim.out_prefix, "Output prefix")->capture_default_str();

    spa::cli::PowerOptions power;
    std::string power_trait = "dichotomous";
    auto* p = app.add_subcommand("power", "Empirical type-I error and power over a simulation grid");
    p->add_option("--scenarios", power.scenarios, "Comma-separated scenario ids (s5 or s5-continuous)")
        ->delimiter(',')
        ->required();
    p->add_option("--trait", power_trait, "Trait for bare scenario ids")->capture_default_str();
    p->add_option("--methods", power.methods, "Comma-separated methods; skat, skatint, rb are reported as NA")
        ->delimiter(',')
        ->required();
    p->add_option("--sizes", power.sizes, "Comma-separated sample sizes")->delimiter(',')->capture_default_str();
    p->add_option("--replicates,-R", power.n_replicates, "Replicates per cell")->capture_default_str();
    p->add_option("--perms,-B", power.n_permutations, "Permutations per test")->capture_default_str();
    p->add_option("--alphas", power.alphas, "Comma-separated nominal levels")->delimiter(',')->capture_default_str();
    p->add_option("--seed", power.seed, "Master seed")->capture_default_str();
    p->add_option("--out,-o", power.out_prefix, "Output prefix")->capture_default_str();
    p->add_option("--variants", power.n_variants, "Number of variants K");
    p->add_option("--maf", power.maf_model, "fixed:Q or uniform:LOW:HIGH");
    p->add_option("--cmc-cutoff", power.cmc_cutoff, "MAF cutoff for CMC collapsing")->capture_default_str();
    p->add_flag("--quiet,-q", power.quiet, "No progress on standard error");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }

    try {
        if (t->parsed()) {
            test.trait = trait_from(test_trait);
            test.workers = workers;
            spa::cli::cmd_test(test, std::cout);
        } else if (s->parsed()) {
            sim.trait = trait_from(sim_trait);
            spa::cli::cmd_simulate(sim, std::cout);
        } else if (p->parsed()) {
            power.trait = trait_from(power_trait);
            power.workers = workers;
            spa::cli::cmd_power(power, std::cout, std::cerr);
        }
    } catch (const spa::Error& e) {
        std::cerr << "error[" << spa::to_string(e.category()) << "]: " << e.what() << '\n';
        return exit_code(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
