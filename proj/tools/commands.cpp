#include "commands.hpp"

#include <fstream>
#include <ostream>

#include <json.hpp>

#include "spa/association.hpp"
#include "spa/error.hpp"

namespace spa::cli {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(ErrorCategory::InvalidArgument, path.string() + ": cannot open for writing");
    }
    return out;
}

MafModel parse_maf_model(const std::string& text) {
    const auto bad = [&] {
        fail(ErrorCategory::InvalidArgument,
             "MAF model '" + text + "' is not of the form fixed:Q or uniform:LOW:HIGH");
    };
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t colon = text.find(':', start);
        parts.push_back(text.substr(start, colon - start));
        if (colon == std::string::npos) {
            break;
        }
        start = colon + 1;
    }
    try {
        if (parts[0] == "fixed" && parts.size() == 2) {
            return MafModel::fixed(std::stod(parts[1]));
        }
        if (parts[0] == "uniform" && parts.size() == 3) {
            return MafModel::uniform(std::stod(parts[1]), std::stod(parts[2]));
        }
    } catch (const std::logic_error&) {
        bad();
    }
    bad();
    return {};
}

std::string_view trait_name(TraitType t) {
    return t == TraitType::Dichotomous ? "dichotomous" : "continuous";
}

}  // namespace

ScenarioSpec build_scenario(const std::string& id, TraitMode trait, std::optional<std::size_t> n_variants,
                            const std::optional<std::string>& maf_model) {
    std::string name = id;
    for (const auto& [suffix, mode] : {std::pair{"-continuous", TraitMode::Continuous},
                                       std::pair{"-dichotomous", TraitMode::Dichotomous}}) {
        const std::string s = suffix;
        if (name.size() > s.size() && name.compare(name.size() - s.size(), s.size(), s) == 0) {
            name.resize(name.size() - s.size());
            trait = mode;
        }
    }
    require(trait != TraitMode::Auto, ErrorCategory::InvalidArgument, "simulation needs an explicit trait");
    ScenarioSpec spec = make_scenario(parse_scenario(name),
                                      trait == TraitMode::Continuous ? TraitType::Continuous : TraitType::Dichotomous);
    if (n_variants) {
        spec.n_variants = *n_variants;
    }
    if (maf_model) {
        spec.maf_model = parse_maf_model(*maf_model);
    }
    validate(spec);
    return spec;
}

void cmd_test(const TestOptions& opt, std::ostream& out) {
    const Method method = parse_method(opt.method);
    require(opt.maf_cutoff > 0.0 && opt.maf_cutoff <= 0.5, ErrorCategory::InvalidArgument,
            "MAF cutoff must lie in (0, 0.5]");
    const GenotypeTable genotypes = read_genotype_file(opt.genotype_path);
    const PhenotypeTable phenotypes = read_phenotype_file(opt.phenotype_path, opt.trait);
    const Dataset data = align(genotypes, phenotypes);

    const GenotypeMatrix rare = filter_rare(data.genotype, opt.maf_cutoff);
    AssociationOptions options;
    options.n_permutations = opt.n_permutations;
    options.seed = opt.seed;
    options.baselines.cmc_cutoff = opt.maf_cutoff;
    options.workers = opt.workers;
    const TestResult r = run_method(method, rare, data.phenotype, data.strata, options);

    nlohmann::ordered_json doc;
    doc["format_version"] = 1;
    doc["method"] = std::string(to_string(r.method));
    doc["trait"] = std::string(trait_name(data.phenotype.trait()));
    doc["statistic"] = r.statistic.value;
    doc["n_terms"] = r.statistic.n_terms;
    doc["p_value"] = r.p_value;
    if (!r.component_p_values.empty()) {
        doc["component_p_values"] = {{"i1", r.component_p_values.at(0)}, {"i2", r.component_p_values.at(1)}};
    }
    doc["n_permutations"] = r.n_permutations;
    doc["seed"] = r.seed;
    doc["maf_cutoff"] = opt.maf_cutoff;
    doc["n_individuals"] = rare.n_individuals();
    doc["n_variants"] = rare.n_variants();
    doc["variants"] = rare.variant_ids();
    if (data.strata) {
        doc["n_strata"] = data.strata->n_levels();
    }
    out << doc.dump(2) << '\n';
}

void cmd_simulate(const SimulateOptions& opt, std::ostream& out) {
    ScenarioSpec spec = build_scenario(opt.scenario, opt.trait, opt.n_variants, opt.maf_model);
    if (opt.n) {
        set_sample_size(spec, *opt.n);
    }
    if (opt.n_cases || opt.n_controls) {
        require(spec.trait == TraitType::Dichotomous, ErrorCategory::InvalidArgument,
                "case and control counts apply to dichotomous traits only");
        spec.n_cases = opt.n_cases.value_or(spec.n_cases);
        spec.n_controls = opt.n_controls.value_or(spec.n_controls);
        spec.n_individuals = spec.n_cases + spec.n_controls;
    }
    validate(spec);
    const SimulatedCohort cohort = simulate(spec, opt.seed);

    std::vector<std::string> ids(cohort.phenotype.size());
    for (std::size_t j = 0; j < ids.size(); ++j) {
        ids[j] = "I" + std::to_string(j + 1);
    }
    const std::string geno_path = opt.out_prefix + ".geno.tsv";
    const std::string pheno_path = opt.out_prefix + ".pheno.tsv";
    {
        auto g = open_output(geno_path);
        write_genotypes(g, ids, cohort.genotype);
        auto p = open_output(pheno_path);
        write_phenotypes(p, ids, cohort.phenotype, cohort.env);
        if (!g || !p) {
            fail(ErrorCategory::InvalidArgument, "failed writing simulated cohort");
        }
    }

    nlohmann::ordered_json doc;
    doc["format_version"] = 1;
    doc["scenario"] = std::string(to_string(spec.id));
    doc["trait"] = std::string(trait_name(spec.trait));
    doc["seed"] = opt.seed;
    doc["n_individuals"] = cohort.phenotype.size();
    if (spec.trait == TraitType::Dichotomous) {
        doc["n_cases"] = cohort.phenotype.n_cases();
        doc["n_controls"] = cohort.phenotype.n_controls();
    }
    doc["n_variants"] = cohort.genotype.n_variants();
    doc["true_maf"] = cohort.true_maf;
    doc["genotype_file"] = geno_path;
    doc["phenotype_file"] = pheno_path;
    out << doc.dump(2) << '\n';
}

void cmd_power(const PowerOptions& opt, std::ostream& out, std::ostream& log) {
    require(!opt.scenarios.empty(), ErrorCategory::InvalidArgument, "--scenarios needs at least one scenario");
    require(!opt.methods.empty(), ErrorCategory::InvalidArgument, "--methods needs at least one method");

    StudyGrid grid;
    for (const auto& s : opt.scenarios) {
        grid.scenarios.push_back(build_scenario(s, opt.trait, opt.n_variants, opt.maf_model));
    }
    for (const auto& m : opt.methods) {
        grid.methods.push_back(parse_grid_method(m));
    }
    grid.sample_sizes = opt.sizes;
    grid.n_replicates = opt.n_replicates;
    grid.n_permutations = opt.n_permutations;
    grid.alphas = opt.alphas;
    grid.master_seed = opt.seed;
    grid.baselines.cmc_cutoff = opt.cmc_cutoff;
    grid.workers = opt.workers;

    ProgressCallback progress;
    if (!opt.quiet) {
        progress = [&log](const std::string& cell, std::size_t done, std::size_t total) {
            if (done == total || done % 10 == 0) {
                log << "[power] " << cell << ": " << done << "/" << total << " replicates\n" << std::flush;
            }
        };
    }
    const PowerTable table = run_grid(grid, progress);

    {
        auto tsv = open_output(opt.out_prefix + ".tsv");
        write_tsv(table, tsv);
        auto wide = open_output(opt.out_prefix + ".wide.tsv");
        write_wide_tsv(table, wide);
        auto json = open_output(opt.out_prefix + ".json");
        write_json(table, json);
        if (!tsv || !wide || !json) {
            fail(ErrorCategory::InvalidArgument, "failed writing power tables");
        }
    }
    write_wide_tsv(table, out);
}

}  // namespace spa::cli
