#include "spa/power.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>

#include <json.hpp>

#include "spa/association.hpp"
#include "spa/detail/format.hpp"
#include "spa/detail/parallel.hpp"
#include "spa/error.hpp"
#include "spa/rng.hpp"

namespace spa {

namespace {

constexpr std::string_view kAbsentMethods[] = {"skat", "skatint", "rb"};

std::string fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::string_view trait_name(TraitType t) {
    return t == TraitType::Dichotomous ? "dichotomous" : "continuous";
}

}  // namespace

GridMethod parse_grid_method(std::string_view name) {
    for (std::string_view absent : kAbsentMethods) {
        if (name == absent) {
            return {std::string(name), std::nullopt};
        }
    }
    return {std::string(name), parse_method(name)};
}

void validate(const StudyGrid& grid) {
    require(!grid.scenarios.empty(), ErrorCategory::InvalidArgument, "power grid needs at least one scenario");
    require(!grid.methods.empty(), ErrorCategory::InvalidArgument, "power grid needs at least one method");
    require(!grid.sample_sizes.empty(), ErrorCategory::InvalidArgument, "power grid needs at least one sample size");
    require(!grid.alphas.empty(), ErrorCategory::InvalidArgument, "power grid needs at least one alpha");
    require(grid.n_replicates >= 1, ErrorCategory::InvalidArgument, "number of replicates must be at least 1");
    require(grid.n_permutations >= 1, ErrorCategory::InvalidArgument, "number of permutations must be at least 1");
    for (double a : grid.alphas) {
        require(a > 0.0 && a < 1.0, ErrorCategory::InvalidArgument, "alpha must lie in (0, 1)");
    }
    validate(grid.baselines);
    for (const ScenarioSpec& base : grid.scenarios) {
        for (std::size_t n : grid.sample_sizes) {
            ScenarioSpec spec = base;
            set_sample_size(spec, n);
            validate(spec);
        }
        for (const GridMethod& m : grid.methods) {
            if (m.method) {
                check_compatible(*m.method, base.trait, base.has_env, base.n_variants);
            }
        }
    }
}

std::string scenario_label(const ScenarioSpec& spec) {
    std::string label(to_string(spec.id));
    if (spec.trait == TraitType::Continuous) {
        label += "-continuous";
    }
    return label;
}

ReplicateSeeds replicate_seeds(std::uint64_t master_seed, const ScenarioSpec& spec, std::size_t n,
                               std::size_t replicate) {
    std::uint64_t s = derive_seed(master_seed, hash_label(scenario_label(spec)));
    s = derive_seed(s, n);
    s = derive_seed(s, replicate);
    return {derive_seed(s, 0), derive_seed(s, 1)};
}

std::size_t decision_threshold_check(std::span<const double> p_values, double alpha) {
    return static_cast<std::size_t>(
        std::count_if(p_values.begin(), p_values.end(), [&](double p) { return p <= alpha; }));
}

double binomial_se(double rate, std::size_t n_replicates) {
    require(n_replicates >= 1, ErrorCategory::InvalidArgument, "need at least one replicate");
    return std::sqrt(rate * (1.0 - rate) / static_cast<double>(n_replicates));
}

const PowerCell* PowerTable::find(std::string_view scenario, std::string_view method, std::size_t n,
                                  double alpha) const {
    for (const PowerCell& c : cells) {
        if (c.scenario == scenario && c.method == method && c.n == n && c.alpha == alpha) {
            return &c;
        }
    }
    return nullptr;
}

PowerTable run_grid(const StudyGrid& grid, const ProgressCallback& progress) {
    validate(grid);
    PowerTable table;
    table.grid = grid;

    std::vector<Method> runnable;
    for (const GridMethod& m : grid.methods) {
        if (m.method && std::find(runnable.begin(), runnable.end(), *m.method) == runnable.end()) {
            runnable.push_back(*m.method);
        }
    }
    const std::size_t r_total = grid.n_replicates;

    for (const ScenarioSpec& base : grid.scenarios) {
        const std::string label = scenario_label(base);
        for (std::size_t n : grid.sample_sizes) {
            ScenarioSpec spec = base;
            set_sample_size(spec, n);
            const std::string cell_label = label + " N=" + std::to_string(n);

            // p[r][m], degenerate[r][m]
            std::vector<std::vector<double>> p(r_total, std::vector<double>(runnable.size(), 1.0));
            std::vector<std::vector<char>> degenerate(r_total, std::vector<char>(runnable.size(), 0));
            std::mutex progress_mutex;
            std::size_t done = 0;

            detail::parallel_for(
                r_total, grid.workers,
                [&](unsigned, std::size_t r) {
                    const ReplicateSeeds seeds = replicate_seeds(grid.master_seed, spec, n, r);
                    const SimulatedCohort cohort = simulate(spec, seeds.cohort);
                    const AssociationOptions options{grid.n_permutations, seeds.permutation, grid.baselines, 1};
                    try {
                        const auto results = run_methods(runnable, cohort.genotype, cohort.phenotype, cohort.env,
                                                         options);
                        for (std::size_t m = 0; m < runnable.size(); ++m) {
                            p[r][m] = results[m].p_value;
                        }
                    } catch (const Error& e) {
                        if (e.category() != ErrorCategory::InvalidData) {
                            throw;
                        }
                        // A cohort with nothing to test: run methods one by one so
                        // only the affected ones record p = 1.
                        for (std::size_t m = 0; m < runnable.size(); ++m) {
                            try {
                                p[r][m] = run_method(runnable[m], cohort.genotype, cohort.phenotype, cohort.env,
                                                     options)
                                              .p_value;
                            } catch (const Error& inner) {
                                if (inner.category() != ErrorCategory::InvalidData) {
                                    throw;
                                }
                                degenerate[r][m] = 1;
                            }
                        }
                    }
                    if (progress) {
                        std::lock_guard lock(progress_mutex);
                        progress(cell_label, ++done, r_total);
                    }
                },
                1);

            for (const GridMethod& gm : grid.methods) {
                ReplicatePValues record{label, gm.name, n, {}};
                std::size_t n_degenerate = 0;
                if (gm.method) {
                    const std::size_t m = static_cast<std::size_t>(
                        std::find(runnable.begin(), runnable.end(), *gm.method) - runnable.begin());
                    for (std::size_t r = 0; r < r_total; ++r) {
                        record.p_values.push_back(p[r][m]);
                        n_degenerate += degenerate[r][m];
                    }
                }
                for (double alpha : grid.alphas) {
                    PowerCell cell;
                    cell.scenario = label;
                    cell.trait = spec.trait;
                    cell.method = gm.name;
                    cell.n = n;
                    cell.alpha = alpha;
                    cell.available = gm.available();
                    cell.n_replicates = r_total;
                    if (cell.available) {
                        cell.rejections = decision_threshold_check(record.p_values, alpha);
                        cell.rate = static_cast<double>(cell.rejections) / static_cast<double>(r_total);
                        cell.se = binomial_se(cell.rate, r_total);
                        cell.n_degenerate = n_degenerate;
                    }
                    table.cells.push_back(std::move(cell));
                }
                if (gm.method) {
                    table.p_values.push_back(std::move(record));
                }
            }
        }
    }
    return table;
}

void write_tsv(const PowerTable& table, std::ostream& out) {
    out << "scenario\ttrait\tmethod\tn\talpha\treplicates\trejections\trate\tse\tdegenerate\n";
    for (const PowerCell& c : table.cells) {
        out << c.scenario << '\t' << trait_name(c.trait) << '\t' << c.method << '\t' << c.n << '\t'
            << detail::format_roundtrip(c.alpha) << '\t' << c.n_replicates << '\t';
        if (c.available) {
            out << c.rejections << '\t' << fixed(c.rate, 4) << '\t' << fixed(c.se, 4) << '\t' << c.n_degenerate;
        } else {
            out << "NA\tNA\tNA\tNA";
        }
        out << '\n';
    }
}

void write_wide_tsv(const PowerTable& table, std::ostream& out) {
    const auto& methods = table.grid.methods;
    out << "scenario\ttrait\tn\talpha";
    for (const GridMethod& m : methods) {
        out << '\t' << m.name;
    }
    out << '\n';
    // cells are ordered scenario, n, method, alpha
    const std::size_t n_alpha = table.grid.alphas.size();
    const std::size_t block = methods.size() * n_alpha;
    for (std::size_t start = 0; start + block <= table.cells.size(); start += block) {
        for (std::size_t a = 0; a < n_alpha; ++a) {
            const PowerCell& first = table.cells[start + a];
            out << first.scenario << '\t' << trait_name(first.trait) << '\t' << first.n << '\t'
                << detail::format_roundtrip(first.alpha);
            for (std::size_t m = 0; m < methods.size(); ++m) {
                const PowerCell& c = table.cells[start + m * n_alpha + a];
                out << '\t' << (c.available ? fixed(c.rate, 3) : std::string("NA"));
            }
            out << '\n';
        }
    }
}

void write_json(const PowerTable& table, std::ostream& out) {
    using nlohmann::ordered_json;
    const StudyGrid& g = table.grid;
    ordered_json doc;
    doc["format_version"] = 1;

    ordered_json grid;
    ordered_json scenarios = ordered_json::array();
    for (const ScenarioSpec& s : g.scenarios) {
        scenarios.push_back({{"id", std::string(to_string(s.id))},
                             {"label", scenario_label(s)},
                             {"trait", std::string(trait_name(s.trait))},
                             {"n_variants", s.n_variants},
                             {"maf_model", s.maf_model.kind == MafModel::Kind::Fixed ? "fixed" : "uniform"},
                             {"maf_low", s.maf_model.low},
                             {"maf_high", s.maf_model.high}});
    }
    grid["scenarios"] = std::move(scenarios);
    ordered_json methods = ordered_json::array();
    for (const GridMethod& m : g.methods) {
        methods.push_back(m.name);
    }
    grid["methods"] = std::move(methods);
    grid["sample_sizes"] = g.sample_sizes;
    grid["replicates"] = g.n_replicates;
    grid["permutations"] = g.n_permutations;
    grid["alphas"] = g.alphas;
    grid["seed"] = g.master_seed;
    grid["cmc_cutoff"] = g.baselines.cmc_cutoff;
    doc["grid"] = std::move(grid);

    ordered_json cells = ordered_json::array();
    for (const PowerCell& c : table.cells) {
        ordered_json cell{{"scenario", c.scenario},
                          {"trait", std::string(trait_name(c.trait))},
                          {"method", c.method},
                          {"n", c.n},
                          {"alpha", c.alpha},
                          {"available", c.available},
                          {"replicates", c.n_replicates}};
        if (c.available) {
            cell["rejections"] = c.rejections;
            cell["rate"] = c.rate;
            cell["se"] = c.se;
            cell["degenerate"] = c.n_degenerate;
        } else {
            cell["rejections"] = nullptr;
            cell["rate"] = nullptr;
            cell["se"] = nullptr;
            cell["degenerate"] = nullptr;
        }
        cells.push_back(std::move(cell));
    }
    doc["cells"] = std::move(cells);

    ordered_json pvals = ordered_json::array();
    for (const ReplicatePValues& r : table.p_values) {
        pvals.push_back({{"scenario", r.scenario}, {"method", r.method}, {"n", r.n}, {"p_values", r.p_values}});
    }
    doc["p_values"] = std::move(pvals);
    out << doc.dump(2) << '\n';
}

}  // namespace spa
