#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spa/baselines.hpp"
#include "spa/permutation.hpp"
#include "spa/simulation.hpp"

namespace spa {

/// A method column of a power table. Methods that exist in the literature
/// but not in this library (skat, skatint, rb) are accepted so tables keep
/// their shape; their cells are reported as missing.
struct GridMethod {
    std::string name;
    std::optional<Method> method;  // empty when not implemented

    bool available() const noexcept { return method.has_value(); }
};

GridMethod parse_grid_method(std::string_view name);

struct StudyGrid {
    /// Catalogue models; the sample size of each cell overrides the spec's.
    std::vector<ScenarioSpec> scenarios;
    std::vector<GridMethod> methods;
    std::vector<std::size_t> sample_sizes{1000};
    std::size_t n_replicates = 200;
    std::size_t n_permutations = 999;
    std::vector<double> alphas{0.05, 0.01};
    std::uint64_t master_seed = 1;
    /// Simulated variants are all rare by construction, so CMC collapses
    /// every site.
    BaselineConfig baselines{0.5, {}};
    unsigned workers = 1;
};

void validate(const StudyGrid& grid);

/// Label of a scenario in seeds and output: "s1", or "s1-continuous".
std::string scenario_label(const ScenarioSpec& spec);

/// Cohort and permutation seeds of one replicate. Every method in a cell
/// sees the same cohort and the same permutations.
struct ReplicateSeeds {
    std::uint64_t cohort;
    std::uint64_t permutation;
};
ReplicateSeeds replicate_seeds(std::uint64_t master_seed, const ScenarioSpec& spec, std::size_t n,
                               std::size_t replicate);

/// #{p <= alpha}
std::size_t decision_threshold_check(std::span<const double> p_values, double alpha);

/// sqrt(rate (1 - rate) / R)
double binomial_se(double rate, std::size_t n_replicates);

struct PowerCell {
    std::string scenario;
    TraitType trait = TraitType::Dichotomous;
    std::string method;
    std::size_t n = 0;
    double alpha = 0.05;
    bool available = true;
    std::size_t n_replicates = 0;
    std::size_t rejections = 0;
    double rate = 0.0;
    double se = 0.0;
    /// Replicates where the method had nothing to test (recorded as p = 1).
    std::size_t n_degenerate = 0;
};

/// Per-replicate p-values of one (scenario, N, method).
struct ReplicatePValues {
    std::string scenario;
    std::string method;
    std::size_t n = 0;
    std::vector<double> p_values;
};

struct PowerTable {
    StudyGrid grid;
    /// Ordered scenario, N, method, alpha.
    std::vector<PowerCell> cells;
    std::vector<ReplicatePValues> p_values;

    const PowerCell* find(std::string_view scenario, std::string_view method, std::size_t n, double alpha) const;
};

/// (cell label, replicates finished, replicates in cell)
using ProgressCallback = std::function<void(const std::string&, std::size_t, std::size_t)>;

/// Simulates R cohorts per (scenario, N), runs every available method with
/// B permutations, and tabulates rejection rates. Replicates run on
/// grid.workers threads; the table does not depend on that number.
PowerTable run_grid(const StudyGrid& grid, const ProgressCallback& progress = {});

/// One row per cell:
/// scenario trait method n alpha replicates rejections rate se degenerate
void write_tsv(const PowerTable& table, std::ostream& out);

/// Rows (scenario, trait, n, alpha), one rate column per method, in the
/// layout of the published power tables.
void write_wide_tsv(const PowerTable& table, std::ostream& out);

/// The grid plus all cells and per-replicate p-values, with format_version.
void write_json(const PowerTable& table, std::ostream& out);

}  // namespace spa
