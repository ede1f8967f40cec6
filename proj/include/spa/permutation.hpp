#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spa/genotype.hpp"
#include "spa/statistics.hpp"

namespace spa {

enum class Method { I1, I2, PStar, I2StarGlobal, I2StarLocal, CMC, WS, VT };

std::string_view to_string(Method m);
/// Accepts the CLI spellings: i1, i2, pstar, i2star-global, i2star-local,
/// cmc, ws, vt. Throws InvalidArgument otherwise.
Method parse_method(std::string_view name);

enum class PermutationMode { Global, Local };

/// How the null distribution is sampled: B draws, keyed by seed, either
/// over all individuals or independently within each stratum.
class PermutationPlan {
public:
    PermutationPlan(std::size_t n_permutations, std::uint64_t seed, PermutationMode mode,
                    std::optional<StratumFactor> strata = std::nullopt);

    static PermutationPlan global(std::size_t n_permutations, std::uint64_t seed) {
        return {n_permutations, seed, PermutationMode::Global};
    }
    static PermutationPlan local(std::size_t n_permutations, std::uint64_t seed, StratumFactor strata) {
        return {n_permutations, seed, PermutationMode::Local, std::move(strata)};
    }

    std::size_t n_permutations() const noexcept { return n_permutations_; }
    std::uint64_t seed() const noexcept { return seed_; }
    PermutationMode mode() const noexcept { return mode_; }
    const std::optional<StratumFactor>& strata() const noexcept { return strata_; }

private:
    std::size_t n_permutations_;
    std::uint64_t seed_;
    PermutationMode mode_;
    std::optional<StratumFactor> strata_;
};

struct TestResult {
    StatisticValue statistic;
    /// (1 + #{T_b >= T_obs}) / (B + 1)
    double p_value = 1.0;
    std::size_t n_permutations = 0;
    std::uint64_t seed = 0;
    Method method = Method::I1;
    /// Observed per-component p-values of a min-p test (p(I1), p(I2) for p*).
    std::vector<double> component_p_values;
};

/// Generates permutation number b of a plan. Global mode is a single
/// stratum holding everyone, so Global and a one-level Local plan draw the
/// same permutations.
class Permuter {
public:
    Permuter(const PermutationPlan& plan, std::size_t n_individuals);

    /// order[j] is the individual whose phenotype individual j receives.
    void draw(std::size_t b, std::span<std::size_t> order) const;

    std::size_t n_individuals() const noexcept { return n_individuals_; }

private:
    std::uint64_t seed_;
    std::size_t n_individuals_;
    std::vector<std::vector<std::size_t>> groups_;
};

/// Statistic callbacks must be reentrant: the engine calls them concurrently.
using Statistic = std::function<StatisticValue(std::span<const double>)>;

/// Statistic values on each of the plan's B permutations:
/// result[s][b] = stats[s](permutation b of y). A pure function of
/// (y, plan); `workers` only changes how fast it runs.
std::vector<std::vector<double>> permutation_distribution(std::span<const Statistic> stats, const Phenotype& y,
                                                          const PermutationPlan& plan, unsigned workers = 1);

/// Permuted statistics within this relative distance below a reference
/// value count as ties, so p-values do not depend on summation rounding.
inline constexpr double kTieTolerance = 1e-10;

/// (1 + #{permuted >= observed}) / (B + 1), with ties as above.
double add_one_pvalue(double observed, std::span<const double> permuted);

TestResult permute_pvalue(const Statistic& stat, const Phenotype& y, const PermutationPlan& plan, Method method,
                          unsigned workers = 1);

struct MinPResult {
    std::vector<double> observed_p;  // add-one p-value of each statistic
    double observed_min_p = 1.0;
    std::vector<double> null_min_p;  // p*_b for every permutation b
    double p_value = 1.0;
};

/// Min-p resampling on a shared set of permutations.
///
/// Null p-value of statistic s on draw b: #{b' : T_s,b' >= T_s,b} / B.
/// p*_b is the minimum over s; the final p-value is
/// (1 + #{b : p*_b <= p*_obs}) / (B + 1).
MinPResult min_p_combine(std::span<const double> observed, const std::vector<std::vector<double>>& permuted);

TestResult min_p_test(std::span<const Statistic> stats, const Phenotype& y, const PermutationPlan& plan,
                      Method method, unsigned workers = 1);

/// p* = min(p(I1), p(I2)), calibrated by the same permutations.
TestResult adaptive_pstar(const GenotypeMatrix& g, const Phenotype& y, const PermutationPlan& plan,
                          unsigned workers = 1);

}  // namespace spa
