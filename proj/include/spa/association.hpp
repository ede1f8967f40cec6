#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spa/baselines.hpp"
#include "spa/genotype.hpp"
#include "spa/permutation.hpp"

namespace spa {

struct AssociationOptions {
    std::size_t n_permutations = 999;
    std::uint64_t seed = 0;
    BaselineConfig baselines;
    unsigned workers = 1;
};

/// Throws InvalidArgument if `method` cannot run on this trait / strata
/// combination (I2* needs a stratum factor and a dichotomous trait; I2
/// and p* need two variants).
void check_compatible(Method method, TraitType trait, bool has_strata, std::size_t n_variants);

/// Permutation plan used by `method`: local within strata for
/// i2star-local, global for everything else.
PermutationPlan plan_for(Method method, std::size_t n_permutations, std::uint64_t seed,
                         const std::optional<StratumFactor>& strata);

/// Runs one method end to end on already filtered data.
TestResult run_method(Method method, const GenotypeMatrix& g, const Phenotype& y,
                      const std::optional<StratumFactor>& strata, const AssociationOptions& options);

/// Runs several methods on one data set with one seed. Results equal
/// calling run_method for each method in turn; methods that share a
/// permutation plan also share the permuted phenotypes, and a statistic
/// needed by several methods is evaluated once per permutation.
std::vector<TestResult> run_methods(std::span<const Method> methods, const GenotypeMatrix& g, const Phenotype& y,
                                    const std::optional<StratumFactor>& strata, const AssociationOptions& options);

}  // namespace spa
