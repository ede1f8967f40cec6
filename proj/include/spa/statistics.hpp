#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spa/genotype.hpp"

namespace spa {

struct StatisticValue {
    double value = 0.0;
    /// Number of terms with nonzero weight (occupied cells, polymorphic
    /// variants, carrier pairs, ...).
    std::size_t n_terms = 0;
};

/// Nonnegative per-variant weights, normalized to sum to one.
class WeightVector {
public:
    explicit WeightVector(std::vector<double> raw);

    /// w_i = n_i / sum(n), the weighting under which the weighted marginal
    /// score is the plain one rescaled by 1 / sum(n).
    static WeightVector allele_count_weights(const GenotypeMatrix& g);

    std::size_t size() const noexcept { return weights_.size(); }
    std::span<const double> weights() const noexcept { return weights_; }

private:
    std::vector<double> weights_;
};

/// Partition influence measure: sum over occupied cells of
/// size^2 * (cell mean - grand mean)^2.
StatisticValue influence_pr(std::span<const std::size_t> cell_labels, std::span<const double> y);

/// Case-control form: sum over cells of size^2 * (case fraction - N_A/N)^2.
StatisticValue influence_pr_case_control(std::span<const std::size_t> cell_labels, const Phenotype& y);

namespace detail {

/// Carriers of one variant, ascending by individual index.
struct CarrierList {
    std::vector<std::uint32_t> individuals;
    std::vector<std::uint8_t> dosages;
    std::size_t allele_count = 0;
};

std::vector<CarrierList> build_carrier_lists(const GenotypeMatrix& g);

}  // namespace detail

/// Marginal score over all variants.
///
/// Dichotomous: n_i^2 (phat_i - N_A/N)^2 with n_i the allele count and phat_i
/// the fraction of those alleles carried by cases.
/// Continuous: n_i^2 (Ybar_i - Ybar)^2 with Ybar_i the mean response of
/// carriers (each carrier counted once) and n_i still the allele count.
///
/// Construction indexes the carriers once; evaluation is O(total carriers)
/// plus one pass over y, so it can be called per permutation.
class MarginalScore {
public:
    MarginalScore(const GenotypeMatrix& g, TraitType trait);

    StatisticValue evaluate(std::span<const double> y) const;
    double operator()(std::span<const double> y) const { return evaluate(y).value; }

    /// sum_i w_i n_i (phat_i - N_A/N)^2, or the continuous analogue.
    StatisticValue evaluate_weighted(std::span<const double> y, const WeightVector& w) const;

private:
    std::size_t n_individuals_;
    TraitType trait_;
    std::vector<detail::CarrierList> carriers_;
};

/// Pairwise (gene-gene) score. For each pair i < j the carriers split into
/// three cells: i only, j only, both. Non-carriers of both are ignored.
/// Each occupied cell adds its squared deviation from the baseline and the
/// bracketed sum is weighted by the squared carrier-union size.
class PairwiseScore {
public:
    PairwiseScore(const GenotypeMatrix& g, TraitType trait);

    StatisticValue evaluate(std::span<const double> y) const;
    double operator()(std::span<const double> y) const { return evaluate(y).value; }

private:
    struct Pair {
        std::uint32_t first;
        std::uint32_t second;
        std::uint32_t only_first;
        std::uint32_t only_second;
        std::uint32_t both;
        // [both_begin, both_end) into both_members_
        std::uint32_t both_begin;
        std::uint32_t both_end;
    };

    std::size_t n_individuals_;
    TraitType trait_;
    std::vector<std::vector<std::uint32_t>> carriers_;
    std::vector<Pair> pairs_;
    std::vector<std::uint32_t> both_members_;
};

/// Marginal score computed separately within each level of a stratum factor
/// and summed; the baseline is the global case fraction. Dichotomous only.
class StratifiedScore {
public:
    StratifiedScore(const GenotypeMatrix& g, const StratumFactor& strata);

    StatisticValue evaluate(std::span<const double> y) const;
    double operator()(std::span<const double> y) const { return evaluate(y).value; }

private:
    struct Cell {
        std::vector<std::uint32_t> individuals;
        std::vector<std::uint8_t> dosages;
        std::size_t allele_count = 0;
    };

    std::size_t n_individuals_;
    // level-major: cells_[level * n_variants + variant]
    std::vector<Cell> cells_;
};

StatisticValue i1(const GenotypeMatrix& g, const Phenotype& y);
StatisticValue i1_weighted(const GenotypeMatrix& g, const Phenotype& y, const WeightVector& w);
StatisticValue i2(const GenotypeMatrix& g, const Phenotype& y);
StatisticValue i2star(const GenotypeMatrix& g, const Phenotype& y, const StratumFactor& e);

}  // namespace spa
