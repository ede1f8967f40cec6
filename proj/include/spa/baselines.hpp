#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spa/genotype.hpp"
#include "spa/statistics.hpp"

namespace spa {

/// Comparator burden tests. Each is a statistic only; significance comes
/// from the permutation engine like the partition scores.
struct BaselineConfig {
    /// Variants with sample MAF at or below this are collapsed by CMC.
    double cmc_cutoff = 0.01;
    /// Candidate VT thresholds; empty means every distinct sample MAF.
    std::vector<double> vt_thresholds;
};

void validate(const BaselineConfig& cfg);

/// Collapsing test on a carrier indicator (at least one rare allele at any
/// collapsed site).
/// Dichotomous: (carrier fraction in cases - carrier fraction in controls)^2.
/// Continuous: (mean response of carriers - mean response of non-carriers)^2.
class CmcStatistic {
public:
    CmcStatistic(const GenotypeMatrix& g, TraitType trait, const BaselineConfig& cfg = {});

    StatisticValue evaluate(std::span<const double> y) const;
    std::span<const std::uint32_t> carriers() const noexcept { return carriers_; }

private:
    std::size_t n_individuals_;
    TraitType trait_;
    std::vector<std::uint32_t> carriers_;
};

/// Weighted-sum test. Weights come from control allele frequencies with a
/// +1 pseudo-count, q_i = (m_i + 1) / (2 n_controls + 2), w_i = sqrt(N q_i (1 - q_i));
/// each individual's score is sum_i X_i / w_i.
/// Dichotomous: sum of midranks of the scores over cases.
/// Continuous: covariance between score midranks and the response (weights
/// then use the whole sample as the reference group).
class WeightedSumStatistic {
public:
    WeightedSumStatistic(const GenotypeMatrix& g, TraitType trait);

    StatisticValue evaluate(std::span<const double> y) const;

    /// Per-variant w_i for a given labeling.
    std::vector<double> weights(std::span<const double> y) const;

    /// Midranks (1-based) of the genetic scores under a given labeling.
    std::vector<double> score_ranks(std::span<const double> y) const;

private:
    std::size_t n_individuals_;
    TraitType trait_;
    std::vector<detail::CarrierList> carriers_;
    std::vector<std::uint32_t> any_carrier_;
};

/// Variable-threshold test: for each threshold t the burden
/// C_j(t) = sum over variants with MAF <= t of X_ij gives
/// z(t) = sum_j C_j(t) (y_j - ybar) / sqrt(sum_j C_j(t)^2);
/// the statistic is the maximum of z(t) over thresholds.
class VariableThresholdStatistic {
public:
    VariableThresholdStatistic(const GenotypeMatrix& g, const BaselineConfig& cfg = {});

    StatisticValue evaluate(std::span<const double> y) const;
    std::span<const double> thresholds() const noexcept { return thresholds_; }

private:
    std::size_t n_individuals_;
    std::vector<double> thresholds_;
    // Variants ordered by sample MAF; group g adds variants
    // [group_end_[g-1], group_end_[g]) of that order.
    std::vector<detail::CarrierList> ordered_carriers_;
    std::vector<std::size_t> group_end_;
    std::vector<double> burden_norm_;
};

StatisticValue cmc_stat(const GenotypeMatrix& g, const Phenotype& y, const BaselineConfig& cfg = {});
StatisticValue ws_stat(const GenotypeMatrix& g, const Phenotype& y);
StatisticValue vt_stat(const GenotypeMatrix& g, const Phenotype& y, const BaselineConfig& cfg = {});

/// Midranks (average rank for ties), 1-based.
std::vector<double> midranks(std::span<const double> values);

}  // namespace spa
