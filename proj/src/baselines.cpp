#include "spa/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "spa/detail/summation.hpp"
#include "spa/error.hpp"

namespace spa {

namespace {

using detail::CompensatedSum;

void check_length(std::size_t expected, std::span<const double> y) {
    require(y.size() == expected, ErrorCategory::InvalidArgument,
            "phenotype length does not match genotype matrix");
}

}  // namespace

void validate(const BaselineConfig& cfg) {
    require(cfg.cmc_cutoff > 0.0 && cfg.cmc_cutoff <= 0.5, ErrorCategory::InvalidArgument,
            "CMC cutoff must lie in (0, 0.5]");
    for (double t : cfg.vt_thresholds) {
        require(t > 0.0 && t <= 0.5, ErrorCategory::InvalidArgument, "VT thresholds must lie in (0, 0.5]");
    }
}

std::vector<double> midranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i + 1;
        while (j < order.size() && values[order[j]] == values[order[i]]) {
            ++j;
        }
        // positions i..j-1 hold ranks i+1..j
        const double rank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) {
            ranks[order[k]] = rank;
        }
        i = j;
    }
    return ranks;
}

// ---------------------------------------------------------------------------
// CMC

CmcStatistic::CmcStatistic(const GenotypeMatrix& g, TraitType trait, const BaselineConfig& cfg)
    : n_individuals_(g.n_individuals()), trait_(trait) {
    validate(cfg);
    const VariantSummary s = summarize_variants(g);
    std::vector<bool> carrier(g.n_individuals(), false);
    for (std::size_t v = 0; v < g.n_variants(); ++v) {
        if (s.allele_count[v] == 0 || s.sample_maf[v] > cfg.cmc_cutoff) {
            continue;
        }
        const auto col = g.variant(v);
        for (std::size_t j = 0; j < col.size(); ++j) {
            if (col[j] > 0) {
                carrier[j] = true;
            }
        }
    }
    for (std::size_t j = 0; j < carrier.size(); ++j) {
        if (carrier[j]) {
            carriers_.push_back(static_cast<std::uint32_t>(j));
        }
    }
}

StatisticValue CmcStatistic::evaluate(std::span<const double> y) const {
    check_length(n_individuals_, y);
    const double n = static_cast<double>(n_individuals_);
    const double n_carriers = static_cast<double>(carriers_.size());

    if (trait_ == TraitType::Dichotomous) {
        double n_cases = 0.0;
        for (double v : y) {
            n_cases += v;
        }
        const double n_controls = n - n_cases;
        require(n_cases > 0.0 && n_controls > 0.0, ErrorCategory::InvalidData,
                "CMC needs at least one case and one control");
        double case_carriers = 0.0;
        for (std::uint32_t j : carriers_) {
            case_carriers += y[j];
        }
        const double control_carriers = n_carriers - case_carriers;
        const double d = case_carriers / n_cases - control_carriers / n_controls;
        return {d * d, 1};
    }

    if (carriers_.empty() || carriers_.size() == n_individuals_) {
        return {0.0, 0};
    }
    CompensatedSum total;
    CompensatedSum carrier_total;
    for (double v : y) {
        total.add(v);
    }
    for (std::uint32_t j : carriers_) {
        carrier_total.add(y[j]);
    }
    const double carrier_mean = carrier_total.value() / n_carriers;
    const double other_mean = (total.value() - carrier_total.value()) / (n - n_carriers);
    const double d = carrier_mean - other_mean;
    return {d * d, 1};
}

// ---------------------------------------------------------------------------
// Weighted sum

WeightedSumStatistic::WeightedSumStatistic(const GenotypeMatrix& g, TraitType trait)
    : n_individuals_(g.n_individuals()), trait_(trait), carriers_(detail::build_carrier_lists(g)) {
    for (const auto& c : carriers_) {
        any_carrier_.insert(any_carrier_.end(), c.individuals.begin(), c.individuals.end());
    }
    std::sort(any_carrier_.begin(), any_carrier_.end());
    any_carrier_.erase(std::unique(any_carrier_.begin(), any_carrier_.end()), any_carrier_.end());
}

std::vector<double> WeightedSumStatistic::weights(std::span<const double> y) const {
    check_length(n_individuals_, y);
    const double n = static_cast<double>(n_individuals_);
    const bool dichotomous = trait_ == TraitType::Dichotomous;

    double n_reference = n;
    if (dichotomous) {
        double n_cases = 0.0;
        for (double v : y) {
            n_cases += v;
        }
        n_reference = n - n_cases;
        require(n_reference > 0.0, ErrorCategory::InvalidData, "weighted-sum test needs at least one control");
    }

    std::vector<double> w(carriers_.size());
    for (std::size_t v = 0; v < carriers_.size(); ++v) {
        const auto& c = carriers_[v];
        double reference_alleles = 0.0;
        for (std::size_t k = 0; k < c.individuals.size(); ++k) {
            if (!dichotomous || y[c.individuals[k]] == 0.0) {
                reference_alleles += c.dosages[k];
            }
        }
        const double q = (reference_alleles + 1.0) / (2.0 * n_reference + 2.0);
        w[v] = std::sqrt(n * q * (1.0 - q));
    }
    return w;
}

std::vector<double> WeightedSumStatistic::score_ranks(std::span<const double> y) const {
    const auto w = weights(y);
    // Scores are X / w; non-carriers score 0 and tie at the bottom, so
    // only carriers need sorting.
    std::vector<double> scores(n_individuals_, 0.0);
    for (std::size_t v = 0; v < carriers_.size(); ++v) {
        const auto& c = carriers_[v];
        for (std::size_t k = 0; k < c.individuals.size(); ++k) {
            scores[c.individuals[k]] += c.dosages[k] / w[v];
        }
    }
    std::vector<double> carrier_scores;
    carrier_scores.reserve(any_carrier_.size());
    for (std::uint32_t j : any_carrier_) {
        carrier_scores.push_back(scores[j]);
    }
    const std::vector<double> carrier_ranks = midranks(carrier_scores);
    const double n_zero = static_cast<double>(n_individuals_ - any_carrier_.size());
    std::vector<double> ranks(n_individuals_, 0.5 * (n_zero + 1.0));
    for (std::size_t k = 0; k < any_carrier_.size(); ++k) {
        ranks[any_carrier_[k]] = n_zero + carrier_ranks[k];
    }
    return ranks;
}

StatisticValue WeightedSumStatistic::evaluate(std::span<const double> y) const {
    const std::vector<double> ranks = score_ranks(y);
    if (trait_ == TraitType::Dichotomous) {
        double rank_sum = 0.0;
        for (std::size_t j = 0; j < ranks.size(); ++j) {
            if (y[j] == 1.0) {
                rank_sum += ranks[j];
            }
        }
        return {rank_sum, carriers_.size()};
    }
    const double n = static_cast<double>(n_individuals_);
    const double ybar = detail::compensated_mean(y);
    const double rbar = 0.5 * (n + 1.0);
    CompensatedSum cov;
    for (std::size_t j = 0; j < ranks.size(); ++j) {
        cov.add((ranks[j] - rbar) * (y[j] - ybar));
    }
    return {cov.value() / n, carriers_.size()};
}

// ---------------------------------------------------------------------------
// Variable threshold

VariableThresholdStatistic::VariableThresholdStatistic(const GenotypeMatrix& g, const BaselineConfig& cfg)
    : n_individuals_(g.n_individuals()) {
    validate(cfg);
    const VariantSummary s = summarize_variants(g);

    std::vector<std::size_t> polymorphic;
    for (std::size_t v = 0; v < g.n_variants(); ++v) {
        if (s.allele_count[v] > 0) {
            polymorphic.push_back(v);
        }
    }
    std::stable_sort(polymorphic.begin(), polymorphic.end(),
                     [&](std::size_t a, std::size_t b) { return s.sample_maf[a] < s.sample_maf[b]; });

    if (cfg.vt_thresholds.empty()) {
        for (std::size_t v : polymorphic) {
            if (thresholds_.empty() || thresholds_.back() != s.sample_maf[v]) {
                thresholds_.push_back(s.sample_maf[v]);
            }
        }
    } else {
        thresholds_ = cfg.vt_thresholds;
        std::sort(thresholds_.begin(), thresholds_.end());
        thresholds_.erase(std::unique(thresholds_.begin(), thresholds_.end()), thresholds_.end());
    }
    require(!thresholds_.empty(), ErrorCategory::InvalidData, "variable-threshold test has no thresholds");

    const auto all_carriers = detail::build_carrier_lists(g);
    std::vector<double> burden(n_individuals_, 0.0);
    std::size_t next = 0;
    for (double t : thresholds_) {
        while (next < polymorphic.size() && s.sample_maf[polymorphic[next]] <= t) {
            const auto& c = all_carriers[polymorphic[next]];
            for (std::size_t k = 0; k < c.individuals.size(); ++k) {
                burden[c.individuals[k]] += c.dosages[k];
            }
            ordered_carriers_.push_back(c);
            ++next;
        }
        group_end_.push_back(ordered_carriers_.size());
        double squares = 0.0;
        for (double b : burden) {
            squares += b * b;
        }
        burden_norm_.push_back(std::sqrt(squares));
    }
}

StatisticValue VariableThresholdStatistic::evaluate(std::span<const double> y) const {
    check_length(n_individuals_, y);
    const double ybar = detail::compensated_mean(y);
    CompensatedSum cumulative;
    double best = -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    std::size_t begin = 0;
    for (std::size_t t = 0; t < thresholds_.size(); ++t) {
        for (std::size_t v = begin; v < group_end_[t]; ++v) {
            const auto& c = ordered_carriers_[v];
            for (std::size_t k = 0; k < c.individuals.size(); ++k) {
                cumulative.add(c.dosages[k] * (y[c.individuals[k]] - ybar));
            }
        }
        begin = group_end_[t];
        if (burden_norm_[t] == 0.0) {
            continue;
        }
        best = std::max(best, cumulative.value() / burden_norm_[t]);
        ++used;
    }
    if (used == 0) {
        return {0.0, 0};
    }
    return {best, used};
}

// ---------------------------------------------------------------------------

StatisticValue cmc_stat(const GenotypeMatrix& g, const Phenotype& y, const BaselineConfig& cfg) {
    validate_inputs(g, y);
    return CmcStatistic(g, y.trait(), cfg).evaluate(y.values());
}

StatisticValue ws_stat(const GenotypeMatrix& g, const Phenotype& y) {
    validate_inputs(g, y);
    return WeightedSumStatistic(g, y.trait()).evaluate(y.values());
}

StatisticValue vt_stat(const GenotypeMatrix& g, const Phenotype& y, const BaselineConfig& cfg) {
    validate_inputs(g, y);
    return VariableThresholdStatistic(g, cfg).evaluate(y.values());
}

}  // namespace spa
