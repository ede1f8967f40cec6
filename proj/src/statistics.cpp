#include "spa/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spa/detail/summation.hpp"
#include "spa/error.hpp"

namespace spa {

namespace {

using detail::CompensatedSum;

double count_cases(std::span<const double> y) {
    double cases = 0.0;
    for (double v : y) {
        cases += v;
    }
    return cases;
}

double grand_mean(std::span<const double> y) {
    return detail::compensated_mean(y);
}

// n^2 (a/n - N_A/N)^2 written as ((a N - n N_A) / N)^2; the numerator is an
// exact integer in double precision for any realistic cohort.
double case_fraction_term(double case_alleles, double alleles, double n_cases, double n) {
    const double d = (case_alleles * n - alleles * n_cases) / n;
    return d * d;
}

// (c/m - N_A/N)^2 for a cell with m members, c of them cases; 0 for an empty cell.
double cell_deviation_sq(double cases, double members, double n_cases, double n) {
    if (members == 0.0) {
        return 0.0;
    }
    const double d = (cases * n - members * n_cases) / (members * n);
    return d * d;
}

double mean_deviation_sq(double centered_sum, double members) {
    if (members == 0.0) {
        return 0.0;
    }
    const double d = centered_sum / members;
    return d * d;
}

void check_length(std::size_t expected, std::span<const double> y) {
    require(y.size() == expected, ErrorCategory::InvalidArgument,
            "phenotype length does not match genotype matrix");
}

void require_polymorphic(const GenotypeMatrix& g) {
    for (std::size_t v = 0; v < g.n_variants(); ++v) {
        const auto col = g.variant(v);
        if (std::any_of(col.begin(), col.end(), [](std::uint8_t x) { return x > 0; })) {
            return;
        }
    }
    fail(ErrorCategory::InvalidData, "no variant has a nonzero allele count");
}

}  // namespace

WeightVector::WeightVector(std::vector<double> raw) : weights_(std::move(raw)) {
    require(!weights_.empty(), ErrorCategory::InvalidArgument, "weight vector is empty");
    CompensatedSum total;
    for (double w : weights_) {
        require(std::isfinite(w) && w >= 0.0, ErrorCategory::InvalidArgument,
                "weights must be finite and nonnegative");
        total.add(w);
    }
    const double s = total.value();
    require(s > 0.0, ErrorCategory::InvalidArgument, "all weights are zero");
    for (double& w : weights_) {
        w /= s;
    }
}

WeightVector WeightVector::allele_count_weights(const GenotypeMatrix& g) {
    const VariantSummary s = summarize_variants(g);
    return WeightVector(std::vector<double>(s.allele_count.begin(), s.allele_count.end()));
}

StatisticValue influence_pr(std::span<const std::size_t> cell_labels, std::span<const double> y) {
    require(!y.empty(), ErrorCategory::InvalidData, "influence measure needs at least one individual");
    require(cell_labels.size() == y.size(), ErrorCategory::InvalidArgument,
            "cell labels and responses differ in length");
    const double ybar = grand_mean(y);

    std::vector<std::size_t> order(y.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cell_labels[a] < cell_labels[b]; });

    CompensatedSum total;
    std::size_t cells = 0;
    for (std::size_t start = 0; start < order.size();) {
        std::size_t stop = start;
        CompensatedSum centered;
        while (stop < order.size() && cell_labels[order[stop]] == cell_labels[order[start]]) {
            centered.add(y[order[stop]] - ybar);
            ++stop;
        }
        const double size = static_cast<double>(stop - start);
        total.add(size * size * mean_deviation_sq(centered.value(), size));
        ++cells;
        start = stop;
    }
    return {total.value(), cells};
}

StatisticValue influence_pr_case_control(std::span<const std::size_t> cell_labels, const Phenotype& y) {
    require(y.is_dichotomous(), ErrorCategory::InvalidArgument,
            "case-control influence measure needs a dichotomous phenotype");
    require(cell_labels.size() == y.size(), ErrorCategory::InvalidArgument,
            "cell labels and phenotype differ in length");
    const auto values = y.values();
    const double n = static_cast<double>(values.size());
    const double n_cases = count_cases(values);

    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cell_labels[a] < cell_labels[b]; });

    CompensatedSum total;
    std::size_t cells = 0;
    for (std::size_t start = 0; start < order.size();) {
        std::size_t stop = start;
        double cases = 0.0;
        while (stop < order.size() && cell_labels[order[stop]] == cell_labels[order[start]]) {
            cases += values[order[stop]];
            ++stop;
        }
        const double size = static_cast<double>(stop - start);
        total.add(case_fraction_term(cases, size, n_cases, n));
        ++cells;
        start = stop;
    }
    return {total.value(), cells};
}

namespace detail {

std::vector<CarrierList> build_carrier_lists(const GenotypeMatrix& g) {
    std::vector<CarrierList> out(g.n_variants());
    for (std::size_t v = 0; v < g.n_variants(); ++v) {
        const auto col = g.variant(v);
        CarrierList& list = out[v];
        for (std::size_t j = 0; j < col.size(); ++j) {
            if (col[j] > 0) {
                list.individuals.push_back(static_cast<std::uint32_t>(j));
                list.dosages.push_back(col[j]);
                list.allele_count += col[j];
            }
        }
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Marginal score

MarginalScore::MarginalScore(const GenotypeMatrix& g, TraitType trait)
    : n_individuals_(g.n_individuals()), trait_(trait), carriers_(detail::build_carrier_lists(g)) {}

StatisticValue MarginalScore::evaluate(std::span<const double> y) const {
    check_length(n_individuals_, y);
    const double n = static_cast<double>(n_individuals_);
    CompensatedSum total;
    std::size_t terms = 0;

    if (trait_ == TraitType::Dichotomous) {
        const double n_cases = count_cases(y);
        for (const auto& c : carriers_) {
            if (c.allele_count == 0) {
                continue;
            }
            double case_alleles = 0.0;
            for (std::size_t k = 0; k < c.individuals.size(); ++k) {
                case_alleles += c.dosages[k] * y[c.individuals[k]];
            }
            total.add(case_fraction_term(case_alleles, static_cast<double>(c.allele_count), n_cases, n));
            ++terms;
        }
    } else {
        const double ybar = grand_mean(y);
        for (const auto& c : carriers_) {
            if (c.allele_count == 0) {
                continue;
            }
            CompensatedSum centered;
            for (std::uint32_t j : c.individuals) {
                centered.add(y[j] - ybar);
            }
            const double alleles = static_cast<double>(c.allele_count);
            total.add(alleles * alleles *
                      mean_deviation_sq(centered.value(), static_cast<double>(c.individuals.size())));
            ++terms;
        }
    }
    return {total.value(), terms};
}

StatisticValue MarginalScore::evaluate_weighted(std::span<const double> y, const WeightVector& w) const {
    check_length(n_individuals_, y);
    require(w.size() == carriers_.size(), ErrorCategory::InvalidArgument,
            "weight vector length does not match number of variants");
    const auto weights = w.weights();
    const double n = static_cast<double>(n_individuals_);
    CompensatedSum total;
    std::size_t terms = 0;

    const bool dichotomous = trait_ == TraitType::Dichotomous;
    const double n_cases = dichotomous ? count_cases(y) : 0.0;
    const double ybar = dichotomous ? 0.0 : grand_mean(y);

    for (std::size_t v = 0; v < carriers_.size(); ++v) {
        const auto& c = carriers_[v];
        if (c.allele_count == 0 || weights[v] == 0.0) {
            continue;
        }
        const double alleles = static_cast<double>(c.allele_count);
        double deviation_sq = 0.0;
        if (dichotomous) {
            double case_alleles = 0.0;
            for (std::size_t k = 0; k < c.individuals.size(); ++k) {
                case_alleles += c.dosages[k] * y[c.individuals[k]];
            }
            deviation_sq = cell_deviation_sq(case_alleles, alleles, n_cases, n);
        } else {
            CompensatedSum centered;
            for (std::uint32_t j : c.individuals) {
                centered.add(y[j] - ybar);
            }
            deviation_sq = mean_deviation_sq(centered.value(), static_cast<double>(c.individuals.size()));
        }
        total.add(weights[v] * alleles * deviation_sq);
        ++terms;
    }
    return {total.value(), terms};
}

// ---------------------------------------------------------------------------
// Pairwise score

PairwiseScore::PairwiseScore(const GenotypeMatrix& g, TraitType trait)
    : n_individuals_(g.n_individuals()), trait_(trait) {
    require(g.n_variants() >= 2, ErrorCategory::InvalidData, "pairwise score needs at least two variants");
    for (const auto& list : detail::build_carrier_lists(g)) {
        carriers_.push_back(list.individuals);
    }
    std::vector<std::uint32_t> both;
    const auto k = static_cast<std::uint32_t>(carriers_.size());
    for (std::uint32_t i = 0; i < k; ++i) {
        for (std::uint32_t j = i + 1; j < k; ++j) {
            const auto& a = carriers_[i];
            const auto& b = carriers_[j];
            if (a.empty() && b.empty()) {
                continue;
            }
            both.clear();
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
            Pair p{};
            p.first = i;
            p.second = j;
            p.both = static_cast<std::uint32_t>(both.size());
            p.only_first = static_cast<std::uint32_t>(a.size()) - p.both;
            p.only_second = static_cast<std::uint32_t>(b.size()) - p.both;
            p.both_begin = static_cast<std::uint32_t>(both_members_.size());
            both_members_.insert(both_members_.end(), both.begin(), both.end());
            p.both_end = static_cast<std::uint32_t>(both_members_.size());
            pairs_.push_back(p);
        }
    }
}

StatisticValue PairwiseScore::evaluate(std::span<const double> y) const {
    check_length(n_individuals_, y);
    const double n = static_cast<double>(n_individuals_);
    const bool dichotomous = trait_ == TraitType::Dichotomous;
    const double n_cases = dichotomous ? count_cases(y) : 0.0;
    const double ybar = dichotomous ? 0.0 : grand_mean(y);

    // Per-variant carrier sums: case counts, or sums of centered responses.
    std::vector<double> carrier_sum(carriers_.size());
    for (std::size_t v = 0; v < carriers_.size(); ++v) {
        CompensatedSum s;
        for (std::uint32_t j : carriers_[v]) {
            s.add(y[j] - ybar);
        }
        carrier_sum[v] = s.value();
    }

    CompensatedSum total;
    for (const Pair& p : pairs_) {
        CompensatedSum both_sum;
        for (std::uint32_t k = p.both_begin; k < p.both_end; ++k) {
            both_sum.add(y[both_members_[k]] - ybar);
        }
        const double s_both = both_sum.value();
        const double s_first = carrier_sum[p.first] - s_both;
        const double s_second = carrier_sum[p.second] - s_both;
        const double m_both = p.both;
        const double m_first = p.only_first;
        const double m_second = p.only_second;

        double bracket = 0.0;
        if (dichotomous) {
            bracket = cell_deviation_sq(s_both, m_both, n_cases, n) +
                      cell_deviation_sq(s_second, m_second, n_cases, n) +
                      cell_deviation_sq(s_first, m_first, n_cases, n);
        } else {
            bracket = mean_deviation_sq(s_both, m_both) + mean_deviation_sq(s_second, m_second) +
                      mean_deviation_sq(s_first, m_first);
        }
        const double union_size = m_both + m_first + m_second;
        total.add(union_size * union_size * bracket);
    }
    return {total.value(), pairs_.size()};
}

// ---------------------------------------------------------------------------
// Stratified score

StratifiedScore::StratifiedScore(const GenotypeMatrix& g, const StratumFactor& strata)
    : n_individuals_(g.n_individuals()) {
    require(strata.size() == g.n_individuals(), ErrorCategory::InvalidData,
            "stratum factor length does not match genotype matrix");
    const std::size_t k = g.n_variants();
    cells_.resize(static_cast<std::size_t>(strata.n_levels()) * k);
    for (std::size_t v = 0; v < k; ++v) {
        const auto col = g.variant(v);
        for (std::size_t j = 0; j < col.size(); ++j) {
            if (col[j] == 0) {
                continue;
            }
            Cell& cell = cells_[strata.level(j) * k + v];
            cell.individuals.push_back(static_cast<std::uint32_t>(j));
            cell.dosages.push_back(col[j]);
            cell.allele_count += col[j];
        }
    }
}

StatisticValue StratifiedScore::evaluate(std::span<const double> y) const {
    check_length(n_individuals_, y);
    const double n = static_cast<double>(n_individuals_);
    const double n_cases = count_cases(y);
    CompensatedSum total;
    std::size_t terms = 0;
    for (const Cell& c : cells_) {
        if (c.allele_count == 0) {
            continue;
        }
        double case_alleles = 0.0;
        for (std::size_t k = 0; k < c.individuals.size(); ++k) {
            case_alleles += c.dosages[k] * y[c.individuals[k]];
        }
        total.add(case_fraction_term(case_alleles, static_cast<double>(c.allele_count), n_cases, n));
        ++terms;
    }
    return {total.value(), terms};
}

// ---------------------------------------------------------------------------

StatisticValue i1(const GenotypeMatrix& g, const Phenotype& y) {
    validate_inputs(g, y);
    require_polymorphic(g);
    return MarginalScore(g, y.trait()).evaluate(y.values());
}

StatisticValue i1_weighted(const GenotypeMatrix& g, const Phenotype& y, const WeightVector& w) {
    validate_inputs(g, y);
    require_polymorphic(g);
    return MarginalScore(g, y.trait()).evaluate_weighted(y.values(), w);
}

StatisticValue i2(const GenotypeMatrix& g, const Phenotype& y) {
    validate_inputs(g, y);
    return PairwiseScore(g, y.trait()).evaluate(y.values());
}

StatisticValue i2star(const GenotypeMatrix& g, const Phenotype& y, const StratumFactor& e) {
    validate_inputs(g, y);
    require(y.is_dichotomous(), ErrorCategory::InvalidArgument,
            "the stratified score is defined for dichotomous traits only");
    require_polymorphic(g);
    return StratifiedScore(g, e).evaluate(y.values());
}

}  // namespace spa
