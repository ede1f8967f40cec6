#include "spa/genotype.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spa/error.hpp"

namespace spa {

std::string_view to_string(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::InvalidArgument: return "invalid-argument";
        case ErrorCategory::InvalidData: return "invalid-data";
        case ErrorCategory::Parse: return "parse";
        case ErrorCategory::Ascertainment: return "ascertainment";
    }
    return "unknown";
}

GenotypeMatrix::GenotypeMatrix(std::size_t n_individuals, std::size_t n_variants,
                               std::vector<std::uint8_t> entries,
                               std::vector<std::string> variant_ids)
    : n_individuals_(n_individuals),
      n_variants_(n_variants),
      entries_(std::move(entries)),
      variant_ids_(std::move(variant_ids)) {
    require(n_individuals_ > 0 && n_variants_ > 0, ErrorCategory::InvalidData,
            "genotype matrix dimensions must be positive");
    require(entries_.size() == n_individuals_ * n_variants_, ErrorCategory::InvalidData,
            "genotype entry count does not match dimensions");
    require(std::all_of(entries_.begin(), entries_.end(), [](std::uint8_t x) { return x <= 2; }),
            ErrorCategory::InvalidData, "genotype entries must be 0, 1 or 2");
    if (variant_ids_.empty()) {
        variant_ids_.reserve(n_variants_);
        for (std::size_t v = 0; v < n_variants_; ++v) {
            variant_ids_.push_back("V" + std::to_string(v + 1));
        }
    }
    require(variant_ids_.size() == n_variants_, ErrorCategory::InvalidData,
            "variant id count does not match number of variants");
}

GenotypeMatrix GenotypeMatrix::from_rows(const std::vector<std::vector<int>>& rows,
                                         std::vector<std::string> variant_ids) {
    require(!rows.empty() && !rows.front().empty(), ErrorCategory::InvalidData,
            "genotype matrix dimensions must be positive");
    const std::size_t n = rows.size();
    const std::size_t k = rows.front().size();
    std::vector<std::uint8_t> entries(n * k);
    for (std::size_t j = 0; j < n; ++j) {
        require(rows[j].size() == k, ErrorCategory::InvalidData, "genotype rows are not rectangular");
        for (std::size_t v = 0; v < k; ++v) {
            const int code = rows[j][v];
            require(code >= 0 && code <= 2, ErrorCategory::InvalidData,
                    "genotype entries must be 0, 1 or 2");
            entries[v * n + j] = static_cast<std::uint8_t>(code);
        }
    }
    return GenotypeMatrix(n, k, std::move(entries), std::move(variant_ids));
}

GenotypeMatrix GenotypeMatrix::select_variants(std::span<const std::size_t> columns) const {
    std::vector<std::uint8_t> entries;
    entries.reserve(columns.size() * n_individuals_);
    std::vector<std::string> ids;
    ids.reserve(columns.size());
    for (std::size_t v : columns) {
        require(v < n_variants_, ErrorCategory::InvalidArgument, "variant index out of range");
        const auto col = variant(v);
        entries.insert(entries.end(), col.begin(), col.end());
        ids.push_back(variant_ids_[v]);
    }
    return GenotypeMatrix(n_individuals_, columns.size(), std::move(entries), std::move(ids));
}

GenotypeMatrix GenotypeMatrix::select_individuals(std::span<const std::size_t> rows) const {
    require(std::all_of(rows.begin(), rows.end(), [this](std::size_t j) { return j < n_individuals_; }),
            ErrorCategory::InvalidArgument, "individual index out of range");
    std::vector<std::uint8_t> entries;
    entries.reserve(rows.size() * n_variants_);
    for (std::size_t v = 0; v < n_variants_; ++v) {
        const auto col = variant(v);
        for (std::size_t j : rows) {
            entries.push_back(col[j]);
        }
    }
    return GenotypeMatrix(rows.size(), n_variants_, std::move(entries), variant_ids_);
}

Phenotype Phenotype::dichotomous(const std::vector<int>& is_case) {
    require(!is_case.empty(), ErrorCategory::InvalidData, "phenotype has no individuals");
    std::vector<double> values;
    values.reserve(is_case.size());
    for (int label : is_case) {
        require(label == 0 || label == 1, ErrorCategory::InvalidData,
                "dichotomous phenotype values must be 0 or 1");
        values.push_back(static_cast<double>(label));
    }
    return Phenotype(TraitType::Dichotomous, std::move(values));
}

Phenotype Phenotype::continuous(std::vector<double> values) {
    require(!values.empty(), ErrorCategory::InvalidData, "phenotype has no individuals");
    require(std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); }),
            ErrorCategory::InvalidData, "continuous phenotype values must be finite");
    return Phenotype(TraitType::Continuous, std::move(values));
}

std::size_t Phenotype::n_cases() const {
    if (!is_dichotomous()) {
        return 0;
    }
    return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), 1.0));
}

Phenotype Phenotype::permuted(std::span<const std::size_t> order) const {
    require(order.size() == values_.size(), ErrorCategory::InvalidArgument,
            "permutation length does not match phenotype length");
    std::vector<double> out(values_.size());
    for (std::size_t j = 0; j < order.size(); ++j) {
        out[j] = values_[order[j]];
    }
    return Phenotype(trait_, std::move(out));
}

StratumFactor::StratumFactor(std::vector<std::uint32_t> levels, std::uint32_t n_levels)
    : levels_(std::move(levels)), n_levels_(n_levels) {
    require(!levels_.empty(), ErrorCategory::InvalidData, "stratum factor has no individuals");
    require(n_levels_ >= 1, ErrorCategory::InvalidData, "stratum factor needs at least one level");
    std::vector<bool> seen(n_levels_, false);
    for (std::uint32_t level : levels_) {
        if (level >= n_levels_) {
            fail(ErrorCategory::InvalidData, "stratum level " + std::to_string(level) +
                                                 " is not below J=" + std::to_string(n_levels_));
        }
        seen[level] = true;
    }
    for (std::uint32_t level = 0; level < n_levels_; ++level) {
        if (!seen[level]) {
            fail(ErrorCategory::InvalidData, "stratum level " + std::to_string(level) + " has no individuals");
        }
    }
}

StratumFactor StratumFactor::from_levels(std::vector<std::uint32_t> levels) {
    require(!levels.empty(), ErrorCategory::InvalidData, "stratum factor has no individuals");
    const std::uint32_t j = *std::max_element(levels.begin(), levels.end()) + 1;
    return StratumFactor(std::move(levels), j);
}

StratumFactor StratumFactor::single(std::size_t n_individuals) {
    return StratumFactor(std::vector<std::uint32_t>(n_individuals, 0), 1);
}

std::vector<std::vector<std::size_t>> StratumFactor::members() const {
    std::vector<std::vector<std::size_t>> out(n_levels_);
    for (std::size_t j = 0; j < levels_.size(); ++j) {
        out[levels_[j]].push_back(j);
    }
    return out;
}

VariantSummary summarize_variants(const GenotypeMatrix& g) {
    VariantSummary s;
    const std::size_t k = g.n_variants();
    s.allele_count.resize(k);
    s.carrier_count.resize(k);
    s.sample_maf.resize(k);
    const double total_alleles = 2.0 * static_cast<double>(g.n_individuals());
    for (std::size_t v = 0; v < k; ++v) {
        std::size_t alleles = 0;
        std::size_t carriers = 0;
        for (std::uint8_t x : g.variant(v)) {
            alleles += x;
            carriers += (x > 0);
        }
        s.allele_count[v] = alleles;
        s.carrier_count[v] = carriers;
        s.sample_maf[v] = static_cast<double>(alleles) / total_alleles;
    }
    return s;
}

std::vector<std::size_t> rare_variant_columns(const GenotypeMatrix& g, double maf_cutoff) {
    require(maf_cutoff > 0.0 && maf_cutoff <= 0.5, ErrorCategory::InvalidArgument,
            "MAF cutoff must lie in (0, 0.5]");
    const VariantSummary s = summarize_variants(g);
    std::vector<std::size_t> keep;
    for (std::size_t v = 0; v < g.n_variants(); ++v) {
        if (s.allele_count[v] > 0 && s.sample_maf[v] <= maf_cutoff) {
            keep.push_back(v);
        }
    }
    return keep;
}

GenotypeMatrix filter_rare(const GenotypeMatrix& g, double maf_cutoff) {
    const std::vector<std::size_t> keep = rare_variant_columns(g, maf_cutoff);
    require(!keep.empty(), ErrorCategory::InvalidData, "no rare variants to test");
    return g.select_variants(keep);
}

void validate_inputs(const GenotypeMatrix& g, const Phenotype& y) {
    require(y.size() == g.n_individuals(), ErrorCategory::InvalidData,
            "phenotype length " + std::to_string(y.size()) + " does not match " +
                std::to_string(g.n_individuals()) + " genotyped individuals");
    if (y.is_dichotomous()) {
        const std::size_t cases = y.n_cases();
        require(cases > 0 && cases < y.size(), ErrorCategory::InvalidData,
                "dichotomous phenotype needs at least one case and one control");
    }
}

}  // namespace spa
