#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace spa {

/// Minor-allele counts for N individuals at K variant sites.
///
/// Storage is variant-major: the N genotypes of one variant are contiguous,
/// which is the access pattern of every statistic in this library.
class GenotypeMatrix {
public:
    /// `entries` is variant-major, i.e. entries[v * n_individuals + j].
    GenotypeMatrix(std::size_t n_individuals, std::size_t n_variants,
                   std::vector<std::uint8_t> entries,
                   std::vector<std::string> variant_ids = {});

    /// Builds from individual-major rows, one row of K codes per individual.
    static GenotypeMatrix from_rows(const std::vector<std::vector<int>>& rows,
                                    std::vector<std::string> variant_ids = {});

    std::size_t n_individuals() const noexcept { return n_individuals_; }
    std::size_t n_variants() const noexcept { return n_variants_; }

    std::uint8_t at(std::size_t individual, std::size_t variant) const {
        return entries_[variant * n_individuals_ + individual];
    }

    std::span<const std::uint8_t> variant(std::size_t v) const {
        return {entries_.data() + v * n_individuals_, n_individuals_};
    }

    const std::vector<std::string>& variant_ids() const noexcept { return variant_ids_; }

    /// Submatrix with the given variant columns, in the given order.
    GenotypeMatrix select_variants(std::span<const std::size_t> columns) const;

    /// Submatrix with the given individuals (rows), in the given order.
    GenotypeMatrix select_individuals(std::span<const std::size_t> rows) const;

    bool operator==(const GenotypeMatrix&) const = default;

private:
    std::size_t n_individuals_;
    std::size_t n_variants_;
    std::vector<std::uint8_t> entries_;
    std::vector<std::string> variant_ids_;
};

enum class TraitType { Dichotomous, Continuous };

/// Case/control labels (stored as 0.0/1.0) or real-valued responses.
///
/// Both kinds keep their values as doubles so that permutation and
/// statistic evaluation share one code path.
class Phenotype {
public:
    static Phenotype dichotomous(const std::vector<int>& is_case);
    static Phenotype continuous(std::vector<double> values);

    TraitType trait() const noexcept { return trait_; }
    bool is_dichotomous() const noexcept { return trait_ == TraitType::Dichotomous; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }

    std::size_t n_cases() const;
    std::size_t n_controls() const { return size() - n_cases(); }

    /// Same trait type, values reordered as out[j] = values[order[j]].
    Phenotype permuted(std::span<const std::size_t> order) const;

    bool operator==(const Phenotype&) const = default;

private:
    Phenotype(TraitType trait, std::vector<double> values)
        : trait_(trait), values_(std::move(values)) {}

    TraitType trait_;
    std::vector<double> values_;
};

/// Level of a J-level categorical factor for every individual.
class StratumFactor {
public:
    /// Every level must be below `n_levels` and every level must be occupied.
    StratumFactor(std::vector<std::uint32_t> levels, std::uint32_t n_levels);

    /// Infers J as max(level) + 1.
    static StratumFactor from_levels(std::vector<std::uint32_t> levels);

    /// J = 1, everyone in stratum 0.
    static StratumFactor single(std::size_t n_individuals);

    std::size_t size() const noexcept { return levels_.size(); }
    std::uint32_t n_levels() const noexcept { return n_levels_; }
    std::uint32_t level(std::size_t individual) const { return levels_[individual]; }
    std::span<const std::uint32_t> levels() const noexcept { return levels_; }

    /// Individuals of each level, ascending.
    std::vector<std::vector<std::size_t>> members() const;

    bool operator==(const StratumFactor&) const = default;

private:
    std::vector<std::uint32_t> levels_;
    std::uint32_t n_levels_;
};

struct VariantSummary {
    std::vector<std::size_t> allele_count;
    std::vector<std::size_t> carrier_count;
    std::vector<double> sample_maf;
};

VariantSummary summarize_variants(const GenotypeMatrix& g);

/// Keeps variants with 0 < allele_count and sample MAF <= maf_cutoff.
/// Throws InvalidData when nothing survives.
GenotypeMatrix filter_rare(const GenotypeMatrix& g, double maf_cutoff);

/// Column indices that filter_rare would keep.
std::vector<std::size_t> rare_variant_columns(const GenotypeMatrix& g, double maf_cutoff);

/// Checks the pairing invariants: equal lengths and, for a dichotomous
/// trait, at least one case and one control.
void validate_inputs(const GenotypeMatrix& g, const Phenotype& y);

}  // namespace spa
