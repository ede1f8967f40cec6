#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spa/genotype.hpp"

namespace spa {

/// Genotype file: tab-separated, header "ID" followed by variant ids, then
/// one row per individual with K codes in {0,1,2}. Missing codes (NA, .,
/// -9) are rejected.
struct GenotypeTable {
    std::vector<std::string> individual_ids;
    GenotypeMatrix matrix;
};

GenotypeTable parse_genotypes(std::istream& in, const std::string& source);
GenotypeTable read_genotype_file(const std::filesystem::path& path);
void write_genotypes(std::ostream& out, const std::vector<std::string>& ids, const GenotypeMatrix& g);

enum class TraitMode { Auto, Dichotomous, Continuous };

TraitMode parse_trait_mode(std::string_view name);

/// Phenotype file: tab-separated "id value [stratum]", with an optional
/// header row whose first field is "ID". In Auto mode the trait is
/// dichotomous when every value is 0 or 1.
struct PhenotypeTable {
    std::vector<std::string> individual_ids;
    Phenotype phenotype;
    std::optional<std::vector<std::uint32_t>> strata;
};

PhenotypeTable parse_phenotypes(std::istream& in, const std::string& source, TraitMode mode);
PhenotypeTable read_phenotype_file(const std::filesystem::path& path, TraitMode mode);
void write_phenotypes(std::ostream& out, const std::vector<std::string>& ids, const Phenotype& y,
                      const std::optional<StratumFactor>& strata = std::nullopt);

/// Genotype and phenotype rows matched by id, in genotype-file order.
struct Dataset {
    std::vector<std::string> individual_ids;
    GenotypeMatrix genotype;
    Phenotype phenotype;
    std::optional<StratumFactor> strata;
};

/// Every genotype id must appear exactly once in the phenotype table and
/// vice versa.
Dataset align(const GenotypeTable& genotypes, const PhenotypeTable& phenotypes);

}  // namespace spa
