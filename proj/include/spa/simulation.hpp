#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spa/genotype.hpp"

namespace spa {

enum class ScenarioId { Null1, Null2, S1, S2, S3, S4, S5, S6, S7, S8 };

std::string_view to_string(ScenarioId id);
/// "null1", "null2", "s1" ... "s8".
ScenarioId parse_scenario(std::string_view name);

struct MafModel {
    enum class Kind { Uniform, Fixed };
    Kind kind = Kind::Uniform;
    double low = 1e-4;   // Uniform lower bound, or the Fixed value
    double high = 1e-2;  // Uniform upper bound

    static MafModel uniform(double low, double high) { return {Kind::Uniform, low, high}; }
    static MafModel fixed(double maf) { return {Kind::Fixed, maf, maf}; }
};

/// Effect of one variant's allele count on the linear predictor.
struct MarginalTerm {
    enum class Size {
        Constant,   // coefficient = magnitude
        MafScaled,  // coefficient = magnitude * |log10 MAF|
    };
    std::size_t variant = 0;  // 0-based
    Size size = Size::Constant;
    double magnitude = 0.0;
    double sign = 1.0;
    /// Multiplies the term by the environmental factor (G x E).
    bool env_gated = false;
};

/// coefficient * I(X_first > 0, X_second > 0)
struct InteractionTerm {
    std::size_t first = 0;   // 0-based
    std::size_t second = 0;  // 0-based
    double coefficient = 0.0;
};

/// One phenotype model. Dichotomous models are logistic in
///   logit P(case) = baseline_logit + env_effect * E + genetic terms;
/// continuous models are linear in
///   y = covariate_effect * (U1 + U2) + genetic terms + eps.
struct ScenarioSpec {
    ScenarioId id = ScenarioId::Null1;
    TraitType trait = TraitType::Dichotomous;
    std::size_t n_variants = 20;
    MafModel maf_model;
    bool has_env = false;
    double env_probability = 0.5;

    double baseline_logit = 0.0;
    double env_effect = 0.0;
    double covariate_effect = 0.0;
    std::vector<MarginalTerm> marginal;
    std::vector<InteractionTerm> interactions;
    /// Scales every marginal term (scenario 6 damps them by 0.1).
    double marginal_scale = 1.0;

    /// Dichotomous targets.
    std::size_t n_cases = 500;
    std::size_t n_controls = 500;
    /// Continuous target.
    std::size_t n_individuals = 1000;

    /// Prospective draws allowed while banking cases and controls.
    std::size_t max_attempts = 10'000'000;

    std::size_t sample_size() const {
        return trait == TraitType::Dichotomous ? n_cases + n_controls : n_individuals;
    }
};

/// Catalogue model for a scenario and trait. Sets N = 1000 (balanced for
/// dichotomous traits) and K = 20. Throws InvalidArgument for
/// continuous versions of the dichotomous-only models.
ScenarioSpec make_scenario(ScenarioId id, TraitType trait);

/// Sets the sample size; dichotomous cohorts split N evenly (N must be even).
void set_sample_size(ScenarioSpec& spec, std::size_t n);

/// Checks index ranges, MAF bounds and targets.
void validate(const ScenarioSpec& spec);

struct SimulatedCohort {
    GenotypeMatrix genotype;
    Phenotype phenotype;
    std::optional<StratumFactor> env;
    /// Continuous cohorts only: U1 ~ N(0,1), U2 ~ Bernoulli(0.5).
    std::vector<double> covariate_u1;
    std::vector<int> covariate_u2;
    std::vector<double> true_maf;
    /// Prospective draws made (dichotomous) or individuals drawn (continuous).
    std::size_t attempts = 0;
};

struct GenotypeDraw {
    GenotypeMatrix genotype;
    std::vector<double> true_maf;
};

/// Per-variant MAF from the spec's model, then n_individuals genotypes as
/// the sum of two Bernoulli(MAF) allele draws.
GenotypeDraw draw_genotypes(const ScenarioSpec& spec, std::size_t n_individuals, std::uint64_t seed);

/// Genetic plus environmental part of the linear predictor for one person
/// (the dichotomous baseline logit is included; continuous covariates and
/// noise are not).
double linear_predictor(const ScenarioSpec& spec, std::span<const std::uint8_t> genotype, int env,
                        std::span<const double> true_maf);

/// logistic(linear_predictor)
double case_probability(const ScenarioSpec& spec, std::span<const std::uint8_t> genotype, int env,
                        std::span<const double> true_maf);

/// Draws people prospectively from the logistic model and banks them until
/// exactly n_cases cases and n_controls controls are held.
SimulatedCohort simulate_dichotomous(const ScenarioSpec& spec, std::uint64_t seed);

SimulatedCohort simulate_continuous(const ScenarioSpec& spec, std::uint64_t seed);

/// Dispatches on spec.trait.
SimulatedCohort simulate(const ScenarioSpec& spec, std::uint64_t seed);

}  // namespace spa
