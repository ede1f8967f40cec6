#include "spa/simulation.hpp"

#include <algorithm>
#include <cmath>

#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "spa/error.hpp"
#include "spa/rng.hpp"

namespace spa {

namespace {

constexpr std::pair<ScenarioId, std::string_view> kScenarioNames[] = {
    {ScenarioId::Null1, "null1"}, {ScenarioId::Null2, "null2"}, {ScenarioId::S1, "s1"},
    {ScenarioId::S2, "s2"},       {ScenarioId::S3, "s3"},       {ScenarioId::S4, "s4"},
    {ScenarioId::S5, "s5"},       {ScenarioId::S6, "s6"},       {ScenarioId::S7, "s7"},
    {ScenarioId::S8, "s8"},
};

void add_marginal(ScenarioSpec& spec, std::size_t first, std::size_t last, MarginalTerm::Size size,
                  double magnitude, double sign, bool env_gated = false) {
    for (std::size_t v = first; v <= last; ++v) {
        spec.marginal.push_back({v - 1, size, magnitude, sign, env_gated});
    }
}

// sum_{i=i_lo}^{i_hi} sum_{j=j_lo}^{j_hi} coef * I(X_i > 0, X_j > 0) * (-1)^i, 1-based.
void add_alternating_interactions(ScenarioSpec& spec, std::size_t i_lo, std::size_t i_hi, std::size_t j_lo,
                                  std::size_t j_hi, double coef) {
    for (std::size_t i = i_lo; i <= i_hi; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t j = j_lo; j <= j_hi; ++j) {
            spec.interactions.push_back({i - 1, j - 1, coef * sign});
        }
    }
}

std::vector<double> draw_mafs(const ScenarioSpec& spec, Engine& rng) {
    std::vector<double> maf(spec.n_variants);
    if (spec.maf_model.kind == MafModel::Kind::Fixed) {
        std::fill(maf.begin(), maf.end(), spec.maf_model.low);
        return maf;
    }
    boost::random::uniform_real_distribution<double> uniform(spec.maf_model.low, spec.maf_model.high);
    for (double& q : maf) {
        q = uniform(rng);
    }
    return maf;
}

void draw_person(std::span<const double> maf, Engine& rng, std::span<std::uint8_t> out) {
    for (std::size_t v = 0; v < maf.size(); ++v) {
        boost::random::bernoulli_distribution<double> allele(maf[v]);
        const int first = allele(rng) ? 1 : 0;
        const int second = allele(rng) ? 1 : 0;
        out[v] = static_cast<std::uint8_t>(first + second);
    }
}

// rows are individual-major, K codes per person
GenotypeMatrix to_matrix(const std::vector<std::uint8_t>& rows, std::size_t n, std::size_t k) {
    std::vector<std::uint8_t> entries(n * k);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t v = 0; v < k; ++v) {
            entries[v * n + j] = rows[j * k + v];
        }
    }
    return GenotypeMatrix(n, k, std::move(entries));
}

}  // namespace

std::string_view to_string(ScenarioId id) {
    for (const auto& [known, name] : kScenarioNames) {
        if (known == id) {
            return name;
        }
    }
    return "unknown";
}

ScenarioId parse_scenario(std::string_view name) {
    for (const auto& [id, known] : kScenarioNames) {
        if (known == name) {
            return id;
        }
    }
    fail(ErrorCategory::InvalidArgument, "unknown scenario '" + std::string(name) + "'");
}

ScenarioSpec make_scenario(ScenarioId id, TraitType trait) {
    const bool dichotomous = trait == TraitType::Dichotomous;
    if (!dichotomous && (id == ScenarioId::Null2 || id == ScenarioId::S7 || id == ScenarioId::S8)) {
        fail(ErrorCategory::InvalidArgument,
             "scenario " + std::string(to_string(id)) + " is defined for dichotomous traits only");
    }

    ScenarioSpec spec;
    spec.id = id;
    spec.trait = trait;
    spec.n_variants = 20;
    spec.maf_model = MafModel::uniform(1e-4, 1e-2);
    spec.baseline_logit = dichotomous ? std::log(1.0 / 99.0) : 0.0;
    spec.covariate_effect = dichotomous ? 0.0 : 0.5;
    spec.has_env = dichotomous && (id == ScenarioId::Null1 || id == ScenarioId::Null2 || id == ScenarioId::S7 ||
                                   id == ScenarioId::S8);

    const double constant_effect = dichotomous ? std::log(3.0) : 0.8;
    const double maf_scale = dichotomous ? std::log(5.0) / 4.0 : 0.4;
    const double pair_effect = dichotomous ? std::log(5.0) : 1.5;
    using Size = MarginalTerm::Size;

    switch (id) {
        case ScenarioId::Null1:
            break;
        case ScenarioId::Null2:
            spec.env_effect = std::log(2.0);
            break;
        case ScenarioId::S1:
            add_marginal(spec, 1, 5, Size::Constant, constant_effect, 1.0);
            break;
        case ScenarioId::S2:
            add_marginal(spec, 1, 5, Size::MafScaled, maf_scale, 1.0);
            break;
        case ScenarioId::S3:
            add_marginal(spec, 1, 5, Size::MafScaled, maf_scale, 1.0);
            add_marginal(spec, 6, 10, Size::MafScaled, maf_scale, -1.0);
            break;
        case ScenarioId::S4:
            spec.maf_model = MafModel::fixed(0.01);
            add_alternating_interactions(spec, 1, 5, 6, 10, pair_effect);
            break;
        case ScenarioId::S5:
            spec.maf_model = MafModel::fixed(0.01);
            add_alternating_interactions(spec, 1, 6, 7, 15, pair_effect);
            break;
        case ScenarioId::S6:
            spec.maf_model = MafModel::fixed(0.01);
            add_marginal(spec, 1, 2, Size::MafScaled, maf_scale, 1.0);
            add_marginal(spec, 3, 5, Size::MafScaled, maf_scale, -1.0);
            spec.marginal_scale = 0.1;
            add_alternating_interactions(spec, 1, 6, 7, 15, pair_effect);
            break;
        case ScenarioId::S7:
            spec.env_effect = std::log(2.0);
            add_marginal(spec, 1, 5, Size::MafScaled, maf_scale, 1.0, true);
            break;
        case ScenarioId::S8:
            spec.env_effect = std::log(2.0);
            add_marginal(spec, 1, 5, Size::MafScaled, maf_scale, 1.0, true);
            add_marginal(spec, 6, 10, Size::MafScaled, maf_scale, -1.0, true);
            break;
    }
    set_sample_size(spec, 1000);
    return spec;
}

void set_sample_size(ScenarioSpec& spec, std::size_t n) {
    require(n >= 2, ErrorCategory::InvalidArgument, "sample size must be at least 2");
    if (spec.trait == TraitType::Dichotomous) {
        require(n % 2 == 0, ErrorCategory::InvalidArgument,
                "dichotomous sample size must be even (equal cases and controls)");
        spec.n_cases = n / 2;
        spec.n_controls = n / 2;
    }
    spec.n_individuals = n;
}

void validate(const ScenarioSpec& spec) {
    require(spec.n_variants >= 1, ErrorCategory::InvalidArgument, "scenario needs at least one variant");
    const auto& m = spec.maf_model;
    if (m.kind == MafModel::Kind::Fixed) {
        require(m.low >= 0.0 && m.low <= 0.5, ErrorCategory::InvalidArgument, "fixed MAF must lie in [0, 0.5]");
    } else {
        require(m.low > 0.0 && m.low <= m.high && m.high <= 0.5, ErrorCategory::InvalidArgument,
                "uniform MAF bounds must satisfy 0 < low <= high <= 0.5");
    }
    for (const auto& t : spec.marginal) {
        require(t.variant < spec.n_variants, ErrorCategory::InvalidArgument,
                "scenario " + std::string(to_string(spec.id)) + " needs more variants than K=" +
                    std::to_string(spec.n_variants));
    }
    for (const auto& t : spec.interactions) {
        require(t.first < spec.n_variants && t.second < spec.n_variants, ErrorCategory::InvalidArgument,
                "scenario " + std::string(to_string(spec.id)) + " needs more variants than K=" +
                    std::to_string(spec.n_variants));
    }
    if (spec.trait == TraitType::Dichotomous) {
        require(spec.n_cases >= 1 && spec.n_controls >= 1, ErrorCategory::InvalidArgument,
                "dichotomous cohort needs at least one case and one control");
    } else {
        require(spec.n_individuals >= 2, ErrorCategory::InvalidArgument, "continuous cohort needs N >= 2");
    }
    require(spec.env_probability >= 0.0 && spec.env_probability <= 1.0, ErrorCategory::InvalidArgument,
            "environment probability must lie in [0, 1]");
}

GenotypeDraw draw_genotypes(const ScenarioSpec& spec, std::size_t n_individuals, std::uint64_t seed) {
    validate(spec);
    require(n_individuals >= 1, ErrorCategory::InvalidArgument, "need at least one individual");
    Engine rng(seed);
    std::vector<double> maf = draw_mafs(spec, rng);
    const std::size_t k = spec.n_variants;
    std::vector<std::uint8_t> rows(n_individuals * k);
    for (std::size_t j = 0; j < n_individuals; ++j) {
        draw_person(maf, rng, std::span(rows).subspan(j * k, k));
    }
    return {to_matrix(rows, n_individuals, k), std::move(maf)};
}

double linear_predictor(const ScenarioSpec& spec, std::span<const std::uint8_t> genotype, int env,
                        std::span<const double> true_maf) {
    double lp = spec.baseline_logit + spec.env_effect * env;
    for (const auto& t : spec.marginal) {
        const std::uint8_t x = genotype[t.variant];
        if (x == 0 || (t.env_gated && env == 0)) {
            continue;
        }
        double coef = t.magnitude;
        if (t.size == MarginalTerm::Size::MafScaled) {
            coef *= std::abs(std::log10(true_maf[t.variant]));
        }
        lp += spec.marginal_scale * t.sign * coef * x * (t.env_gated ? env : 1);
    }
    for (const auto& t : spec.interactions) {
        if (genotype[t.first] > 0 && genotype[t.second] > 0) {
            lp += t.coefficient;
        }
    }
    return lp;
}

double case_probability(const ScenarioSpec& spec, std::span<const std::uint8_t> genotype, int env,
                        std::span<const double> true_maf) {
    const double lp = linear_predictor(spec, genotype, env, true_maf);
    return 1.0 / (1.0 + std::exp(-lp));
}

SimulatedCohort simulate_dichotomous(const ScenarioSpec& spec, std::uint64_t seed) {
    require(spec.trait == TraitType::Dichotomous, ErrorCategory::InvalidArgument,
            "simulate_dichotomous needs a dichotomous scenario");
    validate(spec);
    Engine rng(seed);
    const std::vector<double> maf = draw_mafs(spec, rng);
    const std::size_t k = spec.n_variants;
    const std::size_t n = spec.n_cases + spec.n_controls;

    std::vector<std::uint8_t> rows;
    rows.reserve(n * k);
    std::vector<int> status;
    std::vector<std::uint32_t> env_levels;
    std::vector<std::uint8_t> person(k);
    boost::random::bernoulli_distribution<double> env_draw(spec.env_probability);

    std::size_t cases = 0;
    std::size_t controls = 0;
    std::size_t attempts = 0;
    while (cases < spec.n_cases || controls < spec.n_controls) {
        if (attempts++ >= spec.max_attempts) {
            fail(ErrorCategory::Ascertainment,
                 "banked " + std::to_string(cases) + " cases and " + std::to_string(controls) + " controls after " +
                     std::to_string(spec.max_attempts) + " draws; scenario " + std::string(to_string(spec.id)) +
                     " cannot meet its targets");
        }
        draw_person(maf, rng, person);
        const int env = spec.has_env ? (env_draw(rng) ? 1 : 0) : 0;
        boost::random::bernoulli_distribution<double> affected(case_probability(spec, person, env, maf));
        const bool is_case = affected(rng);
        if (is_case ? cases >= spec.n_cases : controls >= spec.n_controls) {
            continue;
        }
        (is_case ? cases : controls)++;
        rows.insert(rows.end(), person.begin(), person.end());
        status.push_back(is_case ? 1 : 0);
        env_levels.push_back(static_cast<std::uint32_t>(env));
    }

    SimulatedCohort cohort{to_matrix(rows, n, k), Phenotype::dichotomous(status), std::nullopt, {}, {}, maf, attempts};
    if (spec.has_env) {
        cohort.env = StratumFactor(std::move(env_levels), 2);
    }
    return cohort;
}

SimulatedCohort simulate_continuous(const ScenarioSpec& spec, std::uint64_t seed) {
    require(spec.trait == TraitType::Continuous, ErrorCategory::InvalidArgument,
            "simulate_continuous needs a continuous scenario");
    require(spec.id != ScenarioId::Null2 && spec.id != ScenarioId::S7 && spec.id != ScenarioId::S8,
            ErrorCategory::InvalidArgument,
            "scenario " + std::string(to_string(spec.id)) + " is defined for dichotomous traits only");
    validate(spec);
    Engine rng(seed);
    const std::vector<double> maf = draw_mafs(spec, rng);
    const std::size_t k = spec.n_variants;
    const std::size_t n = spec.n_individuals;

    std::vector<std::uint8_t> rows(n * k);
    std::vector<double> y(n);
    std::vector<double> u1(n);
    std::vector<int> u2(n);
    std::vector<std::uint32_t> env_levels(n, 0);
    boost::random::normal_distribution<double> normal(0.0, 1.0);
    boost::random::bernoulli_distribution<double> coin(0.5);
    boost::random::bernoulli_distribution<double> env_draw(spec.env_probability);

    for (std::size_t j = 0; j < n; ++j) {
        const auto person = std::span(rows).subspan(j * k, k);
        draw_person(maf, rng, person);
        const int env = spec.has_env ? (env_draw(rng) ? 1 : 0) : 0;
        env_levels[j] = static_cast<std::uint32_t>(env);
        u1[j] = normal(rng);
        u2[j] = coin(rng) ? 1 : 0;
        const double noise = normal(rng);
        y[j] = spec.covariate_effect * (u1[j] + u2[j]) + linear_predictor(spec, person, env, maf) + noise;
    }

    SimulatedCohort cohort{to_matrix(rows, n, k), Phenotype::continuous(std::move(y)), std::nullopt,
                           std::move(u1), std::move(u2), maf, n};
    if (spec.has_env) {
        cohort.env = StratumFactor::from_levels(std::move(env_levels));
    }
    return cohort;
}

SimulatedCohort simulate(const ScenarioSpec& spec, std::uint64_t seed) {
    return spec.trait == TraitType::Dichotomous ? simulate_dichotomous(spec, seed) : simulate_continuous(spec, seed);
}

}  // namespace spa
