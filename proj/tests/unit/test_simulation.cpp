#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "spa/error.hpp"
#include "spa/simulation.hpp"

using namespace spa;

namespace {

std::vector<std::uint8_t> carrier_of(std::initializer_list<std::size_t> variants, std::size_t k = 20) {
    std::vector<std::uint8_t> x(k, 0);
    for (std::size_t v : variants) x[v - 1] = 1;
    return x;
}

const std::vector<double> kMaf01(20, 0.01);

}  // namespace

TEST(Scenarios, CatalogueShape) {
    for (const char* name : {"null1", "null2", "s1", "s2", "s3", "s4", "s5", "s6", "s7", "s8"}) {
        const auto spec = make_scenario(parse_scenario(name), TraitType::Dichotomous);
        EXPECT_EQ(spec.n_variants, 20u);
        EXPECT_EQ(to_string(spec.id), name);
        EXPECT_NO_THROW(validate(spec));
    }
    EXPECT_EQ(make_scenario(ScenarioId::S4, TraitType::Dichotomous).maf_model.kind, MafModel::Kind::Fixed);
    EXPECT_EQ(make_scenario(ScenarioId::S5, TraitType::Continuous).maf_model.kind, MafModel::Kind::Fixed);
    EXPECT_EQ(make_scenario(ScenarioId::S1, TraitType::Dichotomous).maf_model.kind, MafModel::Kind::Uniform);
    EXPECT_THROW(parse_scenario("s9"), Error);
}

TEST(Scenarios, DichotomousOnlyModels) {
    for (auto id : {ScenarioId::Null2, ScenarioId::S7, ScenarioId::S8}) {
        EXPECT_THROW(make_scenario(id, TraitType::Continuous), Error);
        auto spec = make_scenario(id, TraitType::Dichotomous);
        spec.trait = TraitType::Continuous;
        EXPECT_THROW(simulate_continuous(spec, 1), Error);
    }
}

TEST(DrawGenotypes, FixedMafAlleleCountMean) {
    auto spec = make_scenario(ScenarioId::S4, TraitType::Dichotomous);
    double total = 0;
    int columns = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto d = draw_genotypes(spec, 1000, seed);
        const auto s = summarize_variants(d.genotype);
        for (std::size_t c : s.allele_count) {
            total += static_cast<double>(c);
            ++columns;
        }
        EXPECT_EQ(d.true_maf, std::vector<double>(20, 0.01));
    }
    // binomial mean 2 N q = 20, sd sqrt(2 N q (1 - q)) per column
    const double se = std::sqrt(2 * 1000 * 0.01 * 0.99 / columns);
    EXPECT_NEAR(total / columns, 20.0, 3 * se);
}

TEST(DrawGenotypes, ZeroMafGivesEmptyColumn) {
    auto spec = make_scenario(ScenarioId::Null1, TraitType::Dichotomous);
    spec.maf_model = MafModel::fixed(0.0);
    const auto d = draw_genotypes(spec, 500, 3);
    for (std::size_t v = 0; v < d.genotype.n_variants(); ++v) {
        for (auto x : d.genotype.variant(v)) EXPECT_EQ(x, 0);
    }
}

TEST(DrawGenotypes, HardyWeinbergFrequencies) {
    auto spec = make_scenario(ScenarioId::Null1, TraitType::Dichotomous);
    spec.n_variants = 1;
    const double q = 0.3;
    spec.maf_model = MafModel::fixed(q);
    const std::size_t n = 100000;
    const auto d = draw_genotypes(spec, n, 4);
    double counts[3] = {0, 0, 0};
    for (auto x : d.genotype.variant(0)) counts[x] += 1;
    const double expected[3] = {(1 - q) * (1 - q), 2 * q * (1 - q), q * q};
    for (int c = 0; c < 3; ++c) {
        const double sd = std::sqrt(expected[c] * (1 - expected[c]) / n);
        EXPECT_NEAR(counts[c] / n, expected[c], 3 * sd) << "genotype " << c;
    }
}

TEST(DrawGenotypes, UniformMafRangeAndIndependentSites) {
    auto spec = make_scenario(ScenarioId::Null1, TraitType::Dichotomous);
    const auto d = draw_genotypes(spec, 10, 5);
    for (double m : d.true_maf) {
        EXPECT_GE(m, 1e-4);
        EXPECT_LE(m, 1e-2);
    }
    spec.n_variants = 2;
    spec.maf_model = MafModel::fixed(0.3);
    const std::size_t n = 100000;
    const auto g = draw_genotypes(spec, n, 6).genotype;
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double a = g.at(j, 0), b = g.at(j, 1);
        sa += a;
        sb += b;
        saa += a * a;
        sbb += b * b;
        sab += a * b;
    }
    const double cov = sab / n - (sa / n) * (sb / n);
    const double r = cov / std::sqrt((saa / n - sa * sa / n / n) * (sbb / n - sb * sb / n / n));
    EXPECT_NEAR(r, 0.0, 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST(Penetrance, Null1IsOnePercent) {
    const auto spec = make_scenario(ScenarioId::Null1, TraitType::Dichotomous);
    EXPECT_NEAR(case_probability(spec, carrier_of({}), 0, kMaf01), 0.01, 1e-15);
    EXPECT_NEAR(case_probability(spec, carrier_of({1, 2, 3}), 1, kMaf01), 0.01, 1e-15);
}

TEST(Penetrance, Scenario1TriplesTheOdds) {
    const auto spec = make_scenario(ScenarioId::S1, TraitType::Dichotomous);
    EXPECT_NEAR(case_probability(spec, carrier_of({1}), 0, kMaf01), 3.0 / 102.0, 1e-15);
    EXPECT_NEAR(case_probability(spec, carrier_of({6}), 0, kMaf01), 0.01, 1e-15);
}

TEST(Penetrance, Scenario4InteractionSign) {
    const auto spec = make_scenario(ScenarioId::S4, TraitType::Dichotomous);
    const double base = std::log(1.0 / 99.0);
    EXPECT_NEAR(linear_predictor(spec, carrier_of({1, 6}), 0, kMaf01), base - std::log(5.0), 1e-14);
    EXPECT_NEAR(linear_predictor(spec, carrier_of({2, 6}), 0, kMaf01), base + std::log(5.0), 1e-14);
    EXPECT_NEAR(linear_predictor(spec, carrier_of({1}), 0, kMaf01), base, 1e-14);
    // i = 1..5, j = 6..10 only
    EXPECT_NEAR(linear_predictor(spec, carrier_of({1, 11}), 0, kMaf01), base, 1e-14);
    EXPECT_EQ(spec.interactions.size(), 25u);
    EXPECT_EQ(make_scenario(ScenarioId::S5, TraitType::Dichotomous).interactions.size(), 54u);
}

TEST(Penetrance, MafScaledEffects) {
    const double beta01 = 2 * std::log(5.0) / 4;  // |log10 0.01| ln5 / 4
    const double base = std::log(1.0 / 99.0);
    const auto s2 = make_scenario(ScenarioId::S2, TraitType::Dichotomous);
    EXPECT_NEAR(linear_predictor(s2, carrier_of({1}), 0, kMaf01), base + beta01, 1e-14);
    std::vector<std::uint8_t> hom = carrier_of({});
    hom[0] = 2;
    EXPECT_NEAR(linear_predictor(s2, hom, 0, kMaf01), base + 2 * beta01, 1e-14);
    std::vector<double> rare(20, 1e-4);
    EXPECT_NEAR(linear_predictor(s2, carrier_of({1}), 0, rare), base + std::log(5.0), 1e-14);

    const auto s3 = make_scenario(ScenarioId::S3, TraitType::Dichotomous);
    EXPECT_NEAR(linear_predictor(s3, carrier_of({6}), 0, kMaf01), base - beta01, 1e-14);

    const auto s6 = make_scenario(ScenarioId::S6, TraitType::Dichotomous);
    EXPECT_NEAR(linear_predictor(s6, carrier_of({1}), 0, kMaf01), base + 0.1 * beta01, 1e-14);
    EXPECT_NEAR(linear_predictor(s6, carrier_of({3}), 0, kMaf01), base - 0.1 * beta01, 1e-14);
    EXPECT_EQ(s6.maf_model.kind, MafModel::Kind::Fixed);
}

TEST(Penetrance, GeneEnvironmentScenarios) {
    const double beta01 = 2 * std::log(5.0) / 4;
    const double base = std::log(1.0 / 99.0);
    const auto s7 = make_scenario(ScenarioId::S7, TraitType::Dichotomous);
    EXPECT_TRUE(s7.has_env);
    EXPECT_NEAR(linear_predictor(s7, carrier_of({1}), 0, kMaf01), base, 1e-14);
    EXPECT_NEAR(linear_predictor(s7, carrier_of({1}), 1, kMaf01), base + std::log(2.0) + beta01, 1e-14);
    const auto s8 = make_scenario(ScenarioId::S8, TraitType::Dichotomous);
    EXPECT_NEAR(linear_predictor(s8, carrier_of({7}), 1, kMaf01), base + std::log(2.0) - beta01, 1e-14);
    const auto null2 = make_scenario(ScenarioId::Null2, TraitType::Dichotomous);
    EXPECT_NEAR(linear_predictor(null2, carrier_of({1, 7}), 1, kMaf01), base + std::log(2.0), 1e-14);
}

TEST(Penetrance, ContinuousEffects) {
    const auto s1 = make_scenario(ScenarioId::S1, TraitType::Continuous);
    EXPECT_NEAR(linear_predictor(s1, carrier_of({1}), 0, kMaf01), 0.8, 1e-15);
    const auto s5 = make_scenario(ScenarioId::S5, TraitType::Continuous);
    EXPECT_NEAR(linear_predictor(s5, carrier_of({1, 7}), 0, kMaf01), -1.5, 1e-15);
    EXPECT_NEAR(linear_predictor(s5, carrier_of({2, 15}), 0, kMaf01), 1.5, 1e-15);
    EXPECT_NEAR(linear_predictor(s5, carrier_of({1, 2, 7}), 0, kMaf01), 0.0, 1e-15);
    const auto s2 = make_scenario(ScenarioId::S2, TraitType::Continuous);
    EXPECT_NEAR(linear_predictor(s2, carrier_of({1}), 0, kMaf01), 0.8, 1e-15);
}

TEST(SimulateDichotomous, ExactCountsAndDeterminism) {
    auto spec = make_scenario(ScenarioId::S1, TraitType::Dichotomous);
    spec.n_cases = 120;
    spec.n_controls = 80;
    const auto a = simulate_dichotomous(spec, 99);
    EXPECT_EQ(a.phenotype.n_cases(), 120u);
    EXPECT_EQ(a.phenotype.n_controls(), 80u);
    EXPECT_EQ(a.genotype.n_individuals(), 200u);
    EXPECT_FALSE(a.env.has_value());
    const auto b = simulate_dichotomous(spec, 99);
    EXPECT_EQ(a.genotype, b.genotype);
    EXPECT_EQ(a.phenotype, b.phenotype);
    EXPECT_EQ(a.true_maf, b.true_maf);
    EXPECT_NE(simulate_dichotomous(spec, 100).genotype, a.genotype);
}

TEST(SimulateDichotomous, Null1AttemptsMatchPrevalence) {
    const auto spec = make_scenario(ScenarioId::Null1, TraitType::Dichotomous);
    const auto c = simulate_dichotomous(spec, 2024);
    // 500 cases at P(case) = 1/100: negative binomial mean 50,000
    const double sd = std::sqrt(500 * 0.99) / 0.01;
    EXPECT_NEAR(static_cast<double>(c.attempts), 50000.0, 3 * sd);
    ASSERT_TRUE(c.env.has_value());
    EXPECT_EQ(c.env->n_levels(), 2u);
}

TEST(SimulateDichotomous, AttemptCapSignalsFailure) {
    auto spec = make_scenario(ScenarioId::Null1, TraitType::Dichotomous);
    spec.max_attempts = 1000;
    try {
        simulate_dichotomous(spec, 1);
        FAIL() << "expected ascertainment failure";
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::Ascertainment);
    }
}

TEST(SimulateContinuous, NoiseOnlyMeanIsZero) {
    auto spec = make_scenario(ScenarioId::Null1, TraitType::Continuous);
    spec.covariate_effect = 0.0;
    set_sample_size(spec, 100000);
    const auto c = simulate_continuous(spec, 8);
    double s = 0;
    for (double v : c.phenotype.values()) s += v;
    EXPECT_NEAR(s / 100000, 0.0, 3.0 / std::sqrt(100000.0));
    EXPECT_EQ(c.covariate_u1.size(), 100000u);
}

TEST(SimulateContinuous, CovariatesAndDeterminism) {
    auto spec = make_scenario(ScenarioId::S1, TraitType::Continuous);
    set_sample_size(spec, 3000);
    const auto a = simulate_continuous(spec, 17);
    const auto b = simulate_continuous(spec, 17);
    EXPECT_EQ(a.phenotype, b.phenotype);
    EXPECT_EQ(a.genotype, b.genotype);
    double u2 = 0;
    for (int v : a.covariate_u2) {
        EXPECT_TRUE(v == 0 || v == 1);
        u2 += v;
    }
    EXPECT_NEAR(u2 / 3000, 0.5, 3 * std::sqrt(0.25 / 3000));
    // residual after removing covariates and genetic effect is N(0, 1)
    double ss = 0;
    for (std::size_t j = 0; j < 3000; ++j) {
        std::vector<std::uint8_t> x(20);
        for (std::size_t v = 0; v < 20; ++v) x[v] = a.genotype.at(j, v);
        const double e = a.phenotype.values()[j] - 0.5 * (a.covariate_u1[j] + a.covariate_u2[j]) -
                         linear_predictor(spec, x, 0, a.true_maf);
        ss += e * e;
    }
    EXPECT_NEAR(ss / 3000, 1.0, 4 * std::sqrt(2.0 / 3000));
}

TEST(SampleSize, DichotomousSplitsEvenly) {
    auto spec = make_scenario(ScenarioId::S1, TraitType::Dichotomous);
    set_sample_size(spec, 600);
    EXPECT_EQ(spec.n_cases, 300u);
    EXPECT_EQ(spec.n_controls, 300u);
    EXPECT_THROW(set_sample_size(spec, 601), Error);
    spec.n_variants = 4;
    EXPECT_THROW(validate(spec), Error);
}
