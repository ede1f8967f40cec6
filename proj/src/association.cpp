#include "spa/association.hpp"

#include <algorithm>
#include <memory>

#include "spa/error.hpp"

namespace spa {

namespace {

// Statistics a method needs, in the order min-p combines them.
enum class Kind { I1, I2, I2Star, CMC, WS, VT };

std::vector<Kind> kinds_of(Method m) {
    switch (m) {
        case Method::I1: return {Kind::I1};
        case Method::I2: return {Kind::I2};
        case Method::PStar: return {Kind::I1, Kind::I2};
        case Method::I2StarGlobal:
        case Method::I2StarLocal: return {Kind::I2Star};
        case Method::CMC: return {Kind::CMC};
        case Method::WS: return {Kind::WS};
        case Method::VT: return {Kind::VT};
    }
    return {};
}

template <typename T>
Statistic wrap(std::shared_ptr<const T> stat) {
    return [stat = std::move(stat)](std::span<const double> v) { return stat->evaluate(v); };
}

Statistic make_statistic(Kind kind, const GenotypeMatrix& g, const Phenotype& y,
                         const std::optional<StratumFactor>& strata, const BaselineConfig& cfg) {
    switch (kind) {
        case Kind::I1: return wrap(std::make_shared<const MarginalScore>(g, y.trait()));
        case Kind::I2: return wrap(std::make_shared<const PairwiseScore>(g, y.trait()));
        case Kind::I2Star: return wrap(std::make_shared<const StratifiedScore>(g, *strata));
        case Kind::CMC: return wrap(std::make_shared<const CmcStatistic>(g, y.trait(), cfg));
        case Kind::WS: return wrap(std::make_shared<const WeightedSumStatistic>(g, y.trait()));
        case Kind::VT: return wrap(std::make_shared<const VariableThresholdStatistic>(g, cfg));
    }
    fail(ErrorCategory::InvalidArgument, "unknown statistic");
}

bool any_polymorphic(const GenotypeMatrix& g) {
    for (std::size_t v = 0; v < g.n_variants(); ++v) {
        const auto col = g.variant(v);
        if (std::any_of(col.begin(), col.end(), [](std::uint8_t x) { return x > 0; })) {
            return true;
        }
    }
    return false;
}

}  // namespace

void check_compatible(Method method, TraitType trait, bool has_strata, std::size_t n_variants) {
    const auto name = std::string(to_string(method));
    if (method == Method::I2StarGlobal || method == Method::I2StarLocal) {
        require(has_strata, ErrorCategory::InvalidArgument, name + " requires a stratum factor");
        require(trait == TraitType::Dichotomous, ErrorCategory::InvalidArgument,
                name + " is defined for dichotomous traits only");
    }
    if (method == Method::I2 || method == Method::PStar) {
        require(n_variants >= 2, ErrorCategory::InvalidData, name + " needs at least two variants");
    }
}

PermutationPlan plan_for(Method method, std::size_t n_permutations, std::uint64_t seed,
                         const std::optional<StratumFactor>& strata) {
    if (method == Method::I2StarLocal) {
        require(strata.has_value(), ErrorCategory::InvalidArgument, "i2star-local requires a stratum factor");
        return PermutationPlan::local(n_permutations, seed, *strata);
    }
    return PermutationPlan::global(n_permutations, seed);
}

TestResult run_method(Method method, const GenotypeMatrix& g, const Phenotype& y,
                      const std::optional<StratumFactor>& strata, const AssociationOptions& options) {
    const Method methods[] = {method};
    return run_methods(methods, g, y, strata, options).front();
}

std::vector<TestResult> run_methods(std::span<const Method> methods, const GenotypeMatrix& g, const Phenotype& y,
                                    const std::optional<StratumFactor>& strata, const AssociationOptions& options) {
    validate_inputs(g, y);
    validate(options.baselines);
    if (strata) {
        require(strata->size() == y.size(), ErrorCategory::InvalidData,
                "stratum factor length does not match phenotype");
    }
    for (Method m : methods) {
        check_compatible(m, y.trait(), strata.has_value(), g.n_variants());
        if (m != Method::CMC && m != Method::WS && m != Method::VT) {
            require(any_polymorphic(g), ErrorCategory::InvalidData, "no polymorphic variant to test");
        }
    }

    std::vector<TestResult> results(methods.size());
    // Two plan groups at most: global, and local within strata.
    for (const bool local : {false, true}) {
        std::vector<std::size_t> members;
        for (std::size_t m = 0; m < methods.size(); ++m) {
            if ((methods[m] == Method::I2StarLocal) == local) {
                members.push_back(m);
            }
        }
        if (members.empty()) {
            continue;
        }

        std::vector<Kind> kinds;
        for (std::size_t m : members) {
            for (Kind k : kinds_of(methods[m])) {
                if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) {
                    kinds.push_back(k);
                }
            }
        }
        std::vector<Statistic> stats;
        std::vector<double> observed;
        for (Kind k : kinds) {
            stats.push_back(make_statistic(k, g, y, strata, options.baselines));
        }
        std::vector<StatisticValue> observed_values;
        for (const auto& s : stats) {
            observed_values.push_back(s(y.values()));
            observed.push_back(observed_values.back().value);
        }

        const PermutationPlan plan = plan_for(methods[members.front()], options.n_permutations, options.seed, strata);
        const auto permuted = permutation_distribution(stats, y, plan, options.workers);
        auto index_of = [&](Kind k) {
            return static_cast<std::size_t>(std::find(kinds.begin(), kinds.end(), k) - kinds.begin());
        };

        for (std::size_t m : members) {
            TestResult& r = results[m];
            r.method = methods[m];
            r.n_permutations = plan.n_permutations();
            r.seed = plan.seed();
            const auto needed = kinds_of(methods[m]);
            if (needed.size() == 1) {
                const std::size_t s = index_of(needed.front());
                r.statistic = observed_values[s];
                r.p_value = add_one_pvalue(observed[s], permuted[s]);
                continue;
            }
            std::vector<double> obs;
            std::vector<std::vector<double>> dist;
            for (Kind k : needed) {
                obs.push_back(observed[index_of(k)]);
                dist.push_back(permuted[index_of(k)]);
            }
            const MinPResult combined = min_p_combine(obs, dist);
            r.statistic = {combined.observed_min_p, needed.size()};
            r.p_value = combined.p_value;
            r.component_p_values = combined.observed_p;
        }
    }
    return results;
}

}  // namespace spa
