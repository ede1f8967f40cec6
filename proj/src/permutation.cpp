#include "spa/permutation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/random/uniform_int_distribution.hpp>

#include "spa/detail/parallel.hpp"
#include "spa/error.hpp"
#include "spa/rng.hpp"

namespace spa {

namespace {

constexpr std::pair<Method, std::string_view> kMethodNames[] = {
    {Method::I1, "i1"},
    {Method::I2, "i2"},
    {Method::PStar, "pstar"},
    {Method::I2StarGlobal, "i2star-global"},
    {Method::I2StarLocal, "i2star-local"},
    {Method::CMC, "cmc"},
    {Method::WS, "ws"},
    {Method::VT, "vt"},
};

// Smallest value counted as "at least `value`": statistics equal up to
// rounding (a permutation that only reorders summands) are ties.
double tie_floor(double value) {
    return value - kTieTolerance * std::abs(value);
}

// #{x in sorted : x >= value, up to ties}
std::size_t count_at_least(const std::vector<double>& sorted, double value) {
    return static_cast<std::size_t>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), tie_floor(value)));
}

}  // namespace

std::string_view to_string(Method m) {
    for (const auto& [method, name] : kMethodNames) {
        if (method == m) {
            return name;
        }
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (const auto& [method, known] : kMethodNames) {
        if (known == name) {
            return method;
        }
    }
    fail(ErrorCategory::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

PermutationPlan::PermutationPlan(std::size_t n_permutations, std::uint64_t seed, PermutationMode mode,
                                 std::optional<StratumFactor> strata)
    : n_permutations_(n_permutations), seed_(seed), mode_(mode), strata_(std::move(strata)) {
    require(n_permutations_ >= 1, ErrorCategory::InvalidArgument, "number of permutations must be at least 1");
    require(mode_ == PermutationMode::Global || strata_.has_value(), ErrorCategory::InvalidArgument,
            "local permutation requires a stratum factor");
}

Permuter::Permuter(const PermutationPlan& plan, std::size_t n_individuals)
    : seed_(plan.seed()), n_individuals_(n_individuals) {
    if (plan.mode() == PermutationMode::Local) {
        const StratumFactor& strata = *plan.strata();
        require(strata.size() == n_individuals, ErrorCategory::InvalidData,
                "stratum factor does not cover all individuals");
        groups_ = strata.members();
    } else {
        groups_.emplace_back(n_individuals);
        std::iota(groups_.front().begin(), groups_.front().end(), std::size_t{0});
    }
}

void Permuter::draw(std::size_t b, std::span<std::size_t> order) const {
    Engine rng = substream(seed_, b);
    std::vector<std::size_t> shuffled;
    for (const auto& members : groups_) {
        shuffled.assign(members.begin(), members.end());
        for (std::size_t i = shuffled.size(); i > 1; --i) {
            boost::random::uniform_int_distribution<std::size_t> pick(0, i - 1);
            std::swap(shuffled[i - 1], shuffled[pick(rng)]);
        }
        for (std::size_t k = 0; k < members.size(); ++k) {
            order[members[k]] = shuffled[k];
        }
    }
}

std::vector<std::vector<double>> permutation_distribution(std::span<const Statistic> stats, const Phenotype& y,
                                                          const PermutationPlan& plan, unsigned workers) {
    const std::size_t n = y.size();
    const std::size_t b_total = plan.n_permutations();
    const Permuter permuter(plan, n);
    std::vector<std::vector<double>> out(stats.size(), std::vector<double>(b_total));

    struct Scratch {
        std::vector<std::size_t> order;
        std::vector<double> values;
    };
    std::vector<Scratch> scratch(std::max(1u, workers));
    for (auto& s : scratch) {
        s.order.resize(n);
        s.values.resize(n);
    }
    const auto source = y.values();

    detail::parallel_for(b_total, workers, [&](unsigned worker, std::size_t b) {
        Scratch& s = scratch[worker];
        permuter.draw(b, s.order);
        for (std::size_t j = 0; j < n; ++j) {
            s.values[j] = source[s.order[j]];
        }
        for (std::size_t k = 0; k < stats.size(); ++k) {
            out[k][b] = stats[k](s.values).value;
        }
    });
    return out;
}

double add_one_pvalue(double observed, std::span<const double> permuted) {
    const double floor = tie_floor(observed);
    const auto exceed = std::count_if(permuted.begin(), permuted.end(), [&](double t) { return t >= floor; });
    return (1.0 + static_cast<double>(exceed)) / (static_cast<double>(permuted.size()) + 1.0);
}

TestResult permute_pvalue(const Statistic& stat, const Phenotype& y, const PermutationPlan& plan, Method method,
                          unsigned workers) {
    TestResult result;
    result.statistic = stat(y.values());
    const Statistic stats[] = {stat};
    const auto permuted = permutation_distribution(stats, y, plan, workers);
    result.p_value = add_one_pvalue(result.statistic.value, permuted.front());
    result.n_permutations = plan.n_permutations();
    result.seed = plan.seed();
    result.method = method;
    return result;
}

MinPResult min_p_combine(std::span<const double> observed, const std::vector<std::vector<double>>& permuted) {
    require(!observed.empty() && observed.size() == permuted.size(), ErrorCategory::InvalidArgument,
            "min-p needs one permutation distribution per observed statistic");
    const std::size_t b_total = permuted.front().size();
    require(b_total >= 1, ErrorCategory::InvalidArgument, "min-p needs at least one permutation");

    MinPResult result;
    std::size_t min_observed_count = b_total;  // min over s of #{T_s,b >= T_s,obs}
    std::vector<std::size_t> min_null_count(b_total, b_total);

    for (std::size_t s = 0; s < observed.size(); ++s) {
        require(permuted[s].size() == b_total, ErrorCategory::InvalidArgument,
                "permutation distributions differ in length");
        std::vector<double> sorted = permuted[s];
        std::sort(sorted.begin(), sorted.end());
        const std::size_t c = count_at_least(sorted, observed[s]);
        result.observed_p.push_back((1.0 + static_cast<double>(c)) / (static_cast<double>(b_total) + 1.0));
        min_observed_count = std::min(min_observed_count, c);
        for (std::size_t b = 0; b < b_total; ++b) {
            min_null_count[b] = std::min(min_null_count[b], count_at_least(sorted, permuted[s][b]));
        }
    }
    result.observed_min_p = *std::min_element(result.observed_p.begin(), result.observed_p.end());

    // k/B <= (1+c)/(B+1) compared in integers.
    const std::uint64_t big_b = b_total;
    const std::uint64_t rhs = big_b * (1 + static_cast<std::uint64_t>(min_observed_count));
    std::size_t extreme = 0;
    result.null_min_p.resize(b_total);
    for (std::size_t b = 0; b < b_total; ++b) {
        result.null_min_p[b] = static_cast<double>(min_null_count[b]) / static_cast<double>(b_total);
        if (static_cast<std::uint64_t>(min_null_count[b]) * (big_b + 1) <= rhs) {
            ++extreme;
        }
    }
    result.p_value = (1.0 + static_cast<double>(extreme)) / (static_cast<double>(b_total) + 1.0);
    return result;
}

TestResult min_p_test(std::span<const Statistic> stats, const Phenotype& y, const PermutationPlan& plan,
                      Method method, unsigned workers) {
    std::vector<double> observed;
    observed.reserve(stats.size());
    for (const auto& stat : stats) {
        observed.push_back(stat(y.values()).value);
    }
    const auto permuted = permutation_distribution(stats, y, plan, workers);
    const MinPResult combined = min_p_combine(observed, permuted);

    TestResult result;
    result.statistic = {combined.observed_min_p, stats.size()};
    result.p_value = combined.p_value;
    result.n_permutations = plan.n_permutations();
    result.seed = plan.seed();
    result.method = method;
    result.component_p_values = combined.observed_p;
    return result;
}

TestResult adaptive_pstar(const GenotypeMatrix& g, const Phenotype& y, const PermutationPlan& plan,
                          unsigned workers) {
    validate_inputs(g, y);
    const MarginalScore marginal(g, y.trait());
    const PairwiseScore pairwise(g, y.trait());
    const Statistic stats[] = {
        [&](std::span<const double> v) { return marginal.evaluate(v); },
        [&](std::span<const double> v) { return pairwise.evaluate(v); },
    };
    return min_p_test(stats, y, plan, Method::PStar, workers);
}

}  // namespace spa
