#include "spa/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "spa/detail/format.hpp"
#include "spa/error.hpp"

namespace spa {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

[[noreturn]] void parse_error(const std::string& source, std::size_t line, std::size_t column,
                              const std::string& message) {
    std::string where = source + ":" + std::to_string(line);
    if (column > 0) {
        where += ":" + std::to_string(column);
    }
    fail(ErrorCategory::Parse, where + ": " + message);
}

bool is_missing_code(std::string_view s) {
    return s == "NA" || s == "." || s == "-9" || s.empty();
}

// Reads lines, strips CR, skips blank lines; calls fn(line_number, fields).
template <typename Fn>
void for_each_row(std::istream& in, Fn&& fn) {
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        fn(line_number, split_tabs(line));
    }
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCategory::Parse, path.string() + ": cannot open file");
    }
    return in;
}

}  // namespace

GenotypeTable parse_genotypes(std::istream& in, const std::string& source) {
    std::vector<std::string> variant_ids;
    std::vector<std::string> ids;
    std::unordered_set<std::string> seen;
    std::vector<std::vector<std::uint8_t>> columns;
    bool have_header = false;

    for_each_row(in, [&](std::size_t line, const std::vector<std::string_view>& f) {
        if (!have_header) {
            if (f[0] != "ID") {
                parse_error(source, line, 1, "header must start with \"ID\"");
            }
            if (f.size() < 2) {
                parse_error(source, line, 0, "header lists no variants");
            }
            for (std::size_t c = 1; c < f.size(); ++c) {
                if (f[c].empty()) {
                    parse_error(source, line, c + 1, "empty variant id");
                }
                variant_ids.emplace_back(f[c]);
            }
            columns.resize(variant_ids.size());
            have_header = true;
            return;
        }
        if (f.size() != variant_ids.size() + 1) {
            parse_error(source, line, 0,
                        "expected " + std::to_string(variant_ids.size() + 1) + " fields, found " +
                            std::to_string(f.size()));
        }
        if (f[0].empty()) {
            parse_error(source, line, 1, "empty individual id");
        }
        if (!seen.emplace(f[0]).second) {
            parse_error(source, line, 1, "duplicate individual id '" + std::string(f[0]) + "'");
        }
        ids.emplace_back(f[0]);
        for (std::size_t c = 1; c < f.size(); ++c) {
            const std::string_view field = f[c];
            if (is_missing_code(field)) {
                parse_error(source, line, c + 1, "missing genotype code '" + std::string(field) + "' is not supported");
            }
            int code = -1;
            const auto res = std::from_chars(field.data(), field.data() + field.size(), code);
            if (res.ec != std::errc{} || res.ptr != field.data() + field.size() || code < 0 || code > 2) {
                parse_error(source, line, c + 1, "genotype code '" + std::string(field) + "' is not 0, 1 or 2");
            }
            columns[c - 1].push_back(static_cast<std::uint8_t>(code));
        }
    });

    if (!have_header) {
        fail(ErrorCategory::Parse, source + ": empty genotype file");
    }
    if (ids.empty()) {
        fail(ErrorCategory::Parse, source + ": genotype file has no individuals");
    }
    std::vector<std::uint8_t> entries;
    entries.reserve(ids.size() * columns.size());
    for (const auto& col : columns) {
        entries.insert(entries.end(), col.begin(), col.end());
    }
    const std::size_t k = variant_ids.size();
    GenotypeMatrix matrix(ids.size(), k, std::move(entries), std::move(variant_ids));
    return {std::move(ids), std::move(matrix)};
}

GenotypeTable read_genotype_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_genotypes(in, path.string());
}

void write_genotypes(std::ostream& out, const std::vector<std::string>& ids, const GenotypeMatrix& g) {
    require(ids.size() == g.n_individuals(), ErrorCategory::InvalidArgument, "id count does not match genotypes");
    out << "ID";
    for (const auto& v : g.variant_ids()) {
        out << '\t' << v;
    }
    out << '\n';
    for (std::size_t j = 0; j < g.n_individuals(); ++j) {
        out << ids[j];
        for (std::size_t v = 0; v < g.n_variants(); ++v) {
            out << '\t' << static_cast<int>(g.at(j, v));
        }
        out << '\n';
    }
}

TraitMode parse_trait_mode(std::string_view name) {
    if (name == "auto") {
        return TraitMode::Auto;
    }
    if (name == "dichotomous") {
        return TraitMode::Dichotomous;
    }
    if (name == "continuous") {
        return TraitMode::Continuous;
    }
    fail(ErrorCategory::InvalidArgument, "unknown trait '" + std::string(name) + "'");
}

PhenotypeTable parse_phenotypes(std::istream& in, const std::string& source, TraitMode mode) {
    std::vector<std::string> ids;
    std::unordered_set<std::string> seen;
    std::vector<double> values;
    std::vector<std::uint32_t> strata;
    std::optional<std::size_t> n_fields;
    bool first_row = true;

    for_each_row(in, [&](std::size_t line, const std::vector<std::string_view>& f) {
        const bool header = first_row && f[0] == "ID";
        first_row = false;
        if (f.size() != 2 && f.size() != 3) {
            parse_error(source, line, 0, "expected 2 or 3 fields, found " + std::to_string(f.size()));
        }
        if (n_fields && *n_fields != f.size()) {
            parse_error(source, line, 0,
                        "expected " + std::to_string(*n_fields) + " fields, found " + std::to_string(f.size()));
        }
        n_fields = f.size();
        if (header) {
            return;
        }
        if (f[0].empty()) {
            parse_error(source, line, 1, "empty individual id");
        }
        if (!seen.emplace(f[0]).second) {
            parse_error(source, line, 1, "duplicate individual id '" + std::string(f[0]) + "'");
        }
        ids.emplace_back(f[0]);

        const std::string_view field = f[1];
        double value = 0.0;
        const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
        if (field.empty() || res.ec != std::errc{} || res.ptr != field.data() + field.size() || !std::isfinite(value)) {
            parse_error(source, line, 2, "phenotype '" + std::string(field) + "' is not a finite number");
        }
        if (mode == TraitMode::Dichotomous && value != 0.0 && value != 1.0) {
            parse_error(source, line, 2, "dichotomous phenotype '" + std::string(field) + "' is not 0 or 1");
        }
        values.push_back(value);

        if (f.size() == 3) {
            const std::string_view s = f[2];
            std::uint32_t level = 0;
            const auto r = std::from_chars(s.data(), s.data() + s.size(), level);
            if (s.empty() || r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
                parse_error(source, line, 3, "stratum '" + std::string(s) + "' is not a nonnegative integer");
            }
            strata.push_back(level);
        }
    });

    if (ids.empty()) {
        fail(ErrorCategory::Parse, source + ": phenotype file has no individuals");
    }
    if (mode == TraitMode::Auto) {
        const bool binary = std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0 || v == 1.0; });
        mode = binary ? TraitMode::Dichotomous : TraitMode::Continuous;
    }

    PhenotypeTable table{std::move(ids), Phenotype::continuous({0.0}), std::nullopt};
    if (mode == TraitMode::Dichotomous) {
        std::vector<int> labels(values.size());
        for (std::size_t j = 0; j < values.size(); ++j) {
            labels[j] = values[j] == 1.0 ? 1 : 0;
        }
        table.phenotype = Phenotype::dichotomous(labels);
    } else {
        table.phenotype = Phenotype::continuous(std::move(values));
    }
    if (n_fields == 3u) {
        table.strata = std::move(strata);
    }
    return table;
}

PhenotypeTable read_phenotype_file(const std::filesystem::path& path, TraitMode mode) {
    auto in = open_input(path);
    return parse_phenotypes(in, path.string(), mode);
}

void write_phenotypes(std::ostream& out, const std::vector<std::string>& ids, const Phenotype& y,
                      const std::optional<StratumFactor>& strata) {
    require(ids.size() == y.size(), ErrorCategory::InvalidArgument, "id count does not match phenotype");
    require(!strata || strata->size() == y.size(), ErrorCategory::InvalidArgument,
            "stratum count does not match phenotype");
    out << "ID\tvalue" << (strata ? "\tstratum" : "") << '\n';
    const auto v = y.values();
    for (std::size_t j = 0; j < ids.size(); ++j) {
        out << ids[j] << '\t';
        if (y.is_dichotomous()) {
            out << (v[j] == 1.0 ? '1' : '0');
        } else {
            out << detail::format_roundtrip(v[j]);
        }
        if (strata) {
            out << '\t' << strata->level(j);
        }
        out << '\n';
    }
}

Dataset align(const GenotypeTable& genotypes, const PhenotypeTable& phenotypes) {
    std::unordered_map<std::string_view, std::size_t> row_of;
    for (std::size_t k = 0; k < phenotypes.individual_ids.size(); ++k) {
        row_of.emplace(phenotypes.individual_ids[k], k);
    }
    std::vector<std::size_t> order;
    order.reserve(genotypes.individual_ids.size());
    for (const auto& id : genotypes.individual_ids) {
        const auto it = row_of.find(id);
        require(it != row_of.end(), ErrorCategory::InvalidData,
                "individual '" + id + "' has genotypes but no phenotype");
        order.push_back(it->second);
    }
    if (phenotypes.individual_ids.size() != genotypes.individual_ids.size()) {
        std::unordered_set<std::string_view> genotyped(genotypes.individual_ids.begin(),
                                                       genotypes.individual_ids.end());
        for (const auto& id : phenotypes.individual_ids) {
            require(genotyped.count(id) > 0, ErrorCategory::InvalidData,
                    "individual '" + id + "' has a phenotype but no genotypes");
        }
    }

    Dataset data{genotypes.individual_ids, genotypes.matrix, phenotypes.phenotype.permuted(order), std::nullopt};
    if (phenotypes.strata) {
        std::vector<std::uint32_t> levels(order.size());
        std::uint32_t max_level = 0;
        for (std::size_t j = 0; j < order.size(); ++j) {
            levels[j] = (*phenotypes.strata)[order[j]];
            max_level = std::max(max_level, levels[j]);
        }
        data.strata = StratumFactor(std::move(levels), max_level + 1);
    }
    return data;
}

}  // namespace spa
