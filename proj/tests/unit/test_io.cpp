#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "spa/error.hpp"
#include "spa/io.hpp"
#include "spa/simulation.hpp"

#include <json.hpp>

using namespace spa;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("spa_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string parse_error_message(const std::string& text) {
    std::istringstream in(text);
    try {
        parse_genotypes(in, "g.tsv");
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::Parse);
        return e.what();
    }
    return "";
}

}  // namespace

TEST(GenotypeFile, ParsesHeaderAndRows) {
    std::istringstream in("ID\tv1\tv2\nA\t0\t1\r\nB\t2\t0\n\n");
    const auto t = parse_genotypes(in, "g.tsv");
    EXPECT_EQ(t.individual_ids, (std::vector<std::string>{"A", "B"}));
    EXPECT_EQ(t.matrix.variant_ids(), (std::vector<std::string>{"v1", "v2"}));
    EXPECT_EQ(t.matrix.at(1, 0), 2);
    EXPECT_EQ(t.matrix.at(0, 1), 1);
}

TEST(GenotypeFile, ErrorsNameLineAndColumn) {
    EXPECT_EQ(parse_error_message("ID\tv1\tv2\nA\t0\t1\nB\t3\t0\n"),
              "g.tsv:3:2: genotype code '3' is not 0, 1 or 2");
    EXPECT_EQ(parse_error_message("ID\tv1\nA\tNA\n"), "g.tsv:2:2: missing genotype code 'NA' is not supported");
    EXPECT_NE(parse_error_message("ID\tv1\nA\t.\n").find("missing genotype code"), std::string::npos);
    EXPECT_NE(parse_error_message("ID\tv1\nA\t-9\n").find("missing genotype code"), std::string::npos);
    EXPECT_NE(parse_error_message("ID\tv1\nA\t1\t0\n").find("g.tsv:2: expected 2 fields"), std::string::npos);
    EXPECT_NE(parse_error_message("ID\tv1\nA\t1\nA\t0\n").find("duplicate individual id"), std::string::npos);
    EXPECT_NE(parse_error_message("name\tv1\nA\t1\n").find("header must start"), std::string::npos);
    EXPECT_NE(parse_error_message("ID\tv1\nA\t1x\n").find("g.tsv:2:2"), std::string::npos);
    EXPECT_NE(parse_error_message("").find("empty genotype file"), std::string::npos);
}

TEST(PhenotypeFile, TraitDetectionAndStrata) {
    {
        std::istringstream in("ID\tvalue\nA\t1\nB\t0\n");
        const auto t = parse_phenotypes(in, "p.tsv", TraitMode::Auto);
        EXPECT_TRUE(t.phenotype.is_dichotomous());
        EXPECT_FALSE(t.strata.has_value());
    }
    {
        std::istringstream in("A\t1.5\t0\nB\t-2\t1\n");
        const auto t = parse_phenotypes(in, "p.tsv", TraitMode::Auto);
        EXPECT_FALSE(t.phenotype.is_dichotomous());
        ASSERT_TRUE(t.strata.has_value());
        EXPECT_EQ(*t.strata, (std::vector<std::uint32_t>{0, 1}));
    }
    {
        std::istringstream in("A\t1\nB\t0\n");
        EXPECT_FALSE(parse_phenotypes(in, "p.tsv", TraitMode::Continuous).phenotype.is_dichotomous());
    }
}

TEST(PhenotypeFile, Errors) {
    const auto message = [](const std::string& text, TraitMode mode) -> std::string {
        std::istringstream in(text);
        try {
            parse_phenotypes(in, "p.tsv", mode);
        } catch (const Error& e) {
            return e.what();
        }
        return "";
    };
    EXPECT_EQ(message("A\t2\n", TraitMode::Dichotomous), "p.tsv:1:2: dichotomous phenotype '2' is not 0 or 1");
    EXPECT_NE(message("A\tNA\n", TraitMode::Auto).find("p.tsv:1:2"), std::string::npos);
    EXPECT_NE(message("A\tinf\n", TraitMode::Auto).find("not a finite number"), std::string::npos);
    EXPECT_NE(message("A\t1\t-1\n", TraitMode::Auto).find("p.tsv:1:3"), std::string::npos);
    EXPECT_NE(message("A\t1\t0\nB\t0\n", TraitMode::Auto).find("p.tsv:2"), std::string::npos);
    EXPECT_NE(message("A\t1\nA\t0\n", TraitMode::Auto).find("duplicate"), std::string::npos);
}

TEST(Align, ReordersAndRejectsMismatches) {
    std::istringstream g("ID\tv\nA\t1\nB\t0\nC\t2\n");
    const auto gt = parse_genotypes(g, "g");
    std::istringstream p("C\t0.5\t1\nA\t1.5\t0\nB\t2.5\t0\n");
    const auto pt = parse_phenotypes(p, "p", TraitMode::Auto);
    const auto d = align(gt, pt);
    EXPECT_EQ(std::vector<double>(d.phenotype.values().begin(), d.phenotype.values().end()),
              (std::vector<double>{1.5, 2.5, 0.5}));
    EXPECT_EQ(d.strata->level(2), 1u);

    std::istringstream missing("A\t1\nB\t0\n");
    EXPECT_THROW(align(gt, parse_phenotypes(missing, "p", TraitMode::Auto)), Error);
    std::istringstream extra("A\t1\nB\t0\nC\t1\nD\t0\n");
    EXPECT_THROW(align(gt, parse_phenotypes(extra, "p", TraitMode::Auto)), Error);
    std::istringstream gap("A\t1\t0\nB\t0\t2\nC\t1\t0\n");
    EXPECT_THROW(align(gt, parse_phenotypes(gap, "p", TraitMode::Auto)), Error);
}

TEST(RoundTrip, SimulatedCohortParsesBackIdentically) {
    for (auto [id, trait] : {std::pair{ScenarioId::S7, TraitType::Dichotomous},
                             std::pair{ScenarioId::S5, TraitType::Continuous}}) {
        auto spec = make_scenario(id, trait);
        set_sample_size(spec, 200);
        const auto c = simulate(spec, 12);
        std::vector<std::string> ids;
        for (std::size_t j = 0; j < 200; ++j) ids.push_back("I" + std::to_string(j + 1));
        std::stringstream g, p;
        write_genotypes(g, ids, c.genotype);
        write_phenotypes(p, ids, c.phenotype, c.env);
        const auto d = align(parse_genotypes(g, "g"),
                             parse_phenotypes(p, "p", trait == TraitType::Continuous ? TraitMode::Continuous
                                                                                   : TraitMode::Dichotomous));
        EXPECT_EQ(d.genotype, c.genotype);
        EXPECT_EQ(d.phenotype, c.phenotype);
        EXPECT_EQ(d.strata, c.env);
    }
}

TEST(CmdTest, ToyExamplePrintsQuarter) {
    TempDir dir;
    write_file(dir / "g.tsv", "ID\tv1\nA\t1\nB\t0\nC\t0\nD\t0\n");
    write_file(dir / "p.tsv", "A\t1\nB\t1\nC\t0\nD\t0\n");
    cli::TestOptions opt;
    opt.genotype_path = dir / "g.tsv";
    opt.phenotype_path = dir / "p.tsv";
    opt.maf_cutoff = 0.5;
    opt.n_permutations = 99;
    std::ostringstream out;
    cli::cmd_test(opt, out);
    const auto doc = nlohmann::json::parse(out.str());
    EXPECT_EQ(doc["statistic"].get<double>(), 0.25);
    EXPECT_EQ(doc["method"], "i1");
    EXPECT_EQ(doc["n_variants"], 1);
    EXPECT_EQ(doc["seed"], 1);
    EXPECT_EQ(doc["format_version"], 1);
    EXPECT_GT(doc["p_value"].get<double>(), 0.0);
}

TEST(CmdTest, SingleStratumI2StarGlobalEqualsI1) {
    TempDir dir;
    auto spec = make_scenario(ScenarioId::S1, TraitType::Dichotomous);
    set_sample_size(spec, 300);
    const auto c = simulate(spec, 3);
    std::vector<std::string> ids;
    for (std::size_t j = 0; j < 300; ++j) ids.push_back("I" + std::to_string(j + 1));
    {
        std::ofstream g(dir / "g.tsv");
        write_genotypes(g, ids, c.genotype);
        std::ofstream p(dir / "p.tsv");
        write_phenotypes(p, ids, c.phenotype, StratumFactor::single(300));
    }
    cli::TestOptions opt;
    opt.genotype_path = dir / "g.tsv";
    opt.phenotype_path = dir / "p.tsv";
    opt.maf_cutoff = 0.05;
    opt.n_permutations = 499;
    opt.seed = 77;
    std::ostringstream a, b;
    cli::cmd_test(opt, a);
    opt.method = "i2star-global";
    cli::cmd_test(opt, b);
    const auto ja = nlohmann::json::parse(a.str()), jb = nlohmann::json::parse(b.str());
    EXPECT_EQ(ja["p_value"], jb["p_value"]);
    EXPECT_EQ(ja["statistic"], jb["statistic"]);
}

TEST(CmdTest, Errors) {
    TempDir dir;
    write_file(dir / "g.tsv", "ID\tv1\tv2\nA\t1\t0\nB\t0\t1\nC\t0\t0\nD\t0\t0\n");
    write_file(dir / "p.tsv", "A\t1\nB\t1\nC\t0\nD\t0\n");
    write_file(dir / "bad.tsv", "ID\tv1\tv2\nA\t1\t0\nB\t0\t3\n");
    cli::TestOptions opt;
    opt.genotype_path = dir / "g.tsv";
    opt.phenotype_path = dir / "p.tsv";
    opt.maf_cutoff = 0.5;
    std::ostringstream out;
    opt.method = "i2star-global";
    EXPECT_THROW(cli::cmd_test(opt, out), Error);
    opt.method = "nope";
    EXPECT_THROW(cli::cmd_test(opt, out), Error);
    opt.method = "i1";
    opt.genotype_path = dir / "bad.tsv";
    try {
        cli::cmd_test(opt, out);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("bad.tsv:3:3"), std::string::npos);
    }
    opt.genotype_path = dir / "g.tsv";
    opt.maf_cutoff = 0.01;  // both variants have MAF 1/8
    EXPECT_THROW(cli::cmd_test(opt, out), Error);
}

TEST(CmdSimulate, CountsAndByteIdenticalReruns) {
    TempDir dir;
    cli::SimulateOptions opt;
    opt.scenario = "s1";
    opt.n_cases = 300;
    opt.n_controls = 300;
    opt.seed = 42;
    opt.out_prefix = (dir / "a").string();
    std::ostringstream out;
    cli::cmd_simulate(opt, out);
    opt.out_prefix = (dir / "b").string();
    cli::cmd_simulate(opt, out);
    const auto geno = read_file(dir / "a.geno.tsv");
    EXPECT_EQ(std::count(geno.begin(), geno.end(), '\n'), 601);  // header + 600 rows
    EXPECT_EQ(geno, read_file(dir / "b.geno.tsv"));
    EXPECT_EQ(read_file(dir / "a.pheno.tsv"), read_file(dir / "b.pheno.tsv"));

    opt.scenario = "s7";
    opt.trait = TraitMode::Continuous;
    EXPECT_THROW(cli::cmd_simulate(opt, out), Error);
    opt.scenario = "null2";
    opt.trait = TraitMode::Dichotomous;
    opt.n_cases.reset();
    opt.n_controls.reset();
    opt.n = 100;
    opt.out_prefix = (dir / "c").string();
    cli::cmd_simulate(opt, out);
    EXPECT_NE(read_file(dir / "c.pheno.tsv").find("ID\tvalue\tstratum\n"), std::string::npos);
}

TEST(CmdPower, EmptyMethodListIsAnError) {
    cli::PowerOptions opt;
    opt.scenarios = {"null1"};
    std::ostringstream out, log;
    try {
        cli::cmd_power(opt, out, log);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::InvalidArgument);
    }
}

TEST(CmdPower, WritesAllFormatsAndAcceptsFullScaleFlags) {
    TempDir dir;
    cli::PowerOptions opt;
    opt.scenarios = {"null1", "s5-continuous"};
    opt.methods = {"i1", "i2", "pstar", "rb"};
    opt.sizes = {200};
    opt.n_replicates = 3;
    opt.n_permutations = 19;
    opt.out_prefix = (dir / "pw").string();
    opt.quiet = true;
    std::ostringstream out, log;
    cli::cmd_power(opt, out, log);
    EXPECT_TRUE(fs::exists(dir / "pw.tsv"));
    EXPECT_TRUE(fs::exists(dir / "pw.wide.tsv"));
    const auto doc = nlohmann::json::parse(read_file(dir / "pw.json"));
    EXPECT_EQ(doc["format_version"], 1);
    EXPECT_EQ(doc["cells"].size(), 2u * 4u * 2u);
    EXPECT_EQ(out.str(), read_file(dir / "pw.wide.tsv"));

    // full-scale settings validate (not run)
    StudyGrid g;
    g.scenarios = {make_scenario(ScenarioId::Null1, TraitType::Dichotomous)};
    g.methods = {parse_grid_method("i1")};
    g.sample_sizes = {600, 1000, 1500, 2000};
    g.n_replicates = 1000;
    g.n_permutations = 10000;
    EXPECT_NO_THROW(validate(g));
}
