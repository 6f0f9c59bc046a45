#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hadamard/cli.hpp"
#include "hadamard/generic_lab.hpp"

using namespace hadamard;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream fields(line);
        while (std::getline(fields, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

// Parses a CSV and checks the header and that every row has the header's width.
std::vector<std::vector<std::string>> checked_csv(const std::string& text, const std::string& header) {
    const auto rows = parse_csv(text);
    EXPECT_FALSE(rows.empty());
    if (rows.empty()) return rows;
    EXPECT_EQ(text.substr(0, text.find('\n')), header);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i].size(), rows[0].size()) << "row " << i;
    return {rows.begin() + 1, rows.end()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class ScratchDir {
public:
    ScratchDir() {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        path_ = fs::temp_directory_path() / ("hadamard_cli_" + std::string(info->test_suite_name()) + "_" + info->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~ScratchDir() { fs::remove_all(path_); }
    fs::path file(const std::string& name) const { return path_ / name; }
    fs::path write(const std::string& name, const std::string& content) const {
        std::ofstream(path_ / name) << content;
        return path_ / name;
    }

private:
    fs::path path_;
};

const std::string kXorDataset = "2 4 rational\n0 1 0 1\n0 0 1 1\nlabels: -1 1 1 -1\n";

}  // namespace

TEST(CliExitCodes, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"no-such-command"}).code, 2);
    EXPECT_EQ(run({"boolean-rank-table", "--n-max", "3"}).code, 2);
    EXPECT_EQ(run({"boolean-rank-table", "--n-max", "0", "--d-max", "2"}).code, 2);
    EXPECT_EQ(run({"--format", "xml", "min-degree", "--n", "3"}).code, 2);
    EXPECT_EQ(run({"min-degree", "--n", "abc"}).code, 2);
    EXPECT_EQ(run({"sweep"}).code, 2);
    EXPECT_EQ(run({"sweep", "--fixture", "fibonacci_hankel_5", "--file", "x.txt"}).code, 2);
}

TEST(CliExitCodes, HelpSucceeds) {
    const CliResult r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("boolean-rank-table"), std::string::npos);
    EXPECT_EQ(run({"train", "--help"}).code, 0);
}

TEST(CliExitCodes, ValidationErrorsGiveOneLineDiagnostic) {
    const CliResult r = run({"boolean-rank-table", "--n-max", "9", "--d-max", "2"});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
    EXPECT_NE(r.err.find("n <= 8"), std::string::npos) << r.err;

    const CliResult missing = run({"train", "--data", "/nonexistent/data.txt", "--degree", "2"});
    EXPECT_EQ(missing.code, 2);
    EXPECT_NE(missing.err.find("/nonexistent/data.txt"), std::string::npos);

    EXPECT_EQ(run({"fixture", "--name", "bogus"}).code, 2);
    EXPECT_EQ(run({"min-degree", "--n", "1", "--m", "2"}).code, 2);
    EXPECT_EQ(run({"generic-rank", "--n", "3", "--m", "3", "--r", "4", "--d", "1"}).code, 2);
    EXPECT_EQ(run({"realize-boolean", "--table", "+-+"}).code, 2);
}

TEST(CliBooleanRankTable, ThreeBitRanks) {
    const CliResult r = run({"boolean-rank-table", "--n-max", "3", "--d-max", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = checked_csv(r.out, "n,d,theoretical,computed,match");
    ASSERT_EQ(rows.size(), 9u);
    std::vector<std::string> n3;
    for (const auto& row : rows) {
        EXPECT_EQ(row[4], "true");
        EXPECT_EQ(row[2], row[3]);
        if (row[0] == "3") n3.push_back(row[3]);
    }
    EXPECT_EQ(n3, (std::vector<std::string>{"3", "6", "7"}));
}

TEST(CliBooleanRankTable, JsonMatchesCsv) {
    const CliResult csv = run({"boolean-rank-table", "--n-max", "2", "--d-max", "4"});
    const CliResult json = run({"--format", "json", "boolean-rank-table", "--n-max", "2", "--d-max", "4"});
    ASSERT_EQ(json.code, 0);
    const auto j = nlohmann::json::parse(json.out);
    const auto rows = checked_csv(csv.out, "n,d,theoretical,computed,match");
    ASSERT_EQ(j.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(std::to_string(j[i]["computed"].get<int>()), rows[i][3]);
        EXPECT_TRUE(j[i]["match"].get<bool>());
    }
}

TEST(CliGenericRank, SeedRowsAndExpectedRank) {
    const CliResult r = run({"--seed", "11", "generic-rank", "--n", "6", "--m", "7", "--r", "2", "--d", "2", "--seeds", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = checked_csv(r.out, "seed,n,m,r,d,expected,computed,match");
    ASSERT_EQ(rows.size(), 5u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i][0], std::to_string(11 + i));
        EXPECT_EQ(rows[i][5], "3");  // C(2 + 2 - 1, 2)
        EXPECT_EQ(rows[i][6], "3");
        EXPECT_EQ(rows[i][7], "true");
    }
}

TEST(CliSweep, PlainGridRowCount) {
    const CliResult r = run({"sweep", "--fixture", "fibonacci_hankel_5", "--d-min", "0.25", "--d-max", "4", "--step", "0.25"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = checked_csv(r.out, "d,rank,condition");
    ASSERT_EQ(rows.size(), 16u);
    for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_DOUBLE_EQ(std::stod(rows[i][0]), 0.25 * double(i + 1));
}

TEST(CliSweep, InfiniteConditionExactlyAtOneTwoThree) {
    const CliResult r = run({"sweep", "--fixture", "fibonacci_hankel_5", "--refine"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = checked_csv(r.out, "d,rank,condition");
    EXPECT_EQ(rows.size(), sweep_grid(0.25, 4.0, 0.25, true).size());
    std::set<std::string> singular;
    for (const auto& row : rows) {
        if (row[2] == "inf") {
            singular.insert(row[0]);
            EXPECT_LT(std::stoi(row[1]), 5);
        } else {
            EXPECT_EQ(row[1], "5") << "d=" << row[0];
        }
    }
    EXPECT_EQ(singular, (std::set<std::string>{"1", "2", "3"}));
}

TEST(CliSweep, VerboseAndJsonFlagLargeConditions) {
    const CliResult r = run({"--verbose", "--format", "json", "sweep", "--fixture", "fibonacci_hankel_5"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.err.find("condition above 1e12"), std::string::npos);
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j.size(), 16u);
    for (const auto& rec : j) {
        if (rec["condition"].is_string()) {
            EXPECT_EQ(rec["condition"], "inf");
            EXPECT_TRUE(rec["above_1e12"].get<bool>());
        }
    }
}

TEST(CliSweep, MatrixFile) {
    ScratchDir dir;
    const auto path = dir.write("m.txt", "2 2 rational\n1 2\n2 4\n");
    const CliResult r = run({"sweep", "--file", path.string(), "--d-min", "0.5", "--d-max", "2", "--step", "0.5"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = checked_csv(r.out, "d,rank,condition");
    ASSERT_EQ(rows.size(), 4u);
    for (const auto& row : rows) {
        // [[1, 2^d], [2^d, 4^d]] is always singular.
        EXPECT_EQ(row[1], "1");
        EXPECT_EQ(row[2], "inf");
    }
}

TEST(CliTrainClassify, XorRoundTrip) {
    ScratchDir dir;
    const auto data = dir.write("xor.txt", kXorDataset);
    const auto model = dir.file("model.json");
    const CliResult t = run({"train", "--data", data.string(), "--degree", "2", "--model-out", model.string()});
    ASSERT_EQ(t.code, 0) << t.err;
    const auto fields = checked_csv(t.out, "field,value");
    ASSERT_FALSE(fields.empty());
    EXPECT_EQ(fields[0][1], "realized");
    ASSERT_TRUE(fs::exists(model));

    const CliResult c = run({"classify", "--model", model.string(), "--point", "0,0", "--point", "1,0", "--point", "0,1",
                       "--point", "1,1"});
    ASSERT_EQ(c.code, 0) << c.err;
    const auto rows = checked_csv(c.out, "index,decision,label");
    ASSERT_EQ(rows.size(), 4u);
    const std::string expected[] = {"-1", "1", "1", "-1"};
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(rows[i][0], std::to_string(i + 1));
        EXPECT_EQ(rows[i][2], expected[i]);
        EXPECT_EQ(std::stod(rows[i][1]) > 0 ? "1" : "-1", expected[i]);
    }
}

TEST(CliTrainClassify, InfeasibleWritesCertificateAndNoModel) {
    ScratchDir dir;
    const auto data = dir.write("xor.txt", kXorDataset);
    const auto model = dir.file("model.json");
    const CliResult t = run({"train", "--data", data.string(), "--degree", "1", "--model-out", model.string()});
    ASSERT_EQ(t.code, 0) << t.err;
    const auto fields = checked_csv(t.out, "field,value");
    ASSERT_EQ(fields.size(), 5u);
    EXPECT_EQ(fields[0][1], "infeasible");
    for (std::size_t i = 1; i < 5; ++i) EXPECT_EQ(fields[i][0], "certificate_" + std::to_string(i));
    EXPECT_FALSE(fs::exists(model));
}

TEST(CliTrainClassify, BadInputs) {
    ScratchDir dir;
    const auto bad = dir.write("bad.txt", "2 4 rational\n0 1 0 1\n0 0 1 1\nlabels: -1 1 2 -1\n");
    EXPECT_EQ(run({"train", "--data", bad.string(), "--degree", "2"}).code, 2);
    const auto junk = dir.write("model.json", "{\"not\": \"a model\"}");
    EXPECT_EQ(run({"classify", "--model", junk.string(), "--point", "0,0"}).code, 2);
}

TEST(CliRealizeBoolean, XorTable) {
    // Index j encodes the bits of the point; "-++-" is parity on two bits.
    const CliResult d1 = run({"realize-boolean", "--table", "-++-", "--degree", "1"});
    ASSERT_EQ(d1.code, 0) << d1.err;
    EXPECT_EQ(checked_csv(d1.out, "table,n,degree,status").at(0).at(3), "infeasible");
    const CliResult d2 = run({"realize-boolean", "--table", "-++-", "--degree", "2"});
    EXPECT_EQ(checked_csv(d2.out, "table,n,degree,status").at(0).at(3), "realized");
    const CliResult search = run({"realize-boolean", "--table", "-++-"});
    EXPECT_EQ(checked_csv(search.out, "table,n,min_degree").at(0).at(2), "2");
    const CliResult and_table = run({"realize-boolean", "--table", "---+"});
    EXPECT_EQ(checked_csv(and_table.out, "table,n,min_degree").at(0).at(2), "1");
}

TEST(CliMinDegree, Examples) {
    EXPECT_EQ(run({"min-degree", "--n", "10"}).out, "5\n");
    EXPECT_EQ(run({"min-degree", "--n", "20"}).out, "8\n");
    EXPECT_EQ(run({"min-degree", "--n", "3", "--m", "4"}).out, "2\n");
    const CliResult big = run({"min-degree", "--n", "80", "--m", "1208925819614629174706176"});
    ASSERT_EQ(big.code, 0) << big.err;
    EXPECT_EQ(big.out, "26\n");
    const auto j = nlohmann::json::parse(run({"--format", "json", "min-degree", "--n", "10"}).out);
    EXPECT_EQ(j["d"], 5);
    EXPECT_EQ(j["m"], "1024");
}

TEST(CliGeneralPosition, IndependentAndDependentColumns) {
    ScratchDir dir;
    const auto good = dir.write("good.txt", "2 3 rational\n1 0 1\n0 1 1\n");
    const CliResult g = run({"general-position", "--file", good.string(), "--d", "1"});
    ASSERT_EQ(g.code, 0) << g.err;
    const auto jg = nlohmann::json::parse(g.out);
    EXPECT_TRUE(jg["in_general_position"].get<bool>());
    EXPECT_TRUE(jg["witness"].is_null());
    EXPECT_EQ(jg["family_size"], 3);

    const auto bad = dir.write("bad.txt", "2 3 rational\n1 2 0\n1 2 1\n");
    const CliResult b = run({"--format", "csv", "general-position", "--file", bad.string(), "--d", "1"});
    ASSERT_EQ(b.code, 0) << b.err;
    const auto rows = checked_csv(b.out, "order_d,family_size,in_general_position,witness,min_abs_determinant");
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0][2], "false");
    EXPECT_EQ(rows[0][3], "0 1");
}

TEST(CliShatter, XorPoints) {
    ScratchDir dir;
    const auto pts = dir.write("pts.txt", "2 4 rational\n0 1 0 1\n0 0 1 1\n");
    const CliResult d1 = run({"shatter", "--file", pts.string(), "--degree", "1"});
    ASSERT_EQ(d1.code, 0) << d1.err;
    const auto r1 = checked_csv(d1.out, "patterns,realized,fraction");
    EXPECT_EQ(r1.at(0).at(0), "16");
    EXPECT_EQ(r1.at(0).at(1), "14");
    const auto j1 = nlohmann::json::parse(run({"--format", "json", "shatter", "--file", pts.string(), "--degree", "1"}).out);
    const auto infeasible = j1["infeasible"].get<std::set<std::string>>();
    EXPECT_EQ(infeasible, (std::set<std::string>{"+--+", "-++-"}));
    const CliResult d2 = run({"shatter", "--file", pts.string(), "--degree", "2"});
    EXPECT_EQ(checked_csv(d2.out, "patterns,realized,fraction").at(0).at(1), "16");
    const CliResult sampled = run({"--seed", "3", "shatter", "--file", pts.string(), "--degree", "2", "--samples", "7"});
    EXPECT_EQ(checked_csv(sampled.out, "patterns,realized,fraction").at(0).at(0), "7");
}

TEST(CliFixture, TextCsvAndFile) {
    EXPECT_EQ(run({"fixture", "--name", "xor_features"}).out, "2 4 rational\n0 1 0 1\n0 0 1 1\n");
    const CliResult csv = run({"--format", "csv", "fixture", "--name", "fibonacci_hankel_5"});
    ASSERT_EQ(csv.code, 0);
    const auto rows = parse_csv(csv.out);
    ASSERT_EQ(rows.size(), 5u);
    // Hankel structure: entry (i, j) depends on i + j only.
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            ASSERT_EQ(rows[i].size(), 5u);
            if (i + 1 < 5 && j > 0) EXPECT_EQ(rows[i + 1][j - 1], rows[i][j]);
        }

    ScratchDir dir;
    const auto out = dir.file("k.txt");
    const CliResult written = run({"fixture", "--name", "boolean3_hat_gramian", "--out", out.string()});
    ASSERT_EQ(written.code, 0);
    EXPECT_TRUE(written.out.empty());
    EXPECT_EQ(slurp(out), run({"fixture", "--name", "boolean3_hat_gramian"}).out);
}

TEST(CliOutput, OutputFlagRedirects) {
    ScratchDir dir;
    const auto out = dir.file("table.csv");
    const CliResult r = run({"--output", out.string(), "boolean-rank-table", "--n-max", "2", "--d-max", "2"});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(slurp(out), run({"boolean-rank-table", "--n-max", "2", "--d-max", "2"}).out);
}

TEST(CliDeterminism, InProcessRepeat) {
    const std::vector<std::vector<std::string>> commands = {
        {"--seed", "5", "generic-rank", "--n", "8", "--m", "9", "--r", "3", "--d", "2", "--seeds", "4"},
        {"sweep", "--fixture", "fibonacci_hankel_5", "--refine"},
        {"--seed", "9", "--format", "json", "shatter", "--file", "PTS", "--degree", "1", "--samples", "10"},
    };
    ScratchDir dir;
    const auto pts = dir.write("pts.txt", "2 5 rational\n0 1 0 1 2\n0 0 1 1 3\n").string();
    for (auto args : commands) {
        std::replace(args.begin(), args.end(), std::string("PTS"), pts);
        EXPECT_EQ(run(args).out, run(args).out);
    }
}

TEST(CliDeterminism, SeparateProcessesByteIdentical) {
    ScratchDir dir;
    const std::string cli = HADAMARD_CLI_PATH;
    for (int k = 0; k < 2; ++k) {
        const std::string cmd = "\"" + cli + "\" --seed 17 --output \"" + dir.file("run" + std::to_string(k)).string() +
                                "\" generic-rank --n 7 --m 7 --r 3 --d 2 --seeds 6";
        ASSERT_EQ(std::system(cmd.c_str()), 0);
    }
    const std::string first = slurp(dir.file("run0"));
    EXPECT_FALSE(first.empty());
    EXPECT_EQ(first, slurp(dir.file("run1")));
}
