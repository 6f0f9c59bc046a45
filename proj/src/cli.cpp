#include "hadamard/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hadamard/boolean_lab.hpp"
#include "hadamard/error.hpp"
#include "hadamard/generic_lab.hpp"
#include "hadamard/matrix_io.hpp"
#include "hadamard/perceptron.hpp"
#include "hadamard/rank.hpp"
#include "hadamard/rational.hpp"

namespace hadamard {

namespace {

using Json = nlohmann::ordered_json;

enum class Format { Csv, Json, Text };

struct Globals {
    std::optional<double> tolerance;
    std::uint64_t seed = 0;
    std::string output;
    std::string format;
    bool verbose = false;
};

Format resolve_format(const Globals& g, Format fallback) {
    if (g.format == "csv") return Format::Csv;
    if (g.format == "json") return Format::Json;
    return fallback;
}

RankTolerance rank_policy(const Globals& g) {
    if (g.tolerance) return RelativeTolerance{*g.tolerance};
    return RelativeTolerance{};
}

Json json_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return v;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileError, "cannot open '" + path + "'");
    return in;
}

Matrix load_matrix(const std::string& path) {
    auto in = open_input(path);
    return read_matrix(in);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::FileError, "cannot write '" + path + "'");
    f << content;
    if (!f) throw Error(ErrorCode::FileError, "write to '" + path + "' failed");
}

std::vector<double> parse_point(const std::string& text) {
    std::vector<double> x;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        if (!item.empty()) x.push_back(parse_double(item));
    }
    if (x.empty()) throw Error(ErrorCode::ParseError, "empty point '" + text + "'");
    return x;
}

std::string pattern_string(const std::vector<int>& y) {
    std::string s;
    for (int v : y) s += v > 0 ? '+' : '-';
    return s;
}

// ---- commands ----------------------------------------------------------

struct BooleanRankArgs {
    unsigned n_max = 0;
    unsigned d_max = 0;
};

void boolean_rank_table(const BooleanRankArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    if (a.n_max > kMaxExactBooleanBits) {
        throw Error(ErrorCode::CapExceeded, "--n-max " + std::to_string(a.n_max) + " exceeds the exact Boolean cap n <= " +
                                                std::to_string(kMaxExactBooleanBits));
    }
    std::vector<BooleanRankRow> rows;
    for (unsigned n = 1; n <= a.n_max; ++n) {
        for (unsigned d = 1; d <= a.d_max; ++d) {
            rows.push_back(boolean_rank_row(n, d));
            if (g.verbose) err << "n=" << n << " d=" << d << " rank=" << rows.back().computed << '\n';
        }
    }
    if (resolve_format(g, Format::Csv) == Format::Json) {
        Json j = Json::array();
        for (const auto& r : rows)
            j.push_back({{"n", r.n}, {"d", r.d}, {"theoretical", r.theoretical}, {"computed", r.computed},
                         {"match", r.match()}});
        out << j.dump(2) << '\n';
        return;
    }
    out << "n,d,theoretical,computed,match\n";
    for (const auto& r : rows)
        out << r.n << ',' << r.d << ',' << r.theoretical << ',' << r.computed << ',' << (r.match() ? "true" : "false")
            << '\n';
}

struct GenericRankArgs {
    std::size_t n = 0, m = 0, r = 0;
    unsigned d = 0;
    std::size_t seeds = 1;
};

void generic_rank(const GenericRankArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    if (a.r > std::min(a.n, a.m)) throw Error(ErrorCode::InvalidProblem, "--r must not exceed min(--n, --m)");
    if (a.n > 1000 || a.m > 1000) throw Error(ErrorCode::CapExceeded, "--n and --m are capped at 1000");
    if (a.seeds > 10000) throw Error(ErrorCode::CapExceeded, "--seeds is capped at 10000");
    std::vector<std::pair<std::uint64_t, GenericRankCheck>> rows;
    for (std::size_t k = 0; k < a.seeds; ++k) {
        const std::uint64_t seed = g.seed + k;
        rows.emplace_back(seed, generic_rank_check(a.n, a.m, a.r, a.d, seed, rank_policy(g)));
        if (g.verbose) err << "seed=" << seed << " rank=" << rows.back().second.computed << '\n';
    }
    if (resolve_format(g, Format::Csv) == Format::Json) {
        Json j = Json::array();
        for (const auto& [seed, c] : rows)
            j.push_back({{"seed", seed}, {"n", a.n}, {"m", a.m}, {"r", a.r}, {"d", a.d}, {"expected", c.expected},
                         {"computed", c.computed}, {"match", c.match()}});
        out << j.dump(2) << '\n';
        return;
    }
    out << "seed,n,m,r,d,expected,computed,match\n";
    for (const auto& [seed, c] : rows)
        out << seed << ',' << a.n << ',' << a.m << ',' << a.r << ',' << a.d << ',' << c.expected << ',' << c.computed
            << ',' << (c.match() ? "true" : "false") << '\n';
}

struct SweepArgs {
    std::string fixture;
    std::string file;
    double d_min = 0.25;
    double d_max = 4.0;
    double step = 0.25;
    bool refine = false;
};

void sweep(const SweepArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    if (a.fixture.empty() == a.file.empty()) throw Error(ErrorCode::InvalidProblem, "give exactly one of --fixture, --file");
    const Matrix m = a.fixture.empty() ? load_matrix(a.file) : builtin_fixture(a.fixture);
    const auto grid = sweep_grid(a.d_min, a.d_max, a.step, a.refine);
    const auto records = noninteger_sweep(m, grid, rank_policy(g));
    if (g.verbose) {
        for (const auto& r : records)
            if (r.raw_condition > 1e12) err << "d=" << format_double(r.exponent_d) << " condition above 1e12\n";
    }
    if (resolve_format(g, Format::Csv) == Format::Json) {
        Json j = Json::array();
        for (const auto& r : records)
            j.push_back({{"d", r.exponent_d}, {"rank", r.rank}, {"condition", json_number(r.condition)},
                         {"raw_condition", json_number(r.raw_condition)}, {"above_1e12", r.raw_condition > 1e12}});
        out << j.dump(2) << '\n';
        return;
    }
    out << "d,rank,condition\n";
    for (const auto& r : records)
        out << format_double(r.exponent_d) << ',' << r.rank << ',' << format_double(r.condition) << '\n';
}

struct TrainArgs {
    std::string data;
    unsigned degree = 1;
    double offset = 0.0;
    std::string model_out;
};

void train_command(const TrainArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    auto in = open_input(a.data);
    const LabeledDataset data = read_dataset(in);
    TrainOptions options;
    if (g.tolerance) options.kkt_tolerance = *g.tolerance;
    const TrainVerdict v = train(data, PolynomialKernel{a.degree, a.offset}, options);
    if (g.verbose) {
        err << "lp_pivots=" << v.diagnostics.lp_pivots << " qp_iterations=" << v.diagnostics.qp_iterations
            << " kkt_violation=" << format_double(v.diagnostics.kkt_violation) << '\n';
    }
    if (v.realized() && !a.model_out.empty()) write_file(a.model_out, perceptron_to_json(v.perceptron()) + "\n");

    const std::vector<double>& values = v.realized() ? v.perceptron().alpha : v.certificate();
    if (resolve_format(g, Format::Csv) == Format::Json) {
        Json j;
        j["status"] = v.realized() ? "realized" : "infeasible";
        if (v.realized()) {
            j["alpha"] = values;
            j["bias"] = v.perceptron().bias;
        } else {
            j["certificate"] = values;
        }
        j["lp_pivots"] = v.diagnostics.lp_pivots;
        j["qp_iterations"] = v.diagnostics.qp_iterations;
        j["kkt_violation"] = v.diagnostics.kkt_violation;
        out << j.dump(2) << '\n';
        return;
    }
    out << "field,value\n";
    out << "status," << (v.realized() ? "realized" : "infeasible") << '\n';
    if (v.realized()) out << "bias," << format_double(v.perceptron().bias) << '\n';
    const char* name = v.realized() ? "alpha_" : "certificate_";
    for (std::size_t i = 0; i < values.size(); ++i) out << name << i + 1 << ',' << format_double(values[i]) << '\n';
}

struct ClassifyArgs {
    std::string model;
    std::vector<std::string> points;
};

void classify_command(const ClassifyArgs& a, const Globals& g, std::ostream& out, std::ostream&) {
    auto in = open_input(a.model);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const TrainedPerceptron p = perceptron_from_json(text);
    std::vector<std::pair<double, int>> results;
    for (const auto& s : a.points) {
        const auto x = parse_point(s);
        const double z = decision_value(p, x);
        results.emplace_back(z, classify(p, x));
    }
    if (resolve_format(g, Format::Csv) == Format::Json) {
        Json j = Json::array();
        for (std::size_t i = 0; i < results.size(); ++i)
            j.push_back({{"index", i + 1}, {"decision", results[i].first}, {"label", results[i].second}});
        out << j.dump(2) << '\n';
        return;
    }
    out << "index,decision,label\n";
    for (std::size_t i = 0; i < results.size(); ++i)
        out << i + 1 << ',' << format_double(results[i].first) << ',' << results[i].second << '\n';
}

struct RealizeArgs {
    std::string table;
    std::optional<unsigned> degree;
};

void realize_command(const RealizeArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    const BooleanFunction f = parse_truth_table(a.table);
    if (f.n > kMaxExactBooleanBits) {
        throw Error(ErrorCode::CapExceeded, "truth table has n = " + std::to_string(f.n) +
                                                " variables, exact Boolean cap is n <= " +
                                                std::to_string(kMaxExactBooleanBits));
    }
    const bool json = resolve_format(g, Format::Csv) == Format::Json;
    if (!a.degree) {
        const unsigned d = min_realization_degree(f);
        if (json) {
            out << Json{{"table", a.table}, {"n", f.n}, {"min_degree", d}}.dump(2) << '\n';
        } else {
            out << "table,n,min_degree\n" << a.table << ',' << f.n << ',' << d << '\n';
        }
        return;
    }
    const TrainVerdict v = realize_boolean(f, *a.degree);
    if (g.verbose) err << "qp_iterations=" << v.diagnostics.qp_iterations << '\n';
    const char* status = v.realized() ? "realized" : "infeasible";
    if (json) {
        out << Json{{"table", a.table}, {"n", f.n}, {"degree", *a.degree}, {"status", status}}.dump(2) << '\n';
    } else {
        out << "table,n,degree,status\n" << a.table << ',' << f.n << ',' << *a.degree << ',' << status << '\n';
    }
}

struct MinDegreeArgs {
    unsigned n = 0;
    std::string m;
};

void min_degree_command(const MinDegreeArgs& a, const Globals& g, std::ostream& out, std::ostream&) {
    BigInt m;
    if (a.m.empty()) {
        mpz_ui_pow_ui(m.get_mpz_t(), 2, a.n);
    } else if (m.set_str(a.m, 10) != 0 || m < 1) {
        throw Error(ErrorCode::ParseError, "--m must be a positive integer, got '" + a.m + "'");
    }
    const unsigned d = min_shattering_degree(a.n, m);
    if (resolve_format(g, Format::Csv) == Format::Json) {
        out << Json{{"n", a.n}, {"m", m.get_str()}, {"d", d}}.dump(2) << '\n';
    } else {
        out << d << '\n';
    }
}

struct GeneralPositionArgs {
    std::string file;
    unsigned d = 1;
};

void general_position_command(const GeneralPositionArgs& a, const Globals& g, std::ostream& out, std::ostream&) {
    const Matrix base = load_matrix(a.file);
    const GeneralPositionReport r = general_position_check(hadamard_family(base, a.d), a.d);
    if (resolve_format(g, Format::Json) == Format::Csv) {
        out << "order_d,family_size,in_general_position,witness,min_abs_determinant\n";
        out << r.order_d << ',' << r.family_size << ',' << (r.in_general_position ? "true" : "false") << ',';
        if (r.witness) {
            for (std::size_t i = 0; i < r.witness->size(); ++i) out << (i ? " " : "") << (*r.witness)[i];
        }
        out << ',' << format_double(r.min_abs_determinant) << '\n';
        return;
    }
    Json j;
    j["order_d"] = r.order_d;
    j["family_size"] = r.family_size;
    j["in_general_position"] = r.in_general_position;
    j["witness"] = r.witness ? Json(*r.witness) : Json(nullptr);
    j["min_abs_determinant"] = json_number(r.min_abs_determinant);
    out << j.dump(2) << '\n';
}

struct ShatterArgs {
    std::string file;
    unsigned degree = 1;
    std::size_t samples = 0;
};

void shatter_command(const ShatterArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    const Matrix features = load_matrix(a.file);
    const auto patterns = a.samples == 0 ? all_label_patterns(features.cols())
                                         : random_label_patterns(features.cols(), a.samples, g.seed);
    const ShatteringReport r = shattering_check(features, a.degree, patterns);
    if (g.verbose) err << r.realized << " of " << r.patterns << " patterns realized\n";
    if (resolve_format(g, Format::Csv) == Format::Json) {
        Json infeasible = Json::array();
        for (const auto& y : r.infeasible_patterns) infeasible.push_back(pattern_string(y));
        out << Json{{"patterns", r.patterns}, {"realized", r.realized}, {"fraction", r.fraction()},
                    {"infeasible", infeasible}}
                   .dump(2)
            << '\n';
        return;
    }
    out << "patterns,realized,fraction\n"
        << r.patterns << ',' << r.realized << ',' << format_double(r.fraction()) << '\n';
}

struct FixtureArgs {
    std::string name;
    std::string out;
};

void fixture_command(const FixtureArgs& a, const Globals& g, std::ostream& out, std::ostream&) {
    const Matrix m = builtin_fixture(a.name);
    std::ostringstream text;
    switch (resolve_format(g, Format::Text)) {
        case Format::Csv: write_csv(text, m); break;
        case Format::Json: {
            Json data = Json::array();
            for (std::size_t i = 0; i < m.rows(); ++i)
                for (std::size_t j = 0; j < m.cols(); ++j) data.push_back(format_rational(m.rationals()(i, j)));
            text << Json{{"name", a.name}, {"rows", m.rows()}, {"cols", m.cols()}, {"scalar", "rational"},
                         {"data", data}}
                        .dump(2)
                 << '\n';
            break;
        }
        case Format::Text: write_matrix(text, m); break;
    }
    if (a.out.empty()) {
        out << text.str();
    } else {
        write_file(a.out, text.str());
    }
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hadamard power rank experiments and polynomial kernel perceptrons"};
    app.name("hadamard");
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--tolerance", g.tolerance,
                   "Relative rank tolerance factor (rank decisions) or KKT tolerance (train)")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "Base random seed");
    app.add_option("--output", g.output, "Write results to this file instead of standard output");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--verbose", g.verbose, "Print a diagnostic trace to standard error");

    std::function<void(std::ostream&)> action;

    BooleanRankArgs brt;
    auto* c_brt = app.add_subcommand("boolean-rank-table", "Exact rank of (X^T X)^d against the closed form");
    c_brt->add_option("--n-max", brt.n_max, "Largest bit count (<= 8)")->required()->check(CLI::PositiveNumber);
    c_brt->add_option("--d-max", brt.d_max, "Largest exponent")->required()->check(CLI::Range(1u, 64u));
    c_brt->callback([&] { action = [&](std::ostream& o) { boolean_rank_table(brt, g, o, err); }; });

    GenericRankArgs gr;
    auto* c_gr = app.add_subcommand("generic-rank", "Rank of Hadamard powers of random rank-r matrices");
    c_gr->add_option("--n", gr.n, "Rows")->required()->check(CLI::PositiveNumber);
    c_gr->add_option("--m", gr.m, "Columns")->required()->check(CLI::PositiveNumber);
    c_gr->add_option("--r", gr.r, "Rank of the factorization")->required()->check(CLI::PositiveNumber);
    c_gr->add_option("--d", gr.d, "Hadamard exponent")->required()->check(CLI::PositiveNumber);
    c_gr->add_option("--seeds", gr.seeds, "Number of consecutive seeds from --seed")->check(CLI::PositiveNumber);
    c_gr->callback([&] { action = [&](std::ostream& o) { generic_rank(gr, g, o, err); }; });

    SweepArgs sw;
    auto* c_sw = app.add_subcommand("sweep", "Rank and condition number of |A|^d over a grid of real d");
    auto* o_fix = c_sw->add_option("--fixture", sw.fixture, "Built-in fixture name");
    auto* o_file = c_sw->add_option("--file", sw.file, "Matrix file");
    o_fix->excludes(o_file);
    c_sw->add_option("--d-min", sw.d_min, "First grid point")->check(CLI::PositiveNumber);
    c_sw->add_option("--d-max", sw.d_max, "Last grid point")->check(CLI::PositiveNumber);
    c_sw->add_option("--step", sw.step, "Grid step")->check(CLI::PositiveNumber);
    c_sw->add_flag("--refine", sw.refine, "Add points at k +- 0.05 j (j = 1..4) around each integer k");
    c_sw->callback([&] { action = [&](std::ostream& o) { sweep(sw, g, o, err); }; });

    TrainArgs tr;
    auto* c_tr = app.add_subcommand("train", "Train a polynomial kernel perceptron or certify infeasibility");
    c_tr->add_option("--data", tr.data, "Dataset file")->required();
    c_tr->add_option("--degree", tr.degree, "Kernel degree")->required()->check(CLI::PositiveNumber);
    c_tr->add_option("--offset", tr.offset, "Kernel offset c >= 0")->check(CLI::NonNegativeNumber);
    c_tr->add_option("--model-out", tr.model_out, "Write the trained model as JSON");
    c_tr->callback([&] { action = [&](std::ostream& o) { train_command(tr, g, o, err); }; });

    ClassifyArgs cl;
    auto* c_cl = app.add_subcommand("classify", "Evaluate a trained model at points");
    c_cl->add_option("--model", cl.model, "Model JSON file")->required();
    c_cl->add_option("--point", cl.points, "Comma separated coordinates (repeatable)")->required();
    c_cl->callback([&] { action = [&](std::ostream& o) { classify_command(cl, g, o, err); }; });

    RealizeArgs rb;
    auto* c_rb = app.add_subcommand("realize-boolean", "Realize a truth table with a kernel perceptron");
    c_rb->add_option("--table", rb.table, "Truth table as a '+'/'-' string of length 2^n")->required();
    c_rb->add_option("--degree", rb.degree, "Kernel degree; omitted means search the minimal one (n <= 4)")
        ->check(CLI::PositiveNumber);
    c_rb->callback([&] { action = [&](std::ostream& o) { realize_command(rb, g, o, err); }; });

    MinDegreeArgs md;
    auto* c_md = app.add_subcommand("min-degree", "Smallest d with C(n+d-1, d) >= m");
    c_md->add_option("--n", md.n, "Dimension")->required()->check(CLI::Range(1u, 100000u));
    c_md->add_option("--m", md.m, "Point count (default 2^n)");
    c_md->callback([&] { action = [&](std::ostream& o) { min_degree_command(md, g, o, err); }; });

    GeneralPositionArgs gp;
    auto* c_gp = app.add_subcommand("general-position", "General position test of the degree-d Hadamard family");
    c_gp->add_option("--file", gp.file, "Matrix file (columns are the vectors)")->required();
    c_gp->add_option("--d", gp.d, "Family order")->check(CLI::PositiveNumber);
    c_gp->callback([&] { action = [&](std::ostream& o) { general_position_command(gp, g, o, err); }; });

    ShatterArgs sh;
    auto* c_sh = app.add_subcommand("shatter", "Train every label pattern (or a seeded sample) on a point set");
    c_sh->add_option("--file", sh.file, "Matrix file (columns are the points)")->required();
    c_sh->add_option("--degree", sh.degree, "Kernel degree")->required()->check(CLI::PositiveNumber);
    c_sh->add_option("--samples", sh.samples, "Random pattern count; 0 means all patterns");
    c_sh->callback([&] { action = [&](std::ostream& o) { shatter_command(sh, g, o, err); }; });

    FixtureArgs fx;
    auto* c_fx = app.add_subcommand("fixture", "Export a built-in fixture matrix");
    c_fx->add_option("--name", fx.name, "boolean3_hat_gramian, fibonacci_hankel_5 or xor_features")->required();
    c_fx->add_option("--out", fx.out, "Destination file");
    c_fx->callback([&] { action = [&](std::ostream& o) { fixture_command(fx, g, o, err); }; });

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        std::ostringstream buffer;
        action(buffer);
        if (g.output.empty()) {
            out << buffer.str();
        } else {
            write_file(g.output, buffer.str());
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return is_validation_error(e.code()) ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: internal: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace hadamard
