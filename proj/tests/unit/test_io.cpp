#include <doctest.h>

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "tracekit/io.hpp"

using namespace tracekit;
using testing_support::dna;

namespace {

ModelSpec spec(ModelKind kind, std::optional<std::uint32_t> t = {}, std::optional<double> eps = {},
               std::optional<double> q = {}) {
    return ModelSpec{kind, ModelParams{t, eps, q}, {}};
}

std::filesystem::path temp_path(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "tracekit_io_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::vector<SeedRecord> parse(const std::string& text) {
    std::istringstream in(text);
    return parse_fasta(in, Alphabet::dna());
}

BenchReport sample_report() {
    BenchReport r;
    r.algorithm = "bma";
    r.model = spec(ModelKind::deletion, {}, {}, 0.1);
    r.n = 30;
    r.traces = 7;
    r.trials = 3;
    r.successes = 1;
    r.success_rate = 1.0 / 3.0;
    std::tie(r.wilson_low, r.wilson_high) = std::pair{0.0615, 0.7923};
    r.near_misses = 2;
    r.master_seed = 18446744073709551615ull;
    return r;
}

}  // namespace

TEST_CASE("FASTA round trip keeps order, names, slots and empty sequences") {
    const std::vector<SeedRecord> recs{{"v", dna("ACGTACGTAC"), 0}, {"d", dna(""), 1}, {"j", dna("GGT"), 2}};
    const auto path = temp_path("seeds.fa");
    write_seeds(path, recs, Alphabet::dna());
    CHECK(read_seeds(path, Alphabet::dna()) == recs);
}

TEST_CASE("FASTA parsing") {
    const auto recs = parse(">a\nAC\nGT\n\n>b desc\n>c\nT\n");
    REQUIRE(recs.size() == 3);
    CHECK(recs[0].seq == dna("ACGT"));
    CHECK(recs[1].seq.empty());
    CHECK(recs[2].name == "c");
    try {
        parse(">a\nACGT\nACNT\n");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::illegal_symbol);
        CHECK(std::string(e.what()).find("line 3, column 3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse(""), Error);
    CHECK_THROWS_AS(parse("ACGT\n"), Error);
    CHECK_THROWS_AS(read_seeds(temp_path("missing.fa"), Alphabet::dna()), Error);
}

TEST_CASE("seeds from records follow the model's slots") {
    const std::vector<SeedRecord> recs{{"a", dna("AC"), 0}, {"b", dna("GT"), 1}};
    CHECK(seeds_from_records(recs, spec(ModelKind::concat2, 1)) == Seeds::pair(dna("AC"), dna("GT")));
    CHECK(records_from_seeds(Seeds::pair(dna("AC"), dna("GT"))).size() == 2);
    CHECK_THROWS_AS(seeds_from_records(recs, spec(ModelKind::trim_suffix_and_extend)), Error);
}

TEST_CASE("trace-set round trip with provenance") {
    auto m = spec(ModelKind::extend_mutate_trim, 2, 0.1);
    m.multi_seed = {2};
    const auto set = generate_trace_set(m, Seeds::set({dna("ACGT"), dna("TTGA")}), Alphabet::dna(), 25,
                                        RandomStream(91, 3));
    const auto path = temp_path("traces.jsonl");
    write_traces(path, set);
    CHECK(read_traces(path) == set);
    const auto regenerated = generate_trace_set(set.provenance->model, set.provenance->seeds, set.alphabet,
                                                set.provenance->count,
                                                RandomStream(set.provenance->master_seed, set.provenance->stream_id));
    CHECK(regenerated == set);
}

TEST_CASE("trace-set round trip without provenance, empty traces included") {
    TraceSet set(Alphabet::binary());
    set.traces = {SymbolString{}, SymbolString(std::vector<Symbol>{1, 0})};
    set.seed_ids = {std::nullopt, 4};
    set.trials = {2, std::nullopt};
    std::ostringstream out;
    format_traces(out, set);
    std::istringstream in(out.str());
    CHECK(parse_traces(in) == set);
}

TEST_CASE("trace-set schema errors") {
    const std::string header = R"({"format":"tracekit-traces","version":"1.0","alphabet":"ACGT","T":5})";
    auto parse_text = [](const std::string& text) {
        std::istringstream in(text);
        return parse_traces(in);
    };
    try {
        parse_text(header + "\n" + R"({"seq":"A"})" "\n" R"({"seq":"C"})" "\n" R"({"seq":"G"})" "\n" R"({"seq":"T"})" "\n");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::count_mismatch);
    }
    try {
        parse_text(R"({"format":"tracekit-traces","version":"2.0","alphabet":"ACGT","T":0})" "\n");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::unsupported_version);
    }
    CHECK_NOTHROW(parse_text(R"({"format":"tracekit-traces","version":"1.7","alphabet":"ACGT","T":0})" "\n"));
    CHECK_THROWS_AS(parse_text(""), Error);
    CHECK_THROWS_AS(parse_text("not json\n"), Error);
    CHECK_THROWS_AS(parse_text(R"({"format":"other","version":"1.0","alphabet":"ACGT","T":0})" "\n"), Error);
    CHECK_THROWS_AS(parse_text(R"({"format":"tracekit-traces","version":"1.0","alphabet":"ACGT","T":1})" "\n"
                               R"({"sequence":"A"})" "\n"),
                    Error);
    CHECK_THROWS_AS(parse_text(R"({"format":"tracekit-traces","version":"1.0","alphabet":"ACGT","T":1})" "\n"
                               R"({"seq":"AN"})" "\n"),
                    Error);
}

TEST_CASE("report JSON round trip") {
    auto r = sample_report();
    CHECK(bench_report_from_json(report_to_json(r)) == r);
    r.wall_seconds = 0.125;
    CHECK(bench_report_from_json(report_to_json(r)) == r);

    TraceComplexityResult c;
    c.algorithm = "bma";
    c.model = r.model;
    c.n = 30;
    c.t_cap = 64;
    c.t_star = 7;
    c.bracketed = true;
    c.curve = {sample_report(), sample_report()};
    c.curve[1].traces = 9;
    CHECK(complexity_from_json(report_to_json(c)) == c);
    c.t_star.reset();
    c.bracketed = false;
    CHECK(complexity_from_json(report_to_json(c)) == c);
}

TEST_CASE("report CSV layout") {
    const auto& cols = report_csv_columns();
    TraceComplexityResult c;
    c.algorithm = "greedy";
    c.model = spec(ModelKind::extend_mutate_trim, 2, 0.1);
    c.curve = {sample_report(), sample_report(), sample_report()};
    c.curve[1].trials = 7;
    c.curve[1].successes = 3;
    c.curve[1].success_rate = 3.0 / 7.0;
    const auto csv = report_to_csv(c);
    std::istringstream in(csv);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) fields.push_back(f);
        if (!line.empty() && line.back() == ',') fields.emplace_back();
        rows.push_back(fields);
    }
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == cols);
    const auto idx = [&](const std::string& name) {
        return static_cast<std::size_t>(std::find(cols.begin(), cols.end(), name) - cols.begin());
    };
    for (const auto& row : rows) CHECK(row.size() == cols.size());
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double rate = std::stod(rows[i][idx("success_rate")]);
        const double want = std::stod(rows[i][idx("successes")]) / std::stod(rows[i][idx("trials")]);
        CHECK(rate == want);
    }
    CHECK(rows[2][idx("success_rate")] == "0.42857142857142855");
}

TEST_CASE("write_report creates both formats and reports unwritable paths") {
    const auto r = sample_report();
    const auto json_path = temp_path("r.json");
    write_report(json_path, r, ReportFormat::json);
    CHECK(bench_report_from_json(read_text(json_path)) == r);
    write_report(temp_path("r.csv"), r, ReportFormat::csv);
    CHECK(read_text(temp_path("r.csv")).rfind("algorithm,", 0) == 0);
    try {
        write_report("/nonexistent-dir/x/r.json", r, ReportFormat::json);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::io_error);
    }
}

TEST_CASE("manifest round trip and version check") {
    ExperimentManifest m;
    m.model = spec(ModelKind::vdj, 1, 0.05);
    m.seeds = Seeds::vdj(dna("ACG"), dna("T"), dna("GA"));
    m.traces = 12;
    m.trials = 5;
    m.master_seed = 1234;
    m.algorithms = {{"brute-force", {{"max_candidates", 1e6}}}, {"greedy", {{"replicas", 3}}}};
    m.complexity = true;
    m.target_rate = 0.9;
    const auto path = temp_path("m.json");
    write_manifest(path, m);
    CHECK(read_manifest(path) == m);

    ExperimentManifest u;
    u.model = spec(ModelKind::deletion, {}, {}, 0.0);
    u.alphabet = "01";
    u.lengths = {10};
    u.algorithms = {{"identity", {}}};
    CHECK(manifest_from_json(manifest_to_json(u)) == u);

    auto j = nlohmann::json::parse(manifest_to_json(u));
    j["version"] = "3.0";
    try {
        manifest_from_json(j.dump());
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::unsupported_version);
    }
}
