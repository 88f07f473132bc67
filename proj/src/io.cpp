#include "tracekit/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace tracekit {

using nlohmann::json;

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::io_error, "error while reading " + path.string());
    return buffer.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::io_error, "error while writing " + path.string());
}

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::parse_error, what); }

std::optional<std::size_t> slot_tag(const std::string& header) {
    std::istringstream tokens(header);
    std::string token;
    while (tokens >> token) {
        if (token.rfind("slot=", 0) != 0) continue;
        std::size_t value = 0;
        const auto* first = token.data() + 5;
        const auto* last = token.data() + token.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last || first == last) {
            parse_fail("malformed slot tag '" + token + "'");
        }
        return value;
    }
    return std::nullopt;
}

// Header text with the slot tag removed.
std::string without_slot_tag(const std::string& header) {
    std::istringstream tokens(header);
    std::string token, out;
    bool dropped = false;
    while (tokens >> token) {
        if (!dropped && token.rfind("slot=", 0) == 0) {
            dropped = true;
            continue;
        }
        if (!out.empty()) out += ' ';
        out += token;
    }
    return dropped ? out : header;
}

void check_version(const json& doc, const std::string& format) {
    if (!doc.is_object()) parse_fail(format + ": expected a JSON object");
    if (!doc.contains("format") || doc["format"] != format) {
        parse_fail("expected format \"" + format + "\"");
    }
    if (!doc.contains("version") || !doc["version"].is_string()) {
        parse_fail(format + ": missing version");
    }
    const auto version = doc["version"].get<std::string>();
    const auto major = version.substr(0, version.find('.'));
    if (major != "1") {
        throw Error(ErrorCode::unsupported_version,
                    format + " version " + version + " is not supported (major version 1 expected)");
    }
}

json header(const std::string& format) {
    json doc = json::object();
    doc["format"] = format;
    doc["version"] = kFormatVersion;
    return doc;
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        parse_fail(what + ": " + e.what());
    }
}

json model_to_json(const ModelSpec& model) {
    json doc = json::object();
    doc["kind"] = std::string(model_name(model.kind));
    if (model.params.t) doc["t"] = *model.params.t;
    if (model.params.epsilon) doc["epsilon"] = *model.params.epsilon;
    if (model.params.q) doc["q"] = *model.params.q;
    if (model.is_multi_seed()) doc["multi_seed"] = model.multi_seed;
    return doc;
}

ModelSpec model_from_json(const json& doc) {
    ModelSpec model;
    const auto name = doc.at("kind").get<std::string>();
    const auto kind = parse_model_kind(name);
    if (!kind) parse_fail("unknown model kind '" + name + "'");
    model.kind = *kind;
    if (doc.contains("t")) model.params.t = doc["t"].get<std::uint32_t>();
    if (doc.contains("epsilon")) model.params.epsilon = doc["epsilon"].get<double>();
    if (doc.contains("q")) model.params.q = doc["q"].get<double>();
    if (doc.contains("multi_seed")) model.multi_seed = doc["multi_seed"].get<std::vector<std::size_t>>();
    model.validate();
    return model;
}

json seeds_to_json(const Seeds& seeds, const Alphabet& alphabet) {
    json slots = json::array();
    for (const auto& slot : seeds.slots) {
        json members = json::array();
        for (const auto& s : slot) members.push_back(decode(alphabet, s));
        slots.push_back(std::move(members));
    }
    return slots;
}

Seeds seeds_from_json(const json& doc, const Alphabet& alphabet) {
    Seeds seeds;
    for (const auto& slot : doc) {
        std::vector<SymbolString> members;
        for (const auto& s : slot) members.push_back(encode(alphabet, s.get<std::string>()));
        seeds.slots.push_back(std::move(members));
    }
    return seeds;
}

// Wraps nlohmann type/range errors as parse errors.
template <class F>
auto guarded(const std::string& what, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        parse_fail(what + ": " + e.what());
    }
}

}  // namespace

std::vector<SeedRecord> parse_fasta(std::istream& in, const Alphabet& alphabet) {
    std::vector<SeedRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '>') {
            SeedRecord record;
            const auto header = line.substr(1);
            record.slot = slot_tag(header).value_or(0);
            record.name = without_slot_tag(header);
            records.push_back(std::move(record));
            continue;
        }
        if (records.empty()) {
            parse_fail("line " + std::to_string(line_no) + ": sequence before the first '>' header");
        }
        for (std::size_t col = 0; col < line.size(); ++col) {
            auto s = alphabet.index_of(line[col]);
            if (!s) {
                throw Error(ErrorCode::illegal_symbol,
                            "line " + std::to_string(line_no) + ", column " +
                                std::to_string(col + 1) + ": '" + std::string(1, line[col]) +
                                "' is not in alphabet " + alphabet.chars());
            }
            records.back().seq.push_back(*s);
        }
    }
    if (records.empty()) parse_fail("no FASTA records (empty file)");
    return records;
}

void format_fasta(std::ostream& out, const std::vector<SeedRecord>& records,
                  const Alphabet& alphabet) {
    for (const auto& r : records) {
        out << '>' << r.name;
        if (r.slot != 0) out << " slot=" << r.slot;
        out << '\n' << decode(alphabet, r.seq) << '\n';
    }
}

std::vector<SeedRecord> read_seeds(const std::filesystem::path& path, const Alphabet& alphabet) {
    std::istringstream in(read_text(path));
    return parse_fasta(in, alphabet);
}

void write_seeds(const std::filesystem::path& path, const std::vector<SeedRecord>& records,
                 const Alphabet& alphabet) {
    std::ostringstream out;
    format_fasta(out, records, alphabet);
    write_text(path, out.str());
}

Seeds seeds_from_records(const std::vector<SeedRecord>& records, const ModelSpec& model) {
    Seeds seeds;
    seeds.slots.resize(seed_slot_count(model.kind));
    for (const auto& r : records) {
        if (r.slot >= seeds.slots.size()) {
            throw Error(ErrorCode::arity_mismatch,
                        "record '" + r.name + "' names slot " + std::to_string(r.slot) +
                            " but model " + std::string(model_name(model.kind)) + " has " +
                            std::to_string(seeds.slots.size()) + " slot(s)");
        }
        seeds.slots[r.slot].push_back(r.seq);
    }
    return seeds;
}

std::vector<SeedRecord> records_from_seeds(const Seeds& seeds) {
    std::vector<SeedRecord> records;
    for (std::size_t j = 0; j < seeds.slots.size(); ++j) {
        for (std::size_t i = 0; i < seeds.slots[j].size(); ++i) {
            SeedRecord r;
            r.name = "seed" + std::to_string(j) + "_" + std::to_string(i);
            if (j != 0) r.name += " slot=" + std::to_string(j);
            r.seq = seeds.slots[j][i];
            r.slot = j;
            records.push_back(std::move(r));
        }
    }
    return records;
}

TraceSet parse_traces(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return true;
        }
        return false;
    };
    if (!next_line()) parse_fail("trace file is empty (missing header)");
    const auto head = parse_json(line, "line " + std::to_string(line_no));
    check_version(head, "tracekit-traces");

    TraceSet set(guarded("trace header", [&] { return Alphabet(head.at("alphabet").get<std::string>()); }));
    const auto expected = guarded("trace header", [&] { return head.at("T").get<std::size_t>(); });
    if (head.contains("provenance") && !head["provenance"].is_null()) {
        set.provenance = guarded("trace header provenance", [&] {
            const auto& p = head["provenance"];
            Provenance prov;
            prov.model = model_from_json(p.at("model"));
            prov.seeds = seeds_from_json(p.at("seeds"), set.alphabet);
            prov.master_seed = p.at("master_seed").get<std::uint64_t>();
            prov.stream_id = p.at("stream_id").get<std::uint64_t>();
            prov.count = p.at("count").get<std::size_t>();
            return prov;
        });
    }

    bool any_seed_id = false;
    bool any_trial = false;
    while (next_line()) {
        const auto where = "line " + std::to_string(line_no);
        const auto rec = parse_json(line, where);
        guarded(where, [&] {
            if (!rec.is_object() || !rec.contains("seq")) parse_fail(where + ": record needs \"seq\"");
            try {
                set.traces.push_back(encode(set.alphabet, rec["seq"].get<std::string>()));
            } catch (const Error& e) {
                throw Error(e.code(), where + ": " + e.what());
            }
            std::optional<std::uint64_t> seed_id;
            std::optional<std::uint64_t> trial;
            if (rec.contains("seed_id")) seed_id = rec["seed_id"].get<std::uint64_t>();
            if (rec.contains("trial")) trial = rec["trial"].get<std::uint64_t>();
            any_seed_id |= seed_id.has_value();
            any_trial |= trial.has_value();
            set.seed_ids.push_back(seed_id);
            set.trials.push_back(trial);
            return 0;
        });
    }
    if (set.traces.size() != expected) {
        throw Error(ErrorCode::count_mismatch, "header declares T = " + std::to_string(expected) +
                                                   " but the file holds " +
                                                   std::to_string(set.traces.size()) + " record(s)");
    }
    if (!any_seed_id) set.seed_ids.clear();
    if (!any_trial) set.trials.clear();
    return set;
}

void format_traces(std::ostream& out, const TraceSet& set) {
    auto head = header("tracekit-traces");
    head["alphabet"] = set.alphabet.chars();
    head["T"] = set.traces.size();
    if (set.provenance) {
        const auto& p = *set.provenance;
        json prov = json::object();
        prov["model"] = model_to_json(p.model);
        prov["seeds"] = seeds_to_json(p.seeds, set.alphabet);
        prov["master_seed"] = p.master_seed;
        prov["stream_id"] = p.stream_id;
        prov["count"] = p.count;
        head["provenance"] = std::move(prov);
    }
    out << head.dump() << '\n';
    for (std::size_t i = 0; i < set.traces.size(); ++i) {
        json rec = json::object();
        rec["seq"] = decode(set.alphabet, set.traces[i]);
        if (i < set.seed_ids.size() && set.seed_ids[i]) rec["seed_id"] = *set.seed_ids[i];
        if (i < set.trials.size() && set.trials[i]) rec["trial"] = *set.trials[i];
        out << rec.dump() << '\n';
    }
}

TraceSet read_traces(const std::filesystem::path& path) {
    std::istringstream in(read_text(path));
    return parse_traces(in);
}

void write_traces(const std::filesystem::path& path, const TraceSet& traces) {
    std::ostringstream out;
    format_traces(out, traces);
    write_text(path, out.str());
}

namespace {

json report_body(const BenchReport& r) {
    json doc = json::object();
    doc["algorithm"] = r.algorithm;
    doc["model"] = model_to_json(r.model);
    doc["n"] = r.n;
    doc["T"] = r.traces;
    doc["trials"] = r.trials;
    doc["successes"] = r.successes;
    doc["success_rate"] = r.success_rate;
    doc["wilson_low"] = r.wilson_low;
    doc["wilson_high"] = r.wilson_high;
    doc["near_misses"] = r.near_misses;
    doc["master_seed"] = r.master_seed;
    doc["target_rate"] = r.target_rate;
    if (r.wall_seconds) doc["wall_seconds"] = *r.wall_seconds;
    return doc;
}

BenchReport report_from_body(const json& doc) {
    BenchReport r;
    r.algorithm = doc.at("algorithm").get<std::string>();
    r.model = model_from_json(doc.at("model"));
    r.n = doc.at("n").get<std::size_t>();
    r.traces = doc.at("T").get<std::size_t>();
    r.trials = doc.at("trials").get<std::size_t>();
    r.successes = doc.at("successes").get<std::size_t>();
    r.success_rate = doc.at("success_rate").get<double>();
    r.wilson_low = doc.at("wilson_low").get<double>();
    r.wilson_high = doc.at("wilson_high").get<double>();
    r.near_misses = doc.at("near_misses").get<std::size_t>();
    r.master_seed = doc.at("master_seed").get<std::uint64_t>();
    r.target_rate = doc.at("target_rate").get<double>();
    if (doc.contains("wall_seconds")) r.wall_seconds = doc["wall_seconds"].get<double>();
    return r;
}

// Shortest text that reads back to the same double.
std::string exact(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

template <class T>
std::string optional_cell(const std::optional<T>& v) {
    if (!v) return "";
    if constexpr (std::is_floating_point_v<T>) {
        return exact(*v);
    } else {
        return std::to_string(*v);
    }
}

std::string csv_row(const BenchReport& r) {
    std::string multi;
    for (auto k : r.model.multi_seed) multi += (multi.empty() ? "" : ";") + std::to_string(k);
    std::vector<std::string> cells = {
        r.algorithm,
        std::string(model_name(r.model.kind)),
        optional_cell(r.model.params.t),
        optional_cell(r.model.params.epsilon),
        optional_cell(r.model.params.q),
        multi,
        std::to_string(r.n),
        std::to_string(r.traces),
        std::to_string(r.trials),
        std::to_string(r.successes),
        exact(r.success_rate),
        exact(r.wilson_low),
        exact(r.wilson_high),
        std::to_string(r.near_misses),
        std::to_string(r.master_seed),
        exact(r.target_rate),
        optional_cell(r.wall_seconds),
    };
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) row += (i ? "," : "") + cells[i];
    return row + "\n";
}

std::string csv_header() {
    std::string row;
    for (const auto& c : report_csv_columns()) row += (row.empty() ? "" : ",") + c;
    return row + "\n";
}

}  // namespace

const std::vector<std::string>& report_csv_columns() {
    static const std::vector<std::string> columns = {
        "algorithm",   "model",      "t",           "epsilon",      "q",
        "multi_seed",  "n",          "T",           "trials",       "successes",
        "success_rate", "wilson_low", "wilson_high", "near_misses", "master_seed",
        "target_rate", "wall_seconds"};
    return columns;
}

std::string report_to_json(const BenchReport& report) {
    auto doc = header("tracekit-bench-report");
    doc.update(report_body(report));
    return doc.dump(2) + "\n";
}

std::string report_to_json(const TraceComplexityResult& result) {
    auto doc = header("tracekit-trace-complexity");
    doc["algorithm"] = result.algorithm;
    doc["model"] = model_to_json(result.model);
    doc["n"] = result.n;
    doc["target_rate"] = result.target_rate;
    doc["T_cap"] = result.t_cap;
    doc["T_star"] = result.t_star ? json(*result.t_star) : json(nullptr);
    doc["bracketed"] = result.bracketed;
    json curve = json::array();
    for (const auto& r : result.curve) curve.push_back(report_body(r));
    doc["curve"] = std::move(curve);
    return doc.dump(2) + "\n";
}

BenchReport bench_report_from_json(const std::string& text) {
    const auto doc = parse_json(text, "bench report");
    check_version(doc, "tracekit-bench-report");
    return guarded("bench report", [&] { return report_from_body(doc); });
}

TraceComplexityResult complexity_from_json(const std::string& text) {
    const auto doc = parse_json(text, "trace-complexity report");
    check_version(doc, "tracekit-trace-complexity");
    return guarded("trace-complexity report", [&] {
        TraceComplexityResult r;
        r.algorithm = doc.at("algorithm").get<std::string>();
        r.model = model_from_json(doc.at("model"));
        r.n = doc.at("n").get<std::size_t>();
        r.target_rate = doc.at("target_rate").get<double>();
        r.t_cap = doc.at("T_cap").get<std::size_t>();
        if (!doc.at("T_star").is_null()) r.t_star = doc["T_star"].get<std::size_t>();
        r.bracketed = doc.at("bracketed").get<bool>();
        for (const auto& row : doc.at("curve")) r.curve.push_back(report_from_body(row));
        return r;
    });
}

std::string report_to_csv(const BenchReport& report) { return csv_header() + csv_row(report); }

std::string report_to_csv(const TraceComplexityResult& result) {
    auto text = csv_header();
    for (const auto& r : result.curve) text += csv_row(r);
    return text;
}

void write_report(const std::filesystem::path& path, const BenchReport& report,
                  ReportFormat format) {
    write_text(path, format == ReportFormat::json ? report_to_json(report) : report_to_csv(report));
}

void write_report(const std::filesystem::path& path, const TraceComplexityResult& result,
                  ReportFormat format) {
    write_text(path, format == ReportFormat::json ? report_to_json(result) : report_to_csv(result));
}

std::string manifest_to_json(const ExperimentManifest& m) {
    auto doc = header("tracekit-manifest");
    const Alphabet alphabet(m.alphabet);
    doc["alphabet"] = m.alphabet;
    doc["model"] = model_to_json(m.model);
    if (m.seeds) doc["seeds"] = seeds_to_json(*m.seeds, alphabet);
    if (!m.lengths.empty()) doc["lengths"] = m.lengths;
    doc["T"] = m.traces;
    doc["trials"] = m.trials;
    doc["master_seed"] = m.master_seed;
    json algorithms = json::array();
    for (const auto& a : m.algorithms) {
        json entry = json::object();
        entry["id"] = a.id;
        entry["params"] = a.params;
        algorithms.push_back(std::move(entry));
    }
    doc["algorithms"] = std::move(algorithms);
    doc["target_rate"] = m.target_rate;
    doc["mode"] = m.complexity ? "complexity" : "success";
    return doc.dump(2) + "\n";
}

ExperimentManifest manifest_from_json(const std::string& text) {
    const auto doc = parse_json(text, "manifest");
    check_version(doc, "tracekit-manifest");
    return guarded("manifest", [&] {
        ExperimentManifest m;
        m.alphabet = doc.at("alphabet").get<std::string>();
        const Alphabet alphabet(m.alphabet);
        m.model = model_from_json(doc.at("model"));
        if (doc.contains("seeds")) m.seeds = seeds_from_json(doc["seeds"], alphabet);
        if (doc.contains("lengths")) m.lengths = doc["lengths"].get<std::vector<std::size_t>>();
        if (!m.seeds && m.lengths.empty()) parse_fail("manifest needs \"seeds\" or \"lengths\"");
        m.traces = doc.at("T").get<std::size_t>();
        m.trials = doc.at("trials").get<std::size_t>();
        m.master_seed = doc.at("master_seed").get<std::uint64_t>();
        for (const auto& entry : doc.at("algorithms")) {
            AlgorithmEntry a;
            a.id = entry.at("id").get<std::string>();
            if (entry.contains("params")) a.params = entry["params"].get<std::map<std::string, double>>();
            m.algorithms.push_back(std::move(a));
        }
        m.target_rate = doc.value("target_rate", kDefaultReconstructionRate);
        const auto mode = doc.value("mode", std::string("success"));
        if (mode != "success" && mode != "complexity") parse_fail("unknown mode '" + mode + "'");
        m.complexity = mode == "complexity";
        return m;
    });
}

ExperimentManifest read_manifest(const std::filesystem::path& path) {
    return manifest_from_json(read_text(path));
}

void write_manifest(const std::filesystem::path& path, const ExperimentManifest& manifest) {
    write_text(path, manifest_to_json(manifest));
}

}  // namespace tracekit
