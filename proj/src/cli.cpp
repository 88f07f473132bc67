#include "tracekit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "tracekit/algorithms.hpp"
#include "tracekit/likelihood.hpp"
#include "tracekit/multiseed.hpp"

namespace tracekit {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string model_list() {
    std::string names;
    for (auto kind : kAllModelKinds) names += (names.empty() ? "" : ", ") + std::string(model_name(kind));
    return names;
}

std::string algorithm_list() {
    std::string names;
    for (const auto& id : algorithm_ids()) names += (names.empty() ? "" : ", ") + id;
    return names;
}

struct ModelFlags {
    std::string model;
    std::uint32_t t = 0;
    double epsilon = 0.0;
    double q = 0.0;
    std::string alphabet = "ACGT";
    std::vector<std::size_t> set_size;
    CLI::Option* model_opt = nullptr;
    CLI::Option* t_opt = nullptr;
    CLI::Option* epsilon_opt = nullptr;
    CLI::Option* q_opt = nullptr;
    CLI::Option* alphabet_opt = nullptr;
    CLI::Option* set_size_opt = nullptr;
};

void add_model_flags(CLI::App* app, ModelFlags& f) {
    f.model_opt = app->add_option("--model", f.model, "Channel model: " + model_list());
    f.t_opt = app->add_option("--t", f.t, "Maximum extension length");
    f.epsilon_opt = app->add_option("--epsilon", f.epsilon, "Per-symbol mutation probability");
    f.q_opt = app->add_option("--q", f.q, "Per-symbol deletion probability");
    f.alphabet_opt = app->add_option("--alphabet", f.alphabet,
                                     "Alphabet characters in order (default ACGT; 01 for binary)");
    f.set_size_opt = app->add_option("--set-size", f.set_size,
                                     "Seed-set size per slot (multi-seed models)");
}

void check_flag_params(const ModelSpec& m) {
    const auto name = std::string(model_name(m.kind));
    auto check = [&](bool needed, bool present, const char* flag) {
        if (needed && !present) throw UsageError("model " + name + " requires " + flag);
        if (!needed && present) throw UsageError("model " + name + " does not take " + flag);
    };
    check(uses_t(m.kind), m.params.t.has_value(), "--t");
    check(uses_epsilon(m.kind), m.params.epsilon.has_value(), "--epsilon");
    check(uses_q(m.kind), m.params.q.has_value(), "--q");
}

ModelKind parse_kind(const std::string& name) {
    auto kind = parse_model_kind(name);
    if (!kind) throw UsageError("unknown model '" + name + "' (expected one of " + model_list() + ")");
    return *kind;
}

ModelSpec resolve_model(const ModelFlags& f, const std::optional<ModelSpec>& from_header,
                        std::ostream& err) {
    ModelSpec m;
    const bool any_param = f.t_opt->count() || f.epsilon_opt->count() || f.q_opt->count();
    if (f.model_opt->count()) {
        m.kind = parse_kind(f.model);
        if (f.t_opt->count()) m.params.t = f.t;
        if (f.epsilon_opt->count()) m.params.epsilon = f.epsilon;
        if (f.q_opt->count()) m.params.q = f.q;
    } else if (from_header) {
        m = *from_header;
        if (f.t_opt->count()) m.params.t = f.t;
        if (f.epsilon_opt->count()) m.params.epsilon = f.epsilon;
        if (f.q_opt->count()) m.params.q = f.q;
    } else {
        throw UsageError(any_param ? "--model is required alongside model parameters"
                                   : "--model is required (the trace file names no model)");
    }
    check_flag_params(m);
    if (f.set_size_opt->count()) m.multi_seed = f.set_size;
    m.validate();
    if (from_header && !(m == *from_header)) {
        err << "warning: model flags override the model recorded in the trace header\n";
    }
    return m;
}

std::optional<ModelSpec> header_model(const TraceSet& set) {
    if (!set.provenance) return std::nullopt;
    return set.provenance->model;
}

Alphabet flag_alphabet(const ModelFlags& f) {
    try {
        return Alphabet(f.alphabet);
    } catch (const Error& e) {
        throw UsageError(std::string("--alphabet: ") + e.what());
    }
}

// Treats several records in one slot as a seed-set unless sizes were given.
Seeds seeds_for(const std::vector<SeedRecord>& records, ModelSpec& model) {
    auto seeds = seeds_from_records(records, model);
    if (!model.is_multi_seed()) {
        bool plural = false;
        for (const auto& slot : seeds.slots) plural |= slot.size() > 1;
        if (plural) {
            for (const auto& slot : seeds.slots) model.multi_seed.push_back(slot.size());
        }
    }
    check_seeds(model, seeds);
    return seeds;
}

std::string format_log(double v) {
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    std::ostringstream s;
    s << std::setprecision(12) << v;
    return s.str();
}

struct AlgorithmFlags {
    std::size_t replicas = 1;
    std::size_t k = 0;
    double p_stop = 0.0;
    std::size_t max_branches = 0;
    std::size_t lookahead = 0;
    std::uint64_t max_candidates = 0;
    CLI::Option* replicas_opt = nullptr;
    CLI::Option* k_opt = nullptr;
    CLI::Option* p_stop_opt = nullptr;
    CLI::Option* max_branches_opt = nullptr;
    CLI::Option* lookahead_opt = nullptr;
    CLI::Option* max_candidates_opt = nullptr;

    std::map<std::string, double> params() const {
        std::map<std::string, double> out;
        if (replicas_opt->count()) out["replicas"] = static_cast<double>(replicas);
        if (k_opt->count()) out["k"] = static_cast<double>(k);
        if (p_stop_opt->count()) out["p_stop"] = p_stop;
        if (max_branches_opt->count()) out["max_branches"] = static_cast<double>(max_branches);
        if (lookahead_opt->count()) out["lookahead"] = static_cast<double>(lookahead);
        if (max_candidates_opt->count()) out["max_candidates"] = static_cast<double>(max_candidates);
        return out;
    }
};

void add_algorithm_flags(CLI::App* app, AlgorithmFlags& f) {
    f.replicas_opt = app->add_option("--replicas", f.replicas,
                                     "Majority vote over this many disjoint sub-trace-sets (odd)");
    f.k_opt = app->add_option("--k", f.k, "mining-d k-mer length (default 9)");
    f.p_stop_opt = app->add_option("--p-stop", f.p_stop, "mining-d extension p-value (default 0.01)");
    f.max_branches_opt = app->add_option("--max-branches", f.max_branches,
                                         "mining-d branch budget per k-mer (default 1)");
    f.lookahead_opt = app->add_option("--lookahead", f.lookahead, "bma lookahead window (default 2)");
    f.max_candidates_opt = app->add_option("--max-candidates", f.max_candidates,
                                           "brute-force universe cap (default 4194304)");
}

Algorithm build_algorithm(const std::string& id, const std::map<std::string, double>& params) {
    auto algorithm = make_algorithm(id);
    if (auto it = params.find("replicas"); it != params.end()) {
        algorithm = amplify(std::move(algorithm), static_cast<std::size_t>(it->second));
    }
    return algorithm;
}

std::vector<std::size_t> lengths_from(const Seeds& seeds) {
    std::vector<std::size_t> out;
    for (const auto& slot : seeds.slots) out.push_back(slot.empty() ? 0 : slot.front().size());
    return out;
}

// --- generate -------------------------------------------------------------

struct GenerateFlags {
    ModelFlags model;
    std::string seeds_path;
    std::string out_path;
    std::string manifest_path;
    std::size_t traces = 0;
    std::uint64_t rng_seed = 0;
    std::uint64_t stream_id = 0;
    unsigned threads = 1;
    CLI::Option* traces_opt = nullptr;
};

int cmd_generate(const GenerateFlags& f, std::ostream& out, std::ostream& err) {
    std::optional<ExperimentManifest> manifest;
    if (!f.manifest_path.empty()) manifest = read_manifest(f.manifest_path);

    ModelSpec model;
    std::optional<Alphabet> alphabet;
    Seeds seeds;
    std::size_t count = f.traces;
    std::uint64_t master = f.rng_seed;
    if (manifest) {
        model = manifest->model;
        alphabet.emplace(manifest->alphabet);
        if (!manifest->seeds) throw UsageError("manifest has no fixed seeds to generate from");
        seeds = *manifest->seeds;
        check_seeds(model, seeds);
        if (!f.traces_opt->count()) count = manifest->traces;
        master = manifest->master_seed;
    } else {
        if (f.seeds_path.empty()) throw UsageError("--seeds is required (or --manifest)");
        if (!f.traces_opt->count()) throw UsageError("--traces is required");
        alphabet.emplace(flag_alphabet(f.model));
        model = resolve_model(f.model, std::nullopt, err);
        seeds = seeds_for(read_seeds(f.seeds_path, *alphabet), model);
    }
    const auto set = generate_trace_set(model, seeds, *alphabet, count,
                                        RandomStream(master, f.stream_id), f.threads);
    write_traces(f.out_path, set);
    out << "wrote " << set.size() << " traces to " << f.out_path << '\n';
    return kExitOk;
}

// --- likelihood -----------------------------------------------------------

struct LikelihoodFlags {
    ModelFlags model;
    std::string input;
    std::string candidates;
    std::vector<std::string> seeds;
};

int cmd_likelihood(const LikelihoodFlags& f, std::ostream& out, std::ostream& err) {
    const auto set = read_traces(f.input);
    auto model = resolve_model(f.model, header_model(set), err);
    std::vector<SeedRecord> records;
    if (!f.candidates.empty()) {
        records = read_seeds(f.candidates, set.alphabet);
    } else if (!f.seeds.empty()) {
        const bool per_slot = seed_slot_count(model.kind) > 1;
        for (std::size_t i = 0; i < f.seeds.size(); ++i) {
            records.push_back({"seed", encode(set.alphabet, f.seeds[i]), per_slot ? i : 0});
        }
    } else {
        throw UsageError("give candidate seeds with --candidates FILE or --seed STRING");
    }
    const auto seeds = seeds_for(records, model);
    const auto lp = lp_trace_set(set.traces, seeds, model, set.alphabet.size());
    out << format_log(lp.log()) << '\n';
    return kExitOk;
}

// --- reconstruct ----------------------------------------------------------

struct ReconstructFlags {
    ModelFlags model;
    AlgorithmFlags algorithm_flags;
    std::string input;
    std::string algorithm;
    std::string out_path;
    std::vector<std::size_t> lengths;
    unsigned threads = 1;
};

// Seed length implied by the traces alone: the common trace length for the
// length-preserving models, max|c| - t for the suffix-extend models.
std::optional<std::size_t> length_from_traces(const ModelSpec& model, const TraceSet& set) {
    if (set.traces.empty()) return std::nullopt;
    std::size_t longest = 0;
    for (const auto& c : set.traces) longest = std::max(longest, c.size());
    switch (model.kind) {
        case ModelKind::trim_suffix_and_extend:
        case ModelKind::trim_and_extend:
        case ModelKind::mutate_trim_and_extend:
            return set.traces.front().size();
        case ModelKind::suffix_extend_trim_suffix:
        case ModelKind::suffix_extend_mutate_trim_suffix: {
            const std::size_t t = model.params.t.value_or(0);
            return longest > t ? longest - t : 0;
        }
        default:
            return std::nullopt;
    }
}

std::vector<std::size_t> infer_lengths(const std::vector<std::size_t>& given, const TraceSet& set,
                                       const ModelSpec& model) {
    if (!given.empty()) return given;
    if (auto n = length_from_traces(model, set)) return {*n};
    if (set.provenance) return lengths_from(set.provenance->seeds);
    throw UsageError("--n is required for model " + std::string(model_name(model.kind)) +
                     " (the trace file records no seed lengths)");
}

int cmd_reconstruct(const ReconstructFlags& f, std::ostream& out, std::ostream& err) {
    const auto set = read_traces(f.input);
    const auto model = resolve_model(f.model, header_model(set), err);
    const auto params = f.algorithm_flags.params();
    const auto algorithm = build_algorithm(f.algorithm, params);
    try {
        algorithm.check(model, set.alphabet.size());
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    AlgorithmContext ctx{model, infer_lengths(f.lengths, set, model), set.alphabet.size(),
                         f.threads, params};
    const auto seeds = algorithm.run(set.traces, ctx);
    for (std::size_t j = 0; j < seeds.slots.size(); ++j) {
        for (const auto& s : seeds.slots[j]) {
            out << "seed\tslot=" << j << '\t' << decode(set.alphabet, s) << '\n';
        }
    }
    double lp = -std::numeric_limits<double>::infinity();
    try {
        lp = lp_trace_set(set.traces, seeds, model, set.alphabet.size()).log();
    } catch (const Error& e) {
        // Heuristic answers can have a shape the model cannot score.
        err << "warning: cannot score the reconstruction: " << e.what() << '\n';
    }
    out << "log_likelihood\t" << format_log(lp) << '\n';
    if (!f.out_path.empty()) write_seeds(f.out_path, records_from_seeds(seeds), set.alphabet);
    return kExitOk;
}

// --- cluster --------------------------------------------------------------

struct ClusterFlags {
    ModelFlags model;
    AlgorithmFlags algorithm_flags;
    std::string input;
    std::string out_path;
    std::string algorithm = "greedy";
    std::size_t d_max = 0;
    std::size_t n = 0;
    std::size_t recover = 0;
    unsigned threads = 1;
    CLI::Option* d_max_opt = nullptr;
    CLI::Option* n_opt = nullptr;
};

int cmd_cluster(const ClusterFlags& f, std::ostream& out, std::ostream& err) {
    const auto set = read_traces(f.input);
    std::optional<ModelSpec> model;
    auto need_model = [&]() -> const ModelSpec& {
        if (!model) model = resolve_model(f.model, header_model(set), err);
        return *model;
    };
    auto seed_length = [&]() -> std::size_t {
        if (f.n_opt->count()) return f.n;
        return infer_lengths({}, set, need_model()).front();
    };

    std::size_t d_max = f.d_max;
    if (!f.d_max_opt->count()) {
        ModelSpec single = need_model();
        single.multi_seed.clear();
        d_max = auto_cluster_radius(single, seed_length());
    }

    if (f.recover > 0) {
        RecoveryOptions options;
        options.d_max = d_max;
        options.threads = f.threads;
        options.params = f.algorithm_flags.params();
        const auto result = population_recover(set.traces, f.recover, need_model(), f.algorithm,
                                               seed_length(), set.alphabet.size(), options);
        out << "clusters\t" << result.clusters_found << "\td_max\t" << result.d_max << '\n';
        for (const auto& s : result.seeds) out << "seed\t" << decode(set.alphabet, s) << '\n';
        if (result.fewer_clusters) {
            err << "warning: found " << result.clusters_found << " cluster(s), fewer than M = "
                << f.recover << '\n';
        }
        return kExitOk;
    }

    const auto clustering = cluster_traces(set.traces, d_max, f.threads);
    out << "clusters\t" << clustering.clusters.size() << "\td_max\t" << d_max << '\n';
    for (std::size_t k = 0; k < clustering.clusters.size(); ++k) {
        out << "cluster\t" << k << "\tsize\t" << clustering.clusters[k].size()
            << "\trepresentative\t" << clustering.representatives[k] << '\n';
    }
    if (!f.out_path.empty()) {
        std::ostringstream doc;
        doc << "{\"format\":\"tracekit-clusters\",\"version\":\"" << kFormatVersion
            << "\",\"d_max\":" << d_max << ",\"clusters\":[";
        for (std::size_t k = 0; k < clustering.clusters.size(); ++k) {
            doc << (k ? "," : "") << "{\"representative\":" << clustering.representatives[k]
                << ",\"members\":[";
            for (std::size_t i = 0; i < clustering.clusters[k].size(); ++i) {
                doc << (i ? "," : "") << clustering.clusters[k][i];
            }
            doc << "]}";
        }
        doc << "]}\n";
        write_text(f.out_path, doc.str());
    }
    return kExitOk;
}

// --- bench ----------------------------------------------------------------

struct BenchFlags {
    ModelFlags model;
    AlgorithmFlags algorithm_flags;
    std::vector<std::string> algorithms;
    std::string seeds_path;
    std::string out_prefix;
    std::string manifest_path;
    std::string save_manifest;
    std::vector<std::size_t> lengths;
    std::size_t traces = 16;
    std::size_t trials = 100;
    std::uint64_t rng_seed = 0;
    double target_rate = kDefaultReconstructionRate;
    unsigned threads = 1;
    bool complexity = false;
    bool timing = false;
};

ExperimentManifest manifest_from_flags(const BenchFlags& f, std::ostream& err) {
    ExperimentManifest m;
    const auto alphabet = flag_alphabet(f.model);
    m.alphabet = alphabet.chars();
    m.model = resolve_model(f.model, std::nullopt, err);
    if (!f.seeds_path.empty()) {
        m.seeds = seeds_for(read_seeds(f.seeds_path, alphabet), m.model);
    } else if (!f.lengths.empty()) {
        m.lengths = f.lengths;
    } else {
        throw UsageError("give seed lengths with --n or a seed file with --seeds");
    }
    if (f.algorithms.empty()) throw UsageError("--algorithm is required (or --manifest)");
    const auto params = f.algorithm_flags.params();
    for (const auto& id : f.algorithms) m.algorithms.push_back({id, params});
    m.traces = f.traces;
    m.trials = f.trials;
    m.master_seed = f.rng_seed;
    m.target_rate = f.target_rate;
    m.complexity = f.complexity;
    return m;
}

std::string summary(const BenchReport& r) {
    std::ostringstream s;
    s << r.algorithm << ' ' << model_name(r.model.kind) << " n=" << r.n << " T=" << r.traces
      << " trials=" << r.trials << " successes=" << r.successes
      << " success_rate=" << r.success_rate << " wilson95=[" << r.wilson_low << ", "
      << r.wilson_high << "]";
    return s.str();
}

std::string summary(const TraceComplexityResult& r) {
    std::ostringstream s;
    s << r.algorithm << ' ' << model_name(r.model.kind) << " n=" << r.n
      << " target_rate=" << r.target_rate << " T*=";
    if (r.t_star) {
        s << *r.t_star;
    } else {
        s << "unreached (cap " << r.t_cap << ")";
    }
    s << " probes=" << r.curve.size();
    return s.str();
}

int cmd_bench(const BenchFlags& f, std::ostream& out, std::ostream& err) {
    const auto manifest = f.manifest_path.empty() ? manifest_from_flags(f, err)
                                                  : read_manifest(f.manifest_path);
    if (!f.save_manifest.empty()) write_manifest(f.save_manifest, manifest);
    std::vector<ExperimentOutput> outputs;
    try {
        outputs = run_manifest(manifest, f.threads, f.timing);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::incompatible) throw UsageError(e.what());
        throw;
    }
    // Files are named after the effective algorithm id (amplified runs carry
    // an "x<replicas>" suffix); repeated ids also get their manifest position.
    std::vector<std::string> names;
    for (const auto& o : outputs) {
        names.push_back(std::visit([](const auto& r) { return r.algorithm; }, o));
    }
    int code = kExitOk;
    for (std::size_t k = 0; k < outputs.size(); ++k) {
        std::string prefix = f.out_prefix;
        if (outputs.size() > 1) {
            prefix += "-" + names[k];
            if (std::count(names.begin(), names.end(), names[k]) > 1) prefix += "-" + std::to_string(k);
        }
        std::visit(
            [&](const auto& report) {
                write_report(prefix + ".json", report, ReportFormat::json);
                write_report(prefix + ".csv", report, ReportFormat::csv);
                out << summary(report) << '\n';
                if constexpr (std::is_same_v<std::decay_t<decltype(report)>, TraceComplexityResult>) {
                    if (!report.bracketed) {
                        err << "error: " << report.algorithm
                            << " did not reach the target rate within T <= " << report.t_cap
                            << "; partial curve written to " << prefix << ".json\n";
                        code = kExitTargetUnreachable;
                    }
                }
            },
            outputs[k]);
    }
    return code;
}

}  // namespace

std::vector<ExperimentOutput> run_manifest(const ExperimentManifest& manifest, unsigned threads,
                                           bool timing) {
    const Alphabet alphabet(manifest.alphabet);
    manifest.model.validate();
    const auto source = manifest.seeds ? SeedSource::fixed_seeds(*manifest.seeds)
                                       : SeedSource::uniform(manifest.lengths);
    // Every algorithm sees the same seeds and trace-sets.
    const RandomStream root(manifest.master_seed);
    std::vector<ExperimentOutput> outputs;
    for (const auto& entry : manifest.algorithms) {
        const auto algorithm = build_algorithm(entry.id, entry.params);
        BenchOptions options;
        options.trials = manifest.trials;
        options.threads = threads;
        options.timing = timing;
        options.target_rate = manifest.target_rate;
        options.params = entry.params;
        if (manifest.complexity) {
            outputs.emplace_back(estimate_trace_complexity(algorithm, manifest.model, source,
                                                           alphabet, root, manifest.traces,
                                                           options));
        } else {
            outputs.emplace_back(estimate_success(algorithm, manifest.model, source, alphabet,
                                                  manifest.traces, root, options));
        }
    }
    return outputs;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"tracekit: trace reconstruction models, likelihoods and benchmarks"};
    app.footer("Models: " + model_list() + "\nAlgorithms: " + algorithm_list() +
               "\nExit codes: 0 success, 2 usage or configuration error, 3 I/O error, "
               "4 benchmark target unreachable");
    app.require_subcommand(1);

    GenerateFlags gen;
    auto* generate = app.add_subcommand("generate", "Sample a trace-set from seeds through a model");
    add_model_flags(generate, gen.model);
    generate->add_option("--seeds", gen.seeds_path, "FASTA seed file ('slot=k' tags pick slots)");
    generate->add_option("--out,-o", gen.out_path, "Output JSON-lines trace file")->required();
    gen.traces_opt = generate->add_option("--traces,-T", gen.traces, "Number of traces T");
    generate->add_option("--rng-seed", gen.rng_seed, "Master random seed (default 0)");
    generate->add_option("--stream-id", gen.stream_id, "Random stream id (default 0)");
    generate->add_option("--threads", gen.threads, "Worker threads (output does not depend on it)");
    generate->add_option("--manifest", gen.manifest_path, "Take model, seeds, T and seed from a manifest");

    LikelihoodFlags lik;
    auto* likelihood = app.add_subcommand("likelihood", "Natural-log Pr(trace-set | seeds)");
    add_model_flags(likelihood, lik.model);
    likelihood->add_option("--input,-i", lik.input, "JSON-lines trace file")->required();
    likelihood->add_option("--candidates", lik.candidates, "FASTA file with the candidate seed(s)");
    likelihood->add_option("--seed", lik.seeds, "Candidate seed string (repeat once per slot)");

    ReconstructFlags rec;
    auto* reconstruct = app.add_subcommand("reconstruct", "Estimate the seed(s) behind a trace-set");
    add_model_flags(reconstruct, rec.model);
    add_algorithm_flags(reconstruct, rec.algorithm_flags);
    reconstruct->add_option("--input,-i", rec.input, "JSON-lines trace file")->required();
    reconstruct->add_option("--algorithm,-a", rec.algorithm, "One of: " + algorithm_list())->required();
    reconstruct->add_option("--n,--lengths", rec.lengths, "Seed length per slot");
    reconstruct->add_option("--out,-o", rec.out_path, "Also write the estimate as FASTA");
    reconstruct->add_option("--threads", rec.threads, "Worker threads");

    ClusterFlags clu;
    auto* cluster = app.add_subcommand("cluster", "Cluster traces by edit distance; optionally recover seeds");
    add_model_flags(cluster, clu.model);
    add_algorithm_flags(cluster, clu.algorithm_flags);
    cluster->add_option("--input,-i", clu.input, "JSON-lines trace file")->required();
    clu.d_max_opt = cluster->add_option("--d-max", clu.d_max,
                                        "Join radius (default 3x expected edit errors, capped at n/4)");
    clu.n_opt = cluster->add_option("--n", clu.n, "Seed length");
    cluster->add_option("--recover", clu.recover, "Reconstruct the M largest clusters");
    cluster->add_option("--algorithm,-a", clu.algorithm, "Per-cluster reconstructor (default greedy)");
    cluster->add_option("--out,-o", clu.out_path, "Write clusters as JSON");
    cluster->add_option("--threads", clu.threads, "Worker threads");

    BenchFlags ben;
    auto* bench = app.add_subcommand("bench", "Monte Carlo success rate or trace complexity");
    add_model_flags(bench, ben.model);
    add_algorithm_flags(bench, ben.algorithm_flags);
    bench->add_option("--algorithm,-a", ben.algorithms, "Algorithm id(s): " + algorithm_list());
    bench->add_option("--seeds", ben.seeds_path, "Fixed seeds (FASTA) instead of uniform random ones");
    bench->add_option("--n,--lengths", ben.lengths, "Uniform random seed length per slot");
    bench->add_option("--traces,-T", ben.traces, "T per trial; the T cap with --complexity (default 16)");
    bench->add_option("--trials", ben.trials, "Trials per estimate (default 100)");
    bench->add_option("--rng-seed", ben.rng_seed, "Master random seed (default 0)");
    bench->add_option("--target-rate", ben.target_rate, "ReconstructionRate target (default 0.95)");
    bench->add_flag("--complexity", ben.complexity, "Search for the smallest T reaching the target");
    bench->add_option("--out,-o", ben.out_prefix, "Report prefix: writes PREFIX.json and PREFIX.csv")
        ->required();
    bench->add_option("--threads", ben.threads, "Worker threads (reports do not depend on it)");
    bench->add_flag("--timing", ben.timing, "Record wall time in reports (breaks byte identity)");
    bench->add_option("--manifest", ben.manifest_path, "Run an experiment manifest");
    bench->add_option("--save-manifest", ben.save_manifest, "Write the effective manifest");

    std::vector<const char*> argv{"tracekit"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*generate) return cmd_generate(gen, out, err);
        if (*likelihood) return cmd_likelihood(lik, out, err);
        if (*reconstruct) return cmd_reconstruct(rec, out, err);
        if (*cluster) return cmd_cluster(clu, out, err);
        if (*bench) return cmd_bench(ben, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::io_error ? kExitIo : kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace tracekit
