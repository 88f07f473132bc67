#pragma once
// File formats: FASTA seeds, JSON-lines trace-sets, JSON/CSV reports and
// experiment manifests. Every JSON document carries "format" and "version";
// readers reject other major versions.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tracekit/bench.hpp"
#include "tracekit/channels.hpp"
#include "tracekit/core.hpp"

namespace tracekit {

inline constexpr const char* kFormatVersion = "1.0";

struct SeedRecord {
    std::string name;  // header text after ">", slot tag removed
    SymbolString seq;
    // From a "slot=<k>" token in the header; 0 when absent.
    std::size_t slot = 0;

    bool operator==(const SeedRecord&) const = default;
};

/// FASTA: '>' header lines, sequence lines concatenated. Blank lines are
/// skipped. Illegal symbols and text before the first header are reported
/// with 1-based line and column.
std::vector<SeedRecord> parse_fasta(std::istream& in, const Alphabet& alphabet);
void format_fasta(std::ostream& out, const std::vector<SeedRecord>& records,
                  const Alphabet& alphabet);

std::vector<SeedRecord> read_seeds(const std::filesystem::path& path, const Alphabet& alphabet);
void write_seeds(const std::filesystem::path& path, const std::vector<SeedRecord>& records,
                 const Alphabet& alphabet);

/// Groups records into model slots (by their slot tag, order preserved).
Seeds seeds_from_records(const std::vector<SeedRecord>& records, const ModelSpec& model);
std::vector<SeedRecord> records_from_seeds(const Seeds& seeds);

/// JSON-lines trace-set: a header object, then one {"seq", "seed_id"?,
/// "trial"?} object per trace.
TraceSet parse_traces(std::istream& in);
void format_traces(std::ostream& out, const TraceSet& traces);
TraceSet read_traces(const std::filesystem::path& path);
void write_traces(const std::filesystem::path& path, const TraceSet& traces);

/// CSV columns, in order.
const std::vector<std::string>& report_csv_columns();

std::string report_to_json(const BenchReport& report);
std::string report_to_json(const TraceComplexityResult& result);
BenchReport bench_report_from_json(const std::string& text);
TraceComplexityResult complexity_from_json(const std::string& text);
/// One row for a BenchReport; one row per probed T for a complexity result.
std::string report_to_csv(const BenchReport& report);
std::string report_to_csv(const TraceComplexityResult& result);

enum class ReportFormat { json, csv };

void write_report(const std::filesystem::path& path, const BenchReport& report,
                  ReportFormat format);
void write_report(const std::filesystem::path& path, const TraceComplexityResult& result,
                  ReportFormat format);

struct AlgorithmEntry {
    std::string id;
    std::map<std::string, double> params;  // "replicas" selects amplification

    bool operator==(const AlgorithmEntry&) const = default;
};

struct ExperimentManifest {
    std::string alphabet = "ACGT";
    ModelSpec model;
    std::optional<Seeds> seeds;       // fixed seeds, or
    std::vector<std::size_t> lengths; // uniform random seeds of these lengths
    std::size_t traces = 1;           // T (the T cap in complexity mode)
    std::size_t trials = 100;
    std::uint64_t master_seed = 0;
    std::vector<AlgorithmEntry> algorithms;
    double target_rate = kDefaultReconstructionRate;
    bool complexity = false;

    bool operator==(const ExperimentManifest&) const = default;
};

std::string manifest_to_json(const ExperimentManifest& manifest);
ExperimentManifest manifest_from_json(const std::string& text);
ExperimentManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const ExperimentManifest& manifest);

/// Whole-file helpers; failures raise io_error.
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace tracekit
