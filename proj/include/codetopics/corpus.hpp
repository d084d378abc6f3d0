#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace codetopics {

using Count = std::int64_t;

// Aggregated diagnosis events: patient id -> code -> occurrence count.
// Counts are always >= 1; a (patient, code) pair with no occurrences is
// simply absent. std::map keeps iteration deterministic, so patients get
// stable row indices.
struct RecordSet {
    std::map<std::string, std::map<std::string, Count>> entries;

    bool empty() const { return entries.empty(); }
};

enum class WeightingMode { count, binary };

const char* to_string(WeightingMode mode);
WeightingMode weighting_mode_from_string(const std::string& text);

// Frequency-truncated code list: the minimal descending-frequency prefix
// whose cumulative share of all occurrences reaches the cutoff. Ties at
// equal frequency break by ascending code, so truncation is deterministic.
struct Vocabulary {
    std::vector<std::string> codes;
    std::vector<Count> frequencies;
    double cutoff = 1.0;
    Count total_frequency = 0;     // over all input codes, retained or not
    std::size_t dropped_codes = 0; // codes past the cutoff prefix

    std::size_t size() const { return codes.size(); }
    std::optional<std::size_t> index_of(const std::string& code) const;
};

// Patient x code count matrix, stored sparsely by row. Rows follow the
// RecordSet's patient order; columns follow the vocabulary order.
struct CorpusMatrix {
    std::size_t num_patients = 0; // M
    std::size_t num_codes = 0;    // V
    WeightingMode mode = WeightingMode::count;
    // Per patient: (column, count) pairs sorted by column, all counts >= 1.
    std::vector<std::vector<std::pair<std::uint32_t, Count>>> rows;
    std::vector<Count> row_totals; // N_i, always > 0
    std::vector<std::string> patient_ids;
    std::vector<std::string> codes; // column labels, copied from the vocabulary
    std::size_t dropped_patients = 0;

    Count total_tokens() const;
    Count cell(std::size_t patient, std::size_t column) const;
};

// Frequency-rank data for Fig. 1/2-style plots plus the drop tallies.
struct CorpusStats {
    std::vector<std::string> codes; // sorted by descending matrix count
    std::vector<Count> counts;
    std::vector<double> cumulative; // non-decreasing, ends at exactly 1.0
    std::size_t dropped_patients = 0;
    std::size_t dropped_codes = 0;
};

// Reads the record CSV (`patient_id,code[,count]`, count defaults to 1,
// optional `patient_id,code,count` header, '#' comment lines skipped).
// Duplicate (patient, code) lines are summed.
RecordSet parse_records(std::istream& in);

// cutoff in (0, 1]. Throws EmptyCorpusError on an empty RecordSet.
Vocabulary build_vocabulary(const RecordSet& records, double cutoff);

// Out-of-vocabulary codes are dropped; patients left without any
// in-vocabulary token are dropped and tallied. Binary mode clamps each
// cell to 1.
CorpusMatrix build_matrix(const RecordSet& records, const Vocabulary& vocab,
                          WeightingMode mode);

CorpusStats corpus_stats(const CorpusMatrix& matrix, const Vocabulary& vocab);

// Diagnostic tf-idf weight for one cell: count * ln(M / document_frequency).
// Report-only; the sampler always consumes integer counts.
double tfidf_weight(Count count, std::size_t num_patients,
                    std::size_t document_frequency);

} // namespace codetopics
