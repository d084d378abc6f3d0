#include "codetopics/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <unordered_map>

#include "codetopics/errors.hpp"

namespace codetopics {

const char* to_string(WeightingMode mode) {
    return mode == WeightingMode::count ? "count" : "binary";
}

WeightingMode weighting_mode_from_string(const std::string& text) {
    if (text == "count") {
        return WeightingMode::count;
    }
    if (text == "binary") {
        return WeightingMode::binary;
    }
    throw ValidationError("unknown weighting mode '" + text + "' (use count or binary)");
}

std::optional<std::size_t> Vocabulary::index_of(const std::string& code) const {
    for (std::size_t i = 0; i < codes.size(); ++i) {
        if (codes[i] == code) {
            return i;
        }
    }
    return std::nullopt;
}

Count CorpusMatrix::total_tokens() const {
    Count total = 0;
    for (const Count n : row_totals) {
        total += n;
    }
    return total;
}

Count CorpusMatrix::cell(std::size_t patient, std::size_t column) const {
    const auto& row = rows[patient];
    const auto it = std::lower_bound(
        row.begin(), row.end(), column,
        [](const auto& entry, std::size_t col) { return entry.first < col; });
    if (it != row.end() && it->first == column) {
        return it->second;
    }
    return 0;
}

namespace {

// Splits on commas only; fields are opaque strings without embedded commas.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

Count parse_count_field(const std::string& field, std::size_t line_number) {
    Count value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError("line " + std::to_string(line_number) +
                         ": count must be an integer, got '" + field + "'");
    }
    if (value < 1) {
        throw ParseError("line " + std::to_string(line_number) +
                         ": count must be >= 1, got " + field);
    }
    return value;
}

} // namespace

RecordSet parse_records(std::istream& in) {
    RecordSet records;
    std::string line;
    std::size_t line_number = 0;
    bool saw_first_content_line = false;

    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!saw_first_content_line) {
            saw_first_content_line = true;
            if (line == "patient_id,code,count" || line == "patient_id,code") {
                continue; // optional header
            }
        }

        const auto fields = split_csv_line(line);
        if (fields.size() != 2 && fields.size() != 3) {
            throw ParseError("line " + std::to_string(line_number) +
                             ": expected patient_id,code[,count], got " +
                             std::to_string(fields.size()) + " fields");
        }
        if (fields[0].empty() || fields[1].empty()) {
            throw ParseError("line " + std::to_string(line_number) +
                             ": empty patient id or code");
        }
        const Count count =
            fields.size() == 3 ? parse_count_field(fields[2], line_number) : 1;
        records.entries[fields[0]][fields[1]] += count;
    }

    if (records.empty()) {
        throw EmptyCorpusError("no data rows in record input");
    }
    return records;
}

Vocabulary build_vocabulary(const RecordSet& records, double cutoff) {
    if (!(cutoff > 0.0 && cutoff <= 1.0)) {
        throw ValidationError("cutoff must be in (0, 1], got " + std::to_string(cutoff));
    }
    if (records.empty()) {
        throw EmptyCorpusError("cannot build a vocabulary from an empty record set");
    }

    std::map<std::string, Count> totals;
    for (const auto& [patient, codes] : records.entries) {
        for (const auto& [code, count] : codes) {
            totals[code] += count;
        }
    }

    // Descending frequency, ties by ascending code. The map already orders
    // codes ascending, so a stable sort on frequency keeps the tie rule.
    std::vector<std::pair<std::string, Count>> sorted(totals.begin(), totals.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });

    Count grand_total = 0;
    for (const auto& [code, count] : sorted) {
        grand_total += count;
    }

    Vocabulary vocab;
    vocab.cutoff = cutoff;
    vocab.total_frequency = grand_total;

    // Minimal prefix whose cumulative fraction reaches the cutoff.
    Count running = 0;
    std::size_t retained = 0;
    while (retained < sorted.size()) {
        running += sorted[retained].second;
        ++retained;
        const double fraction =
            static_cast<double>(running) / static_cast<double>(grand_total);
        if (fraction >= cutoff) {
            break;
        }
    }

    vocab.codes.reserve(retained);
    vocab.frequencies.reserve(retained);
    for (std::size_t i = 0; i < retained; ++i) {
        vocab.codes.push_back(sorted[i].first);
        vocab.frequencies.push_back(sorted[i].second);
    }
    vocab.dropped_codes = sorted.size() - retained;
    return vocab;
}

CorpusMatrix build_matrix(const RecordSet& records, const Vocabulary& vocab,
                          WeightingMode mode) {
    std::unordered_map<std::string, std::uint32_t> column_of;
    column_of.reserve(vocab.codes.size());
    for (std::size_t i = 0; i < vocab.codes.size(); ++i) {
        column_of.emplace(vocab.codes[i], static_cast<std::uint32_t>(i));
    }

    CorpusMatrix matrix;
    matrix.num_codes = vocab.codes.size();
    matrix.mode = mode;
    matrix.codes = vocab.codes;

    for (const auto& [patient, codes] : records.entries) {
        std::vector<std::pair<std::uint32_t, Count>> row;
        for (const auto& [code, count] : codes) {
            const auto it = column_of.find(code);
            if (it == column_of.end()) {
                continue; // out-of-vocabulary
            }
            const Count value = mode == WeightingMode::binary ? std::min<Count>(count, 1) : count;
            row.emplace_back(it->second, value);
        }
        if (row.empty()) {
            ++matrix.dropped_patients;
            continue;
        }
        std::sort(row.begin(), row.end());
        Count total = 0;
        for (const auto& [col, value] : row) {
            total += value;
        }
        matrix.rows.push_back(std::move(row));
        matrix.row_totals.push_back(total);
        matrix.patient_ids.push_back(patient);
    }

    matrix.num_patients = matrix.rows.size();
    if (matrix.num_patients == 0) {
        throw EmptyCorpusError("every patient was dropped by vocabulary truncation");
    }
    return matrix;
}

CorpusStats corpus_stats(const CorpusMatrix& matrix, const Vocabulary& vocab) {
    if (matrix.num_patients == 0) {
        throw ValidationError("corpus_stats requires a nonempty matrix");
    }

    std::vector<Count> column_totals(matrix.num_codes, 0);
    for (const auto& row : matrix.rows) {
        for (const auto& [col, value] : row) {
            column_totals[col] += value;
        }
    }

    std::vector<std::size_t> order(matrix.num_codes);
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (column_totals[a] != column_totals[b]) {
            return column_totals[a] > column_totals[b];
        }
        return vocab.codes[a] < vocab.codes[b];
    });

    Count grand_total = 0;
    for (const Count c : column_totals) {
        grand_total += c;
    }

    CorpusStats stats;
    stats.dropped_patients = matrix.dropped_patients;
    stats.dropped_codes = vocab.dropped_codes;
    stats.codes.reserve(order.size());
    stats.counts.reserve(order.size());
    stats.cumulative.reserve(order.size());
    Count running = 0;
    for (const std::size_t idx : order) {
        running += column_totals[idx];
        stats.codes.push_back(vocab.codes[idx]);
        stats.counts.push_back(column_totals[idx]);
        // Integer running sum, so the last entry is exactly 1.0.
        stats.cumulative.push_back(static_cast<double>(running) /
                                   static_cast<double>(grand_total));
    }
    return stats;
}

double tfidf_weight(Count count, std::size_t num_patients,
                    std::size_t document_frequency) {
    if (document_frequency == 0 || num_patients == 0) {
        throw ValidationError("tf-idf needs a positive document frequency and patient count");
    }
    return static_cast<double>(count) *
           std::log(static_cast<double>(num_patients) /
                    static_cast<double>(document_frequency));
}

} // namespace codetopics
