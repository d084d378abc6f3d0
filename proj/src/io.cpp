#include "codetopics/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "codetopics/errors.hpp"

namespace codetopics {

std::string format_real(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

namespace {

void emit_config(std::ostream& out, const std::vector<std::string>& config) {
    for (const std::string& line : config) {
        out << "# " << line << '\n';
    }
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

template <typename Int>
Int parse_int(const std::string& field, std::size_t line_number, const char* what) {
    Int value{};
    const char* first = field.data();
    const char* last = first + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError("line " + std::to_string(line_number) + ": bad " + what +
                         " '" + field + "'");
    }
    return value;
}

double parse_real(const std::string& field, std::size_t line_number, const char* what) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = first + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError("line " + std::to_string(line_number) + ": bad " + what +
                         " '" + field + "'");
    }
    return value;
}

// Splits a metadata comment like "# M=3 V=5 mode=count" into key/value pairs.
std::map<std::string, std::string> comment_fields(const std::string& line) {
    std::map<std::string, std::string> fields;
    std::istringstream words(line.substr(1));
    std::string word;
    while (words >> word) {
        const std::size_t eq = word.find('=');
        if (eq != std::string::npos) {
            fields[word.substr(0, eq)] = word.substr(eq + 1);
        }
    }
    return fields;
}

bool strip_line_ends(std::string& line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
        line.pop_back();
    }
    return !line.empty();
}

std::string json_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size() + 2);
    for (const char ch : text) {
        switch (ch) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\b': out += "\\b"; break;
        case '\f': out += "\\f"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(ch) < 0x20) {
                char buffer[8];
                std::snprintf(buffer, sizeof buffer, "\\u%04x",
                              static_cast<unsigned>(static_cast<unsigned char>(ch)));
                out += buffer;
            } else {
                out += ch;
            }
        }
    }
    return out;
}

void write_real_array(std::ostream& out, const double* values, std::size_t count) {
    out << '[';
    for (std::size_t i = 0; i < count; ++i) {
        if (i > 0) {
            out << ',';
        }
        out << format_real(values[i]);
    }
    out << ']';
}

} // namespace

void write_vocabulary_tsv(std::ostream& out, const Vocabulary& vocab,
                          const std::vector<std::string>& config) {
    emit_config(out, config);
    out << "# cutoff=" << format_real(vocab.cutoff)
        << " total_frequency=" << vocab.total_frequency
        << " dropped_codes=" << vocab.dropped_codes << '\n';
    out << "# columns: rank code count cumulative_fraction\n";
    Count running = 0;
    for (std::size_t i = 0; i < vocab.codes.size(); ++i) {
        running += vocab.frequencies[i];
        const double fraction = static_cast<double>(running) /
                                static_cast<double>(vocab.total_frequency);
        out << (i + 1) << '\t' << vocab.codes[i] << '\t' << vocab.frequencies[i]
            << '\t' << format_real(fraction) << '\n';
    }
}

Vocabulary read_vocabulary_tsv(std::istream& in) {
    Vocabulary vocab;
    bool saw_metadata = false;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!strip_line_ends(line)) {
            continue;
        }
        if (line[0] == '#') {
            const auto fields = comment_fields(line);
            const auto cutoff = fields.find("cutoff");
            if (cutoff != fields.end() && fields.count("total_frequency") &&
                fields.count("dropped_codes")) {
                vocab.cutoff = parse_real(cutoff->second, line_number, "cutoff");
                vocab.total_frequency = parse_int<Count>(fields.at("total_frequency"),
                                                         line_number, "total_frequency");
                vocab.dropped_codes = parse_int<std::size_t>(
                    fields.at("dropped_codes"), line_number, "dropped_codes");
                saw_metadata = true;
            }
            continue;
        }
        const auto fields = split_tabs(line);
        if (fields.size() != 4) {
            throw ParseError("line " + std::to_string(line_number) +
                             ": expected 4 tab-separated fields, got " +
                             std::to_string(fields.size()));
        }
        vocab.codes.push_back(fields[1]);
        vocab.frequencies.push_back(parse_int<Count>(fields[2], line_number, "count"));
    }
    if (vocab.codes.empty()) {
        throw EmptyCorpusError("vocabulary file has no data rows");
    }
    if (!saw_metadata) {
        vocab.cutoff = 1.0;
        vocab.total_frequency = 0;
        for (const Count f : vocab.frequencies) {
            vocab.total_frequency += f;
        }
        vocab.dropped_codes = 0;
    }
    return vocab;
}

void write_matrix_tsv(std::ostream& out, const CorpusMatrix& matrix,
                      const std::vector<std::string>& config) {
    emit_config(out, config);
    out << "# M=" << matrix.num_patients << " V=" << matrix.num_codes
        << " mode=" << to_string(matrix.mode)
        << " dropped_patients=" << matrix.dropped_patients << '\n';
    for (const std::string& id : matrix.patient_ids) {
        out << "# patient=" << id << '\n';
    }
    out << "# columns: patient_index code_index count\n";
    for (std::size_t i = 0; i < matrix.num_patients; ++i) {
        for (const auto& [col, count] : matrix.rows[i]) {
            out << i << '\t' << col << '\t' << count << '\n';
        }
    }
}

CorpusMatrix read_matrix_tsv(std::istream& in) {
    CorpusMatrix matrix;
    bool saw_header = false;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!strip_line_ends(line)) {
            continue;
        }
        if (line[0] == '#') {
            if (line.rfind("# patient=", 0) == 0) {
                matrix.patient_ids.push_back(line.substr(10));
                continue;
            }
            const auto fields = comment_fields(line);
            const auto m = fields.find("M");
            if (m != fields.end() && fields.count("V") && fields.count("mode")) {
                matrix.num_patients =
                    parse_int<std::size_t>(m->second, line_number, "M");
                matrix.num_codes =
                    parse_int<std::size_t>(fields.at("V"), line_number, "V");
                matrix.mode = weighting_mode_from_string(fields.at("mode"));
                if (fields.count("dropped_patients")) {
                    matrix.dropped_patients = parse_int<std::size_t>(
                        fields.at("dropped_patients"), line_number, "dropped_patients");
                }
                matrix.rows.assign(matrix.num_patients, {});
                saw_header = true;
            }
            continue;
        }
        if (!saw_header) {
            throw ParseError("line " + std::to_string(line_number) +
                             ": data before the '# M= V= mode=' header");
        }
        const auto fields = split_tabs(line);
        if (fields.size() != 3) {
            throw ParseError("line " + std::to_string(line_number) +
                             ": expected 3 tab-separated fields, got " +
                             std::to_string(fields.size()));
        }
        const auto patient =
            parse_int<std::size_t>(fields[0], line_number, "patient_index");
        const auto column =
            parse_int<std::uint32_t>(fields[1], line_number, "code_index");
        const auto count = parse_int<Count>(fields[2], line_number, "count");
        if (patient >= matrix.num_patients) {
            throw ParseError("line " + std::to_string(line_number) +
                             ": patient_index " + std::to_string(patient) +
                             " out of range (M=" + std::to_string(matrix.num_patients) +
                             ")");
        }
        if (column >= matrix.num_codes) {
            throw ParseError("line " + std::to_string(line_number) + ": code_index " +
                             std::to_string(column) + " out of range (V=" +
                             std::to_string(matrix.num_codes) + ")");
        }
        if (count < 1) {
            throw ParseError("line " + std::to_string(line_number) +
                             ": count must be >= 1, got " + std::to_string(count));
        }
        matrix.rows[patient].emplace_back(column, count);
    }
    if (!saw_header) {
        throw ParseError("matrix file is missing the '# M= V= mode=' header");
    }

    matrix.row_totals.assign(matrix.num_patients, 0);
    for (std::size_t i = 0; i < matrix.num_patients; ++i) {
        auto& row = matrix.rows[i];
        std::sort(row.begin(), row.end());
        for (std::size_t e = 0; e < row.size(); ++e) {
            if (e > 0 && row[e].first == row[e - 1].first) {
                throw ParseError("duplicate cell for patient " + std::to_string(i) +
                                 ", code " + std::to_string(row[e].first));
            }
            matrix.row_totals[i] += row[e].second;
        }
        if (row.empty()) {
            throw ParseError("patient " + std::to_string(i) + " has no entries");
        }
    }
    if (matrix.patient_ids.size() != matrix.num_patients) {
        matrix.patient_ids.resize(matrix.num_patients);
        for (std::size_t i = 0; i < matrix.num_patients; ++i) {
            matrix.patient_ids[i] = "row" + std::to_string(i);
        }
    }
    return matrix;
}

void attach_vocabulary(CorpusMatrix& matrix, const Vocabulary& vocab) {
    if (vocab.size() != matrix.num_codes) {
        throw ValidationError("vocabulary size " + std::to_string(vocab.size()) +
                              " does not match matrix V=" +
                              std::to_string(matrix.num_codes));
    }
    matrix.codes = vocab.codes;
}

void write_stats_tsv(std::ostream& out, const CorpusStats& stats,
                     const std::vector<std::string>& config) {
    emit_config(out, config);
    out << "# columns: rank code count cumulative_fraction\n";
    for (std::size_t i = 0; i < stats.codes.size(); ++i) {
        out << (i + 1) << '\t' << stats.codes[i] << '\t' << stats.counts[i] << '\t'
            << format_real(stats.cumulative[i]) << '\n';
    }
    out << "#dropped_patients " << stats.dropped_patients << '\n';
    out << "#dropped_codes " << stats.dropped_codes << '\n';
}

void write_tfidf_tsv(std::ostream& out, const CorpusMatrix& matrix,
                     const std::vector<std::string>& config) {
    emit_config(out, config);
    std::vector<std::size_t> document_frequency(matrix.num_codes, 0);
    for (const auto& row : matrix.rows) {
        for (const auto& [col, count] : row) {
            document_frequency[col] += 1;
        }
    }
    out << "# columns: patient_index code_index tfidf\n";
    for (std::size_t i = 0; i < matrix.num_patients; ++i) {
        for (const auto& [col, count] : matrix.rows[i]) {
            out << i << '\t' << col << '\t'
                << format_real(tfidf_weight(count, matrix.num_patients,
                                            document_frequency[col]))
                << '\n';
        }
    }
}

void write_records_csv(std::ostream& out, const RecordSet& records,
                       const std::vector<std::string>& config) {
    emit_config(out, config);
    out << "patient_id,code,count\n";
    for (const auto& [patient, codes] : records.entries) {
        for (const auto& [code, count] : codes) {
            out << patient << ',' << code << ',' << count << '\n';
        }
    }
}

void write_sweep_tsv(std::ostream& out, const KSweepResult& result, int selected_k,
                     const std::vector<std::string>& config) {
    emit_config(out, config);
    out << "# columns: K chain seed log_likelihood\n";
    for (std::size_t g = 0; g < result.grid.size(); ++g) {
        for (std::size_t c = 0; c < result.chains[g].size(); ++c) {
            const ChainFit& fit = result.chains[g][c];
            out << result.grid[g] << '\t' << c << '\t' << fit.seed << '\t'
                << format_real(fit.log_likelihood) << '\n';
        }
    }
    out << "#summary columns: K mean_log_likelihood\n";
    for (std::size_t g = 0; g < result.grid.size(); ++g) {
        out << result.grid[g] << '\t' << format_real(result.mean_log_likelihood[g])
            << '\n';
    }
    out << "#selected " << selected_k << '\n';
}

void write_model_json(std::ostream& out, const TopicModel& model) {
    const std::size_t v = model.vocabulary.size();
    const auto k = static_cast<std::size_t>(model.hp.num_topics);

    out << "{\n";
    out << "  \"format_version\": 1,\n";
    out << "  \"rng\": \"" << json_escape(model.rng_algorithm) << "\",\n";
    out << "  \"K\": " << model.hp.num_topics << ",\n";
    out << "  \"doc_topic_prior\": " << format_real(model.hp.doc_topic_prior) << ",\n";
    out << "  \"topic_code_prior\": " << format_real(model.hp.topic_code_prior)
        << ",\n";
    out << "  \"seed\": " << model.seed << ",\n";
    out << "  \"burn_in\": " << model.burn_in << ",\n";
    out << "  \"keep\": " << model.keep << ",\n";
    out << "  \"sweeps\": " << model.sweeps << ",\n";
    out << "  \"log_likelihood\": " << format_real(model.log_likelihood) << ",\n";

    out << "  \"vocabulary\": [";
    for (std::size_t c = 0; c < v; ++c) {
        if (c > 0) {
            out << ',';
        }
        out << '"' << json_escape(model.vocabulary[c]) << '"';
    }
    out << "],\n";

    out << "  \"phi\": [\n";
    for (std::size_t t = 0; t < k; ++t) {
        out << "    ";
        write_real_array(out, model.phi.row(t), v);
        out << (t + 1 < k ? ",\n" : "\n");
    }
    out << "  ],\n";

    if (model.theta.empty()) {
        out << "  \"theta\": null,\n";
    } else {
        out << "  \"theta\": [\n";
        for (std::size_t i = 0; i < model.theta.rows; ++i) {
            out << "    ";
            write_real_array(out, model.theta.row(i), model.theta.cols);
            out << (i + 1 < model.theta.rows ? ",\n" : "\n");
        }
        out << "  ],\n";
    }

    if (!model.has_counts()) {
        out << "  \"n_tc\": null\n";
    } else {
        out << "  \"n_tc\": [\n";
        for (std::size_t t = 0; t < k; ++t) {
            out << "    [";
            for (std::size_t c = 0; c < v; ++c) {
                if (c > 0) {
                    out << ',';
                }
                out << model.topic_code_counts[t * v + c];
            }
            out << ']' << (t + 1 < k ? ",\n" : "\n");
        }
        out << "  ]\n";
    }
    out << "}\n";
}

TopicModel read_model_json(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model JSON: ") + e.what());
    }

    try {
        if (doc.at("format_version").get<int>() != 1) {
            throw ParseError("unsupported model format_version");
        }
        TopicModel model;
        model.hp.num_topics = doc.at("K").get<int>();
        model.hp.doc_topic_prior = doc.at("doc_topic_prior").get<double>();
        model.hp.topic_code_prior = doc.at("topic_code_prior").get<double>();
        model.seed = doc.at("seed").get<std::uint64_t>();
        model.burn_in = doc.at("burn_in").get<std::int64_t>();
        model.keep = doc.at("keep").get<std::int64_t>();
        model.sweeps = doc.at("sweeps").get<std::int64_t>();
        model.log_likelihood = doc.at("log_likelihood").get<double>();
        if (doc.contains("rng")) {
            model.rng_algorithm = doc.at("rng").get<std::string>();
        }
        model.vocabulary = doc.at("vocabulary").get<std::vector<std::string>>();

        const std::size_t v = model.vocabulary.size();
        const auto k = static_cast<std::size_t>(model.hp.num_topics);
        if (model.hp.num_topics < 1) {
            throw ParseError("model K must be >= 1");
        }

        const auto& phi = doc.at("phi");
        if (!phi.is_array() || phi.size() != k) {
            throw ParseError("phi must have K rows");
        }
        model.phi = DenseMatrix(k, v);
        for (std::size_t t = 0; t < k; ++t) {
            const auto& row = phi.at(t);
            if (!row.is_array() || row.size() != v) {
                throw ParseError("phi row " + std::to_string(t) +
                                 " must have V entries");
            }
            for (std::size_t c = 0; c < v; ++c) {
                model.phi.at(t, c) = row.at(c).get<double>();
            }
        }

        const auto& theta = doc.at("theta");
        if (!theta.is_null()) {
            const std::size_t m = theta.size();
            model.theta = DenseMatrix(m, k);
            for (std::size_t i = 0; i < m; ++i) {
                const auto& row = theta.at(i);
                if (!row.is_array() || row.size() != k) {
                    throw ParseError("theta row " + std::to_string(i) +
                                     " must have K entries");
                }
                for (std::size_t t = 0; t < k; ++t) {
                    model.theta.at(i, t) = row.at(t).get<double>();
                }
            }
        }

        const auto& counts = doc.at("n_tc");
        if (!counts.is_null()) {
            if (!counts.is_array() || counts.size() != k) {
                throw ParseError("n_tc must have K rows");
            }
            model.topic_code_counts.assign(k * v, 0);
            for (std::size_t t = 0; t < k; ++t) {
                const auto& row = counts.at(t);
                if (!row.is_array() || row.size() != v) {
                    throw ParseError("n_tc row " + std::to_string(t) +
                                     " must have V entries");
                }
                for (std::size_t c = 0; c < v; ++c) {
                    model.topic_code_counts[t * v + c] = row.at(c).get<std::int64_t>();
                }
            }
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model JSON: ") + e.what());
    }
}

void write_ground_truth_json(std::ostream& out, const GroundTruth& truth,
                             const SynthConfig& cfg) {
    out << "{\n";
    out << "  \"config\": {\"K_true\": " << cfg.true_num_topics
        << ", \"V\": " << cfg.vocab_size << ", \"M\": " << cfg.num_patients
        << ", \"mean_doc_length\": " << format_real(cfg.mean_doc_length)
        << ", \"topic_code_concentration\": "
        << format_real(cfg.topic_code_concentration)
        << ", \"doc_topic_concentration\": "
        << format_real(cfg.doc_topic_concentration) << ", \"seed\": " << cfg.seed
        << "},\n";

    out << "  \"code_names\": [";
    for (std::size_t c = 0; c < truth.code_names.size(); ++c) {
        if (c > 0) {
            out << ',';
        }
        out << '"' << json_escape(truth.code_names[c]) << '"';
    }
    out << "],\n";

    out << "  \"patient_ids\": [";
    for (std::size_t i = 0; i < truth.patient_ids.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << '"' << json_escape(truth.patient_ids[i]) << '"';
    }
    out << "],\n";

    out << "  \"phi_star\": [\n";
    for (std::size_t t = 0; t < truth.phi_star.rows; ++t) {
        out << "    ";
        write_real_array(out, truth.phi_star.row(t), truth.phi_star.cols);
        out << (t + 1 < truth.phi_star.rows ? ",\n" : "\n");
    }
    out << "  ],\n";

    out << "  \"theta_star\": [\n";
    for (std::size_t i = 0; i < truth.theta_star.rows; ++i) {
        out << "    ";
        write_real_array(out, truth.theta_star.row(i), truth.theta_star.cols);
        out << (i + 1 < truth.theta_star.rows ? ",\n" : "\n");
    }
    out << "  ],\n";

    out << "  \"topic_labels\": [\n";
    for (std::size_t i = 0; i < truth.topic_labels.size(); ++i) {
        out << "    [";
        for (std::size_t j = 0; j < truth.topic_labels[i].size(); ++j) {
            if (j > 0) {
                out << ',';
            }
            out << truth.topic_labels[i][j];
        }
        out << ']' << (i + 1 < truth.topic_labels.size() ? ",\n" : "\n");
    }
    out << "  ]\n";
    out << "}\n";
}

void write_top_codes_tsv(std::ostream& out, const TopCodes& top,
                         const std::vector<std::string>& codes,
                         const std::vector<std::string>& config) {
    emit_config(out, config);
    out << "# topic=" << top.topic << " threshold=" << format_real(top.threshold)
        << '\n';
    out << "# columns: code probability\n";
    for (const TopCodeEntry& entry : top.entries) {
        out << codes[entry.code_index] << '\t' << format_real(entry.probability)
            << '\n';
    }
    out << "#cumulative " << format_real(top.cumulative_mass) << '\n';
}

void write_entropy_tsv(std::ostream& out, const DenseMatrix& phi,
                       const std::vector<std::string>& config) {
    emit_config(out, config);
    out << "# units=bits\n";
    out << "# columns: topic entropy_bits\n";
    for (std::size_t t = 0; t < phi.rows; ++t) {
        out << t << '\t'
            << format_real(topic_entropy(std::span(phi.row(t), phi.cols))) << '\n';
    }
    out << "#uniform " << format_real(std::log2(static_cast<double>(phi.cols)))
        << '\n';
}

void write_jsd_tsv(std::ostream& out, const JsdSummary& summary,
                   const std::vector<std::string>& config) {
    emit_config(out, config);
    out << "# units=nats\n";
    for (std::size_t a = 0; a < summary.matrix.rows; ++a) {
        for (std::size_t b = 0; b < summary.matrix.cols; ++b) {
            if (b > 0) {
                out << '\t';
            }
            out << format_real(summary.matrix.at(a, b));
        }
        out << '\n';
    }
    out << "# summary: mean sd median min\n";
    out << "#summary " << format_real(summary.mean) << ' ' << format_real(summary.sd)
        << ' ' << format_real(summary.median) << ' ' << format_real(summary.min)
        << '\n';
}

void write_code_probabilities_tsv(std::ostream& out, const DenseMatrix& phi,
                                  int topic,
                                  const std::vector<std::string>& config) {
    if (topic < 0 || static_cast<std::size_t>(topic) >= phi.rows) {
        throw ValidationError("topic index " + std::to_string(topic) +
                              " out of range");
    }
    emit_config(out, config);
    out << "# topic=" << topic << '\n';
    out << "# columns: code_index probability\n";
    for (std::size_t c = 0; c < phi.cols; ++c) {
        out << c << '\t' << format_real(phi.at(static_cast<std::size_t>(topic), c))
            << '\n';
    }
}

void write_occurrence_split_tsv(std::ostream& out,
                                const std::vector<OccurrenceSplitRow>& rows,
                                const std::vector<std::string>& codes, int topic,
                                const std::vector<std::string>& config) {
    emit_config(out, config);
    out << "# topic=" << topic << '\n';
    out << "# columns: code topic_count corpus_count\n";
    for (const OccurrenceSplitRow& row : rows) {
        out << codes[row.code_index] << '\t' << row.topic_count << '\t'
            << row.corpus_count << '\n';
    }
}

void write_recommendation_json(std::ostream& out, const Recommendation& rec) {
    out << "{\n";
    out << "  \"query\": \"" << json_escape(rec.query) << "\",\n";
    out << "  \"mode\": \"" << to_string(rec.mode) << "\",\n";
    out << "  \"threshold\": " << format_real(rec.threshold) << ",\n";
    out << "  \"topics\": [";
    for (std::size_t i = 0; i < rec.topics.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << "{\"id\": " << rec.topics[i].topic
            << ", \"score\": " << format_real(rec.topics[i].score) << '}';
    }
    out << "],\n";
    out << "  \"suggestions\": [";
    for (std::size_t i = 0; i < rec.suggestions.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << "{\"code\": \"" << json_escape(rec.suggestions[i].code)
            << "\", \"probability\": " << format_real(rec.suggestions[i].probability)
            << '}';
    }
    out << "]\n";
    out << "}\n";
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << contents;
    out.flush();
    if (!out) {
        throw IoError("failed while writing '" + path + "'");
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw IoError("failed while reading '" + path + "'");
    }
    return buffer.str();
}

} // namespace codetopics
