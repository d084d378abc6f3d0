#include "codetopics/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "codetopics/errors.hpp"

namespace codetopics {

namespace {

constexpr double kSumTolerance = 1e-6;

void validate_distribution(std::span<const double> p, const char* what) {
    double total = 0.0;
    for (const double value : p) {
        if (value < 0.0 || !std::isfinite(value)) {
            throw ValidationError(std::string(what) + " has a negative or non-finite entry");
        }
        total += value;
    }
    if (std::abs(total - 1.0) > kSumTolerance) {
        throw ValidationError(std::string(what) + " sums to " + std::to_string(total) +
                              ", not 1");
    }
}

} // namespace

TopCodes top_codes(std::span<const double> phi_row, double threshold, int topic) {
    if (threshold < 0.0 || threshold >= 1.0) {
        throw ValidationError("top-code threshold must lie in [0, 1)");
    }
    validate_distribution(phi_row, "top_codes row");

    TopCodes result;
    result.topic = topic;
    result.threshold = threshold;
    for (std::size_t c = 0; c < phi_row.size(); ++c) {
        if (phi_row[c] > threshold) {
            result.entries.push_back({static_cast<std::uint32_t>(c), phi_row[c]});
        }
    }
    std::stable_sort(result.entries.begin(), result.entries.end(),
                     [](const TopCodeEntry& a, const TopCodeEntry& b) {
                         return a.probability > b.probability;
                     });
    for (const TopCodeEntry& entry : result.entries) {
        result.cumulative_mass += entry.probability;
    }
    return result;
}

double topic_entropy(std::span<const double> phi_row) {
    validate_distribution(phi_row, "entropy row");
    double h = 0.0;
    for (const double p : phi_row) {
        if (p > 0.0) {
            h -= p * std::log2(p);
        }
    }
    return std::max(h, 0.0);
}

double jsd(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw ValidationError("jsd inputs have different dimensions");
    }
    validate_distribution(x, "jsd first argument");
    validate_distribution(y, "jsd second argument");

    // Each index contributes a term that is symmetric in (x, y) down to the
    // last bit, so jsd(x, y) == jsd(y, x) exactly.
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double m = 0.5 * (x[i] + y[i]);
        if (m <= 0.0) {
            continue;
        }
        double term = 0.0;
        if (x[i] > 0.0) {
            term += 0.5 * x[i] * std::log(x[i] / m);
        }
        if (y[i] > 0.0) {
            term += 0.5 * y[i] * std::log(y[i] / m);
        }
        total += term;
    }
    return std::max(total, 0.0);
}

JsdSummary jsd_matrix(const DenseMatrix& phi) {
    JsdSummary summary;
    summary.matrix = DenseMatrix(phi.rows, phi.rows);

    std::vector<double> pairs;
    pairs.reserve(phi.rows * (phi.rows - 1) / 2);
    for (std::size_t a = 0; a < phi.rows; ++a) {
        for (std::size_t b = a + 1; b < phi.rows; ++b) {
            const double d = jsd(std::span(phi.row(a), phi.cols),
                                 std::span(phi.row(b), phi.cols));
            summary.matrix.at(a, b) = d;
            summary.matrix.at(b, a) = d;
            pairs.push_back(d);
        }
    }

    if (pairs.empty()) {
        const double nan = std::nan("");
        summary.mean = summary.sd = summary.median = summary.min = nan;
        return summary;
    }

    double total = 0.0;
    for (const double d : pairs) {
        total += d;
    }
    summary.mean = total / static_cast<double>(pairs.size());

    double sq = 0.0;
    for (const double d : pairs) {
        const double delta = d - summary.mean;
        sq += delta * delta;
    }
    summary.sd = std::sqrt(sq / static_cast<double>(pairs.size()));

    std::sort(pairs.begin(), pairs.end());
    summary.min = pairs.front();
    const std::size_t n = pairs.size();
    summary.median = (n % 2 == 1) ? pairs[n / 2]
                                  : 0.5 * (pairs[n / 2 - 1] + pairs[n / 2]);
    return summary;
}

namespace {

std::vector<OccurrenceSplitRow> split_rows(const TopCodes& top,
                                           const std::vector<std::int64_t>& topic_counts,
                                           const std::vector<std::int64_t>& corpus_counts) {
    std::vector<OccurrenceSplitRow> rows;
    rows.reserve(top.entries.size());
    for (const TopCodeEntry& entry : top.entries) {
        rows.push_back({entry.code_index, topic_counts[entry.code_index],
                        corpus_counts[entry.code_index]});
    }
    return rows;
}

} // namespace

std::vector<OccurrenceSplitRow> occurrence_split(const GibbsState& state,
                                                 const CorpusMatrix& matrix,
                                                 const Hyperparams& hp, int topic,
                                                 double threshold) {
    if (topic < 0 || topic >= state.num_topics) {
        throw ValidationError("topic index " + std::to_string(topic) +
                              " out of range for K=" + std::to_string(state.num_topics));
    }
    if (matrix.num_codes != state.num_codes) {
        throw ValidationError("matrix and state disagree on vocabulary size");
    }
    const auto k = static_cast<std::size_t>(state.num_topics);
    std::vector<std::int64_t> topic_counts(state.num_codes, 0);
    std::vector<std::int64_t> corpus_counts(state.num_codes, 0);
    for (std::size_t c = 0; c < state.num_codes; ++c) {
        topic_counts[c] = state.topic_code_counts[c * k + topic];
        for (std::size_t t = 0; t < k; ++t) {
            corpus_counts[c] += state.topic_code_counts[c * k + t];
        }
    }

    const DenseMatrix phi = estimate_phi(state, hp);
    const TopCodes top =
        top_codes(std::span(phi.row(topic), phi.cols), threshold, topic);
    return split_rows(top, topic_counts, corpus_counts);
}

std::vector<OccurrenceSplitRow> occurrence_split(const TopicModel& model, int topic,
                                                 double threshold) {
    if (topic < 0 || topic >= model.hp.num_topics) {
        throw ValidationError("topic index " + std::to_string(topic) +
                              " out of range for K=" + std::to_string(model.hp.num_topics));
    }
    if (!model.has_counts()) {
        throw MissingStatisticsError("model carries no topic-code counts");
    }
    const std::size_t v = model.vocabulary.size();
    const auto k = static_cast<std::size_t>(model.hp.num_topics);
    std::vector<std::int64_t> topic_counts(v, 0);
    std::vector<std::int64_t> corpus_counts(v, 0);
    for (std::size_t c = 0; c < v; ++c) {
        topic_counts[c] =
            model.topic_code_counts[static_cast<std::size_t>(topic) * v + c];
        for (std::size_t t = 0; t < k; ++t) {
            corpus_counts[c] += model.topic_code_counts[t * v + c];
        }
    }
    const TopCodes top =
        top_codes(std::span(model.phi.row(topic), model.phi.cols), threshold, topic);
    return split_rows(top, topic_counts, corpus_counts);
}

} // namespace codetopics
