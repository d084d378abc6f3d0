#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "codetopics/math.hpp"
#include "codetopics/sampler.hpp"

namespace codetopics {

constexpr double kDefaultTopCodeThreshold = 0.01;

struct TopCodeEntry {
    std::uint32_t code_index = 0;
    double probability = 0.0;
};

// Codes of one topic whose probability exceeds the threshold, sorted by
// descending probability (ties by ascending code index).
struct TopCodes {
    int topic = 0;
    double threshold = kDefaultTopCodeThreshold;
    std::vector<TopCodeEntry> entries;
    double cumulative_mass = 0.0;
};

TopCodes top_codes(std::span<const double> phi_row, double threshold,
                   int topic = 0);

// Shannon entropy in bits, with 0 log 0 := 0. The uniform baseline is
// log2(V); JSD below is in nats so its natural ln 2 bound applies. The two
// bases are intentional and labeled wherever values are emitted.
double topic_entropy(std::span<const double> phi_row);

// Jensen-Shannon divergence in nats, in [0, ln 2]. Terms with m_i = 0 are
// skipped and 0 ln(0/m) := 0.
double jsd(std::span<const double> x, std::span<const double> y);

// Pairwise JSD over the rows of phi with summary statistics over the
// K(K-1)/2 distinct pairs. With fewer than two rows the statistics are NaN.
struct JsdSummary {
    DenseMatrix matrix; // K x K, symmetric, zero diagonal
    double mean = 0.0;
    double sd = 0.0; // population standard deviation
    double median = 0.0;
    double min = 0.0;
};

JsdSummary jsd_matrix(const DenseMatrix& phi);

// Topic-specific vs corpus-wide occurrence counts for one topic's top-codes.
// topic_count is n_tc from the final assignments; corpus_count sums over all
// topics, so per code the topic counts add up to the corpus count exactly.
struct OccurrenceSplitRow {
    std::uint32_t code_index = 0;
    std::int64_t topic_count = 0;
    std::int64_t corpus_count = 0;
};

std::vector<OccurrenceSplitRow> occurrence_split(const GibbsState& state,
                                                 const CorpusMatrix& matrix,
                                                 const Hyperparams& hp, int topic,
                                                 double threshold = kDefaultTopCodeThreshold);

std::vector<OccurrenceSplitRow> occurrence_split(const TopicModel& model, int topic,
                                                 double threshold = kDefaultTopCodeThreshold);

} // namespace codetopics
