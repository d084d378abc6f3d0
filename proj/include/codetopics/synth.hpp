#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "codetopics/corpus.hpp"
#include "codetopics/math.hpp"
#include "codetopics/sampler.hpp"

namespace codetopics {

// Generative-process configuration for planted-topic corpora. Patient file
// lengths are Poisson(mean_doc_length) truncated at 1.
struct SynthConfig {
    int true_num_topics = 0;  // K*
    std::size_t vocab_size = 0;    // V
    std::size_t num_patients = 0;  // M
    double mean_doc_length = 0.0;
    double topic_code_concentration = 0.01; // sparse topics by default
    double doc_topic_concentration = 0.3;
    std::uint64_t seed = 0;

    void validate() const;
};

// Everything the generator sampled, for recovery scoring and external
// benchmarking. phi_star covers the full synthetic vocabulary, including
// codes that happened never to be drawn.
struct GroundTruth {
    DenseMatrix phi_star;   // K* x V
    DenseMatrix theta_star; // M x K*
    std::vector<std::vector<std::int32_t>> topic_labels; // sampled z per patient
    std::vector<std::string> code_names;  // size V
    std::vector<std::string> patient_ids; // size M
};

struct SynthCorpus {
    RecordSet records;
    Vocabulary vocabulary; // built from the records at cutoff 1.0
    CorpusMatrix matrix;
    GroundTruth truth;
};

SynthCorpus generate_corpus(const SynthConfig& cfg);

// phi_star restricted to the columns of a sampled vocabulary, rows
// renormalized. Codes the sample never produced carry negligible true mass,
// so this is the right reference for recovery scoring against a fitted phi.
DenseMatrix truth_phi_on_vocabulary(const GroundTruth& truth,
                                    const Vocabulary& vocab);

// Exact per-token posterior P(z_j = t | all codes) by enumerating every
// joint assignment and scoring it with the collapsed Dirichlet-multinomial
// joint. Rows are tokens in sweep order. Guarded to K^(#tokens) <= 10^6.
DenseMatrix exact_posterior(const CorpusMatrix& matrix, const Hyperparams& hp);

constexpr double kExactPosteriorGuard = 1e6;

// Label-switching resolution: minimum-total-JSD perfect matching between
// estimated and true topic rows.
struct TopicMatch {
    std::vector<int> permutation; // estimated row -> true row
    std::vector<double> pair_jsd; // indexed by estimated row
    double mean_jsd = 0.0;
};

TopicMatch match_topics(const DenseMatrix& phi_est, const DenseMatrix& phi_true);

} // namespace codetopics
