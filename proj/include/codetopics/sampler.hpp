#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "codetopics/corpus.hpp"
#include "codetopics/math.hpp"
#include "codetopics/rng.hpp"

namespace codetopics {

// Symmetric Dirichlet priors for the two sides of the model.
// doc_topic_prior smooths each patient's topic mixture; topic_code_prior
// smooths each topic's code distribution.
struct Hyperparams {
    int num_topics = 0;          // K
    double doc_topic_prior = 0;  // per-patient prior over topics
    double topic_code_prior = 0; // per-topic prior over codes

    void validate() const; // throws ValidationError
};

constexpr double kDefaultTopicCodePrior = 0.1;

// Default rule: 50 / K.
double default_doc_topic_prior(int num_topics);
// Documented alternative reading: 50 / M (M = number of patients).
double doc_topic_prior_50_over_m(std::size_t num_patients);

Hyperparams default_hyperparams(int num_topics);

// Per-token topic assignments plus the sufficient-statistic count matrices.
// Tokens are laid out in the fixed sweep order: patients ascending, within a
// patient by column, then repetition index. Topic indices are 0-based.
struct GibbsState {
    int num_topics = 0;      // K
    std::size_t num_codes = 0;    // V
    std::size_t num_patients = 0; // M

    std::vector<std::uint32_t> token_patient;
    std::vector<std::uint32_t> token_code;
    std::vector<std::int32_t> assignments; // z, values in [0, K)

    // Count matrices. topic_code_counts is code-major so the K weights for
    // one code are contiguous in the sweep inner loop.
    std::vector<std::int64_t> topic_code_counts;    // V x K, [c * K + t]
    std::vector<std::int64_t> patient_topic_counts; // M x K, [i * K + t]
    std::vector<std::int64_t> topic_totals;         // K
    std::vector<Count> patient_totals;              // N_i

    std::uint64_t seed = 0;
    std::int64_t sweeps_done = 0;
    Rng rng{0};

    std::int64_t topic_code(int topic, std::size_t code) const {
        return topic_code_counts[code * static_cast<std::size_t>(num_topics) + topic];
    }
    std::int64_t patient_topic(std::size_t patient, int topic) const {
        return patient_topic_counts[patient * static_cast<std::size_t>(num_topics) + topic];
    }
    std::size_t total_tokens() const { return assignments.size(); }

    // Full recount from the assignments; throws InternalError on mismatch.
    void check_consistency() const;
};

// Fitted model: smoothed point estimates plus the statistics needed to
// reproduce and evaluate the fit.
struct TopicModel {
    Hyperparams hp;
    std::uint64_t seed = 0;
    std::int64_t burn_in = 0;
    std::int64_t keep = 0;
    std::int64_t sweeps = 0;
    double log_likelihood = 0.0;
    std::string rng_algorithm = Rng::kAlgorithm;
    std::vector<std::string> vocabulary; // codes in column order
    DenseMatrix phi;                     // K x V
    DenseMatrix theta;                   // M x K; may be empty
    // Final-state topic-code counts, K x V row-major. May be empty on models
    // loaded from external files.
    std::vector<std::int64_t> topic_code_counts;

    bool has_counts() const { return !topic_code_counts.empty(); }
    std::int64_t topic_total(int topic) const;
};

struct FitOptions {
    // Average phi over the kept sweeps instead of taking the final state.
    bool average_phi = false;
    // Skip storing theta in the model (it can be large).
    bool store_theta = true;
};

// Uniform random assignments from the seeded generator. Warns on stderr when
// K exceeds the token count.
GibbsState init_state(const CorpusMatrix& matrix, const Hyperparams& hp,
                      std::uint64_t seed);

// One full collapsed-Gibbs sweep: every token resampled exactly once, in the
// fixed token order, from
//   P(z = t | rest) prop. to (n_tc + eta) / (n_t + V eta) * (n_it + beta)
// with the token's own assignment excluded from all counts.
void gibbs_sweep(GibbsState& state, const CorpusMatrix& matrix,
                 const Hyperparams& hp);

// log P(codes | z) with the topic-code distributions integrated out:
//   sum_t [ lgamma(V eta) - V lgamma(eta)
//           + sum_c lgamma(n_tc + eta) - lgamma(n_t + V eta) ].
// Zero for an empty corpus, exactly.
double log_likelihood(const GibbsState& state, const Hyperparams& hp);

// phi(t, c) = (n_tc + eta) / (n_t + V eta). Rows sum to 1 within 1e-9.
DenseMatrix estimate_phi(const GibbsState& state, const Hyperparams& hp);

// theta(i, t) = (n_it + beta) / (N_i + K beta).
DenseMatrix estimate_theta(const GibbsState& state, const Hyperparams& hp);

// burn_in + keep full sweeps from init_state; estimates taken from the final
// state unless options.average_phi is set.
TopicModel run_chain(const CorpusMatrix& matrix, const Hyperparams& hp,
                     std::uint64_t seed, std::int64_t burn_in, std::int64_t keep,
                     const FitOptions& options = {});

constexpr std::int64_t kDefaultBurnIn = 4000;
constexpr std::int64_t kDefaultKeep = 1;

} // namespace codetopics
