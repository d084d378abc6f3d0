#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "codetopics/sampler.hpp"

namespace codetopics {

// Hyperparameters for a K sweep: everything but K itself. When
// doc_topic_prior is unset, each grid point resolves it as 50 / K.
struct HyperparamsTemplate {
    double topic_code_prior = kDefaultTopicCodePrior;
    std::optional<double> doc_topic_prior;

    Hyperparams resolve(int num_topics) const;
};

struct ChainFit {
    std::uint64_t seed = 0;
    double log_likelihood = 0.0;
};

// Per-K chain log-likelihoods plus their means, keyed by grid position.
struct KSweepResult {
    std::vector<int> grid; // strictly increasing
    std::vector<std::vector<ChainFit>> chains; // grid index -> chains_per_k fits
    std::vector<double> mean_log_likelihood;
    int chains_per_k = 0;
};

// Runs `chains` independent chains for every K in the grid. Chain seeds are
// master_seed + grid_index * chains + chain_index, and every seed is stored
// in the result. threads = 0 means one worker per hardware thread; chains
// share the immutable matrix and results are assembled by index, so the
// outcome does not depend on the thread count.
KSweepResult sweep_k(const CorpusMatrix& matrix, const HyperparamsTemplate& hp,
                     const std::vector<int>& grid, int chains,
                     std::uint64_t master_seed, std::int64_t burn_in,
                     std::int64_t keep, int threads = 0);

// K with the maximal mean log-likelihood; ties break toward smaller K.
int select_k(const KSweepResult& result);

// The default protocol grid: 5, 10, ..., 100.
std::vector<int> default_k_grid();

std::vector<int> make_k_grid(int k_min, int k_max, int k_step);

constexpr int kDefaultChains = 5;

} // namespace codetopics
