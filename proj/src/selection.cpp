#include "codetopics/selection.hpp"

#include <atomic>
#include <thread>

#include "codetopics/errors.hpp"

namespace codetopics {

Hyperparams HyperparamsTemplate::resolve(int num_topics) const {
    Hyperparams hp;
    hp.num_topics = num_topics;
    hp.topic_code_prior = topic_code_prior;
    hp.doc_topic_prior =
        doc_topic_prior ? *doc_topic_prior : default_doc_topic_prior(num_topics);
    hp.validate();
    return hp;
}

KSweepResult sweep_k(const CorpusMatrix& matrix, const HyperparamsTemplate& hp,
                     const std::vector<int>& grid, int chains,
                     std::uint64_t master_seed, std::int64_t burn_in,
                     std::int64_t keep, int threads) {
    if (grid.empty()) {
        throw ValidationError("K grid is empty");
    }
    for (std::size_t g = 1; g < grid.size(); ++g) {
        if (grid[g] <= grid[g - 1]) {
            throw ValidationError("K grid must be strictly increasing");
        }
    }
    if (chains < 1) {
        throw ValidationError("chains must be >= 1");
    }
    // Resolve every grid point up front so a bad K fails before any sampling.
    std::vector<Hyperparams> resolved;
    resolved.reserve(grid.size());
    for (const int k : grid) {
        resolved.push_back(hp.resolve(k));
    }

    KSweepResult result;
    result.grid = grid;
    result.chains_per_k = chains;
    result.chains.assign(grid.size(), std::vector<ChainFit>(chains));
    result.mean_log_likelihood.assign(grid.size(), 0.0);

    const std::size_t jobs = grid.size() * static_cast<std::size_t>(chains);
    FitOptions options;
    options.average_phi = false;
    options.store_theta = false;

    auto run_job = [&](std::size_t job) {
        const std::size_t g = job / static_cast<std::size_t>(chains);
        const std::size_t c = job % static_cast<std::size_t>(chains);
        const std::uint64_t seed = master_seed + job;
        const TopicModel model =
            run_chain(matrix, resolved[g], seed, burn_in, keep, options);
        result.chains[g][c] = ChainFit{seed, model.log_likelihood};
    };

    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                      : std::thread::hardware_concurrency();
    if (workers == 0) {
        workers = 1;
    }
    if (workers > jobs) {
        workers = jobs;
    }

    if (workers <= 1) {
        for (std::size_t job = 0; job < jobs; ++job) {
            run_job(job);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t job = next.fetch_add(1);
                    if (job >= jobs) {
                        return;
                    }
                    run_job(job);
                }
            });
        }
        for (std::thread& worker : pool) {
            worker.join();
        }
    }

    for (std::size_t g = 0; g < grid.size(); ++g) {
        double total = 0.0;
        for (const ChainFit& fit : result.chains[g]) {
            total += fit.log_likelihood;
        }
        result.mean_log_likelihood[g] = total / static_cast<double>(chains);
    }
    return result;
}

int select_k(const KSweepResult& result) {
    if (result.grid.empty()) {
        throw ValidationError("cannot select K from an empty sweep");
    }
    std::size_t best = 0;
    for (std::size_t g = 1; g < result.grid.size(); ++g) {
        const double ll = result.mean_log_likelihood[g];
        const double best_ll = result.mean_log_likelihood[best];
        if (ll > best_ll || (ll == best_ll && result.grid[g] < result.grid[best])) {
            best = g;
        }
    }
    return result.grid[best];
}

std::vector<int> default_k_grid() { return make_k_grid(5, 100, 5); }

std::vector<int> make_k_grid(int k_min, int k_max, int k_step) {
    if (k_min < 1 || k_max < k_min || k_step < 1) {
        throw ValidationError("invalid K grid bounds");
    }
    std::vector<int> grid;
    for (int k = k_min; k <= k_max; k += k_step) {
        grid.push_back(k);
    }
    return grid;
}

} // namespace codetopics
