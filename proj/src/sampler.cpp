#include "codetopics/sampler.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "codetopics/errors.hpp"
#include "codetopics/math.hpp"

namespace codetopics {

void Hyperparams::validate() const {
    if (num_topics < 2) {
        throw ValidationError("K must be >= 2, got " + std::to_string(num_topics));
    }
    if (!(doc_topic_prior > 0.0)) {
        throw ValidationError("doc_topic_prior must be > 0");
    }
    if (!(topic_code_prior > 0.0)) {
        throw ValidationError("topic_code_prior must be > 0");
    }
}

double default_doc_topic_prior(int num_topics) {
    return 50.0 / static_cast<double>(num_topics);
}

double doc_topic_prior_50_over_m(std::size_t num_patients) {
    return 50.0 / static_cast<double>(num_patients);
}

Hyperparams default_hyperparams(int num_topics) {
    return Hyperparams{num_topics, default_doc_topic_prior(num_topics),
                       kDefaultTopicCodePrior};
}

void GibbsState::check_consistency() const {
    const auto k = static_cast<std::size_t>(num_topics);
    std::vector<std::int64_t> tc(num_codes * k, 0);
    std::vector<std::int64_t> it(num_patients * k, 0);
    std::vector<std::int64_t> tt(k, 0);
    for (std::size_t j = 0; j < assignments.size(); ++j) {
        const auto t = assignments[j];
        if (t < 0 || t >= num_topics) {
            throw InternalError("assignment out of range at token " + std::to_string(j));
        }
        tc[token_code[j] * k + t] += 1;
        it[token_patient[j] * k + t] += 1;
        tt[t] += 1;
    }
    if (tc != topic_code_counts || it != patient_topic_counts || tt != topic_totals) {
        throw InternalError("count matrices disagree with a recount from assignments");
    }
    for (std::size_t i = 0; i < num_patients; ++i) {
        std::int64_t row = 0;
        for (std::size_t t = 0; t < k; ++t) {
            row += patient_topic_counts[i * k + t];
        }
        if (row != patient_totals[i]) {
            throw InternalError("patient " + std::to_string(i) +
                                " topic counts do not sum to N_i");
        }
    }
}

std::int64_t TopicModel::topic_total(int topic) const {
    const std::size_t v = vocabulary.size();
    std::int64_t total = 0;
    for (std::size_t c = 0; c < v; ++c) {
        total += topic_code_counts[static_cast<std::size_t>(topic) * v + c];
    }
    return total;
}

GibbsState init_state(const CorpusMatrix& matrix, const Hyperparams& hp,
                      std::uint64_t seed) {
    hp.validate();
    if (matrix.num_patients == 0) {
        throw EmptyCorpusError("cannot initialize a sampler on an empty matrix");
    }

    GibbsState state;
    state.num_topics = hp.num_topics;
    state.num_codes = matrix.num_codes;
    state.num_patients = matrix.num_patients;
    state.seed = seed;
    state.rng = Rng(seed);
    state.patient_totals = matrix.row_totals;

    const auto k = static_cast<std::size_t>(hp.num_topics);
    const std::size_t total = static_cast<std::size_t>(matrix.total_tokens());
    state.token_patient.reserve(total);
    state.token_code.reserve(total);
    state.assignments.reserve(total);
    state.topic_code_counts.assign(matrix.num_codes * k, 0);
    state.patient_topic_counts.assign(matrix.num_patients * k, 0);
    state.topic_totals.assign(k, 0);

    if (static_cast<std::int64_t>(k) > matrix.total_tokens()) {
        std::fprintf(stderr,
                     "warning: K=%d exceeds the corpus token count %lld; "
                     "some topics must stay empty\n",
                     hp.num_topics,
                     static_cast<long long>(matrix.total_tokens()));
    }

    // Token order is the sweep order: patients ascending, columns ascending,
    // then repetition index.
    for (std::size_t i = 0; i < matrix.num_patients; ++i) {
        for (const auto& [col, count] : matrix.rows[i]) {
            for (Count r = 0; r < count; ++r) {
                const auto t = static_cast<std::int32_t>(state.rng.uniform_below(k));
                state.token_patient.push_back(static_cast<std::uint32_t>(i));
                state.token_code.push_back(col);
                state.assignments.push_back(t);
                state.topic_code_counts[col * k + t] += 1;
                state.patient_topic_counts[i * k + t] += 1;
                state.topic_totals[t] += 1;
            }
        }
    }
    return state;
}

void gibbs_sweep(GibbsState& state, const CorpusMatrix& matrix,
                 const Hyperparams& hp) {
    const auto k = static_cast<std::size_t>(state.num_topics);
    if (hp.num_topics != state.num_topics || matrix.num_codes != state.num_codes ||
        matrix.num_patients != state.num_patients) {
        throw InternalError("state does not match the matrix/hyperparameters");
    }
    std::int64_t assigned = 0;
    for (const std::int64_t n : state.topic_totals) {
        assigned += n;
    }
    if (assigned != static_cast<std::int64_t>(state.assignments.size())) {
        throw InternalError("topic totals do not sum to the token count");
    }

    if (k == 1) {
        // Degenerate conditional: every token keeps topic 0.
        ++state.sweeps_done;
        return;
    }

    const double eta = hp.topic_code_prior;
    const double v_eta = static_cast<double>(state.num_codes) * eta;
    const double beta = hp.doc_topic_prior;

    std::int64_t* const n_tc = state.topic_code_counts.data();
    std::int64_t* const n_it = state.patient_topic_counts.data();
    std::int64_t* const n_t = state.topic_totals.data();
    std::vector<double> weight(k);

    const std::size_t tokens = state.assignments.size();
    for (std::size_t j = 0; j < tokens; ++j) {
        const std::size_t i = state.token_patient[j];
        const std::size_t c = state.token_code[j];
        const std::int32_t old_topic = state.assignments[j];

        std::int64_t* const code_row = n_tc + c * k;
        std::int64_t* const patient_row = n_it + i * k;
        code_row[old_topic] -= 1;
        patient_row[old_topic] -= 1;
        n_t[old_topic] -= 1;

        double total = 0.0;
        for (std::size_t t = 0; t < k; ++t) {
            const double w = (static_cast<double>(code_row[t]) + eta) /
                             (static_cast<double>(n_t[t]) + v_eta) *
                             (static_cast<double>(patient_row[t]) + beta);
            weight[t] = w;
            total += w;
        }

        const double u = state.rng.uniform01() * total;
        double cumulative = 0.0;
        std::size_t new_topic = k - 1;
        for (std::size_t t = 0; t < k; ++t) {
            cumulative += weight[t];
            if (u < cumulative) {
                new_topic = t;
                break;
            }
        }

        state.assignments[j] = static_cast<std::int32_t>(new_topic);
        code_row[new_topic] += 1;
        patient_row[new_topic] += 1;
        n_t[new_topic] += 1;
    }
    ++state.sweeps_done;
}

double log_likelihood(const GibbsState& state, const Hyperparams& hp) {
    const auto k = static_cast<std::size_t>(state.num_topics);
    const double eta = hp.topic_code_prior;
    const double v_eta = static_cast<double>(state.num_codes) * eta;
    const double lg_eta = log_gamma(eta);
    const double lg_v_eta = log_gamma(v_eta);

    // Per topic: lgamma(V eta) - lgamma(n_t + V eta)
    //            + sum over nonzero cells of lgamma(n_tc + eta) - lgamma(eta).
    // Zero-count cells cancel exactly, so an empty corpus scores exactly 0.
    double total = 0.0;
    for (std::size_t t = 0; t < k; ++t) {
        total += lg_v_eta - log_gamma(static_cast<double>(state.topic_totals[t]) + v_eta);
    }
    for (std::size_t c = 0; c < state.num_codes; ++c) {
        for (std::size_t t = 0; t < k; ++t) {
            const std::int64_t n = state.topic_code_counts[c * k + t];
            if (n > 0) {
                total += log_gamma(static_cast<double>(n) + eta) - lg_eta;
            }
        }
    }
    return total;
}

DenseMatrix estimate_phi(const GibbsState& state, const Hyperparams& hp) {
    const auto k = static_cast<std::size_t>(state.num_topics);
    const double eta = hp.topic_code_prior;
    const double v_eta = static_cast<double>(state.num_codes) * eta;

    DenseMatrix phi(k, state.num_codes);
    for (std::size_t t = 0; t < k; ++t) {
        const double denom = static_cast<double>(state.topic_totals[t]) + v_eta;
        for (std::size_t c = 0; c < state.num_codes; ++c) {
            phi.at(t, c) =
                (static_cast<double>(state.topic_code_counts[c * k + t]) + eta) / denom;
        }
    }
    return phi;
}

DenseMatrix estimate_theta(const GibbsState& state, const Hyperparams& hp) {
    const auto k = static_cast<std::size_t>(state.num_topics);
    const double beta = hp.doc_topic_prior;
    const double k_beta = static_cast<double>(k) * beta;

    DenseMatrix theta(state.num_patients, k);
    for (std::size_t i = 0; i < state.num_patients; ++i) {
        const double denom = static_cast<double>(state.patient_totals[i]) + k_beta;
        for (std::size_t t = 0; t < k; ++t) {
            theta.at(i, t) =
                (static_cast<double>(state.patient_topic_counts[i * k + t]) + beta) / denom;
        }
    }
    return theta;
}

TopicModel run_chain(const CorpusMatrix& matrix, const Hyperparams& hp,
                     std::uint64_t seed, std::int64_t burn_in, std::int64_t keep,
                     const FitOptions& options) {
    if (burn_in < 0) {
        throw ValidationError("burn_in must be >= 0");
    }
    if (keep < 1) {
        throw ValidationError("keep must be >= 1");
    }

    GibbsState state = init_state(matrix, hp, seed);
    for (std::int64_t s = 0; s < burn_in; ++s) {
        gibbs_sweep(state, matrix, hp);
    }

    const auto k = static_cast<std::size_t>(hp.num_topics);
    DenseMatrix phi_sum;
    if (options.average_phi) {
        phi_sum = DenseMatrix(k, matrix.num_codes);
    }
    for (std::int64_t s = 0; s < keep; ++s) {
        gibbs_sweep(state, matrix, hp);
        if (options.average_phi) {
            const DenseMatrix phi = estimate_phi(state, hp);
            for (std::size_t idx = 0; idx < phi.values.size(); ++idx) {
                phi_sum.values[idx] += phi.values[idx];
            }
        }
    }

    TopicModel model;
    model.hp = hp;
    model.seed = seed;
    model.burn_in = burn_in;
    model.keep = keep;
    model.sweeps = state.sweeps_done;
    model.log_likelihood = log_likelihood(state, hp);
    model.vocabulary = matrix.codes;
    if (options.average_phi) {
        for (double& value : phi_sum.values) {
            value /= static_cast<double>(keep);
        }
        model.phi = std::move(phi_sum);
    } else {
        model.phi = estimate_phi(state, hp);
    }
    if (options.store_theta) {
        model.theta = estimate_theta(state, hp);
    }

    // Final-state counts, converted to the topic-major layout reports use.
    model.topic_code_counts.assign(k * matrix.num_codes, 0);
    for (std::size_t c = 0; c < matrix.num_codes; ++c) {
        for (std::size_t t = 0; t < k; ++t) {
            model.topic_code_counts[t * matrix.num_codes + c] =
                state.topic_code_counts[c * k + t];
        }
    }
    return model;
}

} // namespace codetopics
