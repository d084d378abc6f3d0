#include "codetopics/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "codetopics/errors.hpp"
#include "codetopics/metrics.hpp"
#include "codetopics/rng.hpp"

namespace codetopics {

namespace {

std::vector<std::string> numbered_names(char prefix, std::size_t count) {
    std::size_t width = 3;
    for (std::size_t v = count > 0 ? count - 1 : 0; v >= 1000; v /= 10) {
        ++width;
    }
    std::vector<std::string> names;
    names.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::string digits = std::to_string(i);
        std::string name(1, prefix);
        if (digits.size() < width) {
            name.append(width - digits.size(), '0');
        }
        name += digits;
        names.push_back(std::move(name));
    }
    return names;
}

std::size_t sample_categorical(Rng& rng, const double* weights, std::size_t dim) {
    const double u = rng.uniform01();
    double cumulative = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        cumulative += weights[i];
        if (u < cumulative) {
            return i;
        }
    }
    return dim - 1;
}

} // namespace

void SynthConfig::validate() const {
    if (true_num_topics < 1) {
        throw ValidationError("true_num_topics must be >= 1");
    }
    if (vocab_size < 1) {
        throw ValidationError("vocab_size must be >= 1");
    }
    if (num_patients < 1) {
        throw ValidationError("num_patients must be >= 1");
    }
    if (!(mean_doc_length > 0.0)) {
        throw ValidationError("mean_doc_length must be > 0");
    }
    if (!(topic_code_concentration > 0.0) || !(doc_topic_concentration > 0.0)) {
        throw ValidationError("Dirichlet concentrations must be > 0");
    }
}

SynthCorpus generate_corpus(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);

    const auto k = static_cast<std::size_t>(cfg.true_num_topics);
    SynthCorpus out;
    GroundTruth& truth = out.truth;
    truth.code_names = numbered_names('c', cfg.vocab_size);
    truth.patient_ids = numbered_names('p', cfg.num_patients);

    truth.phi_star = DenseMatrix(k, cfg.vocab_size);
    for (std::size_t t = 0; t < k; ++t) {
        rng.dirichlet_symmetric(cfg.topic_code_concentration, cfg.vocab_size,
                                truth.phi_star.row(t));
    }
    truth.theta_star = DenseMatrix(cfg.num_patients, k);
    for (std::size_t i = 0; i < cfg.num_patients; ++i) {
        rng.dirichlet_symmetric(cfg.doc_topic_concentration, k,
                                truth.theta_star.row(i));
    }

    truth.topic_labels.resize(cfg.num_patients);
    for (std::size_t i = 0; i < cfg.num_patients; ++i) {
        const std::uint64_t drawn = rng.poisson(cfg.mean_doc_length);
        const std::uint64_t length = std::max<std::uint64_t>(drawn, 1);
        auto& labels = truth.topic_labels[i];
        labels.reserve(length);
        auto& patient_entry = out.records.entries[truth.patient_ids[i]];
        for (std::uint64_t j = 0; j < length; ++j) {
            const std::size_t z = sample_categorical(rng, truth.theta_star.row(i), k);
            const std::size_t c =
                sample_categorical(rng, truth.phi_star.row(z), cfg.vocab_size);
            labels.push_back(static_cast<std::int32_t>(z));
            patient_entry[truth.code_names[c]] += 1;
        }
    }

    out.vocabulary = build_vocabulary(out.records, 1.0);
    out.matrix = build_matrix(out.records, out.vocabulary, WeightingMode::count);
    return out;
}

DenseMatrix truth_phi_on_vocabulary(const GroundTruth& truth,
                                    const Vocabulary& vocab) {
    std::map<std::string, std::size_t> full_index;
    for (std::size_t c = 0; c < truth.code_names.size(); ++c) {
        full_index[truth.code_names[c]] = c;
    }

    DenseMatrix projected(truth.phi_star.rows, vocab.size());
    for (std::size_t col = 0; col < vocab.size(); ++col) {
        const auto it = full_index.find(vocab.codes[col]);
        if (it == full_index.end()) {
            throw ValidationError("vocabulary code '" + vocab.codes[col] +
                                  "' is not part of the ground truth");
        }
        for (std::size_t t = 0; t < projected.rows; ++t) {
            projected.at(t, col) = truth.phi_star.at(t, it->second);
        }
    }
    for (std::size_t t = 0; t < projected.rows; ++t) {
        double total = 0.0;
        for (std::size_t col = 0; col < projected.cols; ++col) {
            total += projected.at(t, col);
        }
        if (total > 0.0) {
            for (std::size_t col = 0; col < projected.cols; ++col) {
                projected.at(t, col) /= total;
            }
        } else {
            // A topic whose entire mass sits on never-sampled codes has no
            // empirical footprint; a uniform row keeps the matrix stochastic.
            for (std::size_t col = 0; col < projected.cols; ++col) {
                projected.at(t, col) = 1.0 / static_cast<double>(projected.cols);
            }
        }
    }
    return projected;
}

DenseMatrix exact_posterior(const CorpusMatrix& matrix, const Hyperparams& hp) {
    hp.validate();
    if (matrix.num_patients == 0) {
        throw EmptyCorpusError("exact posterior needs a nonempty matrix");
    }

    const auto k = static_cast<std::size_t>(hp.num_topics);
    const auto tokens = static_cast<std::size_t>(matrix.total_tokens());
    const double enumeration =
        std::pow(static_cast<double>(k), static_cast<double>(tokens));
    if (!(enumeration <= kExactPosteriorGuard)) {
        char size_text[64];
        std::snprintf(size_text, sizeof size_text, "%.3g", enumeration);
        throw GuardError("exact posterior would enumerate K^n = " +
                         std::string(size_text) + " assignments (guard: " +
                         std::to_string(static_cast<long long>(kExactPosteriorGuard)) +
                         ")");
    }

    // Token layout in sweep order, matching init_state.
    std::vector<std::uint32_t> token_patient;
    std::vector<std::uint32_t> token_code;
    token_patient.reserve(tokens);
    token_code.reserve(tokens);
    for (std::size_t i = 0; i < matrix.num_patients; ++i) {
        for (const auto& [col, count] : matrix.rows[i]) {
            for (Count r = 0; r < count; ++r) {
                token_patient.push_back(static_cast<std::uint32_t>(i));
                token_code.push_back(col);
            }
        }
    }

    const double eta = hp.topic_code_prior;
    const double v_eta = static_cast<double>(matrix.num_codes) * eta;
    const double beta = hp.doc_topic_prior;
    const double k_beta = static_cast<double>(k) * beta;
    const double lg_eta = log_gamma(eta);
    const double lg_v_eta = log_gamma(v_eta);
    const double lg_beta = log_gamma(beta);
    const double lg_k_beta = log_gamma(k_beta);

    const auto total = static_cast<std::size_t>(enumeration);
    std::vector<double> log_scores(total);
    std::vector<std::int32_t> z(tokens, 0);
    std::vector<std::int64_t> n_tc(matrix.num_codes * k);
    std::vector<std::int64_t> n_it(matrix.num_patients * k);
    std::vector<std::int64_t> n_t(k);

    for (std::size_t index = 0; index < total; ++index) {
        std::fill(n_tc.begin(), n_tc.end(), 0);
        std::fill(n_it.begin(), n_it.end(), 0);
        std::fill(n_t.begin(), n_t.end(), 0);
        for (std::size_t j = 0; j < tokens; ++j) {
            n_tc[token_code[j] * k + z[j]] += 1;
            n_it[token_patient[j] * k + z[j]] += 1;
            n_t[z[j]] += 1;
        }

        double lp = 0.0;
        for (std::size_t t = 0; t < k; ++t) {
            lp += lg_v_eta - log_gamma(static_cast<double>(n_t[t]) + v_eta);
        }
        for (std::size_t c = 0; c < matrix.num_codes; ++c) {
            for (std::size_t t = 0; t < k; ++t) {
                const std::int64_t n = n_tc[c * k + t];
                if (n > 0) {
                    lp += log_gamma(static_cast<double>(n) + eta) - lg_eta;
                }
            }
        }
        for (std::size_t i = 0; i < matrix.num_patients; ++i) {
            lp += lg_k_beta -
                  log_gamma(static_cast<double>(matrix.row_totals[i]) + k_beta);
            for (std::size_t t = 0; t < k; ++t) {
                const std::int64_t n = n_it[i * k + t];
                if (n > 0) {
                    lp += log_gamma(static_cast<double>(n) + beta) - lg_beta;
                }
            }
        }
        log_scores[index] = lp;

        // Odometer increment over the assignment vector.
        for (std::size_t j = 0; j < tokens; ++j) {
            if (++z[j] < static_cast<std::int32_t>(k)) {
                break;
            }
            z[j] = 0;
        }
    }

    const double max_lp = *std::max_element(log_scores.begin(), log_scores.end());
    DenseMatrix marginals(tokens, k);
    double weight_total = 0.0;
    std::fill(z.begin(), z.end(), 0);
    for (std::size_t index = 0; index < total; ++index) {
        const double w = std::exp(log_scores[index] - max_lp);
        weight_total += w;
        for (std::size_t j = 0; j < tokens; ++j) {
            marginals.at(j, z[j]) += w;
        }
        for (std::size_t j = 0; j < tokens; ++j) {
            if (++z[j] < static_cast<std::int32_t>(k)) {
                break;
            }
            z[j] = 0;
        }
    }
    for (double& value : marginals.values) {
        value /= weight_total;
    }
    return marginals;
}

TopicMatch match_topics(const DenseMatrix& phi_est, const DenseMatrix& phi_true) {
    if (phi_est.rows != phi_true.rows || phi_est.cols != phi_true.cols) {
        throw ValidationError("match_topics needs equal shapes, got " +
                              std::to_string(phi_est.rows) + "x" +
                              std::to_string(phi_est.cols) + " vs " +
                              std::to_string(phi_true.rows) + "x" +
                              std::to_string(phi_true.cols));
    }
    if (phi_est.rows == 0) {
        throw ValidationError("match_topics needs at least one row");
    }

    const std::size_t k = phi_est.rows;
    DenseMatrix cost(k, k);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
            cost.at(a, b) = jsd(std::span(phi_est.row(a), phi_est.cols),
                                std::span(phi_true.row(b), phi_true.cols));
        }
    }

    TopicMatch match;
    match.permutation = min_cost_assignment(cost);
    match.pair_jsd.resize(k);
    double total = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        match.pair_jsd[a] = cost.at(a, static_cast<std::size_t>(match.permutation[a]));
        total += match.pair_jsd[a];
    }
    match.mean_jsd = total / static_cast<double>(k);
    return match;
}

} // namespace codetopics
