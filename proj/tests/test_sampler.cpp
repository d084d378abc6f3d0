#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "codetopics/corpus.hpp"
#include "codetopics/errors.hpp"
#include "codetopics/sampler.hpp"
#include "codetopics/synth.hpp"

using namespace codetopics;

namespace {

CorpusMatrix matrix_from_csv(const char* csv) {
    std::istringstream in(csv);
    RecordSet records = parse_records(in);
    Vocabulary vocab = build_vocabulary(records, 1.0);
    return build_matrix(records, vocab, WeightingMode::count);
}

// Tallies the count matrices from the assignments alone.
struct Recount {
    std::vector<std::int64_t> topic_code;    // [c * K + t]
    std::vector<std::int64_t> patient_topic; // [i * K + t]
    std::vector<std::int64_t> topic_totals;
};

Recount recount(const GibbsState& state) {
    const std::size_t k = static_cast<std::size_t>(state.num_topics);
    Recount r;
    r.topic_code.assign(state.num_codes * k, 0);
    r.patient_topic.assign(state.num_patients * k, 0);
    r.topic_totals.assign(k, 0);
    for (std::size_t j = 0; j < state.total_tokens(); ++j) {
        const auto t = static_cast<std::size_t>(state.assignments[j]);
        r.topic_code[state.token_code[j] * k + t] += 1;
        r.patient_topic[state.token_patient[j] * k + t] += 1;
        r.topic_totals[t] += 1;
    }
    return r;
}

// Same formula as log_likelihood, written naively with std::lgamma.
double oracle_log_likelihood(const GibbsState& state, const Hyperparams& hp) {
    const double eta = hp.topic_code_prior;
    const double v = static_cast<double>(state.num_codes);
    double total = 0.0;
    for (int t = 0; t < state.num_topics; ++t) {
        total += std::lgamma(v * eta) - v * std::lgamma(eta);
        for (std::size_t c = 0; c < state.num_codes; ++c) {
            total += std::lgamma(static_cast<double>(state.topic_code(t, c)) + eta);
        }
        total -= std::lgamma(
            static_cast<double>(state.topic_totals[static_cast<std::size_t>(t)]) +
            v * eta);
    }
    return total;
}

// Hand-built state for the degenerate and closed-form cases; counts are
// tallied from the given assignments.
GibbsState hand_state(int num_topics, std::size_t num_codes,
                      std::size_t num_patients,
                      std::vector<std::uint32_t> token_patient,
                      std::vector<std::uint32_t> token_code,
                      std::vector<std::int32_t> assignments) {
    GibbsState state;
    state.num_topics = num_topics;
    state.num_codes = num_codes;
    state.num_patients = num_patients;
    state.token_patient = std::move(token_patient);
    state.token_code = std::move(token_code);
    state.assignments = std::move(assignments);
    const std::size_t k = static_cast<std::size_t>(num_topics);
    state.topic_code_counts.assign(num_codes * k, 0);
    state.patient_topic_counts.assign(num_patients * k, 0);
    state.topic_totals.assign(k, 0);
    state.patient_totals.assign(num_patients, 0);
    for (std::size_t j = 0; j < state.assignments.size(); ++j) {
        const auto t = static_cast<std::size_t>(state.assignments[j]);
        state.topic_code_counts[state.token_code[j] * k + t] += 1;
        state.patient_topic_counts[state.token_patient[j] * k + t] += 1;
        state.topic_totals[t] += 1;
        state.patient_totals[state.token_patient[j]] += 1;
    }
    return state;
}

} // namespace

TEST_CASE("hyperparams validation") {
    Hyperparams hp{2, 0.1, 0.1};
    CHECK_NOTHROW(hp.validate());
    CHECK_THROWS_AS((Hyperparams{1, 0.1, 0.1}.validate()), ValidationError);
    CHECK_THROWS_AS((Hyperparams{2, 0.0, 0.1}.validate()), ValidationError);
    CHECK_THROWS_AS((Hyperparams{2, 0.1, -1.0}.validate()), ValidationError);
}

TEST_CASE("default priors") {
    CHECK(default_doc_topic_prior(5) == doctest::Approx(10.0));
    CHECK(default_doc_topic_prior(50) == doctest::Approx(1.0));
    CHECK(doc_topic_prior_50_over_m(1000) == doctest::Approx(0.05));
    Hyperparams hp = default_hyperparams(20);
    CHECK(hp.num_topics == 20);
    CHECK(hp.doc_topic_prior == doctest::Approx(2.5));
    CHECK(hp.topic_code_prior == doctest::Approx(0.1));
}

TEST_CASE("init_state conserves tokens and is deterministic") {
    CorpusMatrix matrix = matrix_from_csv("p1,a,3\np1,b,1\n");
    Hyperparams hp{2, 25.0, 0.1};

    GibbsState state = init_state(matrix, hp, 99);
    REQUIRE(state.total_tokens() == 4);
    CHECK(state.topic_totals[0] + state.topic_totals[1] == 4);
    CHECK(state.patient_topic(0, 0) + state.patient_topic(0, 1) == 4);
    CHECK_NOTHROW(state.check_consistency());

    GibbsState again = init_state(matrix, hp, 99);
    CHECK(state.assignments == again.assignments);
    CHECK(state.topic_code_counts == again.topic_code_counts);

    GibbsState other = init_state(matrix, hp, 100);
    CHECK(state.assignments != other.assignments);
}

TEST_CASE("init_state counts match a brute recount") {
    CorpusMatrix matrix = matrix_from_csv(
        "p1,c1,2\n"
        "p1,c2,1\n"
        "p2,c1,1\n"
        "p2,c3,4\n");
    Hyperparams hp{3, 1.0, 0.1};
    GibbsState state = init_state(matrix, hp, 7);
    Recount r = recount(state);
    CHECK(state.topic_code_counts == r.topic_code);
    CHECK(state.patient_topic_counts == r.patient_topic);
    CHECK(state.topic_totals == r.topic_totals);
}

TEST_CASE("init_state rejects bad input") {
    CorpusMatrix empty;
    Hyperparams hp{2, 1.0, 0.1};
    CHECK_THROWS_AS(init_state(empty, hp, 1), EmptyCorpusError);

    CorpusMatrix matrix = matrix_from_csv("p1,a,1\n");
    CHECK_THROWS_AS(init_state(matrix, Hyperparams{0, 1.0, 0.1}, 1),
                    ValidationError);
}

TEST_CASE("gibbs_sweep keeps every invariant over many sweeps") {
    CorpusMatrix matrix = matrix_from_csv(
        "p1,c1,5\np1,c2,2\np2,c2,3\np2,c3,1\np3,c1,2\np3,c3,6\n");
    Hyperparams hp{3, 0.5, 0.1};
    GibbsState state = init_state(matrix, hp, 42);
    const std::int64_t total =
        std::accumulate(state.topic_totals.begin(), state.topic_totals.end(),
                        std::int64_t{0});

    for (int sweep = 1; sweep <= 50; ++sweep) {
        gibbs_sweep(state, matrix, hp);
        CHECK(state.sweeps_done == sweep);
        CHECK(std::accumulate(state.topic_totals.begin(),
                              state.topic_totals.end(),
                              std::int64_t{0}) == total);
        REQUIRE_NOTHROW(state.check_consistency());
    }
}

TEST_CASE("gibbs_sweep is deterministic") {
    CorpusMatrix matrix = matrix_from_csv("p1,c1,5\np1,c2,2\np2,c2,3\n");
    Hyperparams hp{2, 0.5, 0.1};
    GibbsState a = init_state(matrix, hp, 5);
    GibbsState b = init_state(matrix, hp, 5);
    for (int i = 0; i < 25; ++i) {
        gibbs_sweep(a, matrix, hp);
        gibbs_sweep(b, matrix, hp);
    }
    CHECK(a.assignments == b.assignments);
    CHECK(a.topic_code_counts == b.topic_code_counts);
    CHECK(a.rng == b.rng);
}

TEST_CASE("check_consistency flags corrupted counts") {
    CorpusMatrix matrix = matrix_from_csv("p1,c1,3\np2,c2,2\n");
    Hyperparams hp{2, 0.5, 0.1};
    GibbsState state = init_state(matrix, hp, 3);
    state.topic_code_counts[0] += 1;
    CHECK_THROWS_AS(state.check_consistency(), InternalError);
}

TEST_CASE("K=1 sweep changes nothing but the counter") {
    GibbsState state = hand_state(1, 2, 1, {0, 0, 0}, {0, 0, 1}, {0, 0, 0});
    CorpusMatrix matrix = matrix_from_csv("p1,a,2\np1,b,1\n");
    Hyperparams hp{1, 0.5, 1.0};

    GibbsState before = state;
    gibbs_sweep(state, matrix, hp);
    CHECK(state.sweeps_done == before.sweeps_done + 1);
    CHECK(state.assignments == before.assignments);
    CHECK(state.topic_code_counts == before.topic_code_counts);
    CHECK(state.patient_topic_counts == before.patient_topic_counts);
}

TEST_CASE("single-token conditional is an even coin") {
    CorpusMatrix matrix = matrix_from_csv("p1,only,1\n");
    Hyperparams hp{2, 1.0, 0.1};
    GibbsState state = init_state(matrix, hp, 2024);

    int topic0 = 0;
    const int resamples = 10000;
    for (int i = 0; i < resamples; ++i) {
        gibbs_sweep(state, matrix, hp);
        topic0 += state.assignments[0] == 0 ? 1 : 0;
    }
    const double freq = static_cast<double>(topic0) / resamples;
    CHECK(freq > 0.48);
    CHECK(freq < 0.52);
}

TEST_CASE("log_likelihood of an empty corpus is exactly zero") {
    GibbsState state = hand_state(2, 3, 0, {}, {}, {});
    Hyperparams hp{2, 25.0, 0.1};
    CHECK(log_likelihood(state, hp) == 0.0);
}

TEST_CASE("log_likelihood closed form: K=1, V=2, eta=1, counts (2,1)") {
    GibbsState state = hand_state(1, 2, 1, {0, 0, 0}, {0, 0, 1}, {0, 0, 0});
    Hyperparams hp{1, 0.5, 1.0};
    // Dirichlet-multinomial: 1! * 2! * 1! / 4! = 1/12.
    CHECK(log_likelihood(state, hp) ==
          doctest::Approx(std::log(1.0 / 12.0)).epsilon(1e-12));
    CHECK(log_likelihood(state, hp) ==
          doctest::Approx(-2.4849066497880003).epsilon(1e-12));
}

TEST_CASE("log_likelihood matches an independent lgamma evaluation") {
    CorpusMatrix matrix = matrix_from_csv(
        "p1,c1,4\np1,c2,1\np2,c2,2\np2,c3,3\np3,c1,1\np3,c4,2\n");
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        Hyperparams hp{2, 12.5, 0.1};
        GibbsState state = init_state(matrix, hp, seed);
        for (int i = 0; i < 10; ++i) {
            gibbs_sweep(state, matrix, hp);
            const double expected = oracle_log_likelihood(state, hp);
            CHECK(log_likelihood(state, hp) ==
                  doctest::Approx(expected).epsilon(1e-10));
        }
    }
}

TEST_CASE("log_likelihood is invariant under topic relabeling") {
    CorpusMatrix matrix = matrix_from_csv("p1,c1,4\np1,c2,3\np2,c3,5\n");
    Hyperparams hp{3, 0.5, 0.2};
    GibbsState state = init_state(matrix, hp, 11);
    for (int i = 0; i < 5; ++i) {
        gibbs_sweep(state, matrix, hp);
    }

    // Relabel 0 -> 2, 1 -> 0, 2 -> 1 and retally.
    const int perm[3] = {2, 0, 1};
    std::vector<std::int32_t> relabeled(state.assignments.size());
    for (std::size_t j = 0; j < relabeled.size(); ++j) {
        relabeled[j] = perm[state.assignments[j]];
    }
    GibbsState swapped =
        hand_state(3, state.num_codes, state.num_patients, state.token_patient,
                   state.token_code, relabeled);
    CHECK(log_likelihood(swapped, hp) ==
          doctest::Approx(log_likelihood(state, hp)).epsilon(1e-12));
}

TEST_CASE("estimate_phi closed form and empty-topic fallback") {
    GibbsState state = hand_state(2, 2, 1, {0, 0, 0, 0}, {0, 0, 0, 1},
                                  {0, 0, 0, 0});
    REQUIRE(state.topic_code(0, 0) == 3);
    REQUIRE(state.topic_code(0, 1) == 1);
    Hyperparams hp{2, 1.0, 0.1};

    DenseMatrix phi = estimate_phi(state, hp);
    CHECK(phi.at(0, 0) == doctest::Approx(3.1 / 4.2).epsilon(1e-15));
    CHECK(phi.at(0, 1) == doctest::Approx(1.1 / 4.2).epsilon(1e-15));
    // Topic 1 is empty: prior-only, uniform.
    CHECK(phi.at(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(phi.at(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("estimate_theta closed form") {
    std::vector<std::uint32_t> patients(10, 0);
    std::vector<std::uint32_t> codes(10, 0);
    std::vector<std::int32_t> z(10, 1); // all ten tokens in topic 2
    GibbsState state = hand_state(2, 1, 1, patients, codes, z);
    Hyperparams hp{2, 0.1, 1.0};

    DenseMatrix theta = estimate_theta(state, hp);
    CHECK(theta.at(0, 0) == doctest::Approx(0.1 / 10.2).epsilon(1e-15));
    CHECK(theta.at(0, 1) == doctest::Approx(10.1 / 10.2).epsilon(1e-15));
}

TEST_CASE("estimator rows sum to one") {
    CorpusMatrix matrix = matrix_from_csv(
        "p1,c1,4\np1,c2,1\np2,c2,2\np2,c3,3\np3,c1,1\np3,c4,2\n");
    Hyperparams hp{4, 2.0, 0.3};
    GibbsState state = init_state(matrix, hp, 17);
    for (int i = 0; i < 20; ++i) {
        gibbs_sweep(state, matrix, hp);
    }
    DenseMatrix phi = estimate_phi(state, hp);
    DenseMatrix theta = estimate_theta(state, hp);
    for (std::size_t r = 0; r < phi.rows; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < phi.cols; ++c) {
            REQUIRE(phi.at(r, c) >= 0.0);
            sum += phi.at(r, c);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
    for (std::size_t r = 0; r < theta.rows; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < theta.cols; ++c) {
            sum += theta.at(r, c);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("run_chain reproducibility and bookkeeping") {
    CorpusMatrix matrix = matrix_from_csv(
        "p1,c1,4\np1,c2,1\np2,c2,2\np2,c3,3\n");
    Hyperparams hp{2, 25.0, 0.1};

    TopicModel a = run_chain(matrix, hp, 31, 40, 2);
    TopicModel b = run_chain(matrix, hp, 31, 40, 2);
    CHECK(a.phi == b.phi);
    CHECK(a.theta == b.theta);
    CHECK(a.log_likelihood == b.log_likelihood);
    CHECK(a.topic_code_counts == b.topic_code_counts);
    CHECK(a.sweeps == 42);
    CHECK(a.burn_in == 40);
    CHECK(a.keep == 2);
    CHECK(a.seed == 31);
    CHECK(a.vocabulary == matrix.codes);
    CHECK(a.has_counts());
    CHECK(a.rng_algorithm == "mt19937_64");

    TopicModel c = run_chain(matrix, hp, 32, 40, 2);
    CHECK(a.phi.values != c.phi.values);
}

TEST_CASE("run_chain options") {
    CorpusMatrix matrix = matrix_from_csv("p1,c1,4\np1,c2,1\np2,c2,2\n");
    Hyperparams hp{2, 25.0, 0.1};

    CHECK_THROWS_AS(run_chain(matrix, hp, 1, -1, 1), ValidationError);
    CHECK_THROWS_AS(run_chain(matrix, hp, 1, 10, 0), ValidationError);

    FitOptions no_theta;
    no_theta.store_theta = false;
    TopicModel slim = run_chain(matrix, hp, 1, 10, 1, no_theta);
    CHECK(slim.theta.empty());

    FitOptions averaged;
    averaged.average_phi = true;
    TopicModel avg = run_chain(matrix, hp, 1, 10, 5, averaged);
    for (std::size_t r = 0; r < avg.phi.rows; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < avg.phi.cols; ++c) {
            sum += avg.phi.at(r, c);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("two well-separated planted topics are recovered") {
    SynthConfig cfg;
    cfg.true_num_topics = 2;
    cfg.vocab_size = 10;
    cfg.num_patients = 60;
    cfg.mean_doc_length = 20;
    cfg.topic_code_concentration = 0.01;
    cfg.doc_topic_concentration = 0.05;
    cfg.seed = 8;
    SynthCorpus corpus = generate_corpus(cfg);

    TopicModel model =
        run_chain(corpus.matrix, default_hyperparams(2), 3, 200, 1);
    DenseMatrix truth = truth_phi_on_vocabulary(corpus.truth, corpus.vocabulary);
    TopicMatch match = match_topics(model.phi, truth);
    CHECK(match.mean_jsd < 0.1);
}
