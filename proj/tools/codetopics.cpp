#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "codetopics/corpus.hpp"
#include "codetopics/errors.hpp"
#include "codetopics/io.hpp"
#include "codetopics/metrics.hpp"
#include "codetopics/recommend.hpp"
#include "codetopics/sampler.hpp"
#include "codetopics/selection.hpp"
#include "codetopics/synth.hpp"

namespace ct = codetopics;
namespace fs = std::filesystem;

namespace {

struct ConfigLines {
    std::vector<std::string> lines;

    template <typename T>
    void add(const std::string& key, const T& value) {
        std::ostringstream text;
        text << key << '=' << value;
        lines.push_back(text.str());
    }
    void add_real(const std::string& key, double value) {
        lines.push_back(key + "=" + ct::format_real(value));
    }
};

ct::RecordSet load_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ct::IoError("cannot open '" + path + "' for reading");
    }
    return ct::parse_records(in);
}

ct::CorpusMatrix load_matrix(const std::string& matrix_path,
                             const std::string& vocab_path) {
    std::ifstream min(matrix_path);
    if (!min) {
        throw ct::IoError("cannot open '" + matrix_path + "' for reading");
    }
    ct::CorpusMatrix matrix = ct::read_matrix_tsv(min);
    if (!vocab_path.empty()) {
        std::ifstream vin(vocab_path);
        if (!vin) {
            throw ct::IoError("cannot open '" + vocab_path + "' for reading");
        }
        ct::attach_vocabulary(matrix, ct::read_vocabulary_tsv(vin));
    }
    return matrix;
}

ct::TopicModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ct::IoError("cannot open '" + path + "' for reading");
    }
    return ct::read_model_json(in);
}

void save_stream(const std::string& path,
                 const std::function<void(std::ostream&)>& writer) {
    std::ostringstream buffer;
    writer(buffer);
    ct::write_text_file(path, buffer.str());
}

// ---------------------------------------------------------------- ingest

struct IngestArgs {
    std::string input;
    std::string out_vocab;
    std::string out_matrix;
    std::string out_stats;
    std::string out_tfidf;
    double cutoff = 0.8;
    std::string mode = "count";
};

int run_ingest(const IngestArgs& args) {
    const ct::WeightingMode mode = ct::weighting_mode_from_string(args.mode);
    const ct::RecordSet records = load_records(args.input);
    const ct::Vocabulary vocab = ct::build_vocabulary(records, args.cutoff);
    const ct::CorpusMatrix matrix = ct::build_matrix(records, vocab, mode);
    const ct::CorpusStats stats = ct::corpus_stats(matrix, vocab);

    ConfigLines config;
    config.add("command", "ingest");
    config.add("input", args.input);
    config.add_real("cutoff", args.cutoff);
    config.add("mode", args.mode);

    save_stream(args.out_vocab,
                [&](std::ostream& out) { ct::write_vocabulary_tsv(out, vocab, config.lines); });
    save_stream(args.out_matrix,
                [&](std::ostream& out) { ct::write_matrix_tsv(out, matrix, config.lines); });
    save_stream(args.out_stats,
                [&](std::ostream& out) { ct::write_stats_tsv(out, stats, config.lines); });
    if (!args.out_tfidf.empty()) {
        save_stream(args.out_tfidf,
                    [&](std::ostream& out) { ct::write_tfidf_tsv(out, matrix, config.lines); });
    }
    std::cout << "ingested " << matrix.num_patients << " patients, "
              << matrix.num_codes << " codes, " << matrix.total_tokens()
              << " tokens (dropped " << matrix.dropped_patients << " patients, "
              << vocab.dropped_codes << " codes)\n";
    return 0;
}

// ------------------------------------------------------------------- fit

struct FitArgs {
    std::string matrix;
    std::string vocab;
    std::string out;
    int k = 0;
    std::uint64_t seed = 0;
    std::int64_t burn_in = ct::kDefaultBurnIn;
    std::int64_t keep = ct::kDefaultKeep;
    double topic_code_prior = ct::kDefaultTopicCodePrior;
    std::optional<double> doc_topic_prior;
    std::string doc_prior_preset = "50/K";
    bool average_phi = false;
    bool no_theta = false;
};

double resolve_doc_prior(const std::optional<double>& explicit_value,
                         const std::string& preset, int k, std::size_t m) {
    if (explicit_value) {
        return *explicit_value;
    }
    if (preset == "50/K") {
        return ct::default_doc_topic_prior(k);
    }
    if (preset == "50/M") {
        return ct::doc_topic_prior_50_over_m(m);
    }
    throw ct::ValidationError("unknown doc prior preset '" + preset +
                              "' (expected 50/K or 50/M)");
}

int run_fit(const FitArgs& args) {
    const ct::CorpusMatrix matrix = load_matrix(args.matrix, args.vocab);

    ct::Hyperparams hp;
    hp.num_topics = args.k;
    hp.topic_code_prior = args.topic_code_prior;
    hp.doc_topic_prior = resolve_doc_prior(args.doc_topic_prior, args.doc_prior_preset,
                                           args.k, matrix.num_patients);
    hp.validate();

    ct::FitOptions options;
    options.average_phi = args.average_phi;
    options.store_theta = !args.no_theta;

    const ct::TopicModel model =
        ct::run_chain(matrix, hp, args.seed, args.burn_in, args.keep, options);
    save_stream(args.out, [&](std::ostream& out) { ct::write_model_json(out, model); });
    std::cout << "fit K=" << args.k
              << " log_likelihood=" << ct::format_real(model.log_likelihood) << '\n';
    return 0;
}

// --------------------------------------------------------------- sweep-k

struct SweepArgs {
    std::string matrix;
    std::string vocab;
    std::string out;
    int k_min = 5;
    int k_max = 100;
    int k_step = 5;
    int chains = ct::kDefaultChains;
    std::uint64_t seed = 0;
    std::int64_t burn_in = ct::kDefaultBurnIn;
    std::int64_t keep = ct::kDefaultKeep;
    double topic_code_prior = ct::kDefaultTopicCodePrior;
    std::optional<double> doc_topic_prior;
    int threads = 0;
};

int run_sweep(const SweepArgs& args) {
    const ct::CorpusMatrix matrix = load_matrix(args.matrix, args.vocab);
    const std::vector<int> grid = ct::make_k_grid(args.k_min, args.k_max, args.k_step);

    ct::HyperparamsTemplate hp;
    hp.topic_code_prior = args.topic_code_prior;
    hp.doc_topic_prior = args.doc_topic_prior;

    const ct::KSweepResult result =
        ct::sweep_k(matrix, hp, grid, args.chains, args.seed, args.burn_in, args.keep,
                    args.threads);
    const int selected = ct::select_k(result);

    ConfigLines config;
    config.add("command", "sweep-k");
    config.add("matrix", args.matrix);
    config.add("grid", std::to_string(args.k_min) + ".." + std::to_string(args.k_max) +
                           " step " + std::to_string(args.k_step));
    config.add("chains", args.chains);
    config.add("seed", args.seed);
    config.add("burn_in", args.burn_in);
    config.add("keep", args.keep);
    config.add_real("topic_code_prior", args.topic_code_prior);
    if (args.doc_topic_prior) {
        config.add_real("doc_topic_prior", *args.doc_topic_prior);
    } else {
        config.add("doc_topic_prior", "50/K");
    }

    save_stream(args.out, [&](std::ostream& out) {
        ct::write_sweep_tsv(out, result, selected, config.lines);
    });
    std::cout << selected << '\n';
    return 0;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
    std::string model;
    std::string out_dir;
    double threshold = ct::kDefaultTopCodeThreshold;
};

std::string topic_tag(int topic, int k) {
    int width = 2;
    for (int v = k - 1; v >= 100; v /= 10) {
        ++width;
    }
    char buffer[16];
    std::snprintf(buffer, sizeof buffer, "%0*d", width, topic);
    return buffer;
}

int run_report(const ReportArgs& args) {
    const ct::TopicModel model = load_model(args.model);
    fs::create_directories(args.out_dir);
    const auto path = [&](const std::string& name) {
        return (fs::path(args.out_dir) / name).string();
    };

    ConfigLines config;
    config.add("command", "report");
    config.add("model", args.model);
    config.add("K", model.hp.num_topics);
    config.add_real("doc_topic_prior", model.hp.doc_topic_prior);
    config.add_real("topic_code_prior", model.hp.topic_code_prior);
    config.add("seed", model.seed);
    config.add_real("threshold", args.threshold);

    save_stream(path("entropy.tsv"), [&](std::ostream& out) {
        ct::write_entropy_tsv(out, model.phi, config.lines);
    });
    const ct::JsdSummary jsd = ct::jsd_matrix(model.phi);
    save_stream(path("jsd.tsv"), [&](std::ostream& out) {
        ct::write_jsd_tsv(out, jsd, config.lines);
    });

    for (int t = 0; t < model.hp.num_topics; ++t) {
        const std::string tag = topic_tag(t, model.hp.num_topics);
        const auto row = std::span(model.phi.row(static_cast<std::size_t>(t)),
                                   model.phi.cols);
        const ct::TopCodes top = ct::top_codes(row, args.threshold, t);
        save_stream(path("topic_" + tag + ".tsv"), [&](std::ostream& out) {
            ct::write_top_codes_tsv(out, top, model.vocabulary, config.lines);
        });
        save_stream(path("code_probabilities_" + tag + ".tsv"), [&](std::ostream& out) {
            ct::write_code_probabilities_tsv(out, model.phi, t, config.lines);
        });
        if (model.has_counts()) {
            const auto rows = ct::occurrence_split(model, t, args.threshold);
            save_stream(path("occurrence_split_" + tag + ".tsv"), [&](std::ostream& out) {
                ct::write_occurrence_split_tsv(out, rows, model.vocabulary, t,
                                               config.lines);
            });
        }
    }
    if (!model.has_counts()) {
        std::cerr << "note: model has no n_tc counts; occurrence splits skipped\n";
    }
    std::cout << "report written to " << args.out_dir << '\n';
    return 0;
}

// ------------------------------------------------------------- recommend

struct RecommendArgs {
    std::string model;
    std::string code;
    std::string mode = "posterior";
    double threshold = ct::kDefaultTopCodeThreshold;
};

int run_recommend(const RecommendArgs& args) {
    const ct::TopicModel model = load_model(args.model);
    const ct::Recommendation rec = ct::recommend(
        model, args.code, ct::recommend_mode_from_string(args.mode), args.threshold);
    ct::write_recommendation_json(std::cout, rec);
    return 0;
}

// ----------------------------------------------------------------- synth

struct SynthArgs {
    std::string out_records;
    std::string out_truth;
    int k = 0;
    std::size_t vocab_size = 0;
    std::size_t patients = 0;
    double mean_length = 0.0;
    double topic_conc = 0.01;
    double doc_conc = 0.3;
    std::uint64_t seed = 0;
};

int run_synth(const SynthArgs& args) {
    ct::SynthConfig cfg;
    cfg.true_num_topics = args.k;
    cfg.vocab_size = args.vocab_size;
    cfg.num_patients = args.patients;
    cfg.mean_doc_length = args.mean_length;
    cfg.topic_code_concentration = args.topic_conc;
    cfg.doc_topic_concentration = args.doc_conc;
    cfg.seed = args.seed;

    const ct::SynthCorpus corpus = ct::generate_corpus(cfg);

    ConfigLines config;
    config.add("command", "synth");
    config.add("K_true", args.k);
    config.add("V", args.vocab_size);
    config.add("M", args.patients);
    config.add_real("mean_length", args.mean_length);
    config.add_real("topic_code_concentration", args.topic_conc);
    config.add_real("doc_topic_concentration", args.doc_conc);
    config.add("seed", args.seed);

    save_stream(args.out_records, [&](std::ostream& out) {
        ct::write_records_csv(out, corpus.records, config.lines);
    });
    save_stream(args.out_truth, [&](std::ostream& out) {
        ct::write_ground_truth_json(out, corpus.truth, cfg);
    });
    std::cout << "synthesized " << corpus.matrix.num_patients << " patients, "
              << corpus.matrix.total_tokens() << " tokens over "
              << corpus.matrix.num_codes << " observed codes\n";
    return 0;
}

// ----------------------------------------------------------- oracle-check

struct OracleArgs {
    double tol = 0.02;
    std::int64_t burn_in = 1000;
    std::int64_t sweeps = 200000;
    std::uint64_t seed = 1;
};

// The built-in instance: 2 patients, 4 tokens, V=3, K=2. Small enough for
// exact enumeration (2^4 assignments), large enough that the sampler has to
// mix across patients.
ct::CorpusMatrix oracle_instance() {
    ct::CorpusMatrix matrix;
    matrix.num_patients = 2;
    matrix.num_codes = 3;
    matrix.mode = ct::WeightingMode::count;
    matrix.rows = {{{0, 1}, {1, 1}}, {{0, 1}, {2, 1}}};
    matrix.row_totals = {2, 2};
    matrix.patient_ids = {"p0", "p1"};
    matrix.codes = {"c0", "c1", "c2"};
    return matrix;
}

int run_oracle_check(const OracleArgs& args) {
    const ct::CorpusMatrix matrix = oracle_instance();
    ct::Hyperparams hp;
    hp.num_topics = 2;
    hp.topic_code_prior = 0.1;
    hp.doc_topic_prior = 25.0;
    hp.validate();

    const ct::DenseMatrix exact = ct::exact_posterior(matrix, hp);

    ct::GibbsState state = ct::init_state(matrix, hp, args.seed);
    for (std::int64_t s = 0; s < args.burn_in; ++s) {
        ct::gibbs_sweep(state, matrix, hp);
    }
    const std::size_t tokens = state.total_tokens();
    const auto k = static_cast<std::size_t>(hp.num_topics);
    std::vector<std::int64_t> tally(tokens * k, 0);
    for (std::int64_t s = 0; s < args.sweeps; ++s) {
        ct::gibbs_sweep(state, matrix, hp);
        for (std::size_t j = 0; j < tokens; ++j) {
            tally[j * k + static_cast<std::size_t>(state.assignments[j])] += 1;
        }
    }

    double max_deviation = 0.0;
    for (std::size_t j = 0; j < tokens; ++j) {
        for (std::size_t t = 0; t < k; ++t) {
            const double frequency = static_cast<double>(tally[j * k + t]) /
                                     static_cast<double>(args.sweeps);
            max_deviation =
                std::max(max_deviation, std::abs(frequency - exact.at(j, t)));
        }
    }

    std::cout << "max absolute marginal deviation: "
              << ct::format_real(max_deviation) << " (tolerance "
              << ct::format_real(args.tol) << ", " << args.sweeps
              << " sweeps after " << args.burn_in << " burn-in, seed " << args.seed
              << ")\n";
    if (max_deviation > args.tol) {
        std::cerr << "oracle check failed: deviation exceeds tolerance\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topic modeling over coded diagnosis events: corpus building, "
                 "collapsed Gibbs LDA, K selection, topic metrics, synthetic "
                 "benchmarks, and code recommendations"};
    app.require_subcommand(1);

    IngestArgs ingest;
    auto* cmd_ingest = app.add_subcommand(
        "ingest", "Build vocabulary, matrix, and stats from a record CSV");
    cmd_ingest->add_option("--input", ingest.input, "record CSV path")->required();
    cmd_ingest->add_option("--out-vocab", ingest.out_vocab, "vocabulary TSV path")
        ->required();
    cmd_ingest->add_option("--out-matrix", ingest.out_matrix, "matrix TSV path")
        ->required();
    cmd_ingest->add_option("--out-stats", ingest.out_stats, "stats TSV path")
        ->required();
    cmd_ingest->add_option("--out-tfidf", ingest.out_tfidf,
                           "optional tf-idf diagnostic TSV path");
    cmd_ingest->add_option("--cutoff", ingest.cutoff,
                           "cumulative frequency cutoff (default 0.8)");
    cmd_ingest->add_option("--mode", ingest.mode, "count or binary (default count)");

    FitArgs fit;
    auto* cmd_fit = app.add_subcommand("fit", "Fit one LDA chain and write the model");
    cmd_fit->add_option("--matrix", fit.matrix, "matrix TSV path")->required();
    cmd_fit->add_option("--vocab", fit.vocab, "vocabulary TSV path")->required();
    cmd_fit->add_option("--out", fit.out, "model JSON path")->required();
    cmd_fit->add_option("--k", fit.k, "number of topics")->required();
    cmd_fit->add_option("--seed", fit.seed, "RNG seed")->required();
    cmd_fit->add_option("--burn-in", fit.burn_in, "burn-in sweeps (default 4000)");
    cmd_fit->add_option("--keep", fit.keep, "kept sweeps after burn-in (default 1)");
    cmd_fit->add_option("--topic-code-prior", fit.topic_code_prior,
                        "symmetric prior over codes per topic (default 0.1)");
    cmd_fit->add_option("--doc-topic-prior", fit.doc_topic_prior,
                        "symmetric prior over topics per patient (overrides preset)");
    cmd_fit->add_option("--doc-prior-preset", fit.doc_prior_preset,
                        "50/K (default) or 50/M");
    cmd_fit->add_flag("--average-phi", fit.average_phi,
                      "average phi over kept sweeps instead of final state");
    cmd_fit->add_flag("--no-theta", fit.no_theta, "do not store theta in the model");

    SweepArgs sweep;
    auto* cmd_sweep = app.add_subcommand(
        "sweep-k", "Sweep K over a grid, report the best by mean log-likelihood");
    cmd_sweep->add_option("--matrix", sweep.matrix, "matrix TSV path")->required();
    cmd_sweep->add_option("--vocab", sweep.vocab, "vocabulary TSV path");
    cmd_sweep->add_option("--out", sweep.out, "sweep TSV path")->required();
    cmd_sweep->add_option("--k-min", sweep.k_min, "grid start (default 5)");
    cmd_sweep->add_option("--k-max", sweep.k_max, "grid end (default 100)");
    cmd_sweep->add_option("--k-step", sweep.k_step, "grid step (default 5)");
    cmd_sweep->add_option("--chains", sweep.chains, "chains per K (default 5)");
    cmd_sweep->add_option("--seed", sweep.seed, "master seed")->required();
    cmd_sweep->add_option("--burn-in", sweep.burn_in, "burn-in sweeps (default 4000)");
    cmd_sweep->add_option("--keep", sweep.keep, "kept sweeps (default 1)");
    cmd_sweep->add_option("--topic-code-prior", sweep.topic_code_prior,
                          "symmetric prior over codes per topic (default 0.1)");
    cmd_sweep->add_option("--doc-topic-prior", sweep.doc_topic_prior,
                          "fixed doc-topic prior (default: 50/K per grid point)");
    cmd_sweep->add_option("--threads", sweep.threads,
                          "worker threads, 0 = hardware (default 0)");

    ReportArgs report;
    auto* cmd_report =
        app.add_subcommand("report", "Write topic, entropy, JSD, and figure data");
    cmd_report->add_option("--model", report.model, "model JSON path")->required();
    cmd_report->add_option("--out-dir", report.out_dir, "output directory")
        ->required();
    cmd_report->add_option("--threshold", report.threshold,
                           "top-code threshold (default 0.01)");

    RecommendArgs recommend;
    auto* cmd_recommend = app.add_subcommand(
        "recommend", "Suggest co-occurring codes for a query code");
    cmd_recommend->add_option("--model", recommend.model, "model JSON path")
        ->required();
    cmd_recommend->add_option("--code", recommend.code, "query code")->required();
    cmd_recommend->add_option("--mode", recommend.mode,
                              "posterior (default) or likelihood");
    cmd_recommend->add_option("--threshold", recommend.threshold,
                              "top-code threshold (default 0.01)");

    SynthArgs synth;
    auto* cmd_synth = app.add_subcommand(
        "synth", "Generate a planted-topic corpus with ground truth");
    cmd_synth->add_option("--out-records", synth.out_records, "record CSV path")
        ->required();
    cmd_synth->add_option("--out-truth", synth.out_truth, "ground-truth JSON path")
        ->required();
    cmd_synth->add_option("--k", synth.k, "number of true topics")->required();
    cmd_synth->add_option("--vocab-size", synth.vocab_size, "vocabulary size")
        ->required();
    cmd_synth->add_option("--patients", synth.patients, "number of patients")
        ->required();
    cmd_synth->add_option("--mean-length", synth.mean_length,
                          "mean tokens per patient (Poisson, truncated at 1)")
        ->required();
    cmd_synth->add_option("--topic-conc", synth.topic_conc,
                          "topic-code Dirichlet concentration (default 0.01)");
    cmd_synth->add_option("--doc-conc", synth.doc_conc,
                          "doc-topic Dirichlet concentration (default 0.3)");
    cmd_synth->add_option("--seed", synth.seed, "RNG seed")->required();

    OracleArgs oracle;
    auto* cmd_oracle = app.add_subcommand(
        "oracle-check",
        "Compare Gibbs marginals against exact enumeration on a built-in instance");
    cmd_oracle->add_option("--tol", oracle.tol, "max allowed deviation (default 0.02)");
    cmd_oracle->add_option("--burn-in", oracle.burn_in,
                           "burn-in sweeps (default 1000)");
    cmd_oracle->add_option("--sweeps", oracle.sweeps,
                           "post-burn-in sweeps (default 200000)");
    cmd_oracle->add_option("--seed", oracle.seed, "RNG seed (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (cmd_ingest->parsed()) {
            return run_ingest(ingest);
        }
        if (cmd_fit->parsed()) {
            return run_fit(fit);
        }
        if (cmd_sweep->parsed()) {
            return run_sweep(sweep);
        }
        if (cmd_report->parsed()) {
            return run_report(report);
        }
        if (cmd_recommend->parsed()) {
            return run_recommend(recommend);
        }
        if (cmd_synth->parsed()) {
            return run_synth(synth);
        }
        if (cmd_oracle->parsed()) {
            return run_oracle_check(oracle);
        }
    } catch (const ct::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
