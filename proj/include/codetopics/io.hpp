#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "codetopics/corpus.hpp"
#include "codetopics/metrics.hpp"
#include "codetopics/recommend.hpp"
#include "codetopics/sampler.hpp"
#include "codetopics/selection.hpp"
#include "codetopics/synth.hpp"

namespace codetopics {

// File formats. Every writer takes `config`: the resolved run configuration,
// emitted as leading `# key=value` comment lines so any output can be traced
// back to the exact invocation that produced it. Readers skip comment lines,
// except the structured metadata comments their own writers emit (the
// `# M= V= mode=` matrix header, the `# cutoff=` vocabulary header).

// Reals are serialized with 17 significant digits so values round-trip
// exactly.
std::string format_real(double value);

// Vocabulary TSV: rank<TAB>code<TAB>count<TAB>cumulative_fraction.
void write_vocabulary_tsv(std::ostream& out, const Vocabulary& vocab,
                          const std::vector<std::string>& config);
Vocabulary read_vocabulary_tsv(std::istream& in);

// Sparse triplet TSV: patient_index<TAB>code_index<TAB>count, preceded by a
// `# M=<M> V=<V> mode=<mode> dropped_patients=<n>` header line.
void write_matrix_tsv(std::ostream& out, const CorpusMatrix& matrix,
                      const std::vector<std::string>& config);
CorpusMatrix read_matrix_tsv(std::istream& in);
// Attaches vocabulary codes as column labels; V must match.
void attach_vocabulary(CorpusMatrix& matrix, const Vocabulary& vocab);

// Stats TSV: rank<TAB>code<TAB>count<TAB>cumulative_fraction rows plus
// `#dropped_patients <n>` and `#dropped_codes <n>` footers.
void write_stats_tsv(std::ostream& out, const CorpusStats& stats,
                     const std::vector<std::string>& config);

// Diagnostic tf-idf triplets: patient_index<TAB>code_index<TAB>tfidf.
void write_tfidf_tsv(std::ostream& out, const CorpusMatrix& matrix,
                     const std::vector<std::string>& config);

// Record CSV: patient_id,code,count.
void write_records_csv(std::ostream& out, const RecordSet& records,
                       const std::vector<std::string>& config);

// Sweep TSV: K<TAB>chain<TAB>seed<TAB>log_likelihood rows, then a
// `#summary` marker followed by K<TAB>mean_ll rows and `#selected <K>`.
void write_sweep_tsv(std::ostream& out, const KSweepResult& result,
                     int selected_k, const std::vector<std::string>& config);

// Model JSON, single document:
// {format_version, rng, K, doc_topic_prior, topic_code_prior, seed, burn_in,
//  keep, sweeps, log_likelihood, vocabulary, phi, theta, n_tc}.
// theta is null when the model does not store it.
void write_model_json(std::ostream& out, const TopicModel& model);
TopicModel read_model_json(std::istream& in);

// Ground truth JSON: config, code names, patient ids, phi_star, theta_star,
// and the sampled topic labels.
void write_ground_truth_json(std::ostream& out, const GroundTruth& truth,
                             const SynthConfig& cfg);

// Report writers (shapes follow the per-topic tables and figures).
void write_top_codes_tsv(std::ostream& out, const TopCodes& top,
                         const std::vector<std::string>& codes,
                         const std::vector<std::string>& config);
void write_entropy_tsv(std::ostream& out, const DenseMatrix& phi,
                       const std::vector<std::string>& config);
void write_jsd_tsv(std::ostream& out, const JsdSummary& summary,
                   const std::vector<std::string>& config);
// code_index<TAB>probability for one topic, all V codes.
void write_code_probabilities_tsv(std::ostream& out, const DenseMatrix& phi,
                                  int topic,
                                  const std::vector<std::string>& config);
// code<TAB>topic_count<TAB>corpus_count for one topic's top-codes.
void write_occurrence_split_tsv(std::ostream& out,
                                const std::vector<OccurrenceSplitRow>& rows,
                                const std::vector<std::string>& codes, int topic,
                                const std::vector<std::string>& config);

// Recommendation JSON: {query, mode, threshold, topics, suggestions}.
void write_recommendation_json(std::ostream& out, const Recommendation& rec);

// Convenience file helpers; throw IoError on failure.
void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

} // namespace codetopics
