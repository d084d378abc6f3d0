#pragma once

#include <string>
#include <vector>

#include "codetopics/metrics.hpp"
#include "codetopics/sampler.hpp"

namespace codetopics {

// How a code's dominant topic is chosen.
//   likelihood: score topic t by phi(t, code).
//   posterior:  weight by corpus topic mass, score = phi(t, code) w_t,
//               normalized over topics; needs the model's n_tc counts.
enum class RecommendMode { posterior, likelihood };

const char* to_string(RecommendMode mode);
RecommendMode recommend_mode_from_string(const std::string& text);

struct TopicScore {
    int topic = 0;
    double score = 0.0;
};

struct Suggestion {
    std::string code;
    double probability = 0.0;
};

// Co-occurrence suggestions for one query code: the ranked topic list plus
// the dominant topic's top-codes with the query itself removed.
struct Recommendation {
    std::string query;
    RecommendMode mode = RecommendMode::posterior;
    double threshold = kDefaultTopCodeThreshold;
    std::vector<TopicScore> topics; // descending score, ties by topic index
    std::vector<Suggestion> suggestions;
};

Recommendation recommend(const TopicModel& model, const std::string& code,
                         RecommendMode mode = RecommendMode::posterior,
                         double threshold = kDefaultTopCodeThreshold);

} // namespace codetopics
