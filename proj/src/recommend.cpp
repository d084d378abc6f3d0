#include "codetopics/recommend.hpp"

#include <algorithm>
#include <numeric>

#include "codetopics/errors.hpp"

namespace codetopics {

const char* to_string(RecommendMode mode) {
    return mode == RecommendMode::posterior ? "posterior" : "likelihood";
}

RecommendMode recommend_mode_from_string(const std::string& text) {
    if (text == "posterior") {
        return RecommendMode::posterior;
    }
    if (text == "likelihood") {
        return RecommendMode::likelihood;
    }
    throw ValidationError("unknown recommend mode '" + text +
                          "' (expected posterior or likelihood)");
}

namespace {

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1);
    std::vector<std::size_t> cur(b.size() + 1);
    std::iota(prev.begin(), prev.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string nearest_codes_hint(const std::string& query,
                               const std::vector<std::string>& vocabulary) {
    std::vector<std::pair<std::size_t, const std::string*>> ranked;
    ranked.reserve(vocabulary.size());
    for (const std::string& code : vocabulary) {
        ranked.emplace_back(edit_distance(query, code), &code);
    }
    const std::size_t shown = std::min<std::size_t>(3, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + shown, ranked.end(),
                      [](const auto& x, const auto& y) {
                          if (x.first != y.first) {
                              return x.first < y.first;
                          }
                          return *x.second < *y.second;
                      });
    std::string hint;
    for (std::size_t i = 0; i < shown; ++i) {
        if (!hint.empty()) {
            hint += ", ";
        }
        hint += *ranked[i].second;
    }
    return hint;
}

} // namespace

Recommendation recommend(const TopicModel& model, const std::string& code,
                         RecommendMode mode, double threshold) {
    if (threshold < 0.0 || threshold >= 1.0) {
        throw ValidationError("threshold must lie in [0, 1)");
    }
    const auto found =
        std::find(model.vocabulary.begin(), model.vocabulary.end(), code);
    if (found == model.vocabulary.end()) {
        std::string message = "code '" + code + "' is not in the model vocabulary";
        if (!model.vocabulary.empty()) {
            message += "; nearest codes: " + nearest_codes_hint(code, model.vocabulary);
        }
        throw UnknownCodeError(message);
    }
    const auto column =
        static_cast<std::size_t>(found - model.vocabulary.begin());
    const auto k = static_cast<std::size_t>(model.hp.num_topics);

    Recommendation result;
    result.query = code;
    result.mode = mode;
    result.threshold = threshold;
    result.topics.resize(k);

    if (mode == RecommendMode::likelihood) {
        for (std::size_t t = 0; t < k; ++t) {
            result.topics[t] = {static_cast<int>(t), model.phi.at(t, column)};
        }
    } else {
        if (!model.has_counts()) {
            throw MissingStatisticsError(
                "posterior mode needs the model's topic-code counts; refit or use "
                "likelihood mode");
        }
        std::int64_t grand_total = 0;
        std::vector<std::int64_t> totals(k, 0);
        for (std::size_t t = 0; t < k; ++t) {
            totals[t] = model.topic_total(static_cast<int>(t));
            grand_total += totals[t];
        }
        double denom = 0.0;
        std::vector<double> weighted(k, 0.0);
        for (std::size_t t = 0; t < k; ++t) {
            const double w = grand_total > 0
                                 ? static_cast<double>(totals[t]) /
                                       static_cast<double>(grand_total)
                                 : 1.0 / static_cast<double>(k);
            weighted[t] = model.phi.at(t, column) * w;
            denom += weighted[t];
        }
        for (std::size_t t = 0; t < k; ++t) {
            result.topics[t] = {static_cast<int>(t), weighted[t] / denom};
        }
    }

    std::stable_sort(result.topics.begin(), result.topics.end(),
                     [](const TopicScore& a, const TopicScore& b) {
                         return a.score > b.score;
                     });

    const int dominant = result.topics.front().topic;
    const TopCodes top = top_codes(
        std::span(model.phi.row(static_cast<std::size_t>(dominant)), model.phi.cols),
        threshold, dominant);
    for (const TopCodeEntry& entry : top.entries) {
        if (entry.code_index == column) {
            continue;
        }
        result.suggestions.push_back(
            {model.vocabulary[entry.code_index], entry.probability});
    }
    return result;
}

} // namespace codetopics
