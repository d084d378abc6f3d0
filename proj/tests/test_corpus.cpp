#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "codetopics/corpus.hpp"
#include "codetopics/errors.hpp"
#include "codetopics/rng.hpp"

using namespace codetopics;

namespace {

// The five office-visit example patients (conditions x counts).
const char* kVisitCsv =
    "patient_id,code,count\n"
    "1,Hypertension,17\n"
    "1,Type 2 Diabetes Mellitus,17\n"
    "1,Morbid Obesity,10\n"
    "1,Goiter,2\n"
    "1,Vitamin D Deficiency,2\n"
    "1,Anemia,9\n"
    "1,Pain in Limb,2\n"
    "1,Osteoporosis,2\n"
    "2,Vitamin D Deficiency,5\n"
    "2,Pain in Limb,5\n"
    "2,Osteoporosis,5\n"
    "3,Hypertension,8\n"
    "3,Type 2 Diabetes Mellitus,8\n"
    "3,Morbid Obesity,8\n"
    "3,Anemia,8\n"
    "4,Vitamin D Deficiency,20\n"
    "4,Pain in Limb,20\n"
    "4,Osteoporosis,20\n"
    "5,Hypertension,10\n"
    "5,Type 2 Diabetes Mellitus,10\n"
    "5,Morbid Obesity,10\n"
    "5,Goiter,10\n"
    "5,Anemia,10\n";

RecordSet visit_records() {
    std::istringstream in(kVisitCsv);
    return parse_records(in);
}

} // namespace

TEST_CASE("parse_records aggregates and defaults counts") {
    std::istringstream in(
        "# comment\n"
        "p1,A\n"
        "p1,A\n"
        "\n"
        "p1,A\n"
        "p2,B,4\n"
        "p1,B,2\n"
        "p1,B,3\n");
    RecordSet records = parse_records(in);
    CHECK(records.entries.size() == 2);
    CHECK(records.entries.at("p1").at("A") == 3);
    CHECK(records.entries.at("p1").at("B") == 5);
    CHECK(records.entries.at("p2").at("B") == 4);
}

TEST_CASE("parse_records accepts the optional header") {
    std::istringstream with(
        "patient_id,code,count\n"
        "p1,A,2\n");
    CHECK(parse_records(with).entries.at("p1").at("A") == 2);

    // A first line that is not the header is data.
    std::istringstream without("p1,A,2\n");
    CHECK(parse_records(without).entries.at("p1").at("A") == 2);
}

TEST_CASE("parse_records rejects malformed lines with the line number") {
    std::istringstream zero("p1,A,0\n");
    CHECK_THROWS_AS(parse_records(zero), ParseError);

    std::istringstream negative("p1,A,-3\n");
    CHECK_THROWS_AS(parse_records(negative), ParseError);

    std::istringstream text_count("p1,A,many\n");
    CHECK_THROWS_AS(parse_records(text_count), ParseError);

    std::istringstream too_many("p1,A,1,extra\n");
    CHECK_THROWS_AS(parse_records(too_many), ParseError);

    std::istringstream one_field("p1\n");
    CHECK_THROWS_AS(parse_records(one_field), ParseError);

    std::istringstream second_bad("p1,A,1\np2,B,x\n");
    try {
        parse_records(second_bad);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("parse_records rejects empty input") {
    std::istringstream empty("");
    CHECK_THROWS_AS(parse_records(empty), EmptyCorpusError);

    std::istringstream comments_only("# nothing\npatient_id,code,count\n");
    CHECK_THROWS_AS(parse_records(comments_only), EmptyCorpusError);
}

TEST_CASE("vocabulary prefix rule on the A-D example") {
    std::istringstream in(
        "p1,A,50\n"
        "p1,B,30\n"
        "p1,C,15\n"
        "p1,D,5\n");
    RecordSet records = parse_records(in);
    Vocabulary vocab = build_vocabulary(records, 0.8);
    CHECK(vocab.codes == std::vector<std::string>{"A", "B"});
    CHECK(vocab.frequencies == std::vector<Count>{50, 30});
    CHECK(vocab.total_frequency == 100);
    CHECK(vocab.dropped_codes == 2);
}

TEST_CASE("vocabulary ordering and tie-break on the visit example") {
    Vocabulary vocab = build_vocabulary(visit_records(), 1.0);
    // 35, 35, 28, then a four-way tie at 27 broken lexicographically, then 12.
    CHECK(vocab.codes ==
          std::vector<std::string>{"Hypertension", "Type 2 Diabetes Mellitus",
                                   "Morbid Obesity", "Anemia", "Osteoporosis",
                                   "Pain in Limb", "Vitamin D Deficiency",
                                   "Goiter"});
    CHECK(vocab.frequencies ==
          std::vector<Count>{35, 35, 28, 27, 27, 27, 27, 12});
    CHECK(vocab.total_frequency == 218);
    CHECK(vocab.dropped_codes == 0);
}

TEST_CASE("vocabulary minimality across cutoffs") {
    RecordSet records = visit_records();
    for (double cutoff : {0.2, 0.5, 0.8, 0.9, 1.0}) {
        Vocabulary vocab = build_vocabulary(records, cutoff);
        Count kept = 0;
        for (Count f : vocab.frequencies) {
            kept += f;
        }
        const double total = static_cast<double>(vocab.total_frequency);
        CHECK(static_cast<double>(kept) / total >= cutoff);
        if (vocab.size() > 1) {
            const double without_last =
                static_cast<double>(kept - vocab.frequencies.back()) / total;
            CHECK(without_last < cutoff);
        }
    }
}

TEST_CASE("vocabulary cutoff validation") {
    RecordSet records = visit_records();
    CHECK_THROWS_AS(build_vocabulary(records, 0.0), ValidationError);
    CHECK_THROWS_AS(build_vocabulary(records, 1.5), ValidationError);
    CHECK_THROWS_AS(build_vocabulary(RecordSet{}, 0.8), EmptyCorpusError);
}

TEST_CASE("matrix cells reproduce the visit table") {
    RecordSet records = visit_records();
    Vocabulary vocab = build_vocabulary(records, 1.0);
    CorpusMatrix matrix = build_matrix(records, vocab, WeightingMode::count);

    REQUIRE(matrix.num_patients == 5);
    REQUIRE(matrix.num_codes == 8);
    const std::map<std::string, Count> expected_p1 = {
        {"Hypertension", 17}, {"Type 2 Diabetes Mellitus", 17},
        {"Morbid Obesity", 10}, {"Goiter", 2},
        {"Vitamin D Deficiency", 2}, {"Anemia", 9},
        {"Pain in Limb", 2},  {"Osteoporosis", 2}};
    for (const auto& [code, count] : expected_p1) {
        auto col = vocab.index_of(code);
        REQUIRE(col.has_value());
        CHECK(matrix.cell(0, *col) == count);
    }
    CHECK(matrix.row_totals[0] == 61);
    CHECK(matrix.patient_ids[0] == "1");
    CHECK(matrix.cell(1, *vocab.index_of("Hypertension")) == 0);
    CHECK(matrix.total_tokens() == 218);
}

TEST_CASE("binary mode clamps every cell to one") {
    RecordSet records = visit_records();
    Vocabulary vocab = build_vocabulary(records, 1.0);
    CorpusMatrix matrix = build_matrix(records, vocab, WeightingMode::binary);
    for (std::size_t i = 0; i < matrix.num_patients; ++i) {
        for (const auto& [col, value] : matrix.rows[i]) {
            CHECK(value == 1);
        }
    }
    CHECK(matrix.row_totals[0] == 8); // patient 1 has all eight codes
}

TEST_CASE("patients emptied by truncation are dropped and tallied") {
    std::istringstream in(
        "p1,A,80\n"
        "p2,B,15\n"
        "p3,C,5\n");
    RecordSet records = parse_records(in);
    Vocabulary vocab = build_vocabulary(records, 0.8);
    REQUIRE(vocab.codes == std::vector<std::string>{"A"});

    CorpusMatrix matrix = build_matrix(records, vocab, WeightingMode::count);
    CHECK(matrix.num_patients == 1);
    CHECK(matrix.dropped_patients == 2);
    CHECK(matrix.patient_ids == std::vector<std::string>{"p1"});

    // Shrink the vocabulary to something nobody uses.
    Vocabulary none = vocab;
    none.codes = {"Z"};
    none.frequencies = {1};
    CHECK_THROWS_AS(build_matrix(records, none, WeightingMode::count),
                    EmptyCorpusError);
}

TEST_CASE("count conservation against the raw records") {
    RecordSet records = visit_records();
    for (double cutoff : {0.5, 0.8, 1.0}) {
        Vocabulary vocab = build_vocabulary(records, cutoff);
        CorpusMatrix matrix = build_matrix(records, vocab, WeightingMode::count);

        Count expected = 0;
        for (const auto& [patient, codes] : records.entries) {
            for (const auto& [code, count] : codes) {
                if (vocab.index_of(code).has_value()) {
                    expected += count;
                }
            }
        }
        CHECK(matrix.total_tokens() == expected);
    }
}

TEST_CASE("consistent code relabeling permutes columns identically") {
    RecordSet original = visit_records();
    // Relabel every code with a prefix that reverses lexicographic order
    // within the frequency ties.
    auto relabel = [](const std::string& code) { return "zz_" + code; };
    RecordSet renamed;
    for (const auto& [patient, codes] : original.entries) {
        for (const auto& [code, count] : codes) {
            renamed.entries[patient][relabel(code)] = count;
        }
    }

    Vocabulary vocab_a = build_vocabulary(original, 1.0);
    Vocabulary vocab_b = build_vocabulary(renamed, 1.0);
    CorpusMatrix a = build_matrix(original, vocab_a, WeightingMode::count);
    CorpusMatrix b = build_matrix(renamed, vocab_b, WeightingMode::count);

    REQUIRE(vocab_a.size() == vocab_b.size());
    for (std::size_t i = 0; i < vocab_a.size(); ++i) {
        CHECK(relabel(vocab_a.codes[i]) == vocab_b.codes[i]);
    }
    CHECK(a.rows == b.rows);
    CHECK(a.row_totals == b.row_totals);
}

TEST_CASE("corpus_stats curve is non-decreasing and ends at one") {
    RecordSet records = visit_records();
    Vocabulary vocab = build_vocabulary(records, 1.0);
    CorpusMatrix matrix = build_matrix(records, vocab, WeightingMode::count);
    CorpusStats stats = corpus_stats(matrix, vocab);

    REQUIRE(stats.codes.size() == 8);
    CHECK(stats.counts.front() == 35);
    for (std::size_t i = 1; i < stats.counts.size(); ++i) {
        CHECK(stats.counts[i - 1] >= stats.counts[i]);
        CHECK(stats.cumulative[i - 1] <= stats.cumulative[i]);
    }
    CHECK(stats.cumulative.back() == 1.0);
}

TEST_CASE("corpus_stats two-code fractions") {
    std::istringstream in(
        "p1,A,3\n"
        "p1,B,1\n");
    RecordSet records = parse_records(in);
    Vocabulary vocab = build_vocabulary(records, 1.0);
    CorpusMatrix matrix = build_matrix(records, vocab, WeightingMode::count);
    CorpusStats stats = corpus_stats(matrix, vocab);
    REQUIRE(stats.cumulative.size() == 2);
    CHECK(stats.cumulative[0] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(stats.cumulative[1] == 1.0);
}

TEST_CASE("tfidf weight formula") {
    CHECK(tfidf_weight(3, 100, 10) ==
          doctest::Approx(3.0 * std::log(10.0)).epsilon(1e-12));
    CHECK(tfidf_weight(5, 50, 50) == doctest::Approx(0.0));
}

TEST_CASE("weighting mode names round-trip") {
    CHECK(weighting_mode_from_string("count") == WeightingMode::count);
    CHECK(weighting_mode_from_string("binary") == WeightingMode::binary);
    CHECK(std::string(to_string(WeightingMode::binary)) == "binary");
    CHECK_THROWS_AS(weighting_mode_from_string("tfidf"), ValidationError);
}
