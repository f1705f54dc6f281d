#include "phqchat/error.hpp"
#include "phqchat/scoring.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace phqchat;

namespace {

ItemScores decode(int code) {
    ItemScores s{};
    for (int i = 0; i < kItemCount; ++i) {
        s[i] = code % 4;
        code /= 4;
    }
    return s;
}

}  // namespace

TEST(TotalScore, Examples) {
    EXPECT_EQ(total_score(ItemScores{0, 0, 0, 0, 0, 0, 0, 0, 0}), 0);
    EXPECT_EQ(total_score(ItemScores{3, 3, 3, 3, 3, 3, 3, 3, 3}), 27);
    EXPECT_EQ(total_score(ItemScores{1, 1, 1, 1, 1, 1, 1, 1, 2}), 10);
}

TEST(TotalScore, RejectsWrongArityAndRange) {
    const std::vector<int> eight(8, 1), ten(10, 1);
    EXPECT_THROW(total_score(eight), ValidationError);
    EXPECT_THROW(total_score(ten), ValidationError);
    EXPECT_THROW(total_score(ItemScores{0, 0, 0, 0, 4, 0, 0, 0, 0}), ValidationError);
    EXPECT_THROW(total_score(ItemScores{0, 0, 0, 0, -1, 0, 0, 0, 0}), ValidationError);
}

TEST(Classify, CutoffBoundary) {
    EXPECT_EQ(classify(9), ScreenClass::Negative);
    EXPECT_EQ(classify(10), ScreenClass::Positive);
    EXPECT_EQ(classify(27), ScreenClass::Positive);
    EXPECT_EQ(classify(0), ScreenClass::Negative);
    EXPECT_THROW(classify(-1), ValidationError);
    EXPECT_THROW(classify(28), ValidationError);
}

TEST(Classify, ExhaustiveSweepOfAllAnswerVectors) {
    int positives = 0;
    for (int code = 0; code < 262144; ++code) {
        const ItemScores s = decode(code);
        int sum = 0;
        for (int v : s) sum += v;
        const int total = total_score(s);
        ASSERT_EQ(total, sum);
        const bool positive = classify(total) == ScreenClass::Positive;
        ASSERT_EQ(positive, total >= 10);
        positives += positive;
        for (int i = 0; i < kItemCount; ++i) {
            if (s[i] == 3) continue;
            ItemScores raised = s;
            raised[i] += 1;
            ASSERT_TRUE(!positive || classify(total_score(raised)) == ScreenClass::Positive);
        }
    }
    // Number of vectors in {0..3}^9 with sum >= 10, counted independently by convolution.
    std::vector<long> ways(28, 0);
    ways[0] = 1;
    for (int item = 0; item < kItemCount; ++item) {
        std::vector<long> next(28, 0);
        for (int t = 0; t < 28; ++t)
            for (int v = 0; v <= 3 && t + v < 28; ++v) next[t + v] += ways[t];
        ways = next;
    }
    long expected = 0;
    for (int t = 10; t < 28; ++t) expected += ways[t];
    EXPECT_EQ(positives, expected);
}

TEST(Result, DerivedFieldsAndValidation) {
    const auto r = make_result("sid", ItemScores{1, 1, 1, 1, 1, 1, 1, 1, 2}, Channel::Cli, Timestamp{});
    EXPECT_EQ(r.total, 10);
    EXPECT_TRUE(r.positive);
    EXPECT_TRUE(r.item9_flag);
    EXPECT_NO_THROW(validate_result(r));
    auto bad = r;
    bad.total = 11;
    EXPECT_THROW(validate_result(bad), ValidationError);
    bad = r;
    bad.positive = false;
    EXPECT_THROW(validate_result(bad), ValidationError);
    bad = r;
    bad.item9_flag = false;
    EXPECT_THROW(validate_result(bad), ValidationError);
    EXPECT_THROW(make_result("sid", ItemScores{5, 0, 0, 0, 0, 0, 0, 0, 0}, Channel::Web, Timestamp{}), ValidationError);
}

TEST(Result, AnonymizedJsonCarriesNoSessionOrText) {
    auto r = make_result("secret-session", ItemScores{0, 1, 2, 3, 0, 1, 2, 3, 0}, Channel::Api, Timestamp{});
    r.transcript = {"mi nombre es Ana"};
    const auto j = result_to_json(r);
    const std::string dumped = j.dump();
    EXPECT_EQ(dumped.find("secret-session"), std::string::npos);
    EXPECT_EQ(dumped.find("Ana"), std::string::npos);
    EXPECT_EQ(j["total"], 12);
    EXPECT_EQ(j["positive"], true);
    EXPECT_EQ(j["item9_flag"], false);
    EXPECT_EQ(j["channel"], "api");
    EXPECT_EQ(j["completed_at"], "1970-01-01T00:00:00Z");
}

TEST(Feedback, Examples) {
    const auto& script = *testsupport::shipped_script();
    auto fb = [&](const ItemScores& s) {
        return build_feedback(make_result("x", s, Channel::Web, Timestamp{}), script);
    };
    EXPECT_EQ(fb({0, 0, 0, 0, 0, 0, 0, 0, 0}), std::vector<std::string>{script.feedback_negative});
    EXPECT_EQ(fb({3, 3, 3, 3, 3, 0, 0, 0, 0}), std::vector<std::string>{script.feedback_positive});
    EXPECT_EQ(fb({1, 1, 1, 1, 1, 1, 1, 0, 1}),
              (std::vector<std::string>{script.feedback_negative, script.crisis_appendix}));
    EXPECT_EQ(fb({3, 3, 3, 3, 3, 3, 3, 3, 3}),
              (std::vector<std::string>{script.feedback_positive, script.crisis_appendix}));
}

TEST(Channel, RoundTrip) {
    for (Channel c : {Channel::Web, Channel::Cli, Channel::Api}) EXPECT_EQ(channel_from_string(to_string(c)), c);
    EXPECT_THROW(channel_from_string("fax"), ValidationError);
}
