#include <gtest/gtest.h>

#include <cmath>

#include "ruqa/analytics/language.hpp"
#include "ruqa/analytics/reciprocity.hpp"
#include "ruqa/corpus/synthetic.hpp"

using namespace ruqa;
using namespace ruqa::corpus;

namespace {

SyntheticConfig small() {
    SyntheticConfig c;
    c.egos = 6;
    c.alters_per_ego = 4;
    c.words_per_direction = 120;
    c.events_per_direction = 20;
    return c;
}

analytics::ReciprocitySummary reciprocity_of(Corpus c) {
    analytics::apply_language_labels(c);
    return analytics::reciprocity(c);
}

}  // namespace

TEST(Synthetic, SameSeedSameCorpus) {
    EXPECT_TRUE(generate_synthetic(small(), 11) == generate_synthetic(small(), 11));
    EXPECT_FALSE(generate_synthetic(small(), 11) == generate_synthetic(small(), 12));
}

TEST(Synthetic, ShapeFollowsConfig) {
    const auto c = generate_synthetic(small(), 3);
    EXPECT_EQ(c.events.size(), 6u * 4u * 2u * 20u);
    EXPECT_NE(c.lexicon("en"), nullptr);
    EXPECT_NE(c.lexicon("ru"), nullptr);
    EXPECT_NE(c.lexicon("romantic"), nullptr);
    for (const auto& e : c.events) EXPECT_FALSE(looks_like_phone_number(e.alter));
}

TEST(Synthetic, EqualFixedSharesGiveNearZeroReciprocity) {
    auto config = small();
    config.egos = 1;
    config.alters_per_ego = 1;
    config.words_per_direction = 1000;
    config.fixed_shares = std::pair{0.5, 0.5};
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto r = reciprocity_of(generate_synthetic(config, seed));
        ASSERT_EQ(r.records.size(), 1u);
        EXPECT_LT(r.records[0].p, 0.1) << "seed " << seed;
    }
}

TEST(Synthetic, OppositeFixedSharesGiveFullReciprocityGap) {
    auto config = small();
    config.fixed_shares = std::pair{1.0, 0.0};
    const auto r = reciprocity_of(generate_synthetic(config, 5));
    ASSERT_FALSE(r.records.empty());
    for (const auto& rec : r.records) EXPECT_DOUBLE_EQ(rec.p, 1.0);
}

TEST(Synthetic, RejectsDegenerateConfigs) {
    auto config = small();
    config.egos = 0;
    EXPECT_THROW(generate_synthetic(config, 1), CorpusError);
    config = small();
    config.fixed_shares = std::pair{1.5, 0.0};
    EXPECT_THROW(generate_synthetic(config, 1), CorpusError);
}

TEST(Synthetic, ConfigJsonRoundTrip) {
    auto config = small();
    config.nocturnal_shift = 0.25;
    config.fixed_shares = std::pair{0.2, 0.7};
    nlohmann::ordered_json j;
    to_json(j, config);
    const auto back = synthetic_config_from_json(nlohmann::json::parse(j.dump()));
    nlohmann::ordered_json j2;
    to_json(j2, back);
    EXPECT_EQ(j.dump(), j2.dump());
}
