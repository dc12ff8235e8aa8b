// Built with the bottom source sign flipped: the acceptance suite must notice.
#include <sstream>

#include <gtest/gtest.h>

#include "lpswe/acceptance.hpp"

#ifndef LPSWE_MUTATE_SOURCE_SIGN
#error "test_mutation must be compiled with LPSWE_MUTATE_SOURCE_SIGN"
#endif

TEST(Mutation, FlippedSourceSignBreaksWellBalance) {
    lpswe::acceptance::Suite suite;
    std::ostringstream log;
    const auto res = suite.run({"wb"}, log);
    ASSERT_EQ(res.size(), 1u);
    EXPECT_FALSE(res[0].passed) << log.str();
    EXPECT_NE(log.str().find("FAIL wb"), std::string::npos) << log.str();
}
