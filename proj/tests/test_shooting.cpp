#include <doctest.h>

TEST_SUITE_BEGIN("shooting");
TEST_SUITE_END();
