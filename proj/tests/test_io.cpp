#include <doctest.h>

TEST_SUITE_BEGIN("io");
TEST_SUITE_END();
