#include <doctest.h>

TEST_SUITE_BEGIN("profile");
TEST_SUITE_END();
