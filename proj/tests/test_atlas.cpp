#include <doctest.h>

TEST_SUITE_BEGIN("atlas");
TEST_SUITE_END();
