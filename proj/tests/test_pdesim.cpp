#include <doctest.h>

TEST_SUITE_BEGIN("pdesim");
TEST_SUITE_END();
