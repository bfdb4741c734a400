#include <doctest.h>
TEST_SUITE_BEGIN("parallel");
TEST_SUITE_END();
