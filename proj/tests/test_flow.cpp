#include <doctest.h>
TEST_SUITE_BEGIN("flow");
TEST_SUITE_END();
