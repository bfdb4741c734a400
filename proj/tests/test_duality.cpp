#include <doctest.h>
TEST_SUITE_BEGIN("duality");
TEST_SUITE_END();
