#include "bhmax/run.hpp"
int main() { return 0; }
