#include <cstdio>
int main() { std::puts("pcam placeholder"); return 0; }
