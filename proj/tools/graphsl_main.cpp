#include <cstdio>
int main() { std::puts("graphsl cli placeholder"); return 0; }
