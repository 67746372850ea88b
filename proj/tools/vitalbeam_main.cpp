#include <cstdio>

int main() {
    std::puts("vitalbeam: pipeline CLI (placeholder)");
    return 0;
}
