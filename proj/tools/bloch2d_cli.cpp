#include <cstdio>

int main(int, char**) {
  std::printf("bloch2d 0.1.0\n");
  return 0;
}
