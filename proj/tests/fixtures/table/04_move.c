void f(int* p, int x) {
  p += x;
  p -= x;
  p++;
}
