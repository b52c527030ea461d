void f(int* q, int x) {
  int* p;
  p = q + x;
  p = q - x;
}
