void f(int* a, int i) {
  int* p;
  p = &a[i];
}
