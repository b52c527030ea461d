int fill(int* a, int* b, int i) {
  int* p;
  p = a;
  p[i] = 5;
  p = b;
  p[i] = 2;
  return a[i] - b[i];
}

int entry(int i) {
  int* a = new int[10];
  int* b = new int[10];
  return fill(a, b, i);
}
