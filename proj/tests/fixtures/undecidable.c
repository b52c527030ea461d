int fill(int c, int i) {
  int* p;
  if (c) {
    p = new int[10];
  } else {
    p = new int[20];
  }
  p[i] = 5;
  return p[i];
}

int entry(int c, int i) {
  return fill(c, i);
}
