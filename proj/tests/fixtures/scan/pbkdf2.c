void pbkdf2_xor(char* p, char* data, int cplen, int n) {
  for (int i = 0; i < cplen * n; i += cplen) {
    for (int k = 0; k < cplen; k++) {
      p[k] = p[k] ^ data[k];
    }
    p += cplen;
  }
}

long entry(int cplen, int n) {
  char* out = new char[cplen * n];
  char* data = new char[cplen];
  for (int j = 0; j < cplen * n; j++) {
    out[j] = j * 7 + 3;
  }
  for (int j = 0; j < cplen; j++) {
    data[j] = j + 11;
  }
  pbkdf2_xor(out, data, cplen, n);
  long sum = 0;
  for (int j = 0; j < cplen * n; j++) {
    sum += out[j] * (j + 1);
  }
  return sum;
}
