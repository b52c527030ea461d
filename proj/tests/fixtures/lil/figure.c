struct Matrix {
  double** ptr_to_vals;
  int** ptr_to_inds;
};

void init(struct Matrix* A, int nrow, int max_nnz) {
  double* curvalptr = new double[max_nnz * nrow];
  int* curindptr = new int[max_nnz * nrow];
  for (int currow = 0; currow < nrow; currow++) {
    A->ptr_to_vals[currow] = curvalptr;
    A->ptr_to_inds[currow] = curindptr;
    for (int curcol = 0; curcol < max_nnz; curcol++) {
      *curvalptr = 27.0;
      *curindptr = curcol;
      curvalptr++;
      curindptr++;
    }
  }
}
