struct SparseMatrix {
  int* nnz_in_row;
  double** ptr_to_vals;
  int** ptr_to_inds;
};

void init_matrix(struct SparseMatrix* A, int nrow) {
  int max_nnz = 27;
  A->nnz_in_row = new int[nrow];
  A->ptr_to_vals = new double*[nrow];
  A->ptr_to_inds = new int*[nrow];
  double* curvalptr = new double[max_nnz * nrow];
  int* curindptr = new int[max_nnz * nrow];
  for (int currow = 0; currow < nrow; currow++) {
    A->ptr_to_vals[currow] = curvalptr;
    A->ptr_to_inds[currow] = curindptr;
    int nnz_row = 0;
    for (int curcol = currow - 13; curcol <= currow + 13; curcol++) {
      if (curcol >= 0 && curcol < nrow) {
        if (curcol == currow) {
          *curvalptr = 27.0;
        } else {
          *curvalptr = 0.5 - curcol;
        }
        *curindptr = curcol;
        curvalptr++;
        curindptr++;
        nnz_row++;
      }
    }
    A->nnz_in_row[currow] = nnz_row;
  }
}

void matvec(struct SparseMatrix* A, int nrow, double* x, double* y) {
  for (int i = 0; i < nrow; i++) {
    double sum = 0.0;
    int cur_nnz = A->nnz_in_row[i];
    for (int j = 0; j < cur_nnz; j++) {
      sum += A->ptr_to_vals[i][j] * x[A->ptr_to_inds[i][j]];
    }
    y[i] = sum;
  }
}

double* entry(int nrow) {
  struct SparseMatrix* A = new struct SparseMatrix[1];
  init_matrix(A, nrow);
  double* x = new double[nrow];
  for (int i = 0; i < nrow; i++) {
    x[i] = 1.0 + i * 0.25;
  }
  double* y = new double[nrow];
  matvec(A, nrow, x, y);
  return y;
}
