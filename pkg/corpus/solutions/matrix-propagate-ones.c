void propagate_ones(int *mat, int rows, int cols) {
    int row_flag[16];
    int col_flag[16];
    for (int i = 0; i < rows; i++) {
        row_flag[i] = 0;
    }
    for (int j = 0; j < cols; j++) {
        col_flag[j] = 0;
    }
    for (int i = 0; i < rows; i++) {
        for (int j = 0; j < cols; j++) {
            if (mat[i * cols + j] == 1) {
                row_flag[i] = 1;
                col_flag[j] = 1;
            }
        }
    }
    for (int i = 0; i < rows; i++) {
        for (int j = 0; j < cols; j++) {
            if (row_flag[i] || col_flag[j]) {
                mat[i * cols + j] = 1;
            }
        }
    }
}
