int last_zero_index(int *arr, int n) {
    int last = -1;
    for (int i = 0; i < n; i++) {
        if (arr[i] == 0) {
            last = i;
        }
    }
    return last;
}
