void sort_subarray(int *arr, int n, int start, int end) {
    for (int i = start; i <= end; i++) {
        for (int j = start; j < end; j++) {
            if (arr[j] > arr[j + 1]) {
                int tmp = arr[j];
                arr[j] = arr[j + 1];
                arr[j + 1] = tmp;
            }
        }
    }
}
