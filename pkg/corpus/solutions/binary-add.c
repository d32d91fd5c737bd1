void add_binary(int *a, int *b, int *result, int n) {
    int carry = 0;
    for (int i = n - 1; i >= 0; i--) {
        int sum = a[i] + b[i] + carry;
        result[i + 1] = sum % 2;
        carry = sum / 2;
    }
    result[0] = carry;
}
