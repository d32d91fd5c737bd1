int is_open_paren(char c) {
    return c == '(';
}

int is_close_paren(char c) {
    return c == ')';
}

int is_balanced(char *expr) {
    int depth = 0;
    for (int i = 0; expr[i] != '\0'; i++) {
        if (is_open_paren(expr[i])) {
            depth++;
        } else if (is_close_paren(expr[i])) {
            depth--;
            if (depth < 0) {
                return 0;
            }
        }
    }
    return depth == 0;
}
