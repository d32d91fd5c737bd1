int has_digit(char *s) {
    for (int i = 0; s[i] != '\0'; i++) {
        if (s[i] >= '0' && s[i] <= '9') {
            return 1;
        }
    }
    return 0;
}

int has_upper(char *s) {
    for (int i = 0; s[i] != '\0'; i++) {
        if (s[i] >= 'A' && s[i] <= 'Z') {
            return 1;
        }
    }
    return 0;
}

int has_special(char *s) {
    for (int i = 0; s[i] != '\0'; i++) {
        char c = s[i];
        int is_digit = c >= '0' && c <= '9';
        int is_lower = c >= 'a' && c <= 'z';
        int is_upper = c >= 'A' && c <= 'Z';
        if (!is_digit && !is_lower && !is_upper) {
            return 1;
        }
    }
    return 0;
}

int is_valid_password(char *s) {
    int length = 0;
    while (s[length] != '\0') {
        length++;
    }
    return length >= 8 && has_digit(s) && has_upper(s) && has_special(s);
}
