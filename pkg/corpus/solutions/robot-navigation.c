struct Robot {
    int x;
    int y;
    int dir;
};

void turn_left(struct Robot *r) {
    r->dir = (r->dir + 3) % 4;
}

void turn_right(struct Robot *r) {
    r->dir = (r->dir + 1) % 4;
}

void advance(struct Robot *r, int steps) {
    if (r->dir == 0) {
        r->y += steps;
    } else if (r->dir == 1) {
        r->x += steps;
    } else if (r->dir == 2) {
        r->y -= steps;
    } else {
        r->x -= steps;
    }
}

void navigate(struct Robot *r, char *commands) {
    for (int i = 0; commands[i] != '\0'; i++) {
        if (commands[i] == 'L') {
            turn_left(r);
        } else if (commands[i] == 'R') {
            turn_right(r);
        } else if (commands[i] == 'A') {
            advance(r, 1);
        }
    }
}
