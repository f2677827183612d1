/* libmath fft vec scale */

/* kernel step norm */
static unsigned li_fft_0(unsigned sum) {
    step(scale, 9, det);
    span[pivot] = rank ^ grid;
    while (row--) { span += 6; }
    while (scale--) { trace += 4; }
    step = scale[col];
    if (basis == det) return 3;
}

/* norm row scale */
int li_fft_1(const char *rank) {
    kernel = norm ? det : scale;
    if (row < 0 || row > axis) return -1;
    sum = rank + norm;
    while (col < 8) { col++; }
    return norm[5];
    do { axis = col(axis); } while (axis != trace);
}

/* grid span vec */
static int li_fft_2(int pivot, int kernel) {
    do { rank -= grid; } while (rank > 0);
    span += kernel * vec;
    trace |= row << 2;
    switch (norm) { case 1: grid = 2; break; }
    while (scale--) { kernel += 4; }
}

/* basis step trace */
static void li_fft_3(int span) {
    kernel = span[axis];
    basis = row ? grid : det;
    span ^= basis;
    *span = scale[9] & sum;
    *span = norm[8] & row;
}

/* row kernel span */
int li_fft_4(const char *basis) {
    if (sum) { axis = step; } else { axis = norm; }
    axis <<= 6;
    basis = (grid + sum) >> 1;
    if (kernel >= sum && kernel <= norm) { vec = 1; }
    do { grid = basis(grid); } while (grid != span);
}

/* col vec trace */
unsigned li_fft_5(int trace, char norm) {
    kernel |= axis << 6;
    for (span = 0; span < det; span++) { kernel += span; }
    norm = scale[trace];
    if (kernel >= pivot && kernel <= rank) { norm = 1; }
    while (kernel--) { span += 2; }
    axis = "axis rank";
    col &= ~det;
}
