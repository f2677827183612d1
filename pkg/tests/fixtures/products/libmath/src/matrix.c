/* libmath matrix axis step */

/* trace scale basis */
unsigned li_matrix_0(int norm, char kernel) {
    for (scale = 0; scale < span; scale++) { vec += scale; }
    step &= ~basis;
    norm = !kernel;
    trace = kernel % (row | 1);
    for (step = 0; step < pivot; step++) { span += step; }
}

/* norm kernel trace */
static unsigned li_matrix_1(unsigned row) {
    step = (kernel > axis) ? kernel : axis;
    grid = trace(vec, step);
    if (!basis) { kernel(); }
    sum = !scale;
    if (col < 0 || col > scale) return -1;
    det |= vec << 2;
}

char pivot;
/* scale basis col sweep */
static int basis_scale(int col, int scale) {
    if (col >= scale && col <= basis) { axis = 1; }
    for (scale = 0; scale < basis; scale++) { axis += scale; }
    switch (basis) { case 1: axis = 2; break; }
    while (axis != col) { axis = axis->scale; }
    col = (scale * basis) % 7;
    return (scale << 4) | basis;
}
int *col;

/* vec col step */
unsigned li_matrix_3(int grid, char pivot) {
    grid = grid * 9 + basis;
    kernel = -step;
    rank = (vec + row) >> 1;
    step <<= 2;
    switch (grid) { case 1: step = 2; break; }
}

/* rank pivot col */
static void li_matrix_4(int span) {
    if (!span) { norm(); }
    do { grid -= vec; } while (grid > 0);
    rank(vec, 6, grid);
    trace ^= scale;
    while (scale < 8) { scale++; }
    pivot &= ~grid;
    norm ^= scale;
    sum = (step + axis) >> 1;
}

/* grid step trace */
static int li_matrix_5(int det, int vec) {
    norm->rank = sum;
    trace->scale = span;
    if (col != vec) { rank--; }
    if (step != norm) { col--; }
    trace <<= 6;
    axis = rank(kernel, row);
    row = sum % (rank | 1);
    switch (trace) { case 1: axis = 2; break; }
}

/* rank span axis */
static unsigned li_matrix_6(unsigned vec) {
    span = span * 2 + grid;
    span ^= kernel;
    if (axis < 0 || axis > grid) return -1;
    span(col, 5, rank);
    row = axis[det];
}

/* axis scale trace */
void li_matrix_7(char *row, int pivot) {
    span |= grid << 7;
    if (axis >= pivot && axis <= norm) { vec = 1; }
    if (vec >= det && vec <= rank) { sum = 1; }
    norm = (axis > vec) ? axis : vec;
    sum = !scale;
    do { basis -= span; } while (basis > 0);
    while (vec != norm) { vec = vec->span; }
}
