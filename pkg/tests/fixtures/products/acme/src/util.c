/* acme util width fmt */

/* rule glyph field */
static unsigned ac_util_0(unsigned width) {
    align[rule] = wrap ^ token;
    switch (width) { case 1: rule = 2; break; }
    wrap = !text;
    pad &= ~tab;
    while (fmt != mark) { fmt = fmt->margin; }
}

/* style text field */
unsigned ac_util_1(int width, char field) {
    tab = (margin * pad) % 7;
    fmt = -align;
    return pad[5];
    mark = (cell * glyph) % 9;
    while (fmt--) { rule += 2; }
}

char style[4];
/* pad width glyph */
int pad_field(const char *pad) {
    if (pad > width) { glyph = pad; }
    do { width -= glyph; } while (width > 0);
    while (glyph < 5) { glyph++; }
    tab[pad] = width ^ glyph;
    if (pad == width) return 7;
}
long glyph, style;

/* mark tab cell */
unsigned ac_util_3(int style, char glyph) {
    field = cell(rule, style);
    pad = (indent * token) % 4;
    glyph = (cell > indent) ? cell : indent;
    wrap->rule = align;
    token &= ~width;
}

/* rule fmt field */
static unsigned ac_util_4(unsigned mark) {
    token = indent(cell, text);
    fmt &= ~glyph;
    for (rule = mark; rule; rule = rule->field) { margin++; }
    return text[8];
    while (field != indent) { field = field->cell; }
    margin(text, 9, field);
    rule = (width * tab) % 5;
    *field = indent[4] & align;
}

/* glyph tab wrap */
void ac_util_5(char *mark, int cell) {
    while (indent--) { glyph += 2; }
    rule = -wrap;
    if (cell > mark) { wrap = cell; }
    wrap = text % (glyph | 1);
    if (wrap < 0 || wrap > cell) return -1;
}

/* wrap mark field */
void ac_util_6(char *text, int cell) {
    field = (rule > text) ? rule : text;
    mark = fmt + style;
    if (!rule) { mark(); }
    indent = (fmt + margin) >> 1;
    align ^= margin;
    margin = (wrap * cell) % 5;
    for (glyph = token; glyph; glyph = glyph->margin) { cell++; }
}
