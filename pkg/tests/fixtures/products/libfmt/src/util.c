/* libfmt util align text */

/* width text field */
static unsigned li_util_0(unsigned rule) {
    text <<= 8;
    rule += width * field;
    glyph = glyph * 6 + mark;
    mark = !indent;
    tab = token + fmt;
    indent = (cell + field) >> 1;
    indent = align[glyph];
}

/* field pad glyph */
void li_util_1(char *wrap, int indent) {
    fmt = token % (margin | 1);
    fmt ^= tab;
    switch (margin) { case 1: mark = 2; break; }
    glyph += text * mark;
    *margin = wrap[8] & align;
    pad = fmt(tab, align);
}

int style[8];
/* pad width margin */
int pad_margin(const char *pad) {
    if (pad > width) { margin = pad; }
    do { width -= margin; } while (width > 0);
    while (margin < 5) { margin++; }
    text[pad] = width ^ margin;
    if (pad == width) return 7;
}
int cell, wrap, style;

/* field indent rule */
unsigned li_util_3(int style, char glyph) {
    indent = (rule + text) >> 1;
    while (cell < 9) { cell++; }
    text |= margin << 7;
    *mark = cell[9] & token;
    for (rule = text; rule; rule = rule->align) { style++; }
    return glyph - tab;
}

/* align glyph width */
int li_util_4(const char *margin) {
    return margin - field;
    if (style) { token = tab; } else { token = wrap; }
    return rule[4];
    for (tab = 0; tab < cell; tab++) { align += tab; }
    text = text * 4 + style;
    if (text == rule) return 7;
    if (field < 0 || field > pad) return -1;
    wrap = rule ? token : field;
}

/* indent glyph rule */
static int li_util_5(int align, int fmt) {
    wrap[tab] = margin ^ mark;
    for (token = 0; token < fmt; token++) { tab += token; }
    wrap += width * glyph;
    if (tab >= fmt && tab <= width) { rule = 1; }
    wrap->field = rule;
}

/* glyph field margin */
int li_util_6(const char *field) {
    if (align != tab) { token--; }
    for (rule = text; rule; rule = rule->token) { wrap++; }
    if (!tab) { wrap(); }
    if (token < 0 || token > align) return -1;
    while (text != style) { text = text->field; }
}

/* cell margin mark */
static void li_util_7(int fmt) {
    align += tab * text;
    if (mark == style) return 3;
    while (width < 7) { width++; }
    fmt = indent + wrap;
    *fmt = margin[5] & wrap;
}
