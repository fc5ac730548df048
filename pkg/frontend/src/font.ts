/**
 * Tiny 5x7 bitmap font (classic GLCD patterns) covering the characters the
 * plot labels need.  Each glyph is 7 rows of 5 bits, most significant bit
 * leftmost; unknown characters render as a hollow box.
 */

export const GLYPH_W = 5;
export const GLYPH_H = 7;

type Glyph = number[];

const G: Record<string, Glyph> = {
    ' ': [0, 0, 0, 0, 0, 0, 0],
    '0': [0b01110, 0b10001, 0b10011, 0b10101, 0b11001, 0b10001, 0b01110],
    '1': [0b00100, 0b01100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110],
    '2': [0b01110, 0b10001, 0b00001, 0b00010, 0b00100, 0b01000, 0b11111],
    '3': [0b11111, 0b00010, 0b00100, 0b00010, 0b00001, 0b10001, 0b01110],
    '4': [0b00010, 0b00110, 0b01010, 0b10010, 0b11111, 0b00010, 0b00010],
    '5': [0b11111, 0b10000, 0b11110, 0b00001, 0b00001, 0b10001, 0b01110],
    '6': [0b00110, 0b01000, 0b10000, 0b11110, 0b10001, 0b10001, 0b01110],
    '7': [0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b01000, 0b01000],
    '8': [0b01110, 0b10001, 0b10001, 0b01110, 0b10001, 0b10001, 0b01110],
    '9': [0b01110, 0b10001, 0b10001, 0b01111, 0b00001, 0b00010, 0b01100],
    '-': [0, 0, 0, 0b11111, 0, 0, 0],
    '+': [0, 0b00100, 0b00100, 0b11111, 0b00100, 0b00100, 0],
    '.': [0, 0, 0, 0, 0, 0b01100, 0b01100],
    ',': [0, 0, 0, 0, 0b01100, 0b00100, 0b01000],
    '(': [0b00010, 0b00100, 0b01000, 0b01000, 0b01000, 0b00100, 0b00010],
    ')': [0b01000, 0b00100, 0b00010, 0b00010, 0b00010, 0b00100, 0b01000],
    '=': [0, 0, 0b11111, 0, 0b11111, 0, 0],
    _: [0, 0, 0, 0, 0, 0, 0b11111],
    '/': [0b00001, 0b00001, 0b00010, 0b00100, 0b01000, 0b10000, 0b10000],
    a: [0, 0, 0b01110, 0b00001, 0b01111, 0b10001, 0b01111],
    b: [0b10000, 0b10000, 0b10110, 0b11001, 0b10001, 0b10001, 0b11110],
    c: [0, 0, 0b01110, 0b10000, 0b10000, 0b10001, 0b01110],
    d: [0b00001, 0b00001, 0b01101, 0b10011, 0b10001, 0b10001, 0b01111],
    e: [0, 0, 0b01110, 0b10001, 0b11111, 0b10000, 0b01110],
    f: [0b00110, 0b01001, 0b01000, 0b11100, 0b01000, 0b01000, 0b01000],
    g: [0, 0b01111, 0b10001, 0b10001, 0b01111, 0b00001, 0b01110],
    h: [0b10000, 0b10000, 0b10110, 0b11001, 0b10001, 0b10001, 0b10001],
    i: [0b00100, 0, 0b01100, 0b00100, 0b00100, 0b00100, 0b01110],
    j: [0b00010, 0, 0b00110, 0b00010, 0b00010, 0b10010, 0b01100],
    k: [0b10000, 0b10000, 0b10010, 0b10100, 0b11000, 0b10100, 0b10010],
    l: [0b01100, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110],
    m: [0, 0, 0b11010, 0b10101, 0b10101, 0b10001, 0b10001],
    n: [0, 0, 0b10110, 0b11001, 0b10001, 0b10001, 0b10001],
    o: [0, 0, 0b01110, 0b10001, 0b10001, 0b10001, 0b01110],
    p: [0, 0, 0b11110, 0b10001, 0b11110, 0b10000, 0b10000],
    q: [0, 0, 0b01101, 0b10011, 0b01111, 0b00001, 0b00001],
    r: [0, 0, 0b10110, 0b11001, 0b10000, 0b10000, 0b10000],
    s: [0, 0, 0b01110, 0b10000, 0b01110, 0b00001, 0b11110],
    t: [0b01000, 0b01000, 0b11100, 0b01000, 0b01000, 0b01001, 0b00110],
    u: [0, 0, 0b10001, 0b10001, 0b10001, 0b10011, 0b01101],
    v: [0, 0, 0b10001, 0b10001, 0b10001, 0b01010, 0b00100],
    w: [0, 0, 0b10001, 0b10001, 0b10101, 0b10101, 0b01010],
    x: [0, 0, 0b10001, 0b01010, 0b00100, 0b01010, 0b10001],
    y: [0, 0, 0b10001, 0b10001, 0b01111, 0b00001, 0b01110],
    z: [0, 0, 0b11111, 0b00010, 0b00100, 0b01000, 0b11111],
    S: [0b01111, 0b10000, 0b10000, 0b01110, 0b00001, 0b00001, 0b11110],
    G: [0b01110, 0b10001, 0b10000, 0b10111, 0b10001, 0b10001, 0b01111],
};

const BOX: Glyph = [0b11111, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b11111];

export function glyph(ch: string): Glyph {
    return G[ch] ?? G[ch.toLowerCase()] ?? BOX;
}

export function textWidth(text: string): number {
    return text.length === 0 ? 0 : text.length * (GLYPH_W + 1) - 1;
}
