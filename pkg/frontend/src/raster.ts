/** RGBA pixel buffer with the few drawing primitives the plots need. */

import { GLYPH_H, GLYPH_W, glyph, textWidth } from './font.js';
import type { RGB } from './colormap.js';

export class Raster {
    readonly pixels: Uint8Array;

    constructor(
        readonly width: number,
        readonly height: number,
        background: RGB = [255, 255, 255],
    ) {
        this.pixels = new Uint8Array(width * height * 4);
        for (let i = 0; i < width * height; i++) {
            this.pixels[i * 4] = background[0];
            this.pixels[i * 4 + 1] = background[1];
            this.pixels[i * 4 + 2] = background[2];
            this.pixels[i * 4 + 3] = 255;
        }
    }

    set(x: number, y: number, rgb: RGB): void {
        if (x < 0 || y < 0 || x >= this.width || y >= this.height) {
            return;
        }
        const i = (Math.floor(y) * this.width + Math.floor(x)) * 4;
        this.pixels[i] = rgb[0];
        this.pixels[i + 1] = rgb[1];
        this.pixels[i + 2] = rgb[2];
        this.pixels[i + 3] = 255;
    }

    get(x: number, y: number): RGB {
        const i = (y * this.width + x) * 4;
        return [this.pixels[i], this.pixels[i + 1], this.pixels[i + 2]];
    }

    fillRect(x0: number, y0: number, w: number, h: number, rgb: RGB): void {
        for (let y = y0; y < y0 + h; y++) {
            for (let x = x0; x < x0 + w; x++) {
                this.set(x, y, rgb);
            }
        }
    }

    line(x0: number, y0: number, x1: number, y1: number, rgb: RGB, dash = 0): void {
        x0 = Math.round(x0);
        y0 = Math.round(y0);
        x1 = Math.round(x1);
        y1 = Math.round(y1);
        const dx = Math.abs(x1 - x0);
        const dy = -Math.abs(y1 - y0);
        const sx = x0 < x1 ? 1 : -1;
        const sy = y0 < y1 ? 1 : -1;
        let err = dx + dy;
        let step = 0;
        for (;;) {
            if (dash === 0 || step % (2 * dash) < dash) {
                this.set(x0, y0, rgb);
            }
            step++;
            if (x0 === x1 && y0 === y1) {
                break;
            }
            const e2 = 2 * err;
            if (e2 >= dy) {
                err += dy;
                x0 += sx;
            }
            if (e2 <= dx) {
                err += dx;
                y0 += sy;
            }
        }
    }

    text(x: number, y: number, s: string, rgb: RGB = [40, 40, 40]): void {
        let cx = Math.round(x);
        const cy = Math.round(y);
        for (const ch of s) {
            const rows = glyph(ch);
            for (let r = 0; r < GLYPH_H; r++) {
                for (let c = 0; c < GLYPH_W; c++) {
                    if (rows[r] & (1 << (GLYPH_W - 1 - c))) {
                        this.set(cx + c, cy + r, rgb);
                    }
                }
            }
            cx += GLYPH_W + 1;
        }
    }

    textCentered(cx: number, y: number, s: string, rgb: RGB = [40, 40, 40]): void {
        this.text(cx - textWidth(s) / 2, y, s, rgb);
    }
}
