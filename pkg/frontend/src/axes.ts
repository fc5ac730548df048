/** Shared plot scaffolding: margins, linear scales, nice ticks, axes. */

import { Raster } from './raster.js';
import { GLYPH_H, textWidth } from './font.js';

export const MARGIN = { left: 56, right: 16, top: 22, bottom: 36 } as const;

export const AXIS_COLOR: [number, number, number] = [60, 60, 60];

export interface Scale {
    (v: number): number;
    min: number;
    max: number;
}

export function linearScale(min: number, max: number, pix0: number, pix1: number): Scale {
    const f = ((v: number) => pix0 + ((v - min) / (max - min)) * (pix1 - pix0)) as Scale;
    f.min = min;
    f.max = max;
    return f;
}

/** Round a span to 1/2/5 x 10^k, the usual tick heuristic. */
function niceStep(span: number, target: number): number {
    const raw = span / target;
    const mag = Math.pow(10, Math.floor(Math.log10(raw)));
    const norm = raw / mag;
    const factor = norm < 1.5 ? 1 : norm < 3.5 ? 2 : norm < 7.5 ? 5 : 10;
    return factor * mag;
}

export function ticks(min: number, max: number, target = 5): number[] {
    const step = niceStep(max - min, target);
    const out: number[] = [];
    for (let v = Math.ceil(min / step) * step; v <= max + 1e-12 * step; v += step) {
        out.push(Math.abs(v) < 1e-12 * step ? 0 : v);
    }
    return out;
}

export function formatTick(v: number): string {
    if (v === 0) {
        return '0';
    }
    const a = Math.abs(v);
    if (a >= 1e4 || a < 1e-3) {
        return v.toExponential(1).replace('e+', 'e').replace('e-', 'e-');
    }
    return String(Number(v.toPrecision(6)));
}

export function drawXAxis(img: Raster, scale: Scale, yPix: number, label: string): void {
    img.line(scale(scale.min), yPix, scale(scale.max), yPix, AXIS_COLOR);
    for (const t of ticks(scale.min, scale.max)) {
        const x = scale(t);
        img.line(x, yPix, x, yPix + 3, AXIS_COLOR);
        img.textCentered(x, yPix + 6, formatTick(t));
    }
    img.textCentered(
        (scale(scale.min) + scale(scale.max)) / 2,
        yPix + 8 + GLYPH_H,
        label,
    );
}

export function drawYAxis(img: Raster, scale: Scale, xPix: number, label: string): void {
    img.line(xPix, scale(scale.min), xPix, scale(scale.max), AXIS_COLOR);
    for (const t of ticks(scale.min, scale.max)) {
        const y = scale(t);
        img.line(xPix - 3, y, xPix, y, AXIS_COLOR);
        const s = formatTick(t);
        img.text(xPix - 5 - textWidth(s), y - GLYPH_H / 2, s);
    }
    // horizontal label above the axis keeps the text renderer simple
    img.text(2, MARGIN.top - GLYPH_H - 3, label);
}
