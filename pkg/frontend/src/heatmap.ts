/**
 * Two-photon correlation map rendering: diverging colors about the
 * uncorrelated value, axes in the file's declared units, and the predicted
 * constant-sum (leapfrog) antidiagonals overlaid when the metadata carries
 * the peak splitting.
 */

import { MapData } from './csv.js';
import { divergingColor } from './colormap.js';
import { Raster } from './raster.js';
import { MARGIN, drawXAxis, drawYAxis, linearScale } from './axes.js';
import { encodePng } from './png.js';

export interface HeatmapOptions {
    width?: number;
    height?: number;
    center?: number;
    clipDecades?: number;
}

const OVERLAY: [number, number, number] = [70, 70, 70];

function axisLabel(base: string, meta: Record<string, string>): string {
    return meta.units ? `${base} (${meta.units})` : base;
}

/** Constant-sum loci omega1 + omega2 = s, in the file's own units. */
export function leapfrogSums(meta: Record<string, string>): number[] | null {
    if (!('omega_plus' in meta)) {
        return null;
    }
    const splitting = Number(meta.omega_plus);
    if (!Number.isFinite(splitting)) {
        return null;
    }
    const unit = meta.units === 'omega_plus' ? 1.0 : splitting;
    return [-unit, 0, unit];
}

export function renderHeatmap(map: MapData, opts: HeatmapOptions = {}): Buffer {
    const width = opts.width ?? 480;
    const height = opts.height ?? 440;
    const center = opts.center ?? 1.0;
    const clip = opts.clipDecades ?? 2;
    if (center <= 0) {
        throw new Error(`color center must be > 0, got ${center}`);
    }
    const n = map.axis.length;
    const img = new Raster(width, height);

    const plotX0 = MARGIN.left;
    const plotX1 = width - MARGIN.right;
    const plotY0 = MARGIN.top;
    const plotY1 = height - MARGIN.bottom;

    // axis values are cell centres; pad by half a cell so every cell is
    // the same number of pixels wide
    const half = n > 1 ? (map.axis[1] - map.axis[0]) / 2 : 0.5;
    const lo = map.axis[0] - half;
    const hi = map.axis[n - 1] + half;
    const sx = linearScale(lo, hi, plotX0, plotX1);
    const sy = linearScale(lo, hi, plotY1, plotY0); // y grows upward

    for (let px = plotX0; px < plotX1; px++) {
        const w1 = lo + ((px + 0.5 - plotX0) / (plotX1 - plotX0)) * (hi - lo);
        const i = Math.min(n - 1, Math.max(0, Math.round((w1 - map.axis[0]) / (2 * half))));
        for (let py = plotY0; py < plotY1; py++) {
            const w2 = lo + ((plotY1 - py - 0.5) / (plotY1 - plotY0)) * (hi - lo);
            const j = Math.min(
                n - 1,
                Math.max(0, Math.round((w2 - map.axis[0]) / (2 * half))),
            );
            img.set(px, py, divergingColor(map.values[i][j], center, clip));
        }
    }

    const sums = leapfrogSums(map.meta);
    if (sums) {
        for (const s of sums) {
            // omega2 = s - omega1, clipped to the plot square
            const a = Math.max(lo, s - hi);
            const b = Math.min(hi, s - lo);
            if (a < b) {
                img.line(sx(a), sy(s - a), sx(b), sy(s - b), OVERLAY, 3);
            }
        }
    }

    drawXAxis(img, sx, plotY1, axisLabel('omega1', map.meta));
    drawYAxis(img, sy, plotX0, axisLabel('omega2', map.meta));
    const title =
        'g2 map' + (map.meta.rabi ? `  rabi=${map.meta.rabi}` : '') +
        (map.meta.gamma_filter ? `  filter=${map.meta.gamma_filter}` : '');
    img.textCentered((plotX0 + plotX1) / 2, 6, title);
    return encodePng(width, height, img.pixels);
}
