/** Two-column line plots (spectra, delayed correlations). */

import { SweepCsv } from './csv.js';
import { Raster } from './raster.js';
import { MARGIN, drawXAxis, drawYAxis, linearScale } from './axes.js';
import { encodePng } from './png.js';

export interface LineOptions {
    width?: number;
    height?: number;
}

const LINE: [number, number, number] = [31, 90, 166];
const REFERENCE: [number, number, number] = [150, 150, 150];

export function renderLine(csv: SweepCsv, opts: LineOptions = {}): Buffer {
    if (csv.header.length !== 2) {
        throw new Error(`line plot needs 2 columns, found ${csv.header.join(',')}`);
    }
    const width = opts.width ?? 560;
    const height = opts.height ?? 360;
    const img = new Raster(width, height);
    const xs = csv.rows.map((r) => r[0]);
    const ys = csv.rows.map((r) => r[1]);

    const xlo = Math.min(...xs);
    const xhi = Math.max(...xs);
    let ylo = Math.min(...ys, 0);
    let yhi = Math.max(...ys);
    const isG2 = csv.header[1] === 'g2';
    if (isG2) {
        yhi = Math.max(yhi, 1.05); // keep the uncorrelated reference visible
    }
    if (yhi === ylo) {
        yhi = ylo + 1;
    }
    yhi += 0.05 * (yhi - ylo);

    const sx = linearScale(xlo, xhi, MARGIN.left, width - MARGIN.right);
    const sy = linearScale(ylo, yhi, height - MARGIN.bottom, MARGIN.top);

    if (isG2) {
        img.line(sx(xlo), sy(1.0), sx(xhi), sy(1.0), REFERENCE, 4);
    }
    for (let k = 1; k < xs.length; k++) {
        img.line(sx(xs[k - 1]), sy(ys[k - 1]), sx(xs[k]), sy(ys[k]), LINE);
    }

    const unitsSuffix = csv.meta.units ? ` (${csv.meta.units})` : '';
    drawXAxis(img, sx, height - MARGIN.bottom, csv.header[0] + unitsSuffix);
    drawYAxis(img, sy, MARGIN.left, csv.header[1]);
    const kind = csv.meta.kind ?? 'line';
    const title =
        kind + (csv.meta.rabi ? `  rabi=${csv.meta.rabi}` : '') +
        (csv.meta.gamma_filter ? `  filter=${csv.meta.gamma_filter}` : '');
    img.textCentered(width / 2, 6, title);
    return encodePng(width, height, img.pixels);
}
