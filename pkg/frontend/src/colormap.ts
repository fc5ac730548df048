/**
 * Diverging colormap for correlation values: white at the uncorrelated
 * value, red for bunching, blue for antibunching, with logarithmic scaling
 * about the center clipped at a fixed number of decades.
 */

export type RGB = [number, number, number];

const WHITE: RGB = [255, 255, 255];
const RED: RGB = [178, 24, 43];
const BLUE: RGB = [33, 102, 172];

function mix(a: RGB, b: RGB, t: number): RGB {
    return [
        Math.round(a[0] + (b[0] - a[0]) * t),
        Math.round(a[1] + (b[1] - a[1]) * t),
        Math.round(a[2] + (b[2] - a[2]) * t),
    ];
}

/**
 * Signed log-distance from the center, normalized to [-1, 1] over
 * `clipDecades` decades.  Non-positive values saturate on the blue end.
 */
export function logPosition(value: number, center: number, clipDecades: number): number {
    if (value <= 0) {
        return -1;
    }
    const t = Math.log10(value / center) / clipDecades;
    return Math.max(-1, Math.min(1, t));
}

export function divergingColor(value: number, center = 1.0, clipDecades = 2): RGB {
    const t = logPosition(value, center, clipDecades);
    if (t >= 0) {
        return mix(WHITE, RED, t);
    }
    return mix(WHITE, BLUE, -t);
}
