#!/usr/bin/env node
/**
 * plot <input.csv> -o <image.png> [--kind heatmap|line] [--center 1.0]
 *      [--clip-decades 2] [--width W] [--height H]
 *
 * Reads the simulator's CSV dialect and writes a PNG.  Without --kind the
 * column count decides: 3 columns render as a heatmap, 2 as a line plot.
 */

import { readFileSync, writeFileSync } from 'node:fs';
import { pathToFileURL } from 'node:url';
import { CsvError, parseSweepCsv, toMap } from './csv.js';
import { renderHeatmap } from './heatmap.js';
import { renderLine } from './lineplot.js';

interface Args {
    input: string;
    output: string;
    kind?: 'heatmap' | 'line';
    center: number;
    clipDecades: number;
    width?: number;
    height?: number;
}

function usage(): never {
    process.stderr.write(
        'usage: plot <input.csv> -o <image> [--kind heatmap|line] ' +
            '[--center 1.0] [--clip-decades 2] [--width W] [--height H]\n',
    );
    process.exit(2);
}

export function parseArgs(argv: string[]): Args {
    const out: Partial<Args> = { center: 1.0, clipDecades: 2 };
    const positional: string[] = [];
    for (let i = 0; i < argv.length; i++) {
        const arg = argv[i];
        const next = () => {
            i++;
            if (i >= argv.length) {
                usage();
            }
            return argv[i];
        };
        switch (arg) {
            case '-o':
            case '--output':
                out.output = next();
                break;
            case '--kind': {
                const kind = next();
                if (kind !== 'heatmap' && kind !== 'line') {
                    usage();
                }
                out.kind = kind;
                break;
            }
            case '--center':
                out.center = Number(next());
                break;
            case '--clip-decades':
                out.clipDecades = Number(next());
                break;
            case '--width':
                out.width = Number(next());
                break;
            case '--height':
                out.height = Number(next());
                break;
            default:
                if (arg.startsWith('-')) {
                    usage();
                }
                positional.push(arg);
        }
    }
    if (positional.length !== 1 || !out.output) {
        usage();
    }
    out.input = positional[0];
    if (!(out.center! > 0) || !(out.clipDecades! > 0)) {
        process.stderr.write('error: --center and --clip-decades must be > 0\n');
        process.exit(2);
    }
    return out as Args;
}

export function run(args: Args): void {
    const text = readFileSync(args.input, 'utf8');
    const csv = parseSweepCsv(text);
    const kind = args.kind ?? (csv.header.length === 3 ? 'heatmap' : 'line');
    let png: Buffer;
    if (kind === 'heatmap') {
        png = renderHeatmap(toMap(csv), {
            center: args.center,
            clipDecades: args.clipDecades,
            width: args.width,
            height: args.height,
        });
    } else {
        png = renderLine(csv, { width: args.width, height: args.height });
    }
    writeFileSync(args.output, png);
}

const isMain =
    process.argv[1] !== undefined &&
    import.meta.url === pathToFileURL(process.argv[1]).href;

if (isMain) {
    try {
        run(parseArgs(process.argv.slice(2)));
    } catch (err) {
        if (err instanceof CsvError) {
            process.stderr.write(`malformed CSV: ${err.message}\n`);
        } else {
            process.stderr.write(`error: ${(err as Error).message}\n`);
        }
        process.exit(1);
    }
}
