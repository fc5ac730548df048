/**
 * Parser for the simulator's CSV dialect: `#key=value` metadata lines,
 * a mandatory header row, then numeric rows.  Errors carry 1-based line
 * numbers.
 */

export interface SweepCsv {
    meta: Record<string, string>;
    header: string[];
    rows: number[][];
}

export class CsvError extends Error {
    constructor(public line: number, message: string) {
        super(`line ${line}: ${message}`);
        this.name = 'CsvError';
    }
}

export function parseSweepCsv(text: string): SweepCsv {
    const meta: Record<string, string> = {};
    let header: string[] | null = null;
    const rows: number[][] = [];
    const lines = text.split(/\r?\n/);
    for (let i = 0; i < lines.length; i++) {
        const line = lines[i].trim();
        const lineno = i + 1;
        if (line === '') {
            continue;
        }
        if (line.startsWith('#')) {
            if (header !== null) {
                throw new CsvError(lineno, 'metadata after the header row');
            }
            const eq = line.indexOf('=');
            if (eq < 0) {
                throw new CsvError(lineno, `metadata line without '=': ${line}`);
            }
            meta[line.slice(1, eq)] = line.slice(eq + 1);
            continue;
        }
        const fields = line.split(',');
        if (header === null) {
            if (fields.some((f) => f !== '' && !Number.isNaN(Number(f)))) {
                throw new CsvError(lineno, 'numeric data before the header row');
            }
            header = fields;
            continue;
        }
        if (fields.length !== header.length) {
            throw new CsvError(
                lineno,
                `expected ${header.length} fields, found ${fields.length}`,
            );
        }
        const values = fields.map(Number);
        const bad = values.findIndex((v) => Number.isNaN(v));
        if (bad >= 0) {
            throw new CsvError(lineno, `field ${bad + 1} is not a number: ${fields[bad]}`);
        }
        rows.push(values);
    }
    if (header === null) {
        throw new CsvError(lines.length, 'missing header row');
    }
    if (rows.length === 0) {
        throw new CsvError(lines.length, 'no data rows');
    }
    return { meta, header, rows };
}

export interface MapData {
    meta: Record<string, string>;
    /** grid values along either axis, in the file's declared units */
    axis: number[];
    /** values[i][j] with i the first (outer) frequency */
    values: number[][];
}

/** Reshape a parsed 3-column map file into a square matrix. */
export function toMap(csv: SweepCsv): MapData {
    if (csv.header.length !== 3) {
        throw new Error(`map file needs 3 columns, found ${csv.header.join(',')}`);
    }
    const n = Math.round(Math.sqrt(csv.rows.length));
    if (n * n !== csv.rows.length) {
        throw new Error(`map file is not square: ${csv.rows.length} rows`);
    }
    const axis: number[] = [];
    for (let i = 0; i < n; i++) {
        axis.push(csv.rows[i * n][0]);
    }
    const values: number[][] = [];
    for (let i = 0; i < n; i++) {
        const row: number[] = [];
        for (let j = 0; j < n; j++) {
            const rec = csv.rows[i * n + j];
            if (rec[1] !== csv.rows[j][1]) {
                throw new Error(`row ${i * n + j + 1}: grid is not row-major`);
            }
            row.push(rec[2]);
        }
        values.push(row);
    }
    return { meta: csv.meta, axis, values };
}
