/** CSV reading for the harness's numeric tables.
 *
 * All tables the harness writes are plain comma-separated numbers under
 * a single header row (no quoting, no embedded commas), so a split based
 * parser is enough. Errors always name the offending column so a schema
 * drift on the producer side shows up as a readable message, not NaN.
 */

import { SchemaError } from "./errors.js";

export interface Table {
  /** column names from the header row */
  names: string[];
  /** row-major numeric body; every row has names.length entries */
  rows: number[][];
}

export function parseCsv(text: string, file: string): Table {
  const lines = text.split(/\r?\n/);
  while (lines.length > 0 && lines[lines.length - 1].trim() === "") {
    lines.pop();
  }
  if (lines.length === 0) {
    throw new SchemaError("header", `${file}: empty file, expected a header row`);
  }
  const names = lines[0].split(",").map((s) => s.trim());
  if (names.some((n) => n === "")) {
    throw new SchemaError("header", `${file}: blank column name in header "${lines[0]}"`);
  }
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== names.length) {
      throw new SchemaError(
        `line ${i + 1}`,
        `${file} line ${i + 1}: expected ${names.length} fields, got ${cells.length}`,
      );
    }
    const row = new Array<number>(cells.length);
    for (let j = 0; j < cells.length; j++) {
      const v = Number(cells[j]);
      if (cells[j].trim() === "" || Number.isNaN(v)) {
        throw new SchemaError(
          names[j],
          `${file} line ${i + 1}: column "${names[j]}" is not numeric: "${cells[j]}"`,
        );
      }
      row[j] = v;
    }
    rows.push(row);
  }
  return { names, rows };
}

/** Assert the table has every named column; error names the first missing one. */
export function requireColumns(t: Table, needed: string[], file: string): void {
  for (const name of needed) {
    if (!t.names.includes(name)) {
      throw new SchemaError(
        name,
        `${file}: missing column "${name}" (has: ${t.names.join(", ")})`,
      );
    }
  }
}

export function column(t: Table, name: string): number[] {
  const j = t.names.indexOf(name);
  if (j < 0) {
    throw new SchemaError(name, `no column "${name}"`);
  }
  return t.rows.map((r) => r[j]);
}
