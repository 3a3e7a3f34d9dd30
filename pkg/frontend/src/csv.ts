import { readFileSync } from "fs";

export interface Table {
  path: string;
  header: string[];
  rows: Record<string, string>[];
}

export class ColumnError extends Error {}

export function parseCsv(text: string, path = "<inline>"): Table {
  const lines = text.split("\n").filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new ColumnError(`${path}: empty CSV (no header row)`);
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new ColumnError(
        `${path}: row ${i + 2} has ${cells.length} cells, header has ${header.length}`,
      );
    }
    const row: Record<string, string> = {};
    header.forEach((name, k) => (row[name] = cells[k]));
    return row;
  });
  if (rows.length === 0) {
    throw new ColumnError(`${path}: no data rows`);
  }
  return { path, header, rows };
}

export function loadCsv(path: string): Table {
  return parseCsv(readFileSync(path, "utf-8"), path);
}

export function requireColumns(table: Table, names: string[], context: string): void {
  const missing = names.filter((n) => !table.header.includes(n));
  if (missing.length > 0) {
    throw new ColumnError(
      `${context}: ${table.path} is missing column(s) [${missing.join(", ")}]; ` +
        `expected [${names.join(", ")}], found [${table.header.join(", ")}]`,
    );
  }
}

export function numbers(table: Table, name: string): number[] {
  requireColumns(table, [name], "column read");
  return table.rows.map((r, i) => {
    const v = Number(r[name]);
    if (!Number.isFinite(v)) {
      throw new ColumnError(`${table.path}: row ${i + 2}, column ${name}: not a number (${r[name]})`);
    }
    return v;
  });
}

export function distinct(table: Table, name: string): string[] {
  return [...new Set(table.rows.map((r) => r[name]))].sort();
}
