/**
 * Parsers for the three harness CSV schemas. Fields are comma-split with no
 * quoting (the harness sanitizes its error column), leading `#` lines carry
 * run metadata, and the first non-comment line must equal the schema header
 * exactly; anything else raises a SchemaError naming the offending columns.
 */

export class SchemaError extends Error {}

export const SWEEP_HEADER =
  "model,k,zx,zy,wx,wy,delta,regime,measured,tail,parabolic,bound,margin,elements,error";
export const COUNT_HEADER = "kind,model,k,zx,zy,wx,wy,delta,lhs,rhs,slack,allowance";
export const DIAG_HEADER = "model,kind,k,sup,envelope,ratio";

export interface SweepRow {
  model: string;
  k: number;
  delta: number;
  regime: string;
  measured: number;
  tail: number;
  parabolic: number;
  bound: number;
  margin: number;
  error: string;
}

export interface CountRow {
  kind: string;
  model: string;
  k: number;
  delta: number;
  lhs: number;
  rhs: number;
  slack: number;
  allowance: number;
}

export interface DiagRow {
  model: string;
  kind: string;
  k: number;
  sup: number;
  envelope: number;
  ratio: number;
}

function bodyLines(text: string, expectedHeader: string, label: string): string[][] {
  const lines = text.split(/\r?\n/);
  const expected = expectedHeader.split(",");
  let headerSeen = false;
  const rows: string[][] = [];
  for (const raw of lines) {
    const line = raw.trim();
    if (line === "" || line.startsWith("#")) continue;
    if (!headerSeen) {
      const got = line.split(",");
      const missing = expected.filter((c) => !got.includes(c));
      const extra = got.filter((c) => !expected.includes(c));
      if (missing.length > 0 || extra.length > 0 || got.join(",") !== expectedHeader) {
        throw new SchemaError(
          `${label}: header mismatch` +
            (missing.length ? `; missing columns: ${missing.join(", ")}` : "") +
            (extra.length ? `; unexpected columns: ${extra.join(", ")}` : "") +
            (missing.length || extra.length ? "" : "; column order differs"),
        );
      }
      headerSeen = true;
      continue;
    }
    const parts = line.split(",");
    if (parts.length !== expected.length) {
      throw new SchemaError(
        `${label}: row has ${parts.length} columns, expected ${expected.length}`,
      );
    }
    rows.push(parts);
  }
  if (!headerSeen) throw new SchemaError(`${label}: no header row found`);
  if (rows.length === 0) throw new SchemaError(`${label}: no rows`);
  return rows;
}

function num(field: string, column: string, label: string): number {
  const value = Number(field);
  if (field === "" || Number.isNaN(value)) {
    throw new SchemaError(`${label}: column ${column} has non-numeric value '${field}'`);
  }
  return value;
}

export function parseSweep(text: string): SweepRow[] {
  const rows: SweepRow[] = [];
  for (const p of bodyLines(text, SWEEP_HEADER, "sweep CSV")) {
    const error = p[14];
    if (error !== "") {
      // errored rows carry no numbers; keep them out of the figures
      continue;
    }
    rows.push({
      model: p[0],
      k: num(p[1], "k", "sweep CSV"),
      delta: num(p[6], "delta", "sweep CSV"),
      regime: p[7],
      measured: num(p[8], "measured", "sweep CSV"),
      tail: num(p[9], "tail", "sweep CSV"),
      parabolic: num(p[10], "parabolic", "sweep CSV"),
      bound: num(p[11], "bound", "sweep CSV"),
      margin: num(p[12], "margin", "sweep CSV"),
      error,
    });
  }
  if (rows.length === 0) throw new SchemaError("sweep CSV: no rows");
  return rows;
}

export function parseCount(text: string): CountRow[] {
  return bodyLines(text, COUNT_HEADER, "count CSV").map((p) => ({
    kind: p[0],
    model: p[1],
    k: num(p[2], "k", "count CSV"),
    delta: num(p[7], "delta", "count CSV"),
    lhs: num(p[8], "lhs", "count CSV"),
    rhs: num(p[9], "rhs", "count CSV"),
    slack: num(p[10], "slack", "count CSV"),
    allowance: num(p[11], "allowance", "count CSV"),
  }));
}

export function parseDiag(text: string): DiagRow[] {
  return bodyLines(text, DIAG_HEADER, "diag CSV").map((p) => ({
    model: p[0],
    kind: p[1],
    k: num(p[2], "k", "diag CSV"),
    sup: num(p[3], "sup", "diag CSV"),
    envelope: num(p[4], "envelope", "diag CSV"),
    ratio: num(p[5], "ratio", "diag CSV"),
  }));
}
