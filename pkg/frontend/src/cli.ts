#!/usr/bin/env node
/** reldiff-plots render --kind K --in FILE [--in FILE ...] --out FILE
 *
 * Exit codes: 0 figure written, 1 input did not match the documented
 * formats (message names the offending column or field), 2 usage error.
 */

import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";

import { SchemaError, UsageError } from "./errors.js";
import { FigureRequest, Kind, KINDS, render } from "./figures.js";

const USAGE = `usage: reldiff-plots render --kind K --in FILE [--in FILE ...] --out FILE

kinds:
  trajectory2d     worldline table (CSV) -> per-path projection, or hit table -> crossing scatter
  density_overlay  series table with r_lo,r_hi,mass,mass_se,law_mass -> histogram + candidate curve
  entropy_series   series table, first column abscissa, X / X_se pairs -> curves with error bars
  report_grid      one or more report JSONs -> check-by-check bars against tolerances
`;

export async function main(argv: string[]): Promise<number> {
  if (argv.length === 0 || argv[0] === "--help" || argv[0] === "-h") {
    process.stderr.write(USAGE);
    return argv.length === 0 ? 2 : 0;
  }
  if (argv[0] !== "render") {
    process.stderr.write(`error: unknown command "${argv[0]}"\n${USAGE}`);
    return 2;
  }
  let parsed;
  try {
    parsed = parseArgs({
      args: argv.slice(1),
      options: {
        kind: { type: "string" },
        in: { type: "string", multiple: true },
        out: { type: "string" },
      },
      strict: true,
    });
  } catch (e) {
    process.stderr.write(`error: ${(e as Error).message}\n${USAGE}`);
    return 2;
  }
  const { kind, in: inputs, out } = parsed.values;
  if (!kind || !KINDS.includes(kind as Kind)) {
    process.stderr.write(`error: --kind must be one of ${KINDS.join(", ")} (got ${kind ?? "nothing"})\n`);
    return 2;
  }
  if (!inputs || inputs.length === 0 || !out) {
    process.stderr.write(`error: --in and --out are required\n${USAGE}`);
    return 2;
  }
  const req: FigureRequest = { kind: kind as Kind, inputs, output: out };
  try {
    await render(req);
  } catch (e) {
    if (e instanceof UsageError) {
      process.stderr.write(`error: ${e.message}\n`);
      return 2;
    }
    if (e instanceof SchemaError) {
      process.stderr.write(`error: ${e.message}\n`);
      return 1;
    }
    process.stderr.write(`error: ${(e as Error).message}\n`);
    return 1;
  }
  process.stdout.write(`wrote ${kind} figure -> ${out}\n`);
  return 0;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
