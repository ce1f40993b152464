/** Schema for the harness's JSON experiment reports.
 *
 * The report writer is deterministic (sorted keys, %.17g floats), so the
 * reader can be strict about types while staying lenient about extra keys
 * a newer harness might add. Validation failures surface the dotted path
 * of the first offending field.
 */

import { z } from "zod";

import { SchemaError } from "./errors.js";

const checkSchema = z.object({
  statistic: z.string(),
  value: z.number(),
  tolerance: z.number(),
  op: z.enum(["le", "ge"]),
  pass: z.boolean(),
  stderr: z.number().optional(),
  detail: z.unknown().optional(),
});

export const reportSchema = z.object({
  schema_version: z.number().int(),
  experiment: z.string(),
  seed: z.number().int(),
  code_version: z.string(),
  params: z.record(z.string(), z.unknown()),
  checks: z.array(checkSchema),
  pass: z.boolean(),
});

export type Check = z.infer<typeof checkSchema>;
export type Report = z.infer<typeof reportSchema>;

export function loadReport(text: string, file: string): Report {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (e) {
    throw new SchemaError("(json)", `${file}: not valid JSON: ${(e as Error).message}`);
  }
  const res = reportSchema.safeParse(raw);
  if (!res.success) {
    const issue = res.error.issues[0];
    const field = issue.path.length > 0 ? issue.path.join(".") : "(root)";
    throw new SchemaError(field, `${file}: field "${field}": ${issue.message}`);
  }
  return res.data;
}
