/** Error types the CLI maps to exit codes. */

/** Input file does not match the documented format. Exit code 1. */
export class SchemaError extends Error {
  field: string;

  constructor(field: string, message: string) {
    super(message);
    this.name = "SchemaError";
    this.field = field;
  }
}

/** Bad invocation: unknown kind, missing flags, wrong input count. Exit code 2. */
export class UsageError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "UsageError";
  }
}
