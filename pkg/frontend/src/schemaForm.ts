/**
 * Schema-driven parameter form model.
 *
 * Controls are generated from /api/schema (never hand-duplicated), with
 * the server's defaults pre-filled and client-side range validation
 * mirroring the server's rules. Values are kept as raw strings until
 * collection so partially edited numbers do not flap.
 */

import type { ParamFieldSchema } from "./types.js";

export interface FieldState {
  schema: ParamFieldSchema;
  raw: string;
  error: string | null;
}

export function buildForm(fields: ParamFieldSchema[]): FieldState[] {
  return fields.map((schema) => ({
    schema,
    raw: schema.default === null || schema.default === undefined ? "" : String(schema.default),
    error: null,
  }));
}

export interface ValidationResult {
  ok: boolean;
  value?: number | string;
  error?: string;
}

/** Mirrors the server's bounds checks; an empty string defers to the server default. */
export function validateField(schema: ParamFieldSchema, raw: string): ValidationResult {
  const trimmed = raw.trim();
  if (trimmed === "") {
    return { ok: true };
  }
  if (schema.kind === "enum") {
    if (!schema.choices || !schema.choices.includes(trimmed)) {
      return { ok: false, error: `${schema.name} must be one of ${schema.choices?.join(", ")}` };
    }
    return { ok: true, value: trimmed };
  }
  const value = Number(trimmed);
  if (!Number.isFinite(value)) {
    return { ok: false, error: `${schema.name} must be a number` };
  }
  if (schema.kind === "int" && !Number.isInteger(value)) {
    return { ok: false, error: `${schema.name} must be an integer` };
  }
  if (schema.minimum !== undefined && value < schema.minimum) {
    return { ok: false, error: `${schema.name} must be >= ${schema.minimum}` };
  }
  if (schema.maximum !== undefined && value > schema.maximum) {
    return { ok: false, error: `${schema.name} must be <= ${schema.maximum}` };
  }
  return { ok: true, value };
}

export function setFieldValue(fields: FieldState[], name: string, raw: string): FieldState[] {
  return fields.map((f) => {
    if (f.schema.name !== name) {
      return f;
    }
    const result = validateField(f.schema, raw);
    return { ...f, raw, error: result.ok ? null : result.error! };
  });
}

export interface CollectedParams {
  params: Record<string, number | string>;
  errors: string[];
}

/** Fields left empty are omitted so the server fills its defaults. */
export function collectParams(fields: FieldState[]): CollectedParams {
  const params: Record<string, number | string> = {};
  const errors: string[] = [];
  for (const f of fields) {
    const result = validateField(f.schema, f.raw);
    if (!result.ok) {
      errors.push(result.error!);
    } else if (result.value !== undefined) {
      params[f.schema.name] = result.value;
    }
  }
  return { params, errors };
}

/** Round-trip the server's resolved-parameter echo back into the form. */
export function applyResolved(
  fields: FieldState[],
  resolved: Record<string, number | string>,
): FieldState[] {
  return fields.map((f) =>
    f.schema.name in resolved
      ? { ...f, raw: String(resolved[f.schema.name]), error: null }
      : f,
  );
}
