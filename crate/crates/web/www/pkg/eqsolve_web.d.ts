/* tslint:disable */
/* eslint-disable */

export function averagePath2x2(solver: string, row_payoffs: Float64Array, steps: number): Float64Array;

export function convergenceSlope(solver: string, rows: number, cols: number, seed: number, iters: number): Float64Array;

export function exploitabilityTrace(solver: string, rows: number, cols: number, seed: number, iters: number): Float64Array;

export function solverNames(): string[];

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly averagePath2x2: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly convergenceSlope: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly exploitabilityTrace: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly solverNames: () => [number, number];
    readonly __externref_table_alloc: () => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_drop_slice: (a: number, b: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
