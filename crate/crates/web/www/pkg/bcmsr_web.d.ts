/* tslint:disable */
/* eslint-disable */

/**
 * Best sum rate of each Blackwell bound for `points` values of p in [0, p_max].
 */
export function blackwellSweep(p_max: number, points: number, grid: number): string;

/**
 * Vertices and rows of the four Dueck bounds (closed forms).
 */
export function dueckRegions(_case: number, p: number, q: number, r: number): string;

/**
 * Exhaustive key-extraction report plus a one-time-pad run.
 */
export function keyExtraction(blocklength: number, rate: number, e: number, seed: bigint): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly blackwellSweep: (a: number, b: number, c: number) => [number, number];
    readonly dueckRegions: (a: number, b: number, c: number, d: number) => [number, number];
    readonly keyExtraction: (a: number, b: number, c: number, d: bigint) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
