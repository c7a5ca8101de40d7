/* tslint:disable */
/* eslint-disable */

/**
 * Bath-averaged channel probabilities on a log grid in `k`, as
 * `[k, reflect, transmit]` triples.
 */
export function channel_curves(mass: number, coupling: number, spins: number, k_min: number, k_max: number, count: number): Float64Array;

/**
 * Two-mode entanglement entropy against the mean momentum, as `[k0, entropy]` pairs.
 */
export function entropy_scan(mass: number, coupling: number, spins: number, k_min: number, k_max: number, count: number): Float64Array;

/**
 * Coherence suppression `|rho_ij| / sqrt(rho_ii rho_jj)` on a `points x points`
 * momentum grid, row-major. NaN marks cells where the packet has no weight.
 *
 * The last two entries are the grid's `k_max` and the full entanglement entropy.
 */
export function suppression_map(mass: number, coupling: number, spins: number, k0: number, sigma0: number, points: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly channel_curves: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly entropy_scan: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly suppression_map: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
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
