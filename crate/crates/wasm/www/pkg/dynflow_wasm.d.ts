/* tslint:disable */
/* eslint-disable */

/**
 * Generates a gadget. `size` is the depth `l` for `counting-chain`, `k` for
 * the complexity families and ignored otherwise; `option` picks the
 * variant, or carries comma-separated items for the partition families.
 */
export function generate(family: string, size: number, option: string): string;

/**
 * Solves an instance given in the JSON instance format and returns value,
 * cut memberships and flow rates as pieces ready for plotting.
 */
export function solve_instance(instance_json: string): string;

/**
 * Solves the flow reduction of a partition instance and compares the
 * outcome with subset sum. `variant` is `cap`, `cap-inf` or `transit-finite`.
 */
export function verify_partition(items: string, variant: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly generate: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly solve_instance: (a: number, b: number) => [number, number];
    readonly verify_partition: (a: number, b: number, c: number, d: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
