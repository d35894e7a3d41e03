/* tslint:disable */
/* eslint-disable */

/**
 * Empirical CDFs of SINR_cpu (dB) over `realizations` networks for silent,
 * equal-power and (P1)-optimized monitoring.
 */
export function sensing_cdf(config_json: string, realizations: number): string;

/**
 * SINRs (dB) of UE 1, the monitor and the CPU as the fraction of the jamming
 * budget in use grows from 0 to 1, with `target_split` of it aimed at the
 * target and the rest at UE 1.
 */
export function sinr_sweep(config_json: string, realization: number, target_split: number, points: number): string;

/**
 * Solves (P1) on one realization; SINR triples are (UE 1, monitor, CPU) in dB.
 */
export function solve_p1_json(config_json: string, realization: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly sensing_cdf: (a: number, b: number, c: number) => [number, number, number, number];
    readonly sinr_sweep: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly solve_p1_json: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
