/* tslint:disable */
/* eslint-disable */

export class SqgDemo {
    free(): void;
    [Symbol.dispose](): void;
    j_max(): number;
    j_min(): number;
    n(): number;
    constructor(n: number, seed: bigint, kappa: number, dt: number);
    /**
     * RGBA bytes, row-major, `n × n`.
     */
    render(): Uint8Array;
    show_block(j: number): void;
    show_heat(t: number): void;
    show_state(): void;
    status(): string;
    step(steps: number): void;
    time(): number;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_sqgdemo_free: (a: number, b: number) => void;
    readonly sqgdemo_j_max: (a: number) => number;
    readonly sqgdemo_j_min: (a: number) => number;
    readonly sqgdemo_n: (a: number) => number;
    readonly sqgdemo_new: (a: number, b: bigint, c: number, d: number) => [number, number, number];
    readonly sqgdemo_render: (a: number) => [number, number, number, number];
    readonly sqgdemo_show_block: (a: number, b: number) => void;
    readonly sqgdemo_show_heat: (a: number, b: number) => void;
    readonly sqgdemo_show_state: (a: number) => void;
    readonly sqgdemo_status: (a: number) => [number, number, number, number];
    readonly sqgdemo_step: (a: number, b: number) => [number, number];
    readonly sqgdemo_time: (a: number) => number;
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
