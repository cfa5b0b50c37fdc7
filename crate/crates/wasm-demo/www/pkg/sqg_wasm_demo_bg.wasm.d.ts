/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_sqgdemo_free: (a: number, b: number) => void;
export const sqgdemo_j_max: (a: number) => number;
export const sqgdemo_j_min: (a: number) => number;
export const sqgdemo_n: (a: number) => number;
export const sqgdemo_new: (a: number, b: bigint, c: number, d: number) => [number, number, number];
export const sqgdemo_render: (a: number) => [number, number, number, number];
export const sqgdemo_show_block: (a: number, b: number) => void;
export const sqgdemo_show_heat: (a: number, b: number) => void;
export const sqgdemo_show_state: (a: number) => void;
export const sqgdemo_status: (a: number) => [number, number, number, number];
export const sqgdemo_step: (a: number, b: number) => [number, number];
export const sqgdemo_time: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
