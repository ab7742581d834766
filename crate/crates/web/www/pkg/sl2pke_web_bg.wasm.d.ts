/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_histogramdata_free: (a: number, b: number) => void;
export const __wbg_roundtrip_free: (a: number, b: number) => void;
export const evaluateWord: (a: number, b: number) => [number, number, number, number];
export const factorMatrix: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
export const histogram: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const histogramdata_counts: (a: number) => [number, number];
export const histogramdata_hi: (a: number) => number;
export const histogramdata_lo: (a: number) => number;
export const histogramdata_mode_bin: (a: number) => number;
export const histogramdata_total: (a: number) => number;
export const roundTrip: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const roundtrip_ciphertext_head: (a: number) => [number, number];
export const roundtrip_params: (a: number) => [number, number];
export const roundtrip_recovered: (a: number) => [number, number];
export const roundtrip_trace: (a: number) => [number, number];
export const roundtrip_ct_bits: (a: number) => number;
export const roundtrip_pk_bits: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
