/* tslint:disable */
/* eslint-disable */

export class HistogramData {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly counts: Uint32Array;
    readonly hi: number;
    readonly lo: number;
    readonly mode_bin: number;
    readonly total: number;
}

export class RoundTrip {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * First ciphertext entry, hex.
     */
    readonly ciphertext_head: string;
    readonly ct_bits: number;
    readonly params: string;
    readonly pk_bits: number;
    readonly recovered: string;
    /**
     * `trace(C)` in decimal, readable without the secret key.
     */
    readonly trace: string;
}

export function evaluateWord(word: string): string;

export function factorMatrix(a: string, b: string, c: string, d: string): string;

export function histogram(stat: string, k: number, bins: number, samples: number, seed: string): HistogramData;

export function roundTrip(l: number, lambda: number, n: number, msg_hex: string, seed: string): RoundTrip;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_histogramdata_free: (a: number, b: number) => void;
    readonly __wbg_roundtrip_free: (a: number, b: number) => void;
    readonly evaluateWord: (a: number, b: number) => [number, number, number, number];
    readonly factorMatrix: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly histogram: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly histogramdata_counts: (a: number) => [number, number];
    readonly histogramdata_hi: (a: number) => number;
    readonly histogramdata_lo: (a: number) => number;
    readonly histogramdata_mode_bin: (a: number) => number;
    readonly histogramdata_total: (a: number) => number;
    readonly roundTrip: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly roundtrip_ciphertext_head: (a: number) => [number, number];
    readonly roundtrip_params: (a: number) => [number, number];
    readonly roundtrip_recovered: (a: number) => [number, number];
    readonly roundtrip_trace: (a: number) => [number, number];
    readonly roundtrip_ct_bits: (a: number) => number;
    readonly roundtrip_pk_bits: (a: number) => number;
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
