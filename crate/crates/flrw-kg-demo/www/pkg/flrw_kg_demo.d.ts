/* tslint:disable */
/* eslint-disable */

/**
 * JSON verdict for a single parameter point.
 */
export function classify_point(n: number, m: number, alpha: number, gamma: number, gamma_damp: number): string;

/**
 * RGBA image of the (γ, Γ) plane at fixed (n, M, α): γ on the x axis from
 * `gamma_lo` to `gamma_hi`, Γ on the y axis from top `gd_hi` to bottom
 * `gd_lo`.
 */
export function domain_image(n: number, m: number, alpha: number, gamma_lo: number, gamma_hi: number, gd_lo: number, gd_hi: number, width: number, height: number): Uint8Array;

/**
 * Kernel magnitudes along `z = φ(t)·s`: returns `[s..., |K1|..., |K0|...]`
 * at `samples` interior points.
 */
export function kernel_profiles(t: number, m_re: number, m_im: number, samples: number): Float64Array;

/**
 * Lifespan lower bound `inverse_I(C ε^{-α})` over a log-ε range; entries are
 * NaN when the parameters sit in a global-existence regime.
 */
export function lifespan_bound_line(n: number, m: number, alpha: number, gamma: number, gamma_damp: number, c: number, log10_eps_lo: number, log10_eps_hi: number, samples: number): Float64Array;

/**
 * Samples of the growth function `I(t)` on `[0, t_max]`.
 */
export function lifespan_curve(n: number, m: number, alpha: number, gamma: number, gamma_damp: number, t_max: number, samples: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly classify_point: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly domain_image: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number];
    readonly kernel_profiles: (a: number, b: number, c: number, d: number) => [number, number];
    readonly lifespan_bound_line: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number];
    readonly lifespan_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number];
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
