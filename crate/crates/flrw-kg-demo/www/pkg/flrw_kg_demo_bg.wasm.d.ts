/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const classify_point: (a: number, b: number, c: number, d: number, e: number) => [number, number];
export const domain_image: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number];
export const kernel_profiles: (a: number, b: number, c: number, d: number) => [number, number];
export const lifespan_bound_line: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number];
export const lifespan_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
