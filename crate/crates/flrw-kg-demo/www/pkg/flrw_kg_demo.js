/* @ts-self-types="./flrw_kg_demo.d.ts" */

/**
 * JSON verdict for a single parameter point.
 * @param {number} n
 * @param {number} m
 * @param {number} alpha
 * @param {number} gamma
 * @param {number} gamma_damp
 * @returns {string}
 */
export function classify_point(n, m, alpha, gamma, gamma_damp) {
    let deferred1_0;
    let deferred1_1;
    try {
        const ret = wasm.classify_point(n, m, alpha, gamma, gamma_damp);
        deferred1_0 = ret[0];
        deferred1_1 = ret[1];
        return getStringFromWasm0(ret[0], ret[1]);
    } finally {
        wasm.__wbindgen_free(deferred1_0, deferred1_1, 1);
    }
}

/**
 * RGBA image of the (γ, Γ) plane at fixed (n, M, α): γ on the x axis from
 * `gamma_lo` to `gamma_hi`, Γ on the y axis from top `gd_hi` to bottom
 * `gd_lo`.
 * @param {number} n
 * @param {number} m
 * @param {number} alpha
 * @param {number} gamma_lo
 * @param {number} gamma_hi
 * @param {number} gd_lo
 * @param {number} gd_hi
 * @param {number} width
 * @param {number} height
 * @returns {Uint8Array}
 */
export function domain_image(n, m, alpha, gamma_lo, gamma_hi, gd_lo, gd_hi, width, height) {
    const ret = wasm.domain_image(n, m, alpha, gamma_lo, gamma_hi, gd_lo, gd_hi, width, height);
    var v1 = getArrayU8FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 1, 1);
    return v1;
}

/**
 * Kernel magnitudes along `z = φ(t)·s`: returns `[s..., |K1|..., |K0|...]`
 * at `samples` interior points.
 * @param {number} t
 * @param {number} m_re
 * @param {number} m_im
 * @param {number} samples
 * @returns {Float64Array}
 */
export function kernel_profiles(t, m_re, m_im, samples) {
    const ret = wasm.kernel_profiles(t, m_re, m_im, samples);
    var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
    return v1;
}

/**
 * Lifespan lower bound `inverse_I(C ε^{-α})` over a log-ε range; entries are
 * NaN when the parameters sit in a global-existence regime.
 * @param {number} n
 * @param {number} m
 * @param {number} alpha
 * @param {number} gamma
 * @param {number} gamma_damp
 * @param {number} c
 * @param {number} log10_eps_lo
 * @param {number} log10_eps_hi
 * @param {number} samples
 * @returns {Float64Array}
 */
export function lifespan_bound_line(n, m, alpha, gamma, gamma_damp, c, log10_eps_lo, log10_eps_hi, samples) {
    const ret = wasm.lifespan_bound_line(n, m, alpha, gamma, gamma_damp, c, log10_eps_lo, log10_eps_hi, samples);
    var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
    return v1;
}

/**
 * Samples of the growth function `I(t)` on `[0, t_max]`.
 * @param {number} n
 * @param {number} m
 * @param {number} alpha
 * @param {number} gamma
 * @param {number} gamma_damp
 * @param {number} t_max
 * @param {number} samples
 * @returns {Float64Array}
 */
export function lifespan_curve(n, m, alpha, gamma, gamma_damp, t_max, samples) {
    const ret = wasm.lifespan_curve(n, m, alpha, gamma, gamma_damp, t_max, samples);
    var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
    return v1;
}
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./flrw_kg_demo_bg.js": import0,
    };
}

function getArrayF64FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat64ArrayMemory0().subarray(ptr / 8, ptr / 8 + len);
}

function getArrayU8FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getUint8ArrayMemory0().subarray(ptr / 1, ptr / 1 + len);
}

let cachedFloat64ArrayMemory0 = null;
function getFloat64ArrayMemory0() {
    if (cachedFloat64ArrayMemory0 === null || cachedFloat64ArrayMemory0.byteLength === 0) {
        cachedFloat64ArrayMemory0 = new Float64Array(wasm.memory.buffer);
    }
    return cachedFloat64ArrayMemory0;
}

function getStringFromWasm0(ptr, len) {
    return decodeText(ptr >>> 0, len);
}

let cachedUint8ArrayMemory0 = null;
function getUint8ArrayMemory0() {
    if (cachedUint8ArrayMemory0 === null || cachedUint8ArrayMemory0.byteLength === 0) {
        cachedUint8ArrayMemory0 = new Uint8Array(wasm.memory.buffer);
    }
    return cachedUint8ArrayMemory0;
}

let cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
cachedTextDecoder.decode();
const MAX_SAFARI_DECODE_BYTES = 2146435072;
let numBytesDecoded = 0;
function decodeText(ptr, len) {
    numBytesDecoded += len;
    if (numBytesDecoded >= MAX_SAFARI_DECODE_BYTES) {
        cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
        cachedTextDecoder.decode();
        numBytesDecoded = len;
    }
    return cachedTextDecoder.decode(getUint8ArrayMemory0().subarray(ptr, ptr + len));
}

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedFloat64ArrayMemory0 = null;
    cachedUint8ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (!module.ok) {
            throw new Error(`failed to fetch Wasm: ${module.status} ${module.statusText} fetching '${module.url}'`);
        }

        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('flrw_kg_demo_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
