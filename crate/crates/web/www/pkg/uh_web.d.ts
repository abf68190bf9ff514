/* tslint:disable */
/* eslint-disable */

/**
 * Outcome of a short karate-club training run.
 */
export class TrainingReport {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly final_loss: number;
    readonly iterations: number;
    /**
     * 1-based ranks of nodes 0 and 33 by `δ`, sorted.
     */
    readonly leader_ranks: Uint32Array;
    readonly losses: Float64Array;
    readonly satisfaction: number;
    /**
     * Weighted degree of every node.
     */
    readonly scores: Float64Array;
    /**
     * First two spatial coordinates of every node, flattened.
     */
    readonly spatial: Float64Array;
    /**
     * Angle of the first two time coordinates of every node.
     */
    readonly time_angle: Float64Array;
}

/**
 * Dissimilarity from the pole to the points with time angle `theta` and
 * spatial part on a `size × size` grid over `[-radius, radius]²`,
 * row-major with `s1` decreasing down the rows.
 */
export function dissimilarity_field(theta: number, radius: number, size: number): Float64Array;

/**
 * `"timelike"`, `"null"` or `"spacelike"` for the tangent vector
 * `(0, a, b, c)` at the pole.
 */
export function geodesic_class(a: number, b: number, c: number): string;

/**
 * Samples `γ(t)` for `t` in `[-t_max, t_max]` from the pole along
 * `(0, a, b, c)`. Returns `steps` points flattened as 4 coordinates each.
 */
export function geodesic_path(a: number, b: number, c: number, t_max: number, steps: number): Float64Array;

/**
 * Trains the weighted karate club on `Q^{p,q}_{-1}` (`p >= 2`).
 */
export function train_karate(p: number, q: number, iterations: number, eta: number, seed: bigint): TrainingReport;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_trainingreport_free: (a: number, b: number) => void;
    readonly dissimilarity_field: (a: number, b: number, c: number) => [number, number, number, number];
    readonly geodesic_class: (a: number, b: number, c: number) => [number, number];
    readonly geodesic_path: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly train_karate: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number];
    readonly trainingreport_final_loss: (a: number) => number;
    readonly trainingreport_iterations: (a: number) => number;
    readonly trainingreport_leader_ranks: (a: number) => [number, number];
    readonly trainingreport_losses: (a: number) => [number, number];
    readonly trainingreport_satisfaction: (a: number) => number;
    readonly trainingreport_scores: (a: number) => [number, number];
    readonly trainingreport_spatial: (a: number) => [number, number];
    readonly trainingreport_time_angle: (a: number) => [number, number];
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
