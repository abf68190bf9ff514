/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_trainingreport_free: (a: number, b: number) => void;
export const dissimilarity_field: (a: number, b: number, c: number) => [number, number, number, number];
export const geodesic_class: (a: number, b: number, c: number) => [number, number];
export const geodesic_path: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const train_karate: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number];
export const trainingreport_final_loss: (a: number) => number;
export const trainingreport_iterations: (a: number) => number;
export const trainingreport_leader_ranks: (a: number) => [number, number];
export const trainingreport_losses: (a: number) => [number, number];
export const trainingreport_satisfaction: (a: number) => number;
export const trainingreport_scores: (a: number) => [number, number];
export const trainingreport_spatial: (a: number) => [number, number];
export const trainingreport_time_angle: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
