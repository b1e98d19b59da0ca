/** Shared mocks: a deterministic sentinel bundle whose every number is
 *  unique, and a core client stub that records calls. */

import { CoreClient } from "../src/api.js";
import {
    BundleDto,
    Cplx,
    EditValue,
    EditableField,
    ExportResultDto,
    SceneDto,
    SystemDto,
} from "../src/types.js";

export function makeBundle(base: number): BundleDto {
    let k = 0;
    const next = () => base + k++ * 0.0625;
    const cplx = (): Cplx => [next(), next()];
    return {
        matrix: [[next(), next(), next()], [next(), next(), next()],
                 [next(), next(), next()]],
        eigenvalues: [next(), next(), next()],
        eigenvectors: [[next(), next(), next()], [next(), next(), next()],
                       [next(), next(), next()]],
        euler: { alpha: next(), beta: next(), gamma: next() },
        angle_axis: { angle: next(), axis: { x: next(), y: next(), z: next() } },
        quaternion: { w: next(), x: next(), y: next(), z: next() },
        dcm: [[next(), next(), next()], [next(), next(), next()],
              [next(), next(), next()]],
        spherical: {
            rank0: cplx(),
            rank1: [cplx(), cplx(), cplx()],
            rank2: [cplx(), cplx(), cplx(), cplx(), cplx()],
        },
        haeberlen: { iso: next(), aniso: next(), asym: next() },
        ax_rh: { iso: next(), ax: next(), rh: next() },
        span_skew: { iso: next(), span: next(), skew: next() },
        span_skew_kind: "shielding",
        wigner: Array.from({ length: 5 },
            () => Array.from({ length: 5 }, cplx)),
        editable: ["matrix", "eigenvalues", "spherical", "euler",
                   "angle_axis_angle"],
    };
}

/** Every number that occurs anywhere in a bundle. */
export function bundleNumbers(b: BundleDto): Set<number> {
    const out = new Set<number>();
    const walk = (v: unknown): void => {
        if (typeof v === "number") out.add(v);
        else if (Array.isArray(v)) v.forEach(walk);
        else if (v && typeof v === "object") Object.values(v).forEach(walk);
    };
    walk(b as unknown);
    return out;
}

export interface Call {
    method: string;
    args: unknown[];
}

export class MockCoreClient implements CoreClient {
    calls: Call[] = [];
    bundles: BundleDto[];
    system: SystemDto = { spins: [], interactions: [] };
    scenes: Record<string, SceneDto> = {};
    exports: Record<string, string> = {};

    constructor(bundles: BundleDto[]) {
        this.bundles = bundles.slice();
    }

    private nextBundle(): BundleDto {
        if (this.bundles.length > 1) return this.bundles.shift()!;
        return this.bundles[0];
    }

    getSystem(): Promise<SystemDto> {
        this.calls.push({ method: "getSystem", args: [] });
        return Promise.resolve(this.system);
    }

    putSystemXml(xml: string): Promise<{ ok: boolean; warnings: string[] }> {
        this.calls.push({ method: "putSystemXml", args: [xml] });
        return Promise.resolve({ ok: true, warnings: [] });
    }

    getScene(mode: "nmr" | "epr"): Promise<SceneDto> {
        this.calls.push({ method: "getScene", args: [mode] });
        return Promise.resolve(this.scenes[mode]);
    }

    getBundle(interactionId: number): Promise<BundleDto> {
        this.calls.push({ method: "getBundle", args: [interactionId] });
        return Promise.resolve(this.nextBundle());
    }

    edit(interactionId: number, edited: EditableField,
         value: EditValue): Promise<BundleDto> {
        this.calls.push({ method: "edit", args: [interactionId, edited, value] });
        return Promise.resolve(this.nextBundle());
    }

    exportText(target: string, regime = "liquid"): Promise<ExportResultDto> {
        this.calls.push({ method: "exportText", args: [target, regime] });
        const text = this.exports[`${target}/${regime}`] ?? `% ${target} ${regime}\n`;
        return Promise.resolve({ target, regime, text });
    }
}
