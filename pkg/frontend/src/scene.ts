/** Scene document to render primitives.
 *
 *  The core supplies centers, semi-axes, orientations and magnitudes; this
 *  module tessellates them into triangle meshes and polylines.  Electron
 *  glyphs are flagged viewport-anchored: they re-orient with the camera
 *  but keep their positions on screen.  Colors for J lines and exchange
 *  coils are a single-hue intensity ramp over log magnitude.
 */

import { Quat, Vec3, quatRotate } from "./math.js";
import { EllipsoidDto, SceneDto } from "./types.js";

export interface Mesh {
    positions: Float32Array;   // xyz triples
    normals: Float32Array;
    indices: Uint32Array;
    color: [number, number, number];
    viewportAnchored: boolean;
}

export interface Polyline {
    points: Float32Array;      // xyz triples
    color: [number, number, number];
    viewportAnchored: boolean;
}

export const ROLE_COLORS: Record<string, [number, number, number]> = {
    shielding: [0.25, 0.45, 0.95],
    hfc: [0.95, 0.85, 0.2],
    quadrupolar: [0.65, 0.3, 0.85],
    gtensor: [0.2, 0.8, 0.5],
    zfs: [0.9, 0.45, 0.15],
};

/** Intensity in [0, 1] of a magnitude on a log ramp around `reference`.
 *  One decade below the reference fades to 0, one decade above saturates. */
export function logIntensity(magnitude: number, reference: number): number {
    if (magnitude <= 0 || reference <= 0) return 0;
    const t = 0.5 + 0.5 * Math.log10(magnitude / reference);
    return Math.min(1, Math.max(0, t));
}

/** Unit sphere triangulation (UV sphere), shared by all ellipsoids. */
export function unitSphere(segments: number): { positions: Vec3[]; indices: number[] } {
    const positions: Vec3[] = [];
    const indices: number[] = [];
    for (let i = 0; i <= segments; i++) {
        const theta = (i / segments) * Math.PI;
        for (let j = 0; j <= segments; j++) {
            const phi = (j / segments) * 2 * Math.PI;
            positions.push([
                Math.sin(theta) * Math.cos(phi),
                Math.sin(theta) * Math.sin(phi),
                Math.cos(theta),
            ]);
        }
    }
    const row = segments + 1;
    for (let i = 0; i < segments; i++) {
        for (let j = 0; j < segments; j++) {
            const a = i * row + j;
            indices.push(a, a + row, a + 1, a + 1, a + row, a + row + 1);
        }
    }
    return { positions, indices };
}

/** Tessellate one ellipsoid: unit sphere scaled by the semi-axes, rotated
 *  by the orientation quaternion, translated to the center.  A degenerate
 *  (all-zero) tensor renders as a point-scale sphere. */
export function ellipsoidMesh(e: EllipsoidDto, segments = 16,
                              anchored = false): Mesh {
    const { positions, indices } = unitSphere(segments);
    const q: Quat = [e.orientation.w, e.orientation.x, e.orientation.y, e.orientation.z];
    const center: Vec3 = [e.center.x, e.center.y, e.center.z];
    const radii: Vec3 = e.degenerate
        ? [0.02, 0.02, 0.02]
        : [e.semi_axes[0], e.semi_axes[1], e.semi_axes[2]];
    const out = new Float32Array(positions.length * 3);
    const nrm = new Float32Array(positions.length * 3);
    positions.forEach((p, k) => {
        const scaled: Vec3 = [p[0] * radii[0], p[1] * radii[1], p[2] * radii[2]];
        const world = quatRotate(q, scaled);
        out[3 * k] = world[0] + center[0];
        out[3 * k + 1] = world[1] + center[1];
        out[3 * k + 2] = world[2] + center[2];
        // normal of an axis-aligned ellipsoid is p/radii, rotated
        const n: Vec3 = [
            radii[0] ? p[0] / radii[0] : 0,
            radii[1] ? p[1] / radii[1] : 0,
            radii[2] ? p[2] / radii[2] : 0,
        ];
        const wn = quatRotate(q, n);
        const len = Math.hypot(wn[0], wn[1], wn[2]) || 1;
        nrm[3 * k] = wn[0] / len;
        nrm[3 * k + 1] = wn[1] / len;
        nrm[3 * k + 2] = wn[2] / len;
    });
    return {
        positions: out,
        normals: nrm,
        indices: new Uint32Array(indices),
        color: ROLE_COLORS[e.color_role] ?? [0.7, 0.7, 0.7],
        viewportAnchored: anchored,
    };
}

/** Coiled line between two points: a helix around the connecting segment. */
export function coilPolyline(a: Vec3, b: Vec3, turns = 6, radius = 0.12,
                             samples = 120): Vec3[] {
    const axis: Vec3 = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    const len = Math.hypot(axis[0], axis[1], axis[2]) || 1;
    const u: Vec3 = [axis[0] / len, axis[1] / len, axis[2] / len];
    // any perpendicular pair
    const ref: Vec3 = Math.abs(u[0]) < 0.9 ? [1, 0, 0] : [0, 1, 0];
    let p: Vec3 = [
        u[1] * ref[2] - u[2] * ref[1],
        u[2] * ref[0] - u[0] * ref[2],
        u[0] * ref[1] - u[1] * ref[0],
    ];
    const pl = Math.hypot(p[0], p[1], p[2]);
    p = [p[0] / pl, p[1] / pl, p[2] / pl];
    const s: Vec3 = [
        u[1] * p[2] - u[2] * p[1],
        u[2] * p[0] - u[0] * p[2],
        u[0] * p[1] - u[1] * p[0],
    ];
    const points: Vec3[] = [];
    for (let i = 0; i <= samples; i++) {
        const t = i / samples;
        const ang = t * turns * 2 * Math.PI;
        const c = Math.cos(ang) * radius;
        const d = Math.sin(ang) * radius;
        points.push([
            a[0] + axis[0] * t + p[0] * c + s[0] * d,
            a[1] + axis[1] * t + p[1] * c + s[1] * d,
            a[2] + axis[2] * t + p[2] * c + s[2] * d,
        ]);
    }
    return points;
}

export interface ScenePrimitives {
    meshes: Mesh[];
    lines: Polyline[];
    glyphInteractionIds: number[];
}

/** Expand a scene document into draw primitives.  Visibility toggles and
 *  slider scales are applied here; `lineReference` sets the magnitude a
 *  J line or coil needs for full color intensity. */
export function buildPrimitives(
    scene: SceneDto,
    visible: Record<string, boolean>,
    scales: Record<string, number>,
    lineReference = 100.0,
): ScenePrimitives {
    const meshes: Mesh[] = [];
    const lines: Polyline[] = [];
    const glyphIds: number[] = [];
    const atomPos = new Map(scene.atoms.map(
        (a) => [a.id, [a.coordinates.x, a.coordinates.y, a.coordinates.z] as Vec3]));
    const electronPos = new Map(scene.electrons.map(
        (e) => [e.id, [e.position.x, e.position.y, e.position.z] as Vec3]));

    // ball-and-stick backdrop: small spheres + bond segments
    for (const atom of scene.atoms) {
        meshes.push(ellipsoidMesh({
            interaction_id: -atom.id,
            center: atom.coordinates,
            semi_axes: [0.18, 0.18, 0.18],
            orientation: { w: 1, x: 0, y: 0, z: 0 },
            eigen_signs: [true, true, true],
            color_role: "atom",
            degenerate: false,
        }, 10));
    }
    for (const bond of scene.bonds) {
        const a = atomPos.get(bond.a);
        const b = atomPos.get(bond.b);
        if (a && b) {
            lines.push({
                points: new Float32Array([...a, ...b]),
                color: [0.6, 0.6, 0.6],
                viewportAnchored: false,
            });
        }
    }
    for (const e of scene.electrons) {
        meshes.push(ellipsoidMesh({
            interaction_id: -e.id,
            center: e.position,
            semi_axes: [0.3, 0.3, 0.3],
            orientation: { w: 1, x: 0, y: 0, z: 0 },
            eigen_signs: [true, true, true],
            color_role: "electron",
            degenerate: false,
        }, 10, true));
    }

    for (const ell of scene.ellipsoids) {
        if (visible[ell.color_role] === false) continue;
        const scale = scales[ell.color_role] ?? 1.0;
        const scaled = {
            ...ell,
            semi_axes: ell.semi_axes.map((v) => v * scale),
        };
        const anchored = ell.color_role === "gtensor" || ell.color_role === "zfs";
        meshes.push(ellipsoidMesh(scaled, 16, anchored));
        glyphIds.push(ell.interaction_id);
    }
    if (visible["jcoupling"] !== false) {
        for (const line of scene.lines) {
            const a = atomPos.get(line.spin_1);
            const b = atomPos.get(line.spin_2);
            if (!a || !b) continue;
            const t = logIntensity(line.magnitude, lineReference);
            lines.push({
                points: new Float32Array([...a, ...b]),
                color: [0.1 + 0.9 * t, 0.15, 0.15],
                viewportAnchored: false,
            });
            glyphIds.push(line.interaction_id);
        }
    }
    if (visible["exchange"] !== false) {
        for (const coil of scene.coils) {
            const a = electronPos.get(coil.spin_1);
            const b = electronPos.get(coil.spin_2);
            if (!a || !b) continue;
            const t = logIntensity(coil.magnitude, lineReference);
            const pts = coilPolyline(a, b);
            lines.push({
                points: new Float32Array(pts.flat()),
                color: [0.15, 0.1 + 0.9 * t, 0.15],
                viewportAnchored: true,
            });
            glyphIds.push(coil.interaction_id);
        }
    }
    return { meshes, lines, glyphInteractionIds: glyphIds };
}
