/** Small quaternion/vector helpers shared by the arcball and the renderer.
 *  Quaternions are [w, x, y, z], scalar part first, matching the core. */

export type Vec3 = [number, number, number];
export type Quat = [number, number, number, number];

export const QUAT_IDENTITY: Quat = [1, 0, 0, 0];

export function dot(a: Vec3, b: Vec3): number {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

export function cross(a: Vec3, b: Vec3): Vec3 {
    return [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
}

export function norm(a: Vec3): number {
    return Math.hypot(a[0], a[1], a[2]);
}

export function normalize(a: Vec3): Vec3 {
    const n = norm(a);
    return n === 0 ? [0, 0, 0] : [a[0] / n, a[1] / n, a[2] / n];
}

export function quatMultiply(a: Quat, b: Quat): Quat {
    const [aw, ax, ay, az] = a;
    const [bw, bx, by, bz] = b;
    return [
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ];
}

export function quatNormalize(q: Quat): Quat {
    const n = Math.hypot(q[0], q[1], q[2], q[3]);
    return n === 0 ? QUAT_IDENTITY : [q[0] / n, q[1] / n, q[2] / n, q[3] / n];
}

/** Rotation quaternion of `angle` radians about a unit axis. */
export function quatFromAxisAngle(axis: Vec3, angle: number): Quat {
    const s = Math.sin(angle / 2);
    return [Math.cos(angle / 2), axis[0] * s, axis[1] * s, axis[2] * s];
}

export function quatRotate(q: Quat, v: Vec3): Vec3 {
    const m = quatToMatrix(q);
    return [
        m[0] * v[0] + m[1] * v[1] + m[2] * v[2],
        m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
        m[6] * v[0] + m[7] * v[1] + m[8] * v[2],
    ];
}

/** Row-major 3x3 rotation matrix of a unit quaternion. */
export function quatToMatrix(q: Quat): number[] {
    const [w, x, y, z] = q;
    return [
        1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
        2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
        2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y),
    ];
}

/** Angle (radians) and axis of a unit quaternion; the zero rotation
 *  reports axis (0, 0, 1). */
export function quatToAxisAngle(q: Quat): { axis: Vec3; angle: number } {
    const [w, x, y, z] = q;
    const s = Math.hypot(x, y, z);
    if (s < 1e-12) return { axis: [0, 0, 1], angle: 0 };
    return { axis: [x / s, y / s, z / s], angle: 2 * Math.atan2(s, w) };
}
