/** Arcball pointer-to-rotation mapping.
 *
 *  The pointer is treated as moving on the surface of a ball centered on
 *  the model.  Inside the unit disc a viewport point lifts to the sphere
 *  with z = sqrt(1 - x^2 - y^2); outside the disc it is constrained to
 *  the z = 0 plane, which makes the drag rotate about the screen normal.
 *  The returned quaternion carries the first lifted point exactly onto
 *  the second one.
 */

import { Quat, QUAT_IDENTITY, Vec3, cross, dot, normalize, quatFromAxisAngle } from "./math.js";

export interface ViewportSize {
    width: number;
    height: number;
}

/** Lift a viewport point (pixels, origin top-left) onto the arcball. */
export function mapToSphere(px: number, py: number, viewport: ViewportSize): Vec3 {
    // normalized device coordinates, y up, the shorter side spans the disc
    const half = Math.min(viewport.width, viewport.height) / 2;
    const x = (px - viewport.width / 2) / half;
    const y = (viewport.height / 2 - py) / half;
    const r2 = x * x + y * y;
    if (r2 <= 1.0) {
        return [x, y, Math.sqrt(1.0 - r2)];
    }
    return normalize([x, y, 0]);
}

/** Rotation increment for a drag from p0 to p1 (viewport pixels). */
export function arcballDrag(
    p0: [number, number], p1: [number, number], viewport: ViewportSize,
): Quat {
    if (p0[0] === p1[0] && p0[1] === p1[1]) return QUAT_IDENTITY;
    const v0 = mapToSphere(p0[0], p0[1], viewport);
    const v1 = mapToSphere(p1[0], p1[1], viewport);
    const axis = cross(v0, v1);
    const axisLen = Math.hypot(axis[0], axis[1], axis[2]);
    if (axisLen < 1e-12) return QUAT_IDENTITY;
    const angle = Math.atan2(axisLen, dot(v0, v1));
    return quatFromAxisAngle(normalize(axis), angle);
}
