/** Minimal WebGL2 renderer for the scene primitives.
 *
 *  The model rotates under the view-state quaternion.  Primitives flagged
 *  viewport-anchored rotate about their own centroid, so electron glyphs
 *  re-orient with the molecule without moving around the window.
 */

import { Quat, quatToMatrix } from "./math.js";
import { Mesh, Polyline, ScenePrimitives } from "./scene.js";

const MESH_VS = `#version 300 es
in vec3 aPos;
in vec3 aNormal;
uniform mat3 uRot;
uniform vec3 uAnchor;
uniform float uAnchored;
uniform float uScale;
uniform vec3 uCenter;
out vec3 vNormal;
void main() {
    vec3 p = mix(uRot * (aPos - uCenter), uAnchor + uRot * (aPos - uAnchor) - uCenter, uAnchored);
    vNormal = uRot * aNormal;
    vec3 q = p * uScale;
    gl_Position = vec4(q.xy, -q.z * 0.05, 1.0);
}`;

const MESH_FS = `#version 300 es
precision highp float;
in vec3 vNormal;
uniform vec3 uColor;
out vec4 frag;
void main() {
    vec3 n = normalize(vNormal);
    float diffuse = max(dot(n, normalize(vec3(0.4, 0.6, 1.0))), 0.0);
    frag = vec4(uColor * (0.35 + 0.65 * diffuse), 1.0);
}`;

const LINE_VS = `#version 300 es
in vec3 aPos;
uniform mat3 uRot;
uniform float uScale;
uniform vec3 uCenter;
void main() {
    vec3 q = (uRot * (aPos - uCenter)) * uScale;
    gl_Position = vec4(q.xy, -q.z * 0.05, 1.0);
}`;

const LINE_FS = `#version 300 es
precision highp float;
uniform vec3 uColor;
out vec4 frag;
void main() { frag = vec4(uColor, 1.0); }`;

function compile(gl: WebGL2RenderingContext, type: number, src: string): WebGLShader {
    const shader = gl.createShader(type)!;
    gl.shaderSource(shader, src);
    gl.compileShader(shader);
    if (!gl.getShaderParameter(shader, gl.COMPILE_STATUS)) {
        throw new Error(gl.getShaderInfoLog(shader) ?? "shader compile failed");
    }
    return shader;
}

function link(gl: WebGL2RenderingContext, vs: string, fs: string): WebGLProgram {
    const program = gl.createProgram()!;
    gl.attachShader(program, compile(gl, gl.VERTEX_SHADER, vs));
    gl.attachShader(program, compile(gl, gl.FRAGMENT_SHADER, fs));
    gl.linkProgram(program);
    if (!gl.getProgramParameter(program, gl.LINK_STATUS)) {
        throw new Error(gl.getProgramInfoLog(program) ?? "program link failed");
    }
    return program;
}

function centroid(points: Float32Array): [number, number, number] {
    let x = 0, y = 0, z = 0;
    const n = points.length / 3;
    for (let i = 0; i < n; i++) {
        x += points[3 * i]; y += points[3 * i + 1]; z += points[3 * i + 2];
    }
    return n ? [x / n, y / n, z / n] : [0, 0, 0];
}

export class SceneRenderer {
    private gl: WebGL2RenderingContext;
    private meshProgram: WebGLProgram;
    private lineProgram: WebGLProgram;
    private primitives: ScenePrimitives | null = null;
    private center: [number, number, number] = [0, 0, 0];
    private scale = 0.35;

    constructor(canvas: HTMLCanvasElement) {
        const gl = canvas.getContext("webgl2");
        if (!gl) throw new Error("WebGL2 is not available");
        this.gl = gl;
        this.meshProgram = link(gl, MESH_VS, MESH_FS);
        this.lineProgram = link(gl, LINE_VS, LINE_FS);
        gl.enable(gl.DEPTH_TEST);
        gl.clearColor(0.07, 0.08, 0.1, 1.0);
    }

    setPrimitives(primitives: ScenePrimitives): void {
        this.primitives = primitives;
        // frame the unanchored content
        let lo = [Infinity, Infinity, Infinity];
        let hi = [-Infinity, -Infinity, -Infinity];
        const scan = (pts: Float32Array) => {
            for (let i = 0; i < pts.length; i += 3) {
                for (let k = 0; k < 3; k++) {
                    lo[k] = Math.min(lo[k], pts[i + k]);
                    hi[k] = Math.max(hi[k], pts[i + k]);
                }
            }
        };
        primitives.meshes.forEach((m) => scan(m.positions));
        primitives.lines.forEach((l) => scan(l.points));
        if (Number.isFinite(lo[0])) {
            this.center = [(lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2, (lo[2] + hi[2]) / 2];
            const extent = Math.max(hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2], 1e-6);
            this.scale = 1.6 / extent;
        }
    }

    draw(camera: Quat): void {
        const gl = this.gl;
        gl.viewport(0, 0, gl.canvas.width, gl.canvas.height);
        gl.clear(gl.COLOR_BUFFER_BIT | gl.DEPTH_BUFFER_BIT);
        if (!this.primitives) return;
        const rot = quatToMatrix(camera);
        // row-major -> column-major for GL
        const rotCol = new Float32Array([
            rot[0], rot[3], rot[6],
            rot[1], rot[4], rot[7],
            rot[2], rot[5], rot[8],
        ]);
        for (const mesh of this.primitives.meshes) {
            this.drawMesh(mesh, rotCol);
        }
        for (const line of this.primitives.lines) {
            this.drawLine(line, rotCol);
        }
    }

    private drawMesh(mesh: Mesh, rot: Float32Array): void {
        const gl = this.gl;
        gl.useProgram(this.meshProgram);
        const vao = gl.createVertexArray();
        gl.bindVertexArray(vao);
        this.attrib(this.meshProgram, "aPos", mesh.positions, 3);
        this.attrib(this.meshProgram, "aNormal", mesh.normals, 3);
        const index = gl.createBuffer();
        gl.bindBuffer(gl.ELEMENT_ARRAY_BUFFER, index);
        gl.bufferData(gl.ELEMENT_ARRAY_BUFFER, mesh.indices, gl.STATIC_DRAW);
        gl.uniformMatrix3fv(gl.getUniformLocation(this.meshProgram, "uRot"), false, rot);
        gl.uniform3fv(gl.getUniformLocation(this.meshProgram, "uColor"), mesh.color);
        gl.uniform3fv(gl.getUniformLocation(this.meshProgram, "uAnchor"),
                      centroid(mesh.positions));
        gl.uniform1f(gl.getUniformLocation(this.meshProgram, "uAnchored"),
                     mesh.viewportAnchored ? 1.0 : 0.0);
        gl.uniform1f(gl.getUniformLocation(this.meshProgram, "uScale"), this.scale);
        gl.uniform3fv(gl.getUniformLocation(this.meshProgram, "uCenter"), this.center);
        gl.drawElements(gl.TRIANGLES, mesh.indices.length, gl.UNSIGNED_INT, 0);
        gl.deleteVertexArray(vao);
        gl.deleteBuffer(index);
    }

    private drawLine(line: Polyline, rot: Float32Array): void {
        const gl = this.gl;
        gl.useProgram(this.lineProgram);
        const vao = gl.createVertexArray();
        gl.bindVertexArray(vao);
        this.attrib(this.lineProgram, "aPos", line.points, 3);
        gl.uniformMatrix3fv(gl.getUniformLocation(this.lineProgram, "uRot"), false, rot);
        gl.uniform3fv(gl.getUniformLocation(this.lineProgram, "uColor"), line.color);
        gl.uniform1f(gl.getUniformLocation(this.lineProgram, "uScale"), this.scale);
        gl.uniform3fv(gl.getUniformLocation(this.lineProgram, "uCenter"), this.center);
        gl.drawArrays(gl.LINE_STRIP, 0, line.points.length / 3);
        gl.deleteVertexArray(vao);
    }

    private attrib(program: WebGLProgram, name: string, data: Float32Array,
                   size: number): void {
        const gl = this.gl;
        const buffer = gl.createBuffer();
        gl.bindBuffer(gl.ARRAY_BUFFER, buffer);
        gl.bufferData(gl.ARRAY_BUFFER, data, gl.STATIC_DRAW);
        const loc = gl.getAttribLocation(program, name);
        gl.enableVertexAttribArray(loc);
        gl.vertexAttribPointer(loc, size, gl.FLOAT, false, 0, 0);
    }
}
