/** View-model of the interaction edit dialog.
 *
 *  Nine panels mirror one tensor: (1) matrix, (2) eigenvalues,
 *  (3) eigenvectors, (4) Euler angles, (5) axiality/rhombicity/span/skew,
 *  (6) irreducible spherical components, (7) angle-axis, (8) quaternion,
 *  (9) rank-2 Wigner matrix.  Five of them accept edits (matrix,
 *  eigenvalues, spherical components, Euler angles, and the angle-axis
 *  angle); the rest are greyed out and only ever update in response to a
 *  convention-preserving edit.  Every displayed number is copied verbatim
 *  from the last core response; the dialog performs no tensor arithmetic.
 */

import { CoreClient } from "./api.js";
import { BundleDto, Cplx, EditValue, EditableField } from "./types.js";

export const PANELS = [
    "matrix", "eigenvalues", "eigenvectors", "euler", "conventions",
    "spherical", "angle_axis", "quaternion", "wigner",
] as const;

export type PanelName = (typeof PANELS)[number];

export const EDITABLE_PANELS: ReadonlySet<PanelName> = new Set([
    "matrix", "eigenvalues", "spherical", "euler", "angle_axis",
] as PanelName[]);

/** Flat render model of one panel: label -> display string. */
export type PanelView = Record<string, string>;

const UNDEFINED = "undefined";

function num(v: number): string {
    return String(v);
}

function cplx(z: Cplx): string {
    return `${z[0]}${z[1] < 0 ? "" : "+"}${z[1]}i`;
}

export class EditDialogModel {
    private bundle: BundleDto | null = null;
    private lastEdit: { field: EditableField; previous: EditValue } | null = null;

    constructor(
        private readonly client: CoreClient,
        readonly interactionId: number,
    ) {}

    /** Fetch the current bundle from the core and render from it. */
    async open(): Promise<Record<PanelName, PanelView>> {
        this.bundle = await this.client.getBundle(this.interactionId);
        return this.render();
    }

    get current(): BundleDto {
        if (!this.bundle) throw new Error("dialog is not open");
        return this.bundle;
    }

    isEditable(panel: PanelName): boolean {
        return EDITABLE_PANELS.has(panel);
    }

    /** Build all nine panel views purely from the last core response. */
    render(): Record<PanelName, PanelView> {
        const b = this.current;
        const views = {} as Record<PanelName, PanelView>;
        views.matrix = this.gridView(b.matrix);
        views.eigenvalues = {
            xx: num(b.eigenvalues[0]),
            yy: num(b.eigenvalues[1]),
            zz: num(b.eigenvalues[2]),
        };
        views.eigenvectors = this.gridView(b.eigenvectors, "v");
        views.euler = {
            alpha: num(b.euler.alpha),
            beta: num(b.euler.beta),
            gamma: num(b.euler.gamma),
        };
        views.conventions = {
            iso: num(b.ax_rh.iso),
            axiality: num(b.ax_rh.ax),
            rhombicity: num(b.ax_rh.rh),
            span: b.span_skew ? num(b.span_skew.span) : UNDEFINED,
            skew: b.span_skew ? num(b.span_skew.skew) : UNDEFINED,
            anisotropy: b.haeberlen ? num(b.haeberlen.aniso) : UNDEFINED,
            asymmetry: b.haeberlen ? num(b.haeberlen.asym) : UNDEFINED,
        };
        const sph: PanelView = { "0,0": cplx(b.spherical.rank0) };
        b.spherical.rank1.forEach((z, i) => { sph[`1,${i - 1}`] = cplx(z); });
        b.spherical.rank2.forEach((z, i) => { sph[`2,${i - 2}`] = cplx(z); });
        views.spherical = sph;
        views.angle_axis = {
            angle: num(b.angle_axis.angle),
            x: num(b.angle_axis.axis.x),
            y: num(b.angle_axis.axis.y),
            z: num(b.angle_axis.axis.z),
        };
        views.quaternion = {
            w: num(b.quaternion.w),
            x: num(b.quaternion.x),
            y: num(b.quaternion.y),
            z: num(b.quaternion.z),
        };
        const wig: PanelView = {};
        b.wigner.forEach((row, i) =>
            row.forEach((z, j) => { wig[`${i - 2},${j - 2}`] = cplx(z); }));
        views.wigner = wig;
        return views;
    }

    /** Apply one edit through the core and re-render every panel from the
     *  response.  Read-only panels reject input. */
    async apply(field: EditableField, value: EditValue):
            Promise<Record<PanelName, PanelView>> {
        const panel: PanelName = field === "angle_axis_angle" ? "angle_axis" : field;
        if (!this.isEditable(panel)) {
            throw new Error(`panel ${panel} is read-only`);
        }
        const previous = this.valueOf(field);
        const bundle = await this.client.edit(this.interactionId, field, value);
        this.bundle = bundle;
        this.lastEdit = { field, previous };
        return this.render();
    }

    /** Single-level revert: re-applies the value the last edited field had
     *  before the edit (itself a core round trip, no local math). */
    async revert(): Promise<Record<PanelName, PanelView>> {
        if (!this.lastEdit) throw new Error("nothing to revert");
        const { field, previous } = this.lastEdit;
        const bundle = await this.client.edit(this.interactionId, field, previous);
        this.bundle = bundle;
        this.lastEdit = null;
        return this.render();
    }

    private valueOf(field: EditableField): EditValue {
        const b = this.current;
        switch (field) {
            case "matrix": return b.matrix.map((row) => row.slice());
            case "eigenvalues": return b.eigenvalues.slice();
            case "spherical": return {
                rank0: b.spherical.rank0.slice() as Cplx,
                rank1: b.spherical.rank1.map((z) => z.slice() as Cplx),
                rank2: b.spherical.rank2.map((z) => z.slice() as Cplx),
            };
            case "euler": return { ...b.euler };
            case "angle_axis_angle": return b.angle_axis.angle;
        }
    }

    private gridView(rows: number[][], prefix = "m"): PanelView {
        const axes = ["x", "y", "z"];
        const out: PanelView = {};
        rows.forEach((row, i) =>
            row.forEach((v, j) => { out[`${prefix}${axes[i]}${axes[j]}`] = num(v); }));
        return out;
    }
}
