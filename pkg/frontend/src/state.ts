/** View state: camera orientation, NMR/EPR mode, per-class log-scale
 *  sliders, visibility toggles and the current selection. */

import { Quat, QUAT_IDENTITY, quatMultiply, quatNormalize } from "./math.js";
import { SystemDto } from "./types.js";

export const GLYPH_CLASSES = [
    "shielding", "hfc", "quadrupolar", "gtensor", "zfs", "jcoupling", "exchange",
] as const;

export type GlyphClass = (typeof GLYPH_CLASSES)[number];

export interface SliderRange {
    min: number;
    max: number;
}

/** Sliders are logarithmic: the stored value is an exponent step. */
export const SLIDER_RANGE: SliderRange = { min: -4, max: 4 };

export class ViewState {
    camera: Quat = QUAT_IDENTITY;
    mode: "nmr" | "epr" = "nmr";
    sliders: Record<GlyphClass, number>;
    visible: Record<GlyphClass, boolean>;
    selectedSpin: number | null = null;

    constructor() {
        this.sliders = Object.fromEntries(
            GLYPH_CLASSES.map((c) => [c, 0])) as Record<GlyphClass, number>;
        this.visible = Object.fromEntries(
            GLYPH_CLASSES.map((c) => [c, true])) as Record<GlyphClass, boolean>;
    }

    /** Compose a drag increment onto the camera, keeping unit norm. */
    applyDrag(increment: Quat): void {
        this.camera = quatNormalize(quatMultiply(increment, this.camera));
    }

    setSlider(cls: GlyphClass, value: number): void {
        if (value < SLIDER_RANGE.min || value > SLIDER_RANGE.max) {
            throw new Error(`slider value ${value} outside range`);
        }
        this.sliders[cls] = value;
    }

    /** Linear scale factor of a logarithmic slider position. */
    scaleOf(cls: GlyphClass): number {
        return Math.pow(10, this.sliders[cls]);
    }
}

/** Cross-highlight state for one selected spin: its atom-table row plus
 *  every interaction row that references the spin. */
export interface HighlightState {
    atomRow: number | null;
    interactionRows: number[];
}

export function selectAtom(doc: SystemDto, spinId: number | null): HighlightState {
    if (spinId === null) {
        return { atomRow: null, interactionRows: [] };
    }
    if (!doc.spins.some((s) => s.number === spinId)) {
        throw new Error(`no spin ${spinId} in the document`);
    }
    return {
        atomRow: spinId,
        interactionRows: doc.interactions
            .filter((t) => t.spin_1 === spinId || t.spin_2 === spinId)
            .map((t) => t.id),
    };
}
