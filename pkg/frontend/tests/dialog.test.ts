import { describe, expect, it } from "vitest";

import { EditDialogModel, PANELS, PanelView, PanelName } from "../src/dialog.js";
import { bundleNumbers, makeBundle, MockCoreClient } from "./helpers.js";

/** Every numeric component mentioned anywhere in the rendered panels.
 *  Complex entries "a+bi" contribute both parts. */
function renderedNumbers(views: Record<PanelName, PanelView>): number[] {
    const out: number[] = [];
    for (const view of Object.values(views)) {
        for (const text of Object.values(view)) {
            if (text === "undefined") continue;
            const m = text.match(/^(-?[\d.]+(?:e[+-]?\d+)?)(?:([+-][\d.]+(?:e[+-]?\d+)?)i)?$/);
            if (m) {
                out.push(parseFloat(m[1]));
                if (m[2] !== undefined) out.push(parseFloat(m[2]));
            }
        }
    }
    return out;
}

describe("edit dialog contract", () => {
    it("opens with all nine panels rendered from the core bundle", async () => {
        const client = new MockCoreClient([makeBundle(1000)]);
        const dialog = new EditDialogModel(client, 7);
        const views = await dialog.open();
        expect(Object.keys(views).sort()).toEqual([...PANELS].sort());
        for (const panel of PANELS) {
            expect(Object.keys(views[panel]).length).toBeGreaterThan(0);
        }
        expect(client.calls).toEqual([{ method: "getBundle", args: [7] }]);
    });

    it("rejects input on greyed-out panels without calling the core", async () => {
        const client = new MockCoreClient([makeBundle(1000)]);
        const dialog = new EditDialogModel(client, 1);
        await dialog.open();
        const before = client.calls.length;
        for (const panel of ["quaternion", "wigner", "eigenvectors", "conventions"]) {
            expect(dialog.isEditable(panel as PanelName)).toBe(false);
            await expect(dialog.apply(panel as never, [])).rejects.toThrow(/read-only/);
        }
        expect(client.calls.length).toBe(before);
    });

    it("re-renders all nine panels from the response bundle after an edit", async () => {
        const initial = makeBundle(1000);
        const response = makeBundle(5000);   // entirely different numbers
        const client = new MockCoreClient([initial, response]);
        const dialog = new EditDialogModel(client, 3);
        const openViews = await dialog.open();
        const views = await dialog.apply("eigenvalues", [1.5, 2.5, 3.5]);
        expect(client.calls).toContainEqual(
            { method: "edit", args: [3, "eigenvalues", [1.5, 2.5, 3.5]] });
        // every panel changed to the response values
        expect(views.matrix.mxx).toBe(String(response.matrix[0][0]));
        expect(views.eigenvalues.xx).toBe(String(response.eigenvalues[0]));
        expect(views.eigenvectors.vxy).toBe(String(response.eigenvectors[0][1]));
        expect(views.euler.alpha).toBe(String(response.euler.alpha));
        expect(views.conventions.axiality).toBe(String(response.ax_rh.ax));
        expect(views.angle_axis.angle).toBe(String(response.angle_axis.angle));
        expect(views.quaternion.w).toBe(String(response.quaternion.w));
        expect(views.wigner["-2,-2"]).toContain(String(response.wigner[0][0][0]));
        for (const panel of PANELS) {
            expect(views[panel]).not.toEqual(openViews[panel]);
        }
    });

    it("performs no client-side arithmetic on tensor values", async () => {
        // API interception: the edited value sent to the core shares no
        // numbers with the mocked response, so every rendered number must
        // come verbatim from the response bundle.
        const response = makeBundle(9000);
        const client = new MockCoreClient([makeBundle(1000), response]);
        const dialog = new EditDialogModel(client, 2);
        await dialog.open();
        const views = await dialog.apply("euler", { alpha: 45, beta: 10, gamma: 5 });
        const allowed = bundleNumbers(response);
        const shown = renderedNumbers(views);
        expect(shown.length).toBeGreaterThan(80);  // nine populated panels
        for (const value of shown) {
            expect(allowed.has(value), `rendered ${value} not in core response`)
                .toBe(true);
        }
        // in particular the user's input numbers never leak to the screen
        expect(shown).not.toContain(45);
    });

    it("marks degenerate convention views as undefined", async () => {
        const bundle = makeBundle(1000);
        bundle.haeberlen = null;
        bundle.span_skew = null;
        const dialog = new EditDialogModel(new MockCoreClient([bundle]), 1);
        const views = await dialog.open();
        expect(views.conventions.asymmetry).toBe("undefined");
        expect(views.conventions.span).toBe("undefined");
        expect(views.conventions.skew).toBe("undefined");
        // axiality/rhombicity stay defined at degeneracy
        expect(views.conventions.axiality).not.toBe("undefined");
    });

    it("reverts by re-applying the previous value through the core", async () => {
        const first = makeBundle(1000);
        const second = makeBundle(5000);
        const third = makeBundle(7000);
        const client = new MockCoreClient([first, second, third]);
        const dialog = new EditDialogModel(client, 4);
        await dialog.open();
        await dialog.apply("angle_axis_angle", 120);
        const views = await dialog.revert();
        const revertCall = client.calls[client.calls.length - 1];
        expect(revertCall.method).toBe("edit");
        expect(revertCall.args).toEqual([4, "angle_axis_angle", first.angle_axis.angle]);
        expect(views.matrix.mxx).toBe(String(third.matrix[0][0]));
    });
});
