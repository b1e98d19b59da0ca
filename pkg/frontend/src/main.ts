/** DOM wiring: tables, 3D view, edit dialog and export wizard. */

import { HttpCoreClient } from "./api.js";
import { arcballDrag } from "./arcball.js";
import { EDITABLE_PANELS, EditDialogModel, PANELS, PanelName, PanelView } from "./dialog.js";
import { ExportWizardModel, REGIMES, Regime, TARGETS, Target } from "./exportwizard.js";
import { SceneRenderer } from "./renderer.js";
import { buildPrimitives } from "./scene.js";
import { GLYPH_CLASSES, SLIDER_RANGE, ViewState, selectAtom } from "./state.js";
import { EditableField, SystemDto } from "./types.js";

const params = new URLSearchParams(window.location.search);
const client = new HttpCoreClient(params.get("core") ?? "http://127.0.0.1:8077");
const state = new ViewState();

const canvas = document.getElementById("view") as HTMLCanvasElement;
const renderer = new SceneRenderer(canvas);
let doc: SystemDto = { spins: [], interactions: [] };

function el<T extends HTMLElement>(id: string): T {
    return document.getElementById(id) as T;
}

async function refreshScene(): Promise<void> {
    const scene = await client.getScene(state.mode);
    const scales = Object.fromEntries(
        GLYPH_CLASSES.map((c) => [c, state.scaleOf(c)]));
    renderer.setPrimitives(buildPrimitives(scene, state.visible, scales));
    renderer.draw(state.camera);
}

function renderTables(): void {
    const highlight = selectAtom(doc,
        doc.spins.some((s) => s.number === state.selectedSpin)
            ? state.selectedSpin : null);
    const atoms = el<HTMLTableSectionElement>("atom-rows");
    atoms.innerHTML = "";
    for (const spin of doc.spins) {
        const tr = document.createElement("tr");
        if (highlight.atomRow === spin.number) tr.className = "selected-atom";
        const c = spin.coordinates;
        tr.innerHTML =
            `<td>${spin.number}</td><td>${spin.isotope}</td>` +
            `<td>${spin.label ?? ""}</td>` +
            `<td>${c ? [c.x, c.y, c.z].map((v) => v.toFixed(3)).join(", ") : "-"}</td>`;
        tr.addEventListener("click", () => {
            state.selectedSpin = state.selectedSpin === spin.number ? null : spin.number;
            renderTables();
        });
        atoms.appendChild(tr);
    }
    const terms = el<HTMLTableSectionElement>("interaction-rows");
    terms.innerHTML = "";
    for (const term of doc.interactions) {
        const tr = document.createElement("tr");
        if (highlight.interactionRows.includes(term.id)) {
            tr.className = "selected-interaction";
        }
        tr.innerHTML =
            `<td>${term.id}</td><td>${term.kind}</td><td>${term.units}</td>` +
            `<td>${term.spin_1}${term.spin_2 !== null ? ", " + term.spin_2 : ""}</td>` +
            `<td>${term.label ?? ""}</td>`;
        const td = document.createElement("td");
        const button = document.createElement("button");
        button.textContent = "Edit";
        button.addEventListener("click", (ev) => {
            ev.stopPropagation();
            void openDialog(term.id);
        });
        td.appendChild(button);
        tr.appendChild(td);
        terms.appendChild(tr);
    }
}

async function reloadDocument(): Promise<void> {
    doc = await client.getSystem();
    renderTables();
    await refreshScene();
}

/* ---------------- edit dialog ---------------- */

let dialog: EditDialogModel | null = null;

function panelInputValue(panel: PanelName, view: PanelView): EditableField | null {
    void view;
    switch (panel) {
        case "matrix": return "matrix";
        case "eigenvalues": return "eigenvalues";
        case "spherical": return "spherical";
        case "euler": return "euler";
        case "angle_axis": return "angle_axis_angle";
        default: return null;
    }
}

function renderDialog(views: Record<PanelName, PanelView>): void {
    const host = el<HTMLDivElement>("dialog-panels");
    host.innerHTML = "";
    for (const panel of PANELS) {
        const box = document.createElement("fieldset");
        box.className = EDITABLE_PANELS.has(panel) ? "panel editable" : "panel readonly";
        const legend = document.createElement("legend");
        legend.textContent = panel.replace("_", " ");
        box.appendChild(legend);
        const grid = document.createElement("div");
        grid.className = "grid";
        for (const [label, value] of Object.entries(views[panel])) {
            const cell = document.createElement("label");
            cell.textContent = label + " ";
            const input = document.createElement("input");
            input.value = value;
            input.dataset.panel = panel;
            input.dataset.field = label;
            input.readOnly = !EDITABLE_PANELS.has(panel)
                || (panel === "angle_axis" && label !== "angle");
            cell.appendChild(input);
            grid.appendChild(cell);
        }
        box.appendChild(grid);
        if (EDITABLE_PANELS.has(panel)) {
            const apply = document.createElement("button");
            apply.textContent = "apply";
            apply.addEventListener("click", () => void applyPanel(panel));
            box.appendChild(apply);
        }
        host.appendChild(box);
    }
    el<HTMLDivElement>("dialog").style.display = "block";
}

function collectPanel(panel: PanelName): Record<string, number> {
    const out: Record<string, number> = {};
    document.querySelectorAll<HTMLInputElement>(
        `#dialog-panels input[data-panel="${panel}"]`).forEach((input) => {
        out[input.dataset.field!] = parseFloat(input.value);
    });
    return out;
}

async function applyPanel(panel: PanelName): Promise<void> {
    if (!dialog) return;
    const field = panelInputValue(panel, {});
    if (!field) return;
    const raw = collectPanel(panel);
    let value;
    if (field === "matrix") {
        const ax = ["x", "y", "z"];
        value = ax.map((r) => ax.map((c) => raw[`m${r}${c}`]));
    } else if (field === "eigenvalues") {
        value = [raw.xx, raw.yy, raw.zz];
    } else if (field === "euler") {
        value = { alpha: raw.alpha, beta: raw.beta, gamma: raw.gamma };
    } else if (field === "angle_axis_angle") {
        value = raw.angle;
    } else {
        // spherical: parse "a+bi" strings back to [re, im] pairs
        const sph = dialog.current.spherical;
        const parse = (label: string, fallback: [number, number]) => {
            const input = document.querySelector<HTMLInputElement>(
                `#dialog-panels input[data-panel="spherical"][data-field="${label}"]`);
            if (!input) return fallback;
            const m = input.value.match(/^(-?[\d.eE+-]+?)([+-][\d.eE]+(?:[eE][+-]?\d+)?)i$/);
            return m ? [parseFloat(m[1]), parseFloat(m[2])] as [number, number] : fallback;
        };
        value = {
            rank0: parse("0,0", sph.rank0),
            rank1: sph.rank1.map((z, i) => parse(`1,${i - 1}`, z)),
            rank2: sph.rank2.map((z, i) => parse(`2,${i - 2}`, z)),
        };
    }
    try {
        renderDialog(await dialog.apply(field, value as never));
        el<HTMLDivElement>("dialog-error").textContent = "";
        await reloadDocument();
    } catch (e) {
        el<HTMLDivElement>("dialog-error").textContent =
            e instanceof Error ? e.message : String(e);
    }
}

async function openDialog(interactionId: number): Promise<void> {
    dialog = new EditDialogModel(client, interactionId);
    renderDialog(await dialog.open());
    el<HTMLSpanElement>("dialog-title").textContent =
        `interaction ${interactionId}`;
}

/* ---------------- export wizard ---------------- */

const wizard = new ExportWizardModel(client);

async function refreshWizard(): Promise<void> {
    await wizard.refresh();
    el<HTMLTextAreaElement>("export-preview").value =
        wizard.error ? `error: ${wizard.error}` : wizard.preview;
}

/* ---------------- wiring ---------------- */

function setupControls(): void {
    el<HTMLButtonElement>("mode-nmr").addEventListener("click", () => {
        state.mode = "nmr";
        void refreshScene();
    });
    el<HTMLButtonElement>("mode-epr").addEventListener("click", () => {
        state.mode = "epr";
        void refreshScene();
    });
    const sliderHost = el<HTMLDivElement>("sliders");
    for (const cls of GLYPH_CLASSES) {
        const label = document.createElement("label");
        label.textContent = cls;
        const slider = document.createElement("input");
        slider.type = "range";
        slider.min = String(SLIDER_RANGE.min);
        slider.max = String(SLIDER_RANGE.max);
        slider.step = "0.1";
        slider.value = "0";
        slider.addEventListener("input", () => {
            state.setSlider(cls, parseFloat(slider.value));
            void refreshScene();
        });
        const toggle = document.createElement("input");
        toggle.type = "checkbox";
        toggle.checked = true;
        toggle.addEventListener("change", () => {
            state.visible[cls] = toggle.checked;
            void refreshScene();
        });
        label.prepend(toggle);
        label.appendChild(slider);
        sliderHost.appendChild(label);
    }

    let dragging: [number, number] | null = null;
    canvas.addEventListener("pointerdown", (ev) => {
        dragging = [ev.offsetX, ev.offsetY];
        canvas.setPointerCapture(ev.pointerId);
    });
    canvas.addEventListener("pointermove", (ev) => {
        if (!dragging) return;
        const here: [number, number] = [ev.offsetX, ev.offsetY];
        state.applyDrag(arcballDrag(dragging, here,
            { width: canvas.clientWidth, height: canvas.clientHeight }));
        dragging = here;
        renderer.draw(state.camera);
    });
    canvas.addEventListener("pointerup", () => { dragging = null; });

    el<HTMLButtonElement>("dialog-close").addEventListener("click", () => {
        el<HTMLDivElement>("dialog").style.display = "none";
    });
    el<HTMLButtonElement>("dialog-revert").addEventListener("click", () => {
        if (dialog) {
            dialog.revert().then((views) => {
                renderDialog(views);
                return reloadDocument();
            }).catch((e) => {
                el<HTMLDivElement>("dialog-error").textContent = String(e);
            });
        }
    });

    const targetSelect = el<HTMLSelectElement>("export-target");
    for (const t of TARGETS) {
        const option = document.createElement("option");
        option.value = option.textContent = t;
        targetSelect.appendChild(option);
    }
    targetSelect.value = wizard.target;
    targetSelect.addEventListener("change", () => {
        void wizard.setTarget(targetSelect.value as Target).then(refreshWizard);
    });
    const regimeSelect = el<HTMLSelectElement>("export-regime");
    for (const r of REGIMES) {
        const option = document.createElement("option");
        option.value = option.textContent = r;
        regimeSelect.appendChild(option);
    }
    regimeSelect.value = wizard.regime;
    regimeSelect.addEventListener("change", () => {
        void wizard.setRegime(regimeSelect.value as Regime).then(refreshWizard);
    });
    el<HTMLButtonElement>("export-download").addEventListener("click", () => {
        // same bytes as wizard.downloadBytes(): the Blob encodes the string as UTF-8
        const blob = new Blob([wizard.preview], { type: "text/plain" });
        const link = document.createElement("a");
        link.href = URL.createObjectURL(blob);
        link.download = wizard.downloadName();
        link.click();
        URL.revokeObjectURL(link.href);
    });

    el<HTMLInputElement>("upload").addEventListener("change", async (ev) => {
        const file = (ev.target as HTMLInputElement).files?.[0];
        if (!file) return;
        // uploads pass through the core; the browser never parses documents
        const result = await client.putSystemXml(await file.text());
        el<HTMLDivElement>("status").textContent = result.warnings.length
            ? `loaded with warnings: ${result.warnings.join("; ")}` : "loaded";
        await reloadDocument();
    });
}

setupControls();
void reloadDocument().then(refreshWizard).catch((e) => {
    el<HTMLDivElement>("status").textContent =
        `cannot reach the core server: ${e instanceof Error ? e.message : e}`;
});
