/** Client for the core document server.  Every tensor number shown in
 *  the UI comes back through this interface; the view layer never
 *  computes tensor values itself. */

import {
    BundleDto,
    EditValue,
    EditableField,
    ExportResultDto,
    SceneDto,
    SystemDto,
} from "./types.js";

export interface CoreClient {
    getSystem(): Promise<SystemDto>;
    putSystemXml(xml: string): Promise<{ ok: boolean; warnings: string[] }>;
    getScene(mode: "nmr" | "epr", bondThreshold?: number): Promise<SceneDto>;
    getBundle(interactionId: number): Promise<BundleDto>;
    edit(interactionId: number, edited: EditableField, value: EditValue): Promise<BundleDto>;
    exportText(target: string, regime?: string): Promise<ExportResultDto>;
}

export class HttpCoreClient implements CoreClient {
    constructor(private readonly base: string) {}

    private async json<T>(path: string, init?: RequestInit): Promise<T> {
        const resp = await fetch(this.base + path, init);
        const body = await resp.json();
        if (!resp.ok) {
            throw new Error(body.error ?? body.errors?.join("; ") ?? `HTTP ${resp.status}`);
        }
        return body as T;
    }

    getSystem(): Promise<SystemDto> {
        return this.json("/system");
    }

    putSystemXml(xml: string): Promise<{ ok: boolean; warnings: string[] }> {
        return this.json("/system", {
            method: "PUT",
            headers: { "Content-Type": "application/xml" },
            body: xml,
        });
    }

    getScene(mode: "nmr" | "epr", bondThreshold = 1.8): Promise<SceneDto> {
        return this.json(`/scene?mode=${mode}&bond_threshold=${bondThreshold}`);
    }

    getBundle(interactionId: number): Promise<BundleDto> {
        return this.json(`/interactions/${interactionId}/bundle`);
    }

    edit(interactionId: number, edited: EditableField, value: EditValue): Promise<BundleDto> {
        return this.json(`/interactions/${interactionId}/edit`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({ edited, value }),
        });
    }

    exportText(target: string, regime = "liquid"): Promise<ExportResultDto> {
        return this.json(`/export?target=${target}&regime=${regime}`);
    }
}
