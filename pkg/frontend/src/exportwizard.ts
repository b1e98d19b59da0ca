/** Export wizard view-model: route (regime) selection, live text preview
 *  and download.  The preview text and the downloaded bytes are the same
 *  string returned by a single core call. */

import { CoreClient } from "./api.js";

export const TARGETS = ["simpson", "easyspin", "spinach"] as const;
export const REGIMES = ["liquid", "slow-motion", "solid"] as const;

export type Target = (typeof TARGETS)[number];
export type Regime = (typeof REGIMES)[number];

export class ExportWizardModel {
    target: Target = "easyspin";
    regime: Regime = "liquid";
    preview = "";
    error: string | null = null;

    constructor(private readonly client: CoreClient) {}

    async refresh(): Promise<string> {
        try {
            const result = await this.client.exportText(this.target, this.regime);
            this.preview = result.text;
            this.error = null;
        } catch (e) {
            this.preview = "";
            this.error = e instanceof Error ? e.message : String(e);
        }
        return this.preview;
    }

    async setTarget(target: Target): Promise<string> {
        this.target = target;
        return this.refresh();
    }

    async setRegime(regime: Regime): Promise<string> {
        this.regime = regime;
        return this.refresh();
    }

    /** Bytes of the file download; identical to the preview text. */
    downloadBytes(): Uint8Array {
        return new TextEncoder().encode(this.preview);
    }

    downloadName(): string {
        const ext = this.target === "simpson" ? "tcl" : "m";
        return `spinsys-${this.target}.${ext}`;
    }
}
