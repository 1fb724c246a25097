export * from "./types.js";
export { readDiagnostics, extractColumn, availableColumns } from "./ndjson.js";
export { readQhdf, parseQhdf, densityImage } from "./qhdf.js";
export { readDecayFit } from "./decayfit.js";
export { logLogFit, defaultWindow, type WindowFit } from "./fit.js";
export { driftFigure } from "./figures/drift.js";
export { decayFigure, type DecayFigureOptions } from "./figures/decay.js";
export { vortexFigure } from "./figures/vortex.js";
export { panelFigure } from "./figures/panel.js";
export { stabilityFigure, readStabilityReport } from "./figures/stability.js";
export { run } from "./cli.js";
