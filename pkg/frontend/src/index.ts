export * from "./bundle.js";
export * from "./svg.js";
export * from "./figures.js";
export { makeFigures, parseArgs, main, UsageError } from "./cli.js";
export type { CliOptions } from "./cli.js";
