#!/usr/bin/env node
import { readFileSync, writeFileSync } from "fs";
import { Resvg } from "@resvg/resvg-js";
import yargs from "yargs";
import type { Argv } from "yargs";
import { hideBin } from "yargs/helpers";

import { groupRows, readSweepCsv, SchemaError, type SweepRow } from "./csv.js";
import { extractFigureData, renderFigure, type PlotKind } from "./figure.js";

interface PlotArgs {
  csv: string[];
  out: string;
  png: boolean;
}

function plot(kind: PlotKind, args: PlotArgs): void {
  const rows: SweepRow[] = [];
  for (const path of args.csv) {
    rows.push(...readSweepCsv(path));
  }
  const figure = renderFigure(kind, groupRows(rows), (msg) => console.error(`warning: ${msg}`));
  writeFileSync(args.out, figure.svg);
  console.log(`wrote ${args.out} (${figure.data.series.length} series)`);
  if (args.png) {
    const pngPath = args.out.replace(/\.svg$/i, "") + ".png";
    const png = new Resvg(figure.svg, { fitTo: { mode: "width", value: 1260 } }).render().asPng();
    writeFileSync(pngPath, png);
    console.log(`wrote ${pngPath}`);
  }
}

function addPlotFlags(y: Argv): Argv<PlotArgs> {
  return y
    .option("csv", {
      type: "string",
      array: true,
      demandOption: true,
      describe: "sweep CSV file(s) from the simulator",
    })
    .option("out", {
      type: "string",
      demandOption: true,
      describe: "output SVG path",
    })
    .option("png", {
      type: "boolean",
      default: true,
      describe: "also write a raster preview next to the SVG",
    }) as Argv<PlotArgs>;
}

export function main(argv: string[]): number {
  let failed = false;
  yargs(argv)
    .scriptName("plot-tool")
    .usage("$0 <command> --csv <files...> --out <file>")
    .command(
      "fer",
      "FER vs Eb/N0, log y, one series per (code, decoder, delta, l_max)",
      (y) => addPlotFlags(y),
      (args) => plot("fer", args as unknown as PlotArgs),
    )
    .command(
      "search",
      "average searches per frame vs Eb/N0, log y, same grouping",
      (y) => addPlotFlags(y),
      (args) => plot("search", args as unknown as PlotArgs),
    )
    .command(
      "dump",
      "print the series JSON embedded in a plot-tool SVG",
      (y) => y.option("svg", { type: "string", demandOption: true, describe: "SVG written by plot-tool" }),
      (args) => {
        const data = extractFigureData(readFileSync(args.svg as string, "utf8"));
        process.stdout.write(JSON.stringify(data, null, 2) + "\n");
      },
    )
    .demandCommand(1, "pick a command: fer, search, or dump")
    .strict()
    .fail((msg, err) => {
      // yargs usage problems carry msg; handler throws carry err
      if (err && !(err instanceof SchemaError) && !(err instanceof Error)) throw err;
      console.error(`error: ${msg ?? (err as Error).message}`);
      failed = true;
    })
    .parseSync();
  return failed ? 1 : 0;
}

process.exit(main(hideBin(process.argv)));
