"""figures CLI: wordcloud | choropleth | heatmap.

Exit codes mirror the pipeline's: 0 success, 2 bad invocation or missing
input, 3 data outside its documented range.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import FigureDataError, FigureInputError, __version__
from .choropleth import render_choropleth
from .heatmap import render_heatmap
from .wordcloud import render_wordcloud


def build_parser():
    parser = argparse.ArgumentParser(prog="figures", description=__doc__)
    parser.add_argument("--version", action="version", version=f"figures {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wordcloud", help="word cloud from ngrams_top.csv")
    p.add_argument("--in", dest="in_csv", required=True)
    p.add_argument("--community", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dump-layout", help="also write word placement metadata (json)")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("choropleth", help="region map from geo_regions.csv + shapes")
    p.add_argument("--in", dest="in_csv", required=True)
    p.add_argument("--shapes", required=True)
    p.add_argument("--community", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dump-layout")
    p.add_argument("--cmap", default="Blues")

    p = sub.add_parser("heatmap", help="correlation heatmap from correlation.csv")
    p.add_argument("--in", dest="in_csv", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dump-layout")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if not Path(args.in_csv).exists():
            raise FigureInputError(f"input file does not exist: {args.in_csv}")
        if args.command == "wordcloud":
            render_wordcloud(args.in_csv, args.community, args.out,
                             dump_layout=args.dump_layout, seed=args.seed)
        elif args.command == "choropleth":
            if not Path(args.shapes).exists():
                raise FigureInputError(f"shapes file does not exist: {args.shapes}")
            render_choropleth(args.in_csv, args.shapes, args.community, args.out,
                              dump_layout=args.dump_layout, cmap_name=args.cmap)
        else:
            render_heatmap(args.in_csv, args.out, dump_layout=args.dump_layout)
    except FigureInputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except FigureDataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
