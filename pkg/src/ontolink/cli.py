"""Command-line surface tying the pipeline together.

Exit codes: 0 success, 1 usage error, 2 data error. Diagnostics go to
stderr; results to stdout or --out. The seed defaults to 42 (overridable
via --seed or the ONTOLINK_SEED environment variable) and is always printed
so runs are reproducible.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys

from . import evalbench, explain, projection, recommend, triples
from .embed import (
    SnoreScorer,
    SpectralScorer,
    TransEScorer,
    export_text,
    load_sparse_embedding,
    save_sparse_embedding,
    snore_fit,
)
from .graphcore import AdamicAdarScorer, JaccardScorer, PreferentialScorer

SCORER_FACTORIES = {
    "snore": SnoreScorer,
    "adamic": AdamicAdarScorer,
    "jaccard": JaccardScorer,
    "pref": PreferentialScorer,
    "spectral": SpectralScorer,
    "transe": TransEScorer,
}


class DataError(Exception):
    pass


def _default_seed() -> int:
    env = os.environ.get("ONTOLINK_SEED")
    return int(env) if env else 42


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    """--config file mirrors flags as key=value lines."""
    if not getattr(args, "config", None):
        return
    with open(args.config, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                parser.error(f"malformed config line: {line!r}")
            key, value = line.split("=", 1)
            key = key.strip().replace("-", "_")
            if not hasattr(args, key):
                parser.error(f"unknown config key: {key}")
            current = getattr(args, key)
            if isinstance(current, bool):
                value = value.strip().lower() in ("1", "true", "yes")
            elif isinstance(current, int):
                value = int(value)
            setattr(args, key, value.strip() if isinstance(value, str) else value)


@contextlib.contextmanager
def _out_stream(args):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as f:
            yield f
    else:
        yield sys.stdout


def _load_store(path: str) -> triples.TripleStore:
    try:
        with open(path, "rb") as f:
            return triples.parse_document(f.read())
    except FileNotFoundError as exc:
        raise DataError(str(exc)) from exc
    except triples.ParseError as exc:
        raise DataError(f"{path}: {exc}") from exc


def _make_scorers(names: str, seed: int, threads: int):
    scorers = []
    for name in names.split(","):
        name = name.strip()
        factory = SCORER_FACTORIES.get(name)
        if factory is None:
            raise DataError(
                f"unknown scorer {name!r}; choose from {', '.join(sorted(SCORER_FACTORIES))}"
            )
        if name == "snore":
            scorers.append(factory(seed=seed, threads=threads))
        elif name in ("spectral", "transe"):
            scorers.append(factory(seed=seed))
        else:
            scorers.append(factory())
    return scorers


def cmd_stats(args) -> int:
    store = _load_store(args.input)
    report = triples.stats(store)
    with _out_stream(args) as out:
        print(report.to_json(), file=out)
    return 0


def cmd_convert(args) -> int:
    store = _load_store(args.input)
    h = projection.project(store, mode=args.mode)
    projection.write_hetero_tsv(h, args.out)
    if args.simple:
        g, nodes = projection.collapse(h)
        base = args.out.rsplit(".", 1)[0]
        projection.write_simple_tsv(g, nodes, base + ".simple.tsv", base + ".nodes.tsv")
    t = h.tallies
    print(
        f"edges={len(h.edges)} nodes={h.n_nodes} passthrough={t.passthrough} "
        f"consumed={t.consumed} dropped={t.dropped} "
        f"malformed_restrictions={t.malformed_restrictions}",
        file=sys.stderr,
    )
    return 0


def cmd_embed(args) -> int:
    g, nodes, _ = projection.load_graph_tsv(args.graph)
    emb = snore_fit(g, seed=args.seed, threads=args.threads)
    emb.feature_names = list(nodes.names)
    save_sparse_embedding(emb, args.out)
    if args.text:
        export_text(emb, args.text)
    print(f"embedded {emb.n} nodes, nnz={emb.nnz}", file=sys.stderr)
    return 0


def cmd_benchmark(args) -> int:
    g, _, h = projection.load_graph_tsv(args.graph)
    scorers = _make_scorers(args.scorers, args.seed, args.threads)
    report = evalbench.run_benchmark(g, h, scorers, seed=args.seed)
    with _out_stream(args) as out:
        if args.format == "tsv":
            print(report.to_table(), file=out)
        else:
            print(report.to_json(), file=out)
    if args.out:
        print(report.to_table(), file=sys.stderr)
    return 0


def cmd_recommend(args) -> int:
    g, nodes, _ = projection.load_graph_tsv(args.graph)
    emb = load_sparse_embedding(args.embedding)
    subset = None
    if args.nodes:
        with open(args.nodes, encoding="utf-8") as f:
            wanted = [line.strip() for line in f if line.strip()]
        subset = []
        for name in wanted:
            idx = nodes.id_of(name)
            if idx is None:
                raise DataError(f"unknown node IRI: {name}")
            subset.append(idx)
    missing, redundant = recommend.candidates(emb, g, args.k, subset=subset)
    with _out_stream(args) as out:
        for cand in missing + redundant:
            print(
                f"{cand.kind}\t{nodes[cand.u]}\t{nodes[cand.v]}\t{cand.score!r}",
                file=out,
            )
    return 0


def cmd_temporal(args) -> int:
    results = []
    ks = [int(k) for k in args.ks.split(",")]
    store_t = _load_store(args.t)
    store_t1 = _load_store(args.t1)
    g_t, map_t = projection.collapse(projection.project(store_t, mode=args.mode))
    g_t1, map_t1 = projection.collapse(projection.project(store_t1, mode=args.mode))
    try:
        results = recommend.temporal_eval(
            (g_t, map_t), (g_t1, map_t1), ks, seed=args.seed, year_pair=(args.t, args.t1)
        )
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    with _out_stream(args) as out:
        print(json.dumps([r.to_dict() for r in results], indent=2), file=out)
    return 0


def cmd_explain(args) -> int:
    g, nodes, _ = projection.load_graph_tsv(args.graph)
    emb = load_sparse_embedding(args.embedding)
    if emb.feature_names is None:
        emb.feature_names = list(nodes.names)
    with _out_stream(args) as out:
        if args.global_:
            result = explain.explain_global(emb, g, seed=args.seed, ridge=args.ridge)
            print(json.dumps(result.top(args.top), indent=2), file=out)
        else:
            if not args.edge:
                raise DataError("either --edge u_iri,v_iri or --global is required")
            u_iri, v_iri = args.edge.split(",", 1)
            u, v = nodes.id_of(u_iri), nodes.id_of(v_iri)
            if u is None or v is None:
                raise DataError(f"unknown node IRI: {u_iri if u is None else v_iri}")
            local = explain.explain_local(emb, u, v)
            print(json.dumps(local.to_dict(names=emb.feature_names), indent=2), file=out)
    return 0


def cmd_serve(args) -> int:
    from . import server

    session = server.Session.load(
        graph_path=args.graph,
        embedding_path=args.embedding,
        journal_path=args.journal,
        seed=args.seed,
    )
    app = server.create_app(session, static_dir=args.static)
    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ontolink", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--config", help="key=value file mirroring flags")
        p.add_argument("--threads", type=int, default=1)
        if seed:
            p.add_argument("--seed", type=int, default=_default_seed())

    p = sub.add_parser("stats", help="triple-store statistics as JSON")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("convert", help="project an .nt file to a graph TSV")
    p.add_argument("--mode", choices=["rules", "raw"], default="rules")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--simple", action="store_true", help="also emit the undirected collapse")
    common(p)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("embed", help="fit the sparse embedding and save it")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--text", help="optional node<TAB>feature<TAB>value export")
    common(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("benchmark", help="5-fold link-prediction benchmark")
    p.add_argument("--graph", required=True)
    p.add_argument("--scorers", default="snore,adamic,jaccard,pref,spectral,transe")
    p.add_argument("--out")
    p.add_argument("--format", choices=["json", "tsv"], default="json")
    common(p)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("recommend", help="missing/redundant edge candidates")
    p.add_argument("--graph", required=True)
    p.add_argument("--embedding", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--nodes", help="file of IRIs restricting the candidate rows")
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("temporal", help="benchmark candidates across versions")
    p.add_argument("--t", required=True)
    p.add_argument("--t1", required=True)
    p.add_argument("--ks", default="10,100,500")
    p.add_argument("--mode", choices=["rules", "raw"], default="rules")
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_temporal)

    p = sub.add_parser("explain", help="local or global explanations")
    p.add_argument("--graph", required=True)
    p.add_argument("--embedding", required=True)
    p.add_argument("--edge", help="u_iri,v_iri for a local explanation")
    p.add_argument("--global", dest="global_", action="store_true")
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--ridge", type=float, default=1e-6)
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("serve", help="annotation-assistant HTTP service")
    p.add_argument("--graph", required=True)
    p.add_argument("--embedding", required=True)
    p.add_argument("--journal", default="journal.ndjson")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--static", help="directory with the built web UI bundle")
    common(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        _apply_config(args, parser)
    except SystemExit:
        return 1
    if hasattr(args, "seed"):
        print(f"seed={args.seed}", file=sys.stderr)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
