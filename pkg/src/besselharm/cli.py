"""Command-line front end for the certification recipes.

Every command is a thin client: requests go through the HTTP service
layer, executed in-process by default or against a live server when
--server is given.  Reports land as one CSV plus one JSON metadata
file per recipe; the process exits 0 only when every row passes.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import math
import os
import sys

import httpx

from .recipes import GROUPS, SUITE_ORDER, ExperimentRecipe, ReportRow, rows_to_csv

_ALIASES = {"isometry": "hankel-isometry", "interchange": "hankel-interchange"}

_CONFIG_LIST_KEYS = ("lams", "betas", "ps")


class ServiceClient:
    """Uniform GET/POST against the app, in-process or over the wire."""

    def __init__(self, server: str | None = None):
        self.server = server

    def request(self, method: str, path: str, payload: dict | None = None) -> httpx.Response:
        if self.server:
            with httpx.Client(base_url=self.server, timeout=None) as client:
                return client.request(method, path, json=payload)

        from . import service

        async def go():
            transport = httpx.ASGITransport(app=service.app)
            async with httpx.AsyncClient(
                transport=transport, base_url="http://besselharm.local", timeout=None
            ) as client:
                return await client.request(method, path, json=payload)

        return asyncio.run(go())


def load_config(path: str) -> dict:
    """Flat key=value lines; '#' starts a comment."""
    cfg = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SystemExit(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            cfg[key] = val
    return cfg


def recipe_payload(experiment_id: str, cfg: dict, seed: int | None) -> dict:
    payload: dict = {"experiment_id": experiment_id}
    grid: dict = {}
    tolerances: dict = {}
    for key, raw in cfg.items():
        try:
            if key in _CONFIG_LIST_KEYS:
                payload[key] = [float(s) for s in raw.split(",") if s.strip()]
            elif key == "space":
                payload["space"] = raw
            elif key == "seed":
                payload["seed"] = int(raw)
            elif key.startswith("grid."):
                grid[key[len("grid."):]] = float(raw)
            elif key.startswith("tol."):
                tolerances[key[len("tol."):]] = float(raw)
            else:
                raise SystemExit(f"unknown config key {key!r}")
        except ValueError:
            raise SystemExit(f"config key {key!r}: cannot parse {raw!r}")
    if grid:
        payload["grid"] = grid
    if tolerances:
        payload["tolerances"] = tolerances
    if seed is not None:
        payload["seed"] = seed
    return payload


def _rows_from_json(rows: list[dict]) -> list[ReportRow]:
    out = []
    for r in rows:
        value = math.nan if r["value"] is None else float(r["value"])
        oracle = math.nan if r["oracle"] is None else float(r["oracle"])
        residual = math.inf if r["residual"] is None else float(r["residual"])
        out.append(
            ReportRow(
                r["experiment_id"], r["params"], value, oracle, residual,
                bool(r["passed"]), float(r["runtime_s"]),
            )
        )
    return out


def _print_rows(rows: list[dict]) -> None:
    for row in rows:
        params = row["params"]
        detail = " ".join(
            f"{k}={v}" for k, v in params.items() if k not in ("check", "tol", "reason")
        )
        residual = row["residual"]
        rtxt = "non-finite" if residual is None else f"{residual:.3e}"
        status = "PASS" if row["passed"] else "FAIL"
        print(
            f"[{status}] {row['experiment_id']} :: {params['check']}"
            f"{' ' + detail if detail else ''}  residual={rtxt} tol={params['tol']:g}"
        )
        if "reason" in params:
            print(f"        reason: {params['reason']}")


def _write_report(out_dir: str, experiment_id: str, rows: list[dict], metadata: dict) -> None:
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"{experiment_id}.csv")
    json_path = os.path.join(out_dir, f"{experiment_id}.json")
    with open(csv_path, "w") as fh:
        fh.write(rows_to_csv(_rows_from_json(rows)))
    with open(json_path, "w") as fh:
        json.dump(metadata, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {csv_path} and {json_path}")


def _fail_on_http(resp: httpx.Response) -> None:
    if resp.status_code == 422:
        detail = resp.json().get("detail", resp.text)
        if isinstance(detail, list):
            detail = "; ".join(str(d) for d in detail)
        raise SystemExit(f"recipe rejected: {detail}")
    if resp.status_code != 200:
        raise SystemExit(f"service error {resp.status_code}: {resp.text}")


def _run_single(client: ServiceClient, payload: dict, out_dir: str | None) -> bool:
    resp = client.request("POST", "/recipes/run", payload)
    _fail_on_http(resp)
    body = resp.json()
    _print_rows(body["rows"])
    md = body["metadata"]
    print(f"{md['experiment_id']}: {md['passed_rows']}/{md['rows']} rows pass")
    if out_dir:
        _write_report(out_dir, md["experiment_id"], body["rows"], md)
    return bool(md["all_pass"])


def _run_suite(client: ServiceClient, seed: int | None, out_dir: str | None) -> bool:
    resp = client.request("POST", "/suite", {"seed": seed or 0})
    _fail_on_http(resp)
    body = resp.json()
    for report in body["reports"]:
        _print_rows(report["rows"])
        md = report["metadata"]
        print(f"{md['experiment_id']}: {md['passed_rows']}/{md['rows']} rows pass")
        if out_dir:
            _write_report(out_dir, md["experiment_id"], report["rows"], md)
    verdict = "suite PASS" if body["all_pass"] else "suite FAIL"
    print(verdict)
    return bool(body["all_pass"])


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key=value file with recipe overrides")
    parser.add_argument("--seed", type=int, help="seed override (wins over config)")
    parser.add_argument("--out", help="directory for CSV + JSON reports")
    parser.add_argument("--server", help="base URL of a running service; default in-process")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="besselharm",
        description="certification recipes for the Hankel-setting toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for group, ids in GROUPS.items():
        choices = sorted(list(ids) + [a for a, full in _ALIASES.items() if full in ids])
        p = sub.add_parser(group, help=f"run a {group} recipe")
        p.add_argument("recipe", choices=choices)
        _add_common(p)
    p = sub.add_parser("suite", help="run every certification recipe")
    _add_common(p)
    p = sub.add_parser("serve", help="serve the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    client = ServiceClient(args.server)
    cfg = load_config(args.config) if args.config else {}

    if args.command == "suite":
        unknown = [k for k in cfg if k != "seed"]
        if unknown:
            raise SystemExit(f"suite config supports only 'seed', got {unknown}")
        seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
        return 0 if _run_suite(client, seed, args.out) else 1

    experiment_id = _ALIASES.get(args.recipe, args.recipe)
    payload = recipe_payload(experiment_id, cfg, args.seed)
    return 0 if _run_single(client, payload, args.out) else 1


if __name__ == "__main__":
    sys.exit(main())
