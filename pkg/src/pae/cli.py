"""Command-line front end.

A thin client over the evaluation service: arguments become the same
request models the HTTP API accepts, dispatched to the in-process handlers
by default or to a running server with ``--server URL``.

Exit codes: 0 on success (and all checks passing for ``verify``), 1 on
evaluation or input errors, 2 on usage errors (including unknown suites).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import service
from .service import (
    ChenResponse,
    EvalRequest,
    EvalResponse,
    GramRequest,
    GramResponse,
    JwResponse,
    ServiceError,
    ThetaResponse,
    VerifyRequest,
    VerifyResponse,
)


class _LocalClient:
    def eval(self, req: EvalRequest) -> EvalResponse:
        return service.handle_eval(req)

    def jw(self, k: int, max_jw: int) -> JwResponse:
        return service.handle_jw(k, max_jw)

    def theta(self, a: int, b: int, c: int) -> ThetaResponse:
        return service.handle_theta(a, b, c)

    def chen(self, a: int, b: int) -> ChenResponse:
        return service.handle_chen(a, b)

    def verify(self, req: VerifyRequest) -> VerifyResponse:
        return service.handle_verify(req)

    def gram(self, req: GramRequest) -> GramResponse:
        return service.handle_gram(req)


class _RemoteClient:
    def __init__(self, base: str):
        import httpx

        self.base = base.rstrip("/")
        self.http = httpx.Client(timeout=None)

    def _check(self, resp):
        if resp.status_code != 200:
            try:
                detail = resp.json().get("detail", resp.text)
            except Exception:
                detail = resp.text
            raise ServiceError(str(detail), code=resp.status_code)
        return resp.json()

    def eval(self, req: EvalRequest) -> EvalResponse:
        return EvalResponse(**self._check(self.http.post(f"{self.base}/eval", json=req.model_dump())))

    def jw(self, k: int, max_jw: int) -> JwResponse:
        return JwResponse(**self._check(self.http.get(f"{self.base}/jw/{k}", params={"max_jw": max_jw})))

    def theta(self, a: int, b: int, c: int) -> ThetaResponse:
        return ThetaResponse(**self._check(self.http.get(f"{self.base}/theta", params={"a": a, "b": b, "c": c})))

    def chen(self, a: int, b: int) -> ChenResponse:
        return ChenResponse(**self._check(self.http.get(f"{self.base}/chen", params={"a": a, "b": b})))

    def verify(self, req: VerifyRequest) -> VerifyResponse:
        return VerifyResponse(**self._check(self.http.post(f"{self.base}/verify", json=req.model_dump())))

    def gram(self, req: GramRequest) -> GramResponse:
        return GramResponse(**self._check(self.http.post(f"{self.base}/gram", json=req.model_dump())))


def _client(args) -> object:
    if getattr(args, "server", None):
        return _RemoteClient(args.server)
    return _LocalClient()


def _common(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--server", help="base URL of a running service; default is in-process")
    p.add_argument("--max-jw", type=int, default=12, dest="max_jw",
                   help="materialization cap for Jones-Wenzl elements (>= 4)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--extended", action="store_true",
                   help="enable the long-running checks")
    p.add_argument("--trace-steps", action="store_true", dest="trace_steps",
                   help="stream reduction steps to stderr")


def _mk_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pae", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a closed tangle program")
    p.add_argument("file", nargs="?", help="a .pa program file")
    p.add_argument("-e", "--expr", help="inline program text")
    p.add_argument("--strategy", choices=("first", "last"), default="first")
    _common(p)

    p = sub.add_parser("jw", help="print a Jones-Wenzl projection")
    p.add_argument("k", type=int)
    _common(p)

    p = sub.add_parser("theta", help="evaluate a theta network")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.add_argument("c", type=int)
    p.add_argument("--signed", action="store_true", help="print the signed value")
    _common(p)

    p = sub.add_parser("chen", help="two-projection expansion coefficients")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    _common(p)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite")
    _common(p)

    p = sub.add_parser("gram", help="Gram matrix of expressions, one per line")
    p.add_argument("file")
    _common(p)
    return ap


def _format_verify_text(resp: VerifyResponse) -> str:
    rows = [("check", "expected", "computed", "pass", "ms")]
    for c in resp.checks:
        rows.append((c.id, c.expected, c.computed, "ok" if c.passed else "FAIL", str(c.ms)))
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    lines = ["  ".join(s.ljust(widths[i]) for i, s in enumerate(r)).rstrip() for r in rows]
    tally = sum(1 for c in resp.checks if c.passed)
    lines.append(f"[{resp.suite}] {tally}/{len(resp.checks)} passed")
    return "\n".join(lines)


def main(argv: Optional[List[str]] = None) -> int:
    ap = _mk_parser()
    args = ap.parse_args(argv)
    if getattr(args, "max_jw", 12) < 4:
        ap.error("--max-jw must be at least 4")
    client = _client(args)
    try:
        if args.command == "eval":
            if args.expr is None and args.file is None:
                ap.error("eval needs a file or -e EXPR")
            if args.expr is not None and args.file is not None:
                ap.error("eval takes either a file or -e EXPR, not both")
            text = args.expr
            if text is None:
                with open(args.file, "r", encoding="utf-8") as fh:
                    text = fh.read()
            max_jw = args.max_jw if not args.extended else max(args.max_jw, 14)
            req = EvalRequest(program=text, max_jw=max_jw, strategy=args.strategy,
                              trace_steps=args.trace_steps)
            resp = client.eval(req)
            if args.trace_steps and resp.steps:
                for s in resp.steps:
                    print(s, file=sys.stderr)
            if args.format == "json":
                out = resp.model_dump(exclude_none=True)
                print(json.dumps(out, indent=2))
            else:
                print(resp.value.text)
            return 0

        if args.command == "jw":
            resp = client.jw(args.k, args.max_jw)
            if args.format == "json":
                print(resp.model_dump_json(indent=2))
            else:
                print(resp.text)
            return 0

        if args.command == "theta":
            resp = client.theta(args.a, args.b, args.c)
            if args.format == "json":
                print(resp.model_dump_json(indent=2))
            else:
                print(resp.value if args.signed else resp.absolute)
            return 0

        if args.command == "chen":
            resp = client.chen(args.a, args.b)
            if args.format == "json":
                print(resp.model_dump_json(indent=2))
            else:
                for entry in resp.coefficients:
                    print(f"{entry.k}: {entry.value}")
            return 0

        if args.command == "verify":
            req = VerifyRequest(suite=args.suite, extended=args.extended, threads=args.threads)
            try:
                resp = client.verify(req)
            except ServiceError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 2 if exc.code == 404 else 1
            if args.format == "json":
                out = {"suite": resp.suite, "pass": resp.passed,
                       "checks": [c.model_dump(by_alias=True) for c in resp.checks]}
                print(json.dumps(out, indent=2))
            else:
                print(_format_verify_text(resp))
            return 0 if resp.passed else 1

        if args.command == "gram":
            with open(args.file, "r", encoding="utf-8") as fh:
                lines = [ln.strip() for ln in fh.readlines()]
            exprs = [ln for ln in lines if ln and not ln.startswith("#")]
            resp = client.gram(GramRequest(expressions=exprs, max_jw=args.max_jw))
            if args.format == "json":
                print(resp.model_dump_json(indent=2))
            else:
                for row in resp.matrix:
                    print("[" + ", ".join(row) + "]")
                print(f"rank: {resp.rank}")
            return 0
    except ServiceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unhandled command")


if __name__ == "__main__":
    sys.exit(main())
