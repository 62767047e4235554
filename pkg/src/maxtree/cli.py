"""One-shot command-line client for the service.

Every command builds the same request model the HTTP API consumes and, by
default, calls the service handler in process; --server posts it to a running
instance instead.  Reports are deterministic: floats are printed with 17
significant digits so they round-trip bit-exactly.

Exit codes: 0 success; 1 domain errors (reducible input, divergent star,
non-SR matrix, ...); 2 I/O or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from pydantic import ValidationError

from .errors import DomainError, MatrixParseError
from .matrixio import read_raw_rows
from .service import app as service
from .service.schemas import (
    ClassicalRstRequest,
    DequantizeRequest,
    JudgesRequest,
    KleeneRequest,
    MatrixRequest,
)

_ANALYSIS_COMMANDS = (
    "mu",
    "kleene",
    "critical",
    "rst",
    "classical-rst",
    "dequantize",
    "verify",
    "rank",
    "judges",
    "echo",
)


def _parse_p_list(text: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid p list {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("empty p list")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxtree",
        description="Max-algebra spanning-tree reports over matrix files.",
    )
    parser.add_argument(
        "--server",
        default=None,
        help="base URL of a running maxtree service; default computes in process",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--tol", type=float, default=1e-9, help="relative comparison tolerance")
        sp.add_argument("--format", choices=("json", "csv"), default="json", dest="fmt")

    sp = sub.add_parser("mu", help="maximum cycle geometric mean")
    sp.add_argument("input")
    common(sp)

    sp = sub.add_parser("kleene", help="Kleene star closure")
    sp.add_argument("input")
    sp.add_argument("--rescale", action="store_true", help="divide by mu when it exceeds 1 within tol")
    common(sp)

    sp = sub.add_parser("critical", help="critical nodes, edges and components")
    sp.add_argument("input")
    common(sp)

    sp = sub.add_parser("rst", help="maximal RST vector with witness trees")
    sp.add_argument("input")
    common(sp)

    sp = sub.add_parser("classical-rst", help="sum-over-trees RST vector and stationary distribution")
    sp.add_argument("input")
    sp.add_argument("--max-enum", type=int, default=9, help="tree enumeration node cap")
    common(sp)

    sp = sub.add_parser("dequantize", help="p-stochastic approximants and convergence errors")
    sp.add_argument("input")
    sp.add_argument("--p", type=_parse_p_list, default=None, help="sweep exponents, e.g. 4,8,16")
    sp.add_argument("--max-enum", type=int, default=9, help="tree enumeration node cap")
    common(sp)

    sp = sub.add_parser("verify", help="bundled theorem checks for one matrix")
    sp.add_argument("input")
    common(sp)

    sp = sub.add_parser("rank", help="rank a symmetrically reciprocal comparison matrix")
    sp.add_argument("input")
    common(sp)

    sp = sub.add_parser("judges", help="rank competitors from judge/competitor score files")
    sp.add_argument("judges_input")
    sp.add_argument("competitors_input")
    common(sp)

    sp = sub.add_parser("echo", help="re-emit a matrix in canonical JSON")
    sp.add_argument("input")
    common(sp)

    sp = sub.add_parser("serve", help="run the HTTP service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)

    return parser


def _file_payload(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        n, rows = read_raw_rows(fh.read())
    return {"n": n, "rows": rows}


def _build_request(args):
    """Returns (route, request model, in-process handler) for an analysis command."""
    cmd = args.command
    if cmd == "judges":
        req = JudgesRequest(
            judges=_file_payload(args.judges_input),
            competitors=_file_payload(args.competitors_input),
            tol=args.tol,
        )
        return "/judges", req, service.compute_judges
    payload = {"matrix": _file_payload(args.input), "tol": args.tol}
    if cmd == "kleene":
        return "/kleene", KleeneRequest(**payload, rescale=args.rescale), service.compute_kleene
    if cmd == "classical-rst":
        req = ClassicalRstRequest(**payload, max_enum=args.max_enum)
        return "/classical-rst", req, service.compute_classical_rst
    if cmd == "dequantize":
        req = DequantizeRequest(**payload, p_values=args.p, max_enum=args.max_enum)
        return "/dequantize", req, service.compute_dequantize
    handler = {
        "mu": service.compute_mu,
        "critical": service.compute_critical,
        "rst": service.compute_rst,
        "verify": service.compute_verify,
        "rank": service.compute_rank,
        "echo": service.compute_echo,
    }[cmd]
    return f"/{cmd}", MatrixRequest(**payload), handler


def _post_remote(server: str, route: str, request, client=None) -> dict:
    import httpx

    payload = request.model_dump(mode="json")
    owned = client is None
    if owned:
        client = httpx.Client(base_url=server, timeout=120.0)
    try:
        try:
            response = client.post(route, json=payload)
        except httpx.HTTPError as exc:
            raise MatrixParseError(f"service request failed: {exc}") from exc
    finally:
        if owned:
            client.close()
    if response.status_code == 200:
        return response.json()
    detail = response.json().get("detail", response.text)
    if response.status_code == 400:
        raise DomainError(str(detail))
    raise MatrixParseError(f"service rejected the request ({response.status_code}): {detail}")


# --- deterministic rendering -------------------------------------------------


def _fmt_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError(f"non-finite value in report: {x!r}")
    return format(x, ".17g")


def _json_value(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _fmt_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(v)}" for k, v in value.items()) + "}"
    raise TypeError(f"cannot serialize {type(value)!r}")


def render_json(data: dict) -> str:
    return _json_value(data) + "\n"


def _cell(value) -> str:
    if isinstance(value, float):
        return _fmt_float(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return " ".join(_cell(v) for v in value)
    return str(value)


def render_csv(command: str, data: dict) -> str:
    lines: list[str] = []
    if command == "mu":
        lines = ["mu", _cell(data["mu"])]
    elif command in ("kleene", "echo"):
        rows = data["star"] if command == "kleene" else data["rows"]
        lines = [",".join(_cell(v) for v in row) for row in rows]
    elif command == "rst":
        lines = ["i,w"] + [f"{i + 1},{_cell(v)}" for i, v in enumerate(data["w"])]
    elif command == "classical-rst":
        lines = ["i,w,stationary"] + [
            f"{i + 1},{_cell(w)},{_cell(s)}"
            for i, (w, s) in enumerate(zip(data["w"], data["stationary"]))
        ]
    elif command == "dequantize":
        lines = ["p,err_matrix,err_vector,bound"] + [
            ",".join(
                (_cell(step["p"]), _cell(step["err_matrix"]), _cell(step["err_vector"]), _cell(step["bound"]))
            )
            for step in data["steps"]
        ]
    elif command in ("rank", "judges"):
        lines = ["position,index,weight"] + [
            f"{pos + 1},{idx},{_cell(data['weights'][idx - 1])}"
            for pos, idx in enumerate(data["order"])
        ]
    elif command == "verify":
        lines = ["check,passed,detail"] + [
            f"{c['name']},{_cell(c['passed'])},{json.dumps(c['detail'])}" for c in data["checks"]
        ]
    elif command == "critical":
        lines = [
            "key,value",
            f"mu,{_cell(data['mu'])}",
            f"critical_nodes,{_cell(data['critical_nodes'])}",
            f"critical_edges,{_cell([' '.join(map(str, e)) for e in data['critical_edges']])}",
            f"dc_components,{_cell([' '.join(map(str, c)) for c in data['dc_components']])}",
            f"dcstar_components,{_cell([' '.join(map(str, c)) for c in data['dcstar_components']])}",
        ]
    else:  # pragma: no cover - parser restricts commands
        raise ValueError(f"no CSV rendering for {command}")
    return "\n".join(lines) + "\n"


def main(argv=None, *, client=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        uvicorn.run(service.app, host=args.host, port=args.port)
        return 0
    try:
        route, request, handler = _build_request(args)
        if args.server:
            data = _post_remote(args.server, route, request, client=client)
        else:
            data = handler(request).model_dump()
        text = render_csv(args.command, data) if args.fmt == "csv" else render_json(data)
        sys.stdout.write(text)
        return 0
    except MatrixParseError as exc:
        print(f"maxtree: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"maxtree: {exc}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"maxtree: invalid input: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"maxtree: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:  # pragma: no cover - console script shim
    raise SystemExit(main())


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
