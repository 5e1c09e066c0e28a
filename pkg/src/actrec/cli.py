"""Command-line client for the activity recognition service.

By default each subcommand talks to an in-process instance of the FastAPI
app; pass --server to target a running deployment instead.  Both sides must
see the same filesystem, since requests exchange paths, not pixels.
"""

import argparse
import json
import sys


def _client(server: str | None):
    import httpx

    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _post(args, endpoint: str, payload: dict) -> dict:
    with _client(args.server) as client:
        resp = client.post(endpoint, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        print(f"error: {detail}", file=sys.stderr)
        raise SystemExit(1)
    return resp.json()


def cmd_synth(args) -> None:
    payload = {"root": args.root, "seed": args.seed, "classes": args.classes,
               "frames_per_clip": args.frames_per_clip}
    if args.actors:
        payload["actors"] = args.actors.split(",")
    result = _post(args, "/synth", payload)
    print(json.dumps(result, indent=2))


def cmd_train(args) -> None:
    result = _post(args, "/train", {
        "dataset_root": args.dataset,
        "model_path": args.model,
        "d": args.d,
        "train_actors": args.train_actors.split(","),
        "k": args.k,
        "fps": args.fps,
    })
    print(json.dumps(result, indent=2))


def cmd_classify(args) -> None:
    result = _post(args, "/classify", {
        "model_path": args.model,
        "frames_dir": args.frames,
        "window_sec": args.window_sec,
    })
    for w in result["windows"]:
        if w["label"] is None:
            print(f"{w['start']}\t{w['end'] - 1}\tno_subject\t-")
        else:
            print(f"{w['start']}\t{w['end'] - 1}\t{w['label']}\t{w['distance']:.6f}")


def cmd_evaluate(args) -> None:
    payload = {"model_path": args.model, "dataset_root": args.dataset,
               "window_sec": args.window_sec, "report_path": args.report}
    if args.actors:
        payload["actors"] = args.actors.split(",")
    result = _post(args, "/evaluate", payload)
    try:
        print(open(args.report).read(), end="")
    except OSError:
        print(json.dumps(result, indent=2))


def cmd_serve(args) -> None:
    import uvicorn

    uvicorn.run("actrec.service:app", host=args.host, port=args.port)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="actrec",
                                     description="subspace activity recognition pipeline")
    parser.add_argument("--server", default=None,
                        help="base URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic dataset")
    p.add_argument("root")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--classes", type=int, default=4)
    p.add_argument("--actors", default=None, help="comma-separated actor ids")
    p.add_argument("--frames-per-clip", type=int, default=50)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="train a subspace model from a dataset")
    p.add_argument("dataset")
    p.add_argument("model")
    p.add_argument("--d", type=int, required=True, help="retained feature count")
    p.add_argument("--train-actors", required=True, help="comma-separated actor ids")
    p.add_argument("--k", type=float, default=3.0, help="segmentation threshold multiplier")
    p.add_argument("--fps", type=float, default=10.0)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="label probe windows of a frame directory")
    p.add_argument("model")
    p.add_argument("frames")
    p.add_argument("--window-sec", type=float, default=1.0)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", help="confusion-matrix evaluation on held-out actors")
    p.add_argument("model")
    p.add_argument("dataset")
    p.add_argument("report")
    p.add_argument("--actors", default=None,
                   help="comma-separated test actors (default: all non-training)")
    p.add_argument("--window-sec", type=float, default=1.0)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> None:
    args = build_parser().parse_args(argv)
    args.func(args)


if __name__ == "__main__":
    main()
