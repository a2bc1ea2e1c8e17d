"""``cssbp`` command line: validate, decode, trials, equiv, oracle.

Exit status is 0 on success, 1 when the input data is unusable (bad code
file, oracle refusal, decoder fault) and 2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .channel import parse_prior_spec, sample_error
from .css_code import CssCode, PauliError, Syndromes, load_code, syndrome, validate_css
from .decoders import DECODERS, DecoderConfig, DecoderFault, decode
from .decoders.config import CHECK_RULES
from .decoders.decisions import joint_to_labels
from .equivalence import run_paired
from .oracle import DEFAULT_LIMIT, OracleLimitError, exact_marginals
from .sim import TrialConfig, run_trials, trial_seed

EXIT_OK, EXIT_DATA, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _census(d: dict) -> str:
    return " ".join(f"{k}:{v}" for k, v in d.items())


def _ones(bits) -> list[int]:
    return [int(i) + 1 for i in np.flatnonzero(bits)]


def _fired(spec: str | None, m: int, what: str) -> np.ndarray:
    """Comma-separated 1-based indices of fired checks -> bit vector."""
    s = np.zeros(m, dtype=np.uint8)
    if not spec:
        return s
    for tok in spec.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            i = int(tok)
        except ValueError:
            raise UsageError(f"{what}: {tok!r} is not an integer") from None
        if not 1 <= i <= m:
            raise UsageError(f"{what}: check {i} outside 1..{m}")
        s[i - 1] ^= 1
    return s


def _decoder_config(args, base: DecoderConfig | None = None) -> DecoderConfig:
    changes = {}
    for flag, key in (("max_iters", "max_iterations"), ("check_rule", "check_rule"),
                      ("damping", "damping"), ("epsilon", "epsilon")):
        value = getattr(args, flag, None)
        if value is not None:
            changes[key] = value
    try:
        return (base or DecoderConfig()).replace(**changes)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _add_decoder_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-iters", type=int)
    p.add_argument("--check-rule", choices=CHECK_RULES)
    p.add_argument("--damping", type=float)
    p.add_argument("--epsilon", type=float)


def _instance(args, code: CssCode, prior) -> tuple[Syndromes, PauliError | None]:
    """Syndromes from ``--sz/--sx`` if given, else from an error sampled with ``--seed``."""
    if args.sz is not None or args.sx is not None:
        return Syndromes(_fired(args.sz, code.mx, "--sz"), _fired(args.sx, code.mz, "--sx")), None
    err = sample_error(prior, args.seed)
    return syndrome(code, err), err


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    code = load_code(args.code)
    rep = validate_css(code)
    if args.format == "json":
        body = {"code": code.name, "n": code.n, "mX": code.mx, "mZ": code.mz, **rep.to_dict()}
        print(json.dumps(body, indent=2))
    else:
        print(f"code={code.name} n={code.n} mX={code.mx} mZ={code.mz}")
        print(f"orthogonal={'true' if rep.orthogonal else 'false'}")
        print(f"row_weights_x={_census(rep.row_weights_x)}")
        print(f"row_weights_z={_census(rep.row_weights_z)}")
        print(f"col_weights_x={_census(rep.col_weights_x)}")
        print(f"col_weights_z={_census(rep.col_weights_z)}")
        print(f"census={_census(rep.intersection_census)}")
    return EXIT_OK if rep.orthogonal else EXIT_DATA


def cmd_decode(args) -> int:
    code = load_code(args.code)
    prior = parse_prior_spec(args.prior, code.n, args.p)
    cfg = _decoder_config(args)
    syn, err = _instance(args, code, prior)
    res = decode(code, prior, syn, cfg, args.decoder, true_error=err)
    beliefs = res.beliefs if res.beliefs.shape[-1] == 4 else joint_to_labels(res.beliefs)
    body = {
        "decoder": args.decoder,
        "iterations": res.iterations,
        "converged": res.converged,
        "sz": _ones(syn.sz),
        "sx": _ones(syn.sx),
        "decision": {"x": _ones(res.decision.x), "z": _ones(res.decision.z)},
        "beliefs": [[round(float(v), 12) for v in row] for row in beliefs],
    }
    if err is not None:
        body["error"] = {"x": _ones(err.x), "z": _ones(err.z)}
        body["residual"] = res.residual.value
    print(json.dumps(body, indent=2))
    return EXIT_OK


def _trial_config(args) -> TrialConfig:
    data: dict = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read --config: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError("--config must hold a JSON object")
    overrides = {"code": args.code, "prior": args.prior, "rates": args.p, "trials": args.trials,
                 "seed": args.seed, "decoders": args.decoder, "format": args.format, "out": args.out}
    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        base = DecoderConfig.from_dict(data.pop("decoder_config", {}))
        data["decoder_config"] = _decoder_config(args, base).to_dict()
        return TrialConfig.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def cmd_trials(args) -> int:
    cfg = _trial_config(args)
    report = run_trials(cfg)
    _emit(report.render(cfg.output_format), cfg.out)
    return EXIT_OK


def cmd_equiv(args) -> int:
    code = load_code(args.code)
    binary_cfg = DecoderConfig(check_rule=args.binary_check_rule)
    rates = args.p or [None]  # None: take p from the prior spec
    points = []
    for rate in rates:
        prior = parse_prior_spec(args.prior, code.n, rate)
        worst: dict = {}
        agree = True
        for k in range(args.seeds):
            err = sample_error(prior, trial_seed(args.seed, rate or 0.0, k))
            summary = run_paired(code, prior, syndrome(code, err), args.iters, binary_config=binary_cfg).summary()
            agree &= summary.pop("hard_decisions_agree")
            summary.pop("iterations")
            for key, val in summary.items():
                worst[key] = max(worst.get(key, 0.0), val)
        points.append({"p": rate, "seeds": args.seeds, **worst, "hard_decisions_agree": bool(agree)})
    body = {
        "code": code.name,
        "prior": args.prior,
        "iterations": args.iters,
        "binary_check_rule": args.binary_check_rule,
        "points": points,
        "max_belief_deviation": max(pt["max_belief_deviation"] for pt in points),
        "max_check_message_deviation": max(pt["max_check_message_deviation"] for pt in points),
        "max_variable_message_deviation": max(pt["max_variable_message_deviation"] for pt in points),
        "max_constancy_defect": max(pt["max_constancy_defect"] for pt in points),
        "hard_decisions_agree": all(pt["hard_decisions_agree"] for pt in points),
    }
    _emit(json.dumps(body, indent=2) + "\n", args.out)
    if args.fail_above is not None and body["max_belief_deviation"] > args.fail_above:
        print(f"belief deviation {body['max_belief_deviation']:.3e} exceeds {args.fail_above:g}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def cmd_oracle(args) -> int:
    code = load_code(args.code)
    if code.n > args.limit:
        raise OracleLimitError(f"n={code.n} exceeds the enumeration limit {args.limit} (raise --limit to force)")
    prior = parse_prior_spec(args.prior, code.n, args.p)
    syn, err = _instance(args, code, prior)
    marg = exact_marginals(code, prior, syn, limit=args.limit)
    body = {
        "code": code.name,
        "sz": _ones(syn.sz),
        "sx": _ones(syn.sx),
        "marginals": [[round(float(v), 15) for v in row] for row in joint_to_labels(marg)],
    }
    if err is not None:
        body["error"] = {"x": _ones(err.x), "z": _ones(err.z)}
    print(json.dumps(body, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cssbp", description="Syndrome decoding of CSS codes by belief propagation.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check orthogonality and print weight and intersection statistics")
    p.add_argument("code", help="paper24, alist:<hx>,<hz>, or a css-support file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_validate)

    def instance_flags(q):
        q.add_argument("--code", default="paper24")
        q.add_argument("--prior", default="depolarizing")
        q.add_argument("--p", type=float, default=None)
        q.add_argument("--sz", help="fired X-type checks, 1-based, comma separated")
        q.add_argument("--sx", help="fired Z-type checks, 1-based, comma separated")
        q.add_argument("--seed", type=int, default=0, help="sample the error from this seed when no syndrome is given")

    p = sub.add_parser("decode", help="decode one instance and print beliefs and the decision")
    instance_flags(p)
    p.add_argument("--decoder", choices=DECODERS, default="joint")
    _add_decoder_flags(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("trials", help="Monte Carlo sweep over decoders and error rates")
    p.add_argument("--config", help="JSON file with trial settings; flags override it")
    p.add_argument("--code")
    p.add_argument("--prior")
    p.add_argument("--p", type=float, action="append")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--decoder", choices=DECODERS, action="append")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out")
    _add_decoder_flags(p)
    p.set_defaults(func=cmd_trials)

    p = sub.add_parser("equiv", help="lockstep joint vs four-state comparison")
    p.add_argument("--code", default="paper24")
    p.add_argument("--prior", default="depolarizing")
    p.add_argument("--p", type=float, action="append")
    p.add_argument("--iters", type=int, default=20)
    p.add_argument("--seeds", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--binary-check-rule", choices=CHECK_RULES, default="exact")
    p.add_argument("--fail-above", type=float, help="exit 1 if the belief deviation exceeds this")
    p.add_argument("--out")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("oracle", help="exact marginals by enumeration (small codes only)")
    instance_flags(p)
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "iters", 0) < 0 or getattr(args, "seeds", 1) < 1:
            raise UsageError("--iters must be >= 0 and --seeds >= 1")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError, DecoderFault) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
