"""Command-line entry point: named verification suites with exit codes.

    supportcert verify appendix
    supportcert verify order-counterexample --t 2
    supportcert verify cm-counterexample --prime-bound 10000
    supportcert scan --spec '{"bound": 1000, "P": [[[0, 5], [-1, 2]]]}' --cache scan.jsonl
    supportcert semicyclic --spec "R/2R + R/2R"

Exit status is 0 when every non-skipped check passes, 1 on any failure and 2
on a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from . import ellcurve as ec
from . import modules as md
from . import orders as od
from . import torus
from .poly import Poly
from .report import DERIVED, PAPER, TRIVIAL, CheckReport

CACHE_ENV = "SUPPORTCERT_CACHE_DIR"
CACHE_FILENAME = "scan-cache.jsonl"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    prime_bound: int = 10**4
    t: int = 2
    cache: str = None
    output: str = None
    fmt: str = "text"
    prime_cap: int = ec.DEFAULT_PRIME_CAP

    def validate(self):
        if not 0 <= self.t <= md.SOLVER_MAX_T:
            raise UsageError(f"--t must lie in 0..{md.SOLVER_MAX_T}")
        if self.prime_bound < 5:
            raise UsageError("--prime-bound must be at least 5")
        if self.prime_bound > self.prime_cap:
            raise UsageError(f"--prime-bound exceeds the cap {self.prime_cap} (raise it with --prime-cap)")
        if self.prime_cap > ec.HARD_PRIME_CAP:
            raise UsageError("--prime-cap is beyond what the point counter supports")

    def cache_path(self):
        if self.cache:
            return self.cache
        base = os.environ.get(CACHE_ENV)
        return os.path.join(base, CACHE_FILENAME) if base else None


def _timed(fn, *args, **kwargs):
    start = time.perf_counter()
    rep = fn(*args, **kwargs)
    rep.duration = time.perf_counter() - start
    return rep


# verify appendix


def cmd_verify_appendix(config, constants=None):
    lat = torus.PeriodLattice(constants)
    return [
        _timed(torus.verify_matrix_identities, lat.constants),
        _timed(torus.verify_riemann_integrality, lat),
        _timed(torus.verify_endomorphisms, lat),
        _timed(torus.verify_two_torsion, lat),
    ]


# verify order-counterexample


def _census_report():
    r = od.r_order()
    rep = CheckReport("order.census", "annihilators of the elements of R/2R")
    quotient = md.quotient_module(od.unit_lattice(r).scale(2), od.unit_lattice(r))
    named = {
        "(1)": od.unit_lattice(r),
        "(2)": od.ideal_from_generators(r, [r.one() * 2]),
        "m": od.m_ideal(),
    }
    census = md.annihilator_census(quotient, named)
    rep.expect("group", list(quotient.invariants), [2, 2, 2], TRIVIAL)
    rep.expect("annihilators outside {(1), (2), m}", census.pop("other"), 0, PAPER)
    rep.record("census", census, DERIVED)
    rep.expect("R/m has two elements", len(md.quotient_by_ideal(od.m_ideal())), 2, PAPER)
    rep.summary = "every annihilator is (1), (2) or m; counts " + ", ".join(
        f"{k}: {v}" for k, v in census.items()
    )
    return rep


def _membership_report():
    r = od.r_order()
    ideal = od.ideal_from_generators(r, [r.one() * 2, r.gen(1)])
    rep = CheckReport("order.membership", "odd multiples of 2t^2 avoid the ideal (2, 2t)")
    rep.expect("index of (2, 2t) in R", ideal.index_in(od.unit_lattice(r)), 4, DERIVED)
    for k in (1, 3, 5, 7):
        rep.expect(f"{k}*(2t^2) in (2, 2t)", od.ideal_membership(r.gen(2) * k, ideal), False, PAPER)
    rep.expect("2*(2t^2) in (2, 2t)", od.ideal_membership(r.gen(2) * 2, ideal), True, DERIVED)
    if not rep.failures():
        rep.summary = "odd multiples of 2t^2 lie outside (2, 2t), even ones inside"
    return rep


def _support_constant_report(t):
    rep = CheckReport("order.support_constant", f"least c with 2t^2 c = 2 phi1 + 2t phi2, phi_i in 2^{t}R")
    sol = md.support_constant_solver(t)
    rep.expect("c", sol.c, 2 ** (t + 1), PAPER)
    rep.require("solution re-substitutes", sol.check(), DERIVED)
    rep.record("phi1", list(sol.phi1.coords), DERIVED)
    rep.record("phi2", list(sol.phi2.coords), DERIVED)
    rep.record("t", t, TRIVIAL)
    if t >= 1:
        r = od.r_order()
        big = md.quotient_module(od.unit_lattice(r).scale(2**t), od.unit_lattice(r))
        t1 = md.ambient_element(big, r.one().coords)
        ann = md.annihilator(t1)
        expected = od.ideal_from_generators(r, [r.one() * 2**t])
        rep.require(f"Ann(T1) = (2^{t}) for T1 the class of 1", ann == expected, PAPER)
    if not rep.failures():
        rep.summary = f"c = {sol.c} = 2^{t + 1}"
    return rep


def cmd_verify_order_counterexample(config):
    return [
        _timed(_census_report),
        _timed(_membership_report),
        _timed(_support_constant_report, config.t),
    ]


# verify cm-counterexample


def cmd_verify_cm_counterexample(config, cache=None):
    a, b, pt = ec.CURVE_A, ec.CURVE_B, ec.POINT_R
    cache = cache or ec.ScanCache(config.cache_path())
    bound, cap = config.prime_bound, config.prime_cap
    out = []

    def point_and_torsion():
        rep = CheckReport("cm.torsion", "R = (-1, 2) on B has infinite order")
        rep.expect("(-1)^3 + 5", (-1) ** 3 + 5, 4, PAPER)
        rep.require("R on B", b.contains(pt), PAPER)
        gb = ec.torsion_bound(b, [7, 11], cache)
        ga = ec.torsion_bound(a, [7, 11], cache)
        rep.expect("gcd #B(F_7), #B(F_11)", gb, 1, DERIVED)
        rep.expect("gcd #A(F_7), #A(F_11)", ga, 1, DERIVED)
        rep.record("certificate", "torsion injects into E(F_p) at good p, so trivial gcd means no torsion", TRIVIAL)
        if not rep.failures():
            rep.summary = "torsion of A and B is trivial, so R has infinite order"
        return rep

    def two_torsion():
        rep = CheckReport("cm.two_torsion", "B has no 2-torsion over Q or Q(sqrt 2)")
        rep.expect("rational 2-torsion of B", ec.rational_two_torsion(b), [], DERIVED)
        cubic = Poly([5, 0, 0, 1])
        rep.expect("root of x^3 + 5 in a quadratic field", ec.root_degree_check(cubic, 2), False, PAPER)
        if not rep.failures():
            rep.summary = "x^3 + 5 is irreducible and has no root in any quadratic field"
        return rep

    def twist():
        rep = CheckReport("cm.twist", "A is the twist of B by 2")
        res = ec.twist_check(a, b, 2, bound, cache, cap)
        rep.record("primes checked", res.primes_checked, DERIVED)
        rep.expect("violations", list(res.violations), [], DERIVED)
        ss = [p for p in ec.good_primes((a, b), bound, cap) if p % 3 == 2
              and (cache.trace(a, p), cache.trace(b, p)) != (0, 0)]
        rep.expect("nonzero a_p at p = 2 mod 3", ss, [], DERIVED)
        if not rep.failures():
            rep.summary = f"a_p(A) = (2|p) a_p(B) at all {res.primes_checked} good primes up to {bound}"
        return rep

    def non_isogeny():
        rep = CheckReport("cm.non_isogeny", "A and B are not isogenous over Q")
        w = ec.non_isogeny_witness(a, b, bound, cache, cap)
        rep.record("certificate", "isogenous curves share a_p at every good prime", TRIVIAL)
        if w is None:
            rep.skip(f"no differing trace up to {bound}; inconclusive up to bound")
            rep.summary = f"inconclusive up to {bound}"
            return rep
        rep.record("witness prime", w, DERIVED)
        rep.record("a_p(A), a_p(B)", [cache.trace(a, w), cache.trace(b, w)], DERIVED)
        rep.summary = f"a_{w}(A) = {cache.trace(a, w)} differs from a_{w}(B) = {cache.trace(b, w)}"
        return rep

    def sp():
        rep = CheckReport("cm.sp_scan", "Condition (SP) for P = (R, 0), Q = (0, R) on B x B")
        p_spec = [(b, pt), (b, ec.INFINITY)]
        q_spec = [(b, ec.INFINITY), (b, pt)]
        fwd = ec.sp_scan(p_spec, q_spec, bound, cache, cap)
        back = ec.sp_scan(q_spec, p_spec, bound, cache, cap)
        rep.record("primes checked", fwd.primes_checked, DERIVED)
        rep.expect("violations P -> Q", list(fwd.violations), [], TRIVIAL)
        rep.expect("violations Q -> P", list(back.violations), [], TRIVIAL)
        if not rep.failures():
            rep.summary = f"ord(Q mod p) = ord(P mod p) at all {fwd.primes_checked} good primes"
        return rep

    for fn in (point_and_torsion, two_torsion, twist, non_isogeny, sp):
        out.append(_timed(fn))
    if cache.dirty:
        cache.save()
    return out


# scan


def _parse_number(v):
    try:
        return Fraction(v)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {v!r}") from exc


def _parse_entries(items, label):
    if not isinstance(items, list) or not items:
        raise UsageError(f"'{label}' must be a nonempty list of [curve, point] pairs")
    out = []
    for item in items:
        try:
            (ca, cb), point = item
            curve = ec.CurveOverQ(int(ca), int(cb))
        except (TypeError, ValueError) as exc:
            raise UsageError(f"malformed entry in '{label}': {item!r}") from exc
        if point in ("inf", None):
            pt = ec.INFINITY
        else:
            try:
                x, y = point
            except (TypeError, ValueError) as exc:
                raise UsageError(f"malformed point in '{label}': {point!r}") from exc
            pt = (_parse_number(x), _parse_number(y))
        if not curve.contains(pt):
            raise UsageError(f"point {ec.point_label(pt)} is not on {curve}")
        out.append((curve, pt))
    return out


def parse_scan_spec(text):
    """Scan spec: a JSON object, inline or in a file.

    Keys: "P" (list of [[a, b], [x, y]] entries, a point on a product of
    curves), optional "Q" (same shape), optional "condition" ("sp" or "spm")
    and optional "bound".
    """
    if os.path.isfile(text):
        with open(text) as fh:
            text = fh.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"scan spec is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise UsageError("scan spec must be a JSON object")
    spec = {"P": _parse_entries(raw.get("P"), "P")}
    if "Q" in raw:
        spec["Q"] = _parse_entries(raw["Q"], "Q")
    cond = raw.get("condition", "sp")
    if cond not in ("sp", "spm"):
        raise UsageError("condition must be 'sp' or 'spm'")
    spec["condition"] = cond
    if "bound" in raw:
        spec["bound"] = int(raw["bound"])
    return spec


def cmd_scan(config, spec, cache=None):
    cache = cache or ec.ScanCache(config.cache_path())
    bound = spec.get("bound", config.prime_bound)
    if bound > config.prime_cap:
        raise UsageError(f"bound {bound} exceeds the cap {config.prime_cap}")
    before = cache.computed
    curves = list({c.key: c for c, _ in spec["P"] + spec.get("Q", [])}.values())
    primes = ec.good_primes(curves, bound, config.prime_cap)
    rep = CheckReport("scan", "")
    table = []
    for p in primes:
        row = {"p": p}
        for i, (curve, pt) in enumerate(spec["P"]):
            rec = cache.record(curve, p)
            row[f"N{i}"] = rec.n
            row[f"ord{i}"] = cache.point_order(curve, p, pt)
        table.append(row)
    rep.record("good primes", len(primes), TRIVIAL)
    rep.require("Hasse bound at every scanned prime", all(
        cache.record(c, p).ap ** 2 <= 4 * p for c in curves for p in primes), TRIVIAL)
    rep.record("orders", table, DERIVED)
    if "Q" in spec:
        scan_fn = ec.sp_scan if spec["condition"] == "sp" else ec.spm_scan
        res = scan_fn(spec["P"], spec["Q"], bound, cache, config.prime_cap)
        rep.record("condition", spec["condition"], TRIVIAL)
        rep.expect("violations", list(res.violations), [], DERIVED)
    rep.summary = f"{len(primes)} good primes up to {bound}"
    if not rep.failures() and "Q" in spec:
        rep.summary += f", condition {spec['condition']} holds at all of them"
    if cache.dirty:
        cache.save()
    return [rep], cache.computed - before


# semicyclic


_TERM = re.compile(r"^\s*(?:\((?P<inner>[^()]+)\)|(?P<plain>[^()]+?))\s*(?:\^\s*(?P<power>\d+))?\s*$")


def _summand(text):
    t = text.strip().replace(" ", "")
    r = od.r_order()
    m = re.fullmatch(r"Z/(\d+)", t)
    if m:
        n = int(m.group(1))
        if n < 2:
            raise UsageError("Z/n needs n >= 2")
        return md.cyclic_group(n)
    if t in ("R/m", "R/\U0001d52a"):
        return md.quotient_by_ideal(od.m_ideal())
    m = re.fullmatch(r"R/(\d+)(?:\^(\d+))?R", t)
    if m:
        n = int(m.group(1)) ** int(m.group(2) or 1)
        if n < 2:
            raise UsageError("R/nR needs n >= 2")
        return md.quotient_module(od.unit_lattice(r).scale(n), od.unit_lattice(r))
    raise UsageError(f"unknown module {text!r} (expected Z/n, R/nR or R/m)")


def parse_module_spec(text):
    """Direct sums such as "R/2R + R/2R", "(R/m)^6 + Z/4"; '+' or the
    direct-sum sign separate summands."""
    parts = re.split(r"\+|⊕", text)
    if not text.strip() or any(not p.strip() for p in parts):
        raise UsageError(f"cannot parse module spec {text!r}")
    summands = []
    for part in parts:
        m = _TERM.match(part)
        if not m:
            raise UsageError(f"cannot parse summand {part!r}")
        body = m.group("inner") or m.group("plain")
        power = int(m.group("power") or 1)
        if power < 1:
            raise UsageError("powers must be positive")
        summands.extend([_summand(body)] * power)
    owners = {s.owner.name for s in summands}
    if len(owners) > 1:
        raise UsageError("summands are modules over different rings")
    size = 1
    for s in summands:
        size *= len(s)
    if size > md.SEMICYCLIC_LIMIT:
        raise UsageError(f"module has {size} elements, beyond the exhaustion guard")
    return summands[0] if len(summands) == 1 else md.direct_sum(*summands)


def cmd_semicyclic(config, spec_text, expect=None):
    module = parse_module_spec(spec_text)
    rep = CheckReport("semicyclic", "")
    ok, witness = md.is_semicyclic(module)
    rep.record("module", spec_text, TRIVIAL)
    rep.record("elements", len(module), TRIVIAL)
    rep.record("semicyclic", ok, DERIVED)
    if witness is not None:
        t1, t2 = witness
        span = md.cyclic_submodule(module, t2.coords)
        valid = t2.order % t1.order == 0 and t1.coords not in span
        rep.require("witness violates the definition", valid, DERIVED)
        rep.record("witness T1", list(module.to_presentation_coords(t1.coords)), DERIVED)
        rep.record("witness T2", list(module.to_presentation_coords(t2.coords)), DERIVED)
        rep.record("orders", [t1.order, t2.order], DERIVED)
    if expect is not None:
        rep.expect("verdict", ok, expect, DERIVED)
    rep.summary = f"{spec_text}: " + ("semi-cyclic" if ok else "not semi-cyclic")
    return rep


# output


def render_text(reports):
    lines = []
    for rep in reports:
        lines.append(f"[{rep.status.upper()}] {rep.check_id}: {rep.summary} ({rep.duration:.2f}s)")
        for name, d in rep.details.items():
            if name in ("table", "orders") and isinstance(d.get("value"), list) and len(d["value"]) > 12:
                shown = f"<{len(d['value'])} rows>"
            else:
                shown = json.dumps(d.get("value"), sort_keys=True) if "value" in d else ""
            mark = {True: "ok", False: "FAIL", None: "  "}[d.get("ok")]
            exp = f" (expected {json.dumps(d['expected'], sort_keys=True)})" if d.get("ok") is False else ""
            lines.append(f"    {mark:4} {name}: {shown}{exp} [{d['tag']}]")
    return "\n".join(lines) + "\n"


def render_structured(reports):
    return "".join(rep.to_json() + "\n" for rep in reports)


def exit_code(reports):
    return 1 if any(rep.status == "fail" for rep in reports) else 0


def _emit(reports, config):
    text = render_structured(reports) if config.fmt == "structured" else render_text(reports)
    if config.output:
        with open(config.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--format", dest="fmt", choices=("text", "structured"), default="text")
    common.add_argument("--prime-bound", type=int, default=10**4)
    common.add_argument("--prime-cap", type=int, default=ec.DEFAULT_PRIME_CAP)
    common.add_argument("--t", type=int, default=2)
    common.add_argument("--cache", help=f"scan cache file (default: ${CACHE_ENV}/{CACHE_FILENAME})")

    parser = argparse.ArgumentParser(prog="supportcert", description="exact verification suites")
    sub = parser.add_subparsers(dest="command", required=True)
    verify = sub.add_parser("verify", help="run a verification suite")
    vsub = verify.add_subparsers(dest="suite", required=True)
    vsub.add_parser("appendix", parents=[common], help="the six-dimensional torus with End = R")
    vsub.add_parser("order-counterexample", parents=[common], help="arithmetic in R = Z[2t, 2t^2]")
    vsub.add_parser("cm-counterexample", parents=[common], help="the curves y^2 = x^3 + 40, x^3 + 5")
    scan = sub.add_parser("scan", parents=[common], help="scan primes for point orders")
    scan.add_argument("--spec", required=True, help="JSON spec, inline or a file path")
    semi = sub.add_parser("semicyclic", parents=[common], help="decide semi-cyclicity of a finite module")
    semi.add_argument("--spec", required=True, help='module such as "R/2R + R/2R", "Z/8", "R/m"')
    semi.add_argument("--expect", choices=("true", "false"), help="fail unless the verdict matches")
    return parser


def main(argv=None, constants=None):
    """Run the CLI; ``constants`` replaces the torus matrices (for testing)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    config = RunConfig(args.prime_bound, args.t, args.cache, args.output, args.fmt, args.prime_cap)
    try:
        config.validate()
        if args.command == "verify":
            if args.suite == "appendix":
                reports = cmd_verify_appendix(config, constants)
            elif args.suite == "order-counterexample":
                reports = cmd_verify_order_counterexample(config)
            else:
                reports = cmd_verify_cm_counterexample(config)
        elif args.command == "scan":
            reports, computed = cmd_scan(config, parse_scan_spec(args.spec))
            print(f"records computed: {computed}", file=sys.stderr)
        else:
            expect = None if args.expect is None else args.expect == "true"
            reports = [cmd_semicyclic(config, args.spec, expect)]
    except UsageError as exc:
        print(f"supportcert: error: {exc}", file=sys.stderr)
        return 2
    _emit(reports, config)
    return exit_code(reports)


if __name__ == "__main__":
    sys.exit(main())
