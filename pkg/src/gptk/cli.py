"""Batch command-line interface over model files.

Every command loads a JSON model file, runs the requested checks and prints
a deterministic report (or a JSON document with --json).  Exit codes: 0 when
all checks pass, 1 when a property the theory guarantees fails to hold on
the instance, 2 for input, validation or resource errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import composite, dacey, logic, modj, ous, testspace as ts_mod
from .channel import (
    compose_linear,
    induced_morphism,
    is_channel,
    is_process,
    markov_compose,
    markov_dual,
    restrict_to_sub_ous,
)
from .errors import GptkError, InputError
from .linalg import vec
from .modelfile import ModelFile, OutcomeSerializer, format_rational, load, parse_rational
from .testspace import canon_key


class Report:
    def __init__(self):
        self.lines = []
        self.data = {}
        self.violations = 0

    def line(self, text):
        self.lines.append(text)

    def record(self, key, value):
        self.data[key] = value

    def check(self, name, ok):
        self.line(f"check {name}: {'pass' if ok else 'FAIL'}")
        self.data.setdefault("checks", {})[name] = bool(ok)
        if not ok:
            self.violations += 1


def _fmt_vec(v):
    return "(" + ", ".join(format_rational(x) for x in v) + ")"


def _fmt_weight(w, outcomes, ser):
    parts = []
    for x in outcomes:
        parts.append(f"{json.dumps(ser.outcome(x), sort_keys=True)}={format_rational(w[x])}")
    return "{" + ", ".join(parts) + "}"


def cmd_validate(mf: ModelFile, args, rep: Report):
    counts = {
        "spaces": len(mf.spaces), "effects": len(mf.effects),
        "testspaces": len(mf.testspaces), "models": len(mf.models),
        "space_states": len(mf.space_states), "valued_weights": len(mf.valued_weights),
        "catalogs": len(mf.catalogs), "channels": len(mf.channels),
        "kernels": len(mf.kernels), "bilinear_rules": len(mf.bilinear_rules),
        "effect_algebras": len(mf.effect_algebras), "joint_weights": len(mf.joint_weights),
    }
    for key in sorted(counts):
        rep.line(f"{key}: {counts[key]}")
    rep.record("counts", counts)
    rep.line("validation: ok")


def cmd_states(mf: ModelFile, args, rep: Report):
    sp = mf.space(args.space)
    verts = ous.state_polytope_vertices(sp)
    rep.line(f"space {args.space}: dim {sp.dim}, {len(verts)} state vertices")
    for v in verts:
        rep.line("  " + _fmt_vec(v))
    rep.record("vertices", [[format_rational(x) for x in v] for v in verts])


def cmd_weights(mf: ModelFile, args, rep: Report):
    ts = mf.testspace(args.testspace)
    ser = OutcomeSerializer()
    verts = ts_mod.weight_polytope_vertices(ts)
    rep.line(f"testspace {args.testspace}: {len(ts.outcomes)} outcomes, "
             f"{len(ts.tests)} tests, {len(verts)} weight vertices")
    for w in verts:
        rep.line("  " + _fmt_weight(w, ts.outcomes, ser))
    rep.record("vertices", [
        {json.dumps(ser.outcome(x), sort_keys=True): format_rational(w[x]) for x in ts.outcomes}
        for w in verts])


def cmd_modj(mf: ModelFile, args, rep: Report):
    sp = mf.space(args.space)
    cat = mf.catalogs.get(args.catalog)
    if cat is None:
        raise InputError(f"unknown catalog {args.catalog!r}")
    mod = modj.build_modj(sp, cat)
    rep.line(f"fragment: {len(mod.testspace.tests)} tests, "
             f"{len(mod.testspace.outcomes)} outcomes, {len(mod.model.states)} lifted states")
    rep.record("tests", len(mod.testspace.tests))
    rep.record("outcomes", len(mod.testspace.outcomes))
    if args.lemma1:
        report = modj.lemma1_check(sp, cat)
        rep.line(f"lemma1 closed: {report.closed}")
        rep.record("closed", report.closed)
        if not report.closed:
            for i, j, a in report.missing:
                rep.line(f"  missing binary completions for indices {i},{j} "
                         f"at effect {_fmt_vec(a)}")
            rep.record("missing", len(report.missing))
        else:
            rep.line(f"lemma1 max_gap: {format_rational(report.max_gap)}")
            rep.line(f"lemma1 extension_ok: {report.extension_ok}")
            rep.record("max_gap", format_rational(report.max_gap))
            rep.record("extension_ok", report.extension_ok)
            rep.check("perspectivity forces weight equality", report.max_gap == 0)


def cmd_logic(mf: ModelFile, args, rep: Report):
    if args.star:
        l = mf.effect_algebras.get(args.star[0])
        m = mf.effect_algebras.get(args.star[1])
        if l is None or m is None:
            raise InputError("unknown effect algebra in --star")
        prod = logic.star_product(l, m)
        rep.line(f"star product: {len(prod.elements)} elements, "
                 f"{len(prod.osum)} defined sums")
        rep.line(f"orthoalgebra: {logic.is_orthoalgebra(prod)}")
        rep.record("elements", len(prod.elements))
        return
    if args.testspace is None:
        raise InputError("logic needs a testspace or --star")
    ts = mf.testspace(args.testspace)
    if args.iso_check is not None:
        sp = mf.space(args.iso_check)
        n = args.chain
        if n is None:
            raise InputError("--iso-check needs --chain N")
        chain = [vec(Fraction(k, n) * u for u in sp.unit) for k in range(1, n + 1)]
        ok = logic.star_logic_iso_check(sp, ts, chain)
        rep.check(f"logic of fragment matches paired product (chain {n})", ok)
        return
    lg = logic.logic_of(ts)
    rep.line(f"logic: {len(lg.classes)} perspectivity classes")
    rep.line(f"orthoalgebra: {logic.is_orthoalgebra(lg.algebra)}")
    rep.record("classes", len(lg.classes))


def cmd_channel(mf: ModelFile, args, rep: Report):
    phi = mf.channels.get(args.name)
    if phi is None:
        raise InputError(f"unknown channel {args.name!r}")
    proc, chan = is_process(phi), is_channel(phi)
    rep.line(f"process: {proc}")
    rep.line(f"channel: {chan}")
    rep.record("process", proc)
    rep.record("channel", chan)
    if proc and not chan:
        sub = restrict_to_sub_ous(phi)
        rep.line(f"restriction to range sub-space: dim {sub.codomain.dim}, "
                 f"channel: {is_channel(sub)}")
        rep.check("restricted map is a channel", is_channel(sub))
    if args.induce:
        cat = mf.catalogs.get(args.induce)
        if cat is None:
            raise InputError(f"unknown catalog {args.induce!r}")
        if not chan:
            raise InputError("--induce requires a channel")
        im = induced_morphism(phi, cat)
        rep.line(f"induced morphism: {len(im.outcome_map)} outcomes mapped, "
                 f"{len(im.excluded)} excluded (zero image)")
        rep.check("induced morphism is test-preserving", im.test_preserving)


def cmd_kernel_compose(mf: ModelFile, args, rep: Report):
    k = mf.kernels.get(args.k)
    j = mf.kernels.get(args.j)
    if k is None or j is None:
        raise InputError("unknown kernel name")
    comp = markov_compose(j, k)
    rep.line("composite kernel (j after k):")
    for row in comp.matrix:
        rep.line("  " + _fmt_vec(row))
    rep.record("matrix", [[format_rational(x) for x in row] for row in comp.matrix])
    lhs = markov_dual(comp)
    rhs = compose_linear(markov_dual(k), markov_dual(j))
    rep.check("dual of composite equals reversed composite of duals",
              lhs.matrix == rhs.matrix)
    rep.check("duals are channels",
              is_channel(markov_dual(k)) and is_channel(markov_dual(j)))


def cmd_compose(mf: ModelFile, args, rep: Report):
    rule = mf.bilinear_rules.get(args.rule)
    if rule is None:
        raise InputError(f"unknown bilinear rule {args.rule!r}")
    cat_a = mf.catalogs.get(args.catalog_a)
    cat_b = mf.catalogs.get(args.catalog_b)
    if cat_a is None or cat_b is None:
        raise InputError("unknown catalog name")
    mm = composite.monoidal_map(rule, cat_a, cat_b)
    rep.line(f"composite fragment: {len(mm.fragment.testspace.tests)} tests, "
             f"{len(mm.fragment.testspace.outcomes)} outcomes, "
             f"{len(mm.excluded)} boundary exclusions")
    rep.check("composite map is test-preserving", mm.test_preserving)
    if args.check_monoidality:
        ok = composite.monoidality_check(rule, cat_a, cat_b)
        rep.check("pullbacks of composite states are non-signalling with "
                  "state-extendable conditionals", ok)
    if args.flags:
        flags = composite.composite_flags(mm.fragment.model, mm)
        rep.line(f"strong: {flags['strong']}")
        rep.line(f"locally_tomographic: {flags['locally_tomographic']}")
        rep.record("strong", flags["strong"])
        rep.record("locally_tomographic", flags["locally_tomographic"])


def cmd_tensor(mf: ModelFile, args, rep: Report):
    a = mf.space(args.a)
    b = mf.space(args.b)
    v = tuple(parse_rational(x.strip(), "--vector") for x in args.vector.split(","))
    if args.cone == "min":
        member = composite.min_cone_contains(a, b, v)
    else:
        member = composite.max_cone_contains(a, b, v)
    rep.line(f"{args.cone}-cone membership: {member}")
    rep.record("member", member)
    if composite.min_cone_contains(a, b, v):
        rep.check("cone sandwich (min inside max)",
                  composite.max_cone_contains(a, b, v))


def cmd_dacey(mf: ModelFile, args, rep: Report):
    ts = mf.testspace(args.testspace)
    cover = dacey.dacey_cover(ts)
    rep.line(f"coarse-graining: {len(cover.m_sharp.tests)} tests, "
             f"{len(cover.m_sharp.outcomes)} outcomes")
    rep.line(f"dacey cover: {len(cover.cover.tests)} tests, "
             f"{len(cover.cover.outcomes)} outcomes")
    rep.record("sharp_tests", len(cover.m_sharp.tests))
    rep.record("cover_outcomes", len(cover.cover.outcomes))
    factor_ok = all(
        frozenset(cover.pi(p) for p in cover.psi(ev)) == ev
        for ev in cover.m_sharp.outcomes)
    rep.check("canonical morphism factors through the cover", factor_ok)
    if args.weight:
        f = mf.valued_weights.get(args.weight)
        if f is None:
            raise InputError(f"unknown valued weight {args.weight!r}")
        if f.testspace != ts:
            raise InputError("valued weight lives on a different test space")
        if args.derandomize:
            d = dacey.derandomize(f)
            ser = OutcomeSerializer()
            rep.line(f"hat test space: {len(d.hat_testspace.tests)} tests, "
                     f"{len(d.hat_testspace.outcomes)} coarse outcomes")
            for block in d.hat_testspace.outcomes:
                key = json.dumps(ser.outcome(block), sort_keys=True)
                rep.line(f"  F^({key}) = {_fmt_vec(d.hat_weight.values[block])}")
                die = d.dice[block]
                for x in sorted(die, key=canon_key):
                    rep.line(f"    p({json.dumps(ser.outcome(x))}) = "
                             f"{format_rational(die[x])}")
            if d.equal_sum_diagnostics:
                rep.line(f"diagnostics: {len(d.equal_sum_diagnostics)} coarse outcome "
                         "pairs share a value (cover map not locally injective)")
            if args.state:
                if args.state not in mf.space_states:
                    raise InputError(f"unknown state {args.state!r}")
                sp_name, func = mf.space_states[args.state]
                if mf.space(sp_name) != f.space:
                    raise InputError("state belongs to a different space")
                rep.check("de-randomized weight simulates the original",
                          dacey.simulate_check(d, func))


def build_parser():
    p = argparse.ArgumentParser(prog="gptk",
                                description="exact checks for test-space models")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, fn, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        sp.add_argument("file")
        sp.set_defaults(fn=fn)
        return sp

    cmd("validate", cmd_validate)
    sp = cmd("states", cmd_states)
    sp.add_argument("space")
    sp = cmd("weights", cmd_weights)
    sp.add_argument("testspace")
    sp = cmd("modj", cmd_modj)
    sp.add_argument("space")
    sp.add_argument("catalog")
    sp.add_argument("--lemma1", action="store_true")
    sp = cmd("logic", cmd_logic)
    sp.add_argument("testspace", nargs="?")
    sp.add_argument("--star", nargs=2, metavar=("L", "M"))
    sp.add_argument("--iso-check", metavar="SPACE")
    sp.add_argument("--chain", type=int)
    sp = cmd("channel", cmd_channel)
    sp.add_argument("name")
    sp.add_argument("--induce", metavar="CATALOG")
    sp = cmd("kernel-compose", cmd_kernel_compose)
    sp.add_argument("k")
    sp.add_argument("j")
    sp = cmd("compose", cmd_compose)
    sp.add_argument("rule")
    sp.add_argument("catalog_a")
    sp.add_argument("catalog_b")
    sp.add_argument("--check-monoidality", action="store_true")
    sp.add_argument("--flags", action="store_true")
    sp = cmd("tensor", cmd_tensor)
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--cone", choices=["min", "max"], required=True)
    sp.add_argument("--vector", required=True)
    sp = cmd("dacey", cmd_dacey)
    sp.add_argument("testspace")
    sp.add_argument("--weight")
    sp.add_argument("--derandomize", action="store_true")
    sp.add_argument("--state")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    rep = Report()
    try:
        mf = load(args.file)
        args.fn(mf, args, rep)
    except GptkError as exc:
        if args.json:
            print(json.dumps({"error": str(exc)}, sort_keys=True))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        payload = dict(rep.data)
        payload["violations"] = rep.violations
        print(json.dumps(payload, sort_keys=True, default=str))
    else:
        for line in rep.lines:
            print(line)
        print("RESULT: " + ("ok" if rep.violations == 0 else
                            f"{rep.violations} violation(s)"))
    return 0 if rep.violations == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
