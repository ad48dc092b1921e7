"""Batch front end: ``phk <subcommand> [flags]``.

Every report starts with a schema line and the bounds used.  Exit status is
0 on success, 1 when a computed check fails (for example a weak-equivalence
witness) and 2 on input errors.
"""

import argparse
import sys

from .abelian import FinAb
from .cartan_leray import SpectralSequenceError, cartan_leray, check_pages
from .classifying import BundleError, borel_construction, classify_bundles, principal_bundle
from .cohomology import (CocycleError, DegreeError, LocalSystem, chain_complex, cohomology_data,
                         h1_nonabelian, homology, integral_homology, pi0, profinite_cohomology)
from .corpus import CORPUS, CorpusError, corpus
from .edgepath import ConnectivityError, edge_path_data
from .files import InputError, load_group_tower, load_map, load_space, load_tower, write_tower
from .groupcoh import ActionError
from .groups import GroupError, group_by_name, is_isomorphic
from .homotopy import (check_weak_equivalence, enumerate_coverings, hurewicz_h1, pi1_profinite,
                       pi2_tower)
from .presentations import enumerate_finite_quotients
from .simplicial import SMap, SSet, SSetError
from .towers import TowerError, TowerMap

SCHEMA = "phk-report/1"


class Report:
    def __init__(self, command, args):
        self.lines = [f"schema: {SCHEMA}", f"command: {command}"]
        for key in ("space", "tower", "map", "group"):
            val = getattr(args, key, None)
            if val is not None:
                self.lines.append(f"{key}: {val}")
        self.ok = True

    def bounds(self, **kw):
        self.lines.append("bounds: " + " ".join(f"{k}={v}" for k, v in kw.items()))

    def add(self, line):
        self.lines.append(line)

    def fail(self, line):
        self.ok = False
        self.lines.append(line)

    def check(self, ok, line):
        if ok:
            self.add(line)
        else:
            self.fail(line)

    def text(self):
        status = "ok" if self.ok else "mismatch"
        return "\n".join(self.lines + [f"status: {status}"]) + "\n"


def _mods(text, default):
    if text is None:
        return list(default)
    try:
        mods = [int(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise InputError(f"bad modulus list {text!r}") from None
    if not mods or any(m < 0 for m in mods):
        raise InputError(f"bad modulus list {text!r}")
    return mods


def _positive(value, name):
    if value is not None and value < 1:
        raise InputError(f"{name} must be positive")
    return value


def _space(args, required=True):
    if args.space is None:
        if required:
            raise InputError("--space is required")
        return None
    return load_space(args.space)


def _group(args):
    if args.group is None:
        raise InputError("--group is required")
    try:
        return group_by_name(args.group)
    except GroupError as exc:
        raise InputError(str(exc)) from None


def _degrees(args, X):
    """Degrees to report: ``--degree n`` alone, else ``0 <= n < degree_cap``."""
    if args.degree is not None:
        return [args.degree]
    cap = args.degree_cap if args.degree_cap is not None else X.dim_cap
    return list(range(cap))


def _bundle_for(X, G, mods, N):
    """First pi_1 quotient of X isomorphic to G, its local system and bundle."""
    P = edge_path_data(X).presentation
    for epi in enumerate_finite_quotients(P, N):
        if epi.order == G.order and is_isomorphic(epi.target, G):
            L = LocalSystem.from_epi(epi, mods)
            return L, principal_bundle(X, L.cocycle(X))
    raise InputError(f"pi_1 of the space has no quotient isomorphic to {G.name}")


# ----------------------------------------------------------------------------
# subcommands


def cmd_homology(args, R):
    X = _space(args)
    mods = _mods(args.mod, [0])
    degs = _degrees(args, X)
    R.bounds(degrees=f"{degs[0]}..{degs[-1]}", mod=",".join(map(str, mods)))
    C = chain_complex(X, max(degs) + 1)
    for m in mods:
        H = integral_homology(X, max(degs), C) if m == 0 else None
        for n in degs:
            val = H[n] if m == 0 else homology(X, m, n)
            tag = "" if m == 0 else f"; Z/{m}"
            R.add(f"H_{n}(X{tag}) = {val}")
    R.add("ranks: " + " ".join(f"d{n}={C.rank(n)}" for n in range(1, max(degs) + 2)))


def cmd_cohomology(args, R):
    X = _space(args)
    degs = _degrees(args, X)
    if args.tower is not None:
        T = load_group_tower(args.tower)
        R.bounds(degrees=f"{degs[0]}..{degs[-1]}", levels=len(T))
        for n in degs:
            pc = profinite_cohomology(X, T, n)
            R.add(f"H^{n} tower = {pc.tower!r}")
            R.add(f"H^{n} lim = {pc.lim}")
            R.add(f"H^{n} lim1 = {pc.lim1}")
        return
    mods = _mods(args.mod, [2])
    if any(m < 2 for m in mods):
        raise InputError("cohomology needs finite coefficients (--mod m with m >= 2)")
    M = FinAb.from_orders(mods)
    R.bounds(degrees=f"{degs[0]}..{degs[-1]}", mod=",".join(map(str, mods)))
    C = chain_complex(X, max(degs) + 1, check=False)
    for n in degs:
        R.add(f"H^{n} = {cohomology_data(X, list(M.factors), n).group}")
    R.add("ranks: " + " ".join(f"d{n}={C.rank(n)}" for n in range(1, max(degs) + 2)))


def cmd_pi0(args, R):
    if args.tower is not None:
        T = load_tower(args.tower)
        levels, maps = pi0(T)
        R.bounds(levels=len(T))
        for k, comps in enumerate(levels):
            R.add(f"level {k}: {len(comps)} components {' '.join(comps)}")
        for k, m in enumerate(maps):
            R.add(f"transition {k + 1} -> {k}: " + " ".join(f"{a}->{b}" for a, b in m.items()))
        return
    X = _space(args)
    comps = pi0(X)
    R.bounds(dim_cap=X.dim_cap)
    R.add(f"components = {len(comps)}")
    R.add("representatives: " + " ".join(comps))


def cmd_pi1(args, R):
    N = args.quotient_cap or 6
    obj = load_tower(args.tower) if args.tower is not None else _space(args)
    A = pi1_profinite(obj, N=N)
    R.bounds(quotient_cap=N)
    text = str(A.presentation)
    if len(text) > 200:
        text = f"{A.presentation.ngens} generators, {len(A.presentation.relators)} relators"
    R.add(f"presentation: {text}")
    R.add(f"quotients = {len(A.quotients)}")
    for i, q in enumerate(A.quotients):
        R.add(f"quotient {i}: {q.name} order={q.order} kernel={q.fingerprint_hex()} "
              f"factors_through={','.join(map(str, A.below[i]))}")
    if A.levels is not None:
        for k, lv in enumerate(A.levels):
            R.add(f"level {k}: " + " ".join(lv.names()))
        for k, p in enumerate(A.pullbacks):
            R.add(f"pullback {k} -> {k + 1}: " + " ".join(str(i) for i in p))


def cmd_h1(args, R):
    X, G = _space(args), _group(args)
    R.bounds(group_order=G.order)
    a = h1_nonabelian(X, G, "cocycles")
    R.add(f"classes = {len(a)}")
    try:
        b = h1_nonabelian(X, G, "presentation")
    except ConnectivityError:
        R.add("presentation oracle: skipped (space is not connected)")
        return
    R.check(len(b) == len(a), f"presentation oracle = {len(b)} classes")


def cmd_coverings(args, R):
    X = _space(args)
    k = args.quotient_cap or 4
    covs = enumerate_coverings(X, k)
    R.bounds(degree_bound=k)
    counts = {}
    for c in covs:
        counts[c.degree] = counts.get(c.degree, 0) + 1
    for d in range(1, k + 1):
        R.add(f"degree {d}: {counts.get(d, 0)}")
    for c in covs:
        R.add(f"cover degree={c.degree} counts={list(c.space.counts())} "
              f"monodromy={list(map(list, c.permutations))}")


def cmd_bundles(args, R):
    X, G = _space(args), _group(args)
    res = classify_bundles(X, G)
    R.bounds(group_order=G.order)
    R.add(f"bundles = {len(res)}")
    R.add(f"cocycles = {res.n_cocycles}")
    for i, t in enumerate(res.classes):
        R.add(f"class {i}: " + " ".join(f"{e}={v}" for e, v in zip(X.nd[1], t.as_tuple())))


def cmd_borel(args, R):
    X, G = _space(args), _group(args)
    mods = _mods(args.mod, [2])
    cap = args.degree_cap or 3
    L, B = _bundle_for(X, G, mods, args.quotient_cap or 6)
    if cap > min(X.dim_cap, B.E.dim_cap):
        raise InputError(f"degree cap {cap} exceeds the dimension cap of the space")
    Y, f = borel_construction(B, cap)
    R.bounds(degree_cap=cap, mod=",".join(map(str, mods)))
    R.add(f"borel counts = {list(Y.counts())}")
    for n in range(cap):
        hy = cohomology_data(Y, mods, n).group
        hx = cohomology_data(X, mods, n).group
        R.check(hy == hx, f"H^{n}: borel={hy} base={hx}")


def cmd_cartan_leray(args, R):
    X, G = _space(args), _group(args)
    mods = _mods(args.mod, [2])
    L, B = _bundle_for(X, G, mods, args.quotient_cap or 6)
    cap = args.degree_cap
    ss = cartan_leray(X, B, L, cap)
    R.bounds(cap=ss.cap, mod=",".join(map(str, mods)))
    for line in ss.format().splitlines():
        R.add(line)
    R.check(ss.e2_ok(), f"e2_matches_group_cohomology = {ss.e2_ok()}")
    R.check(ss.abutment_ok(), f"abutment_matches = {ss.abutment_ok()}")
    for p in check_pages(ss):
        R.fail(f"page check: {p}")


def cmd_hurewicz(args, R):
    X = _space(args)
    mods = _mods(args.mod, [2, 3, 4, 5, 6])
    rep = hurewicz_h1(X, tuple(mods))
    R.bounds(mod=",".join(map(str, mods)))
    R.add(f"pi1_ab = {rep.abelianization}")
    for r in rep.rows:
        R.check(r.agree, f"m={r.modulus}: pi1_ab/m = {r.abelianized} H_1(X; Z/m) = {r.homology}")


def cmd_pi2(args, R):
    X = _space(args)
    mods = _mods(args.mod, [2, 3, 5])
    N = args.quotient_cap or 6
    P = pi2_tower(X, N, tuple(mods))
    R.bounds(quotient_cap=N, mod=",".join(map(str, mods)))
    R.add("chain: " + " <- ".join(P.chain))
    for m, T in P.towers.items():
        R.add(f"m={m}: {T!r}")


def cmd_check_we(args, R):
    if args.map is not None:
        f = load_map(args.map)
    else:
        X = _space(args)
        f = SMap.identity(X)
    dc = args.degree_cap if args.degree_cap is not None else 2
    v = check_weak_equivalence(f, dc, args.coeff_cap or 4, args.quotient_cap or 6)
    R.bounds(**v.bounds)
    R.add(f"verdict: {v.status}")
    for p in v.probes:
        R.add("probe: " + " ".join(map(str, p)))
    if not v.passed:
        w = v.witness
        R.fail(f"witness: invariant={w.invariant} coefficient={w.coefficient} degree={w.degree} "
               f"source={w.source_value} target={w.target_value} note={w.note}")
        R.add(f"summary: {w}")


def cmd_corpus(args, R):
    if args.space is None and args.tower is not None:
        args.space = args.tower
    if args.space is None:
        R.bounds(entries=len(CORPUS))
        for name, e in CORPUS.items():
            params = " ".join(f"{k}={v}" for k, v in e.params.items())
            R.add(f"entry: {name} [{params}] {e.description}")
            for key, (val, prov) in e.expected.items():
                R.add(f"  expected {key} = {val} ({prov})")
        return
    try:
        obj = corpus(args.space)
    except CorpusError as exc:
        raise InputError(str(exc.args[0])) from None
    R.bounds(**CORPUS[args.space].params)
    if isinstance(obj, SSet):
        if args.out is not None:
            with open(args.out, "w") as fh:
                fh.write(obj.to_json())
            R.add(f"wrote {args.out}")
        else:
            R.add(obj.to_json().rstrip("\n"))
        args.out = None
        return
    if isinstance(obj, TowerMap):
        obj = obj.target
        R.add("emitting the target tower of the map")
    if args.out is None:
        raise InputError("towers are written as a directory; pass --out DIR")
    R.add(f"wrote {write_tower(obj, args.out)}")
    args.out = None


def cmd_validate(args, R):
    if args.tower is not None:
        T = load_tower(args.tower)
        R.bounds(levels=len(T))
        R.add(f"tower valid: {len(T)} levels")
        return
    X = _space(args)
    X.check_identities()
    chain_complex(X, X.dim_cap, check=True)
    R.bounds(dim_cap=X.dim_cap)
    R.add(f"counts = {list(X.counts())}")
    R.add("simplicial identities: ok")
    R.add("boundary squares to zero: ok")


COMMANDS = {
    "cohomology": cmd_cohomology, "homology": cmd_homology, "pi0": cmd_pi0, "pi1": cmd_pi1,
    "h1": cmd_h1, "coverings": cmd_coverings, "bundles": cmd_bundles, "borel": cmd_borel,
    "cartan-leray": cmd_cartan_leray, "hurewicz": cmd_hurewicz, "pi2": cmd_pi2,
    "check-we": cmd_check_we, "corpus": cmd_corpus, "validate": cmd_validate,
}


def build_parser():
    p = argparse.ArgumentParser(prog="phk", description="Finite models of profinite homotopy.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--space", help="corpus name or SSet JSON file")
    p.add_argument("--tower", help="tower file or corpus name; for cohomology a group tower "
                                   "file or a modulus list a,b,c")
    p.add_argument("--map", help="map file or corpus name (check-we)")
    p.add_argument("--group", help="catalogue group name such as C2, S3, Q8")
    p.add_argument("--mod", help="modulus list m[,m...]; 0 means integral (homology)")
    p.add_argument("--degree", type=int, help="single degree to report")
    p.add_argument("--degree-cap", type=int)
    p.add_argument("--coeff-cap", type=int)
    p.add_argument("--quotient-cap", type=int)
    p.add_argument("--out", help="write the report (or emitted object) here")
    p.add_argument("--seed", type=int, default=0,
                   help="recorded in the report; the computations use no randomness")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    R = Report(args.command, args)
    try:
        for name in ("degree_cap", "coeff_cap", "quotient_cap"):
            _positive(getattr(args, name), "--" + name.replace("_", "-"))
        if args.degree is not None and args.degree < 0:
            raise InputError("--degree must be non-negative")
        COMMANDS[args.command](args, R)
    except SSetError as exc:
        where = f" (simplex {exc.simplex})" if exc.simplex is not None else ""
        print(f"phk: invalid input: {exc}{where}", file=sys.stderr)
        return 2
    except (InputError, DegreeError, CocycleError, TowerError, ConnectivityError, GroupError,
            BundleError, SpectralSequenceError, ActionError, CorpusError) as exc:
        print(f"phk: input error: {exc}", file=sys.stderr)
        return 2
    R.add(f"seed: {args.seed}")
    text = R.text()
    if args.out is not None:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if R.ok else 1


if __name__ == "__main__":
    sys.exit(main())
