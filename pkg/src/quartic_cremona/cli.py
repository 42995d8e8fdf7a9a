"""Command-line pipeline: tensor generation, construction, symbolic and
finite-field verification, lattice certificates, consolidated JSON reports.

Exit codes: 0 all requested checks pass (CONDITIONAL counts as a pass unless
--strict-axioms is given), 1 a check failed (witnesses are in the report),
2 usage error.
"""

import argparse
import json
import sys
from dataclasses import dataclass, field

from .certificates import CONDITIONAL, FAIL, PASS
from .cremona import (
    chow_intersect,
    chow_nonlinearity_certificate,
    compose_common_factor,
    euler_char_check,
    map_degree,
    projective_compose_check,
    pushforward_check,
    transformation_pair,
)
from .determinantal import (
    DeterminantalPair,
    Tensor4,
    bilinear_identity_check,
    random_tensor,
)
from .domains import CoefficientDomain
from .lattice import (
    GramMatrix,
    boundary_rays,
    cremona_obstruction_check,
    discriminant_group,
    isometries_mapping,
    noether_fano_check,
    projective_obstruction,
)
from .report import (
    build_report,
    jsonable,
    render_report,
    report_schema_validate,
    validation_errors,
    write_report_atomic,
)
from .verify_fp import correspondence_certificate, smooth_check


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Validated invocation parameters; invalid input raises UsageError."""

    command: str
    seed: int = 0
    domain: str = "fp"
    prime: int = 101
    ell: int = 5
    gram: list = None
    tensor_path: str = None
    out: str = None
    allow_axioms: bool = True
    verbosity: int = 1
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.domain not in ("q", "fp"):
            raise UsageError(f"unknown domain {self.domain!r} (use 'q' or 'fp')")
        if self.prime < 2:
            raise UsageError("prime must be >= 2")
        if self.ell < 2:
            raise UsageError("ell must be >= 2")
        if self.gram is not None:
            try:
                GramMatrix(self.gram)
            except (ValueError, TypeError) as exc:
                raise UsageError(f"bad gram matrix: {exc}") from exc

    def coefficient_domain(self):
        if self.domain == "q":
            return CoefficientDomain.rationals()
        return CoefficientDomain.prime_field(self.prime)

    def load_tensor(self):
        if self.tensor_path:
            return Tensor4.load(self.tensor_path)
        return random_tensor(self.seed, self.coefficient_domain())

    def to_json(self):
        doc = {
            "command": self.command,
            "seed": self.seed,
            "domain": self.domain,
            "prime": self.prime,
        }
        if self.gram is not None:
            doc["gram"] = self.gram
        if self.tensor_path:
            doc["tensor"] = self.tensor_path
        if self.command.startswith("lattice") or self.command == "verify":
            doc["ell"] = self.ell
        doc["allow_axioms"] = self.allow_axioms
        # QC_THREADS is deliberately not recorded: reports must be
        # byte-identical across thread counts
        doc.update(jsonable(self.extra))
        return doc


def _section(name, certificate=None, data=None, verdict=None):
    sec = {"name": name}
    if certificate is not None:
        sec["certificate"] = certificate.to_dict()
        sec["verdict"] = certificate.verdict
    if data is not None:
        sec["data"] = jsonable(data)
    if verdict is not None:
        sec["verdict"] = verdict
    return sec


def _overall(sections, allow_axioms):
    verdicts = [s["verdict"] for s in sections if s["verdict"] != "INFO"]
    if any(v == FAIL for v in verdicts):
        return FAIL
    if any(v == CONDITIONAL for v in verdicts):
        return CONDITIONAL if not allow_axioms else CONDITIONAL
    return PASS


def _finish(cfg: RunConfig, sections) -> int:
    overall = _overall(sections, cfg.allow_axioms)
    doc = build_report(cfg.command, cfg.to_json(), sections, overall)
    if not report_schema_validate(doc):
        raise AssertionError(f"generated report violates the schema: {validation_errors(doc)}")
    if cfg.out:
        write_report_atomic(doc, cfg.out)
        if cfg.verbosity:
            print(f"report written to {cfg.out}")
    else:
        sys.stdout.write(render_report(doc))
    if cfg.verbosity:
        for sec in sections:
            print(f"[{sec['verdict']}] {sec['name']}", file=sys.stderr)
        print(f"overall: {overall}", file=sys.stderr)
    if overall == FAIL:
        return 1
    if overall == CONDITIONAL and not cfg.allow_axioms:
        return 1
    return 0


# --- subcommand bodies --------------------------------------------------------


def cmd_gen_tensor(cfg: RunConfig) -> int:
    tensor = random_tensor(cfg.seed, cfg.coefficient_domain())
    doc = tensor.to_json()
    if cfg.out:
        tensor.dump(cfg.out)
        if cfg.verbosity:
            print(f"tensor written to {cfg.out}")
    else:
        print(json.dumps(doc, indent=2, sort_keys=True))
    return 0


def cmd_construct(cfg: RunConfig) -> int:
    pair = DeterminantalPair.from_tensor(cfg.load_tensor())
    data = {
        "degenerate": pair.degenerate,
        "F1": str(pair.F1),
        "F2": str(pair.F2),
        "Q": [str(q) for q in pair.Q],
        "M": [[str(e) for e in row] for row in pair.M.entries],
        "N": [[str(e) for e in row] for row in pair.N.entries],
    }
    sections = [
        _section("construction", data=data, verdict=PASS if not pair.degenerate else FAIL)
    ]
    if pair.degenerate:
        sections[0]["certificate"] = {
            "verdict": FAIL,
            "steps": [{"claim": "determinant nonzero", "evidence": "a determinant vanishes identically"}],
            "witnesses": [["degenerate"]],
            "axioms": [],
        }
    return _finish(cfg, sections)


def cmd_verify_identity(cfg: RunConfig) -> int:
    tensor = cfg.load_tensor()
    ok = bilinear_identity_check(tensor)
    from .certificates import Step, conclude

    cert = conclude(
        [Step("M(x) y^t - N(y) x^t = 0 row by row", f"identity holds: {ok}")],
        [] if ok else [["identity broken"]],
    )
    return _finish(cfg, [_section("bilinear-identity", certificate=cert)])


def cmd_cremona_verify(cfg: RunConfig) -> int:
    from .certificates import Step, conclude

    tensor = cfg.load_tensor()
    pair = DeterminantalPair.from_tensor(tensor).require_nondegenerate()
    rows = cfg.extra.get("rows", (0, 1, 2))
    tau, sigma = transformation_pair(pair, rows=rows)
    deg_tau, deg_sigma = map_degree(tau), map_degree(sigma)
    compose_ok = projective_compose_check(sigma, tau) and projective_compose_check(tau, sigma)
    push_fwd, quot_fwd = pushforward_check(pair.F1, pair.F2, tau)
    push_bwd, quot_bwd = pushforward_check(pair.F2, pair.F1, sigma)
    steps = [
        Step("map degrees after reduction", f"forward {deg_tau}, backward {deg_sigma}"),
        Step("composition is the projective identity (both ways)", str(compose_ok)),
        Step(
            "source quartic divides the pullback of the target quartic",
            f"forward: {push_fwd} (quotient degree "
            f"{quot_fwd.degree() if quot_fwd else None}), backward: {push_bwd} "
            f"(quotient degree {quot_bwd.degree() if quot_bwd else None})",
        ),
        Step("the map is not linear", f"degree {deg_tau} > 1: {deg_tau > 1}"),
    ]
    witnesses = []
    if not (compose_ok and push_fwd and push_bwd and deg_tau > 1):
        witnesses.append(["cremona-verification-failed", deg_tau, compose_ok, push_fwd, push_bwd])
    cert = conclude(steps, witnesses)
    data = {
        "tau": tau.to_strings(),
        "sigma": sigma.to_strings(),
        "tau_degree": deg_tau,
        "sigma_degree": deg_sigma,
    }
    return _finish(cfg, [_section("cremona", certificate=cert, data=data)])


def cmd_smooth_check(cfg: RunConfig) -> int:
    from .certificates import Step, conclude
    from .mpoly import reduce_mod_p

    tensor = cfg.load_tensor()
    pair = DeterminantalPair.from_tensor(tensor).require_nondegenerate()
    p = cfg.prime
    sections = []
    csv_path = cfg.extra.get("points_csv")
    for name, poly in (("S1", pair.F1), ("S2", pair.F2)):
        f = poly if poly.domain.p == p else reduce_mod_p(poly, p)
        singular, pts = smooth_check(f, p)
        steps = [
            Step(f"{name}(F_{p}) point count", str(len(pts))),
            Step(
                "singular locus over the prime field "
                "(evidence for characteristic 0, not a proof)",
                f"{len(singular)} point(s)",
            ),
        ]
        cert = conclude(steps, [list(q) for q in singular])
        sections.append(_section(f"smoothness-{name}", certificate=cert,
                                 data={"points": len(pts)}))
        if csv_path and name == "S1":
            with open(csv_path, "w", encoding="utf-8") as fh:
                fh.write("x1,x2,x3,x4\n")
                for q in pts:
                    fh.write(",".join(map(str, q)) + "\n")
    return _finish(cfg, sections)


def cmd_lattice_disc(cfg: RunConfig) -> int:
    gram = GramMatrix(cfg.gram) if cfg.gram else GramMatrix.ell_family(cfg.ell)
    group = discriminant_group(gram)
    data = group.to_json()
    return _finish(cfg, [_section("discriminant-group", data=data, verdict=PASS)])


def cmd_lattice_rays(cfg: RunConfig) -> int:
    gram = GramMatrix(cfg.gram) if cfg.gram else GramMatrix.ell_family(cfg.ell)
    r1, r2 = boundary_rays(gram)
    data = {
        "gram": gram.to_json(),
        "rays": [[str(c) for c in r1], [str(c) for c in r2]],
    }
    return _finish(cfg, [_section("boundary-rays", data=data, verdict=PASS)])


def cmd_lattice_isometries(cfg: RunConfig) -> int:
    gram = GramMatrix(cfg.gram) if cfg.gram else GramMatrix.ell_family(cfg.ell)
    u = cfg.extra.get("map_from", (1, 0))
    v = cfg.extra.get("map_to", (0, 1))
    bound = cfg.extra.get("entry_bound")
    isos = isometries_mapping(gram, u, v, entry_bound=bound)
    data = {
        "gram": gram.to_json(),
        "from": list(u),
        "to": list(v),
        "isometries": [[list(r) for r in G] for G in isos],
    }
    return _finish(cfg, [_section("isometries", data=data, verdict=PASS)])


def cmd_lattice_obstruction(cfg: RunConfig) -> int:
    cert = cremona_obstruction_check(cfg.ell)
    return _finish(cfg, [_section("cremona-obstruction", certificate=cert,
                                  data={"ell": cfg.ell})])


def cmd_lattice_projective_obstruction(cfg: RunConfig) -> int:
    gram = GramMatrix(cfg.gram) if cfg.gram else GramMatrix.ell_family(cfg.ell)
    u = cfg.extra.get("map_from", (1, 0))
    v = cfg.extra.get("map_to", (0, 1))
    cert = projective_obstruction(gram, u, v)
    return _finish(cfg, [_section("projective-obstruction", certificate=cert,
                                  data={"gram": gram.to_json()})])


def cmd_noether_fano(cfg: RunConfig) -> int:
    cert = noether_fano_check(
        cfg.extra["degree"], cfg.extra["mult"], cfg.extra["case"],
        deg_f=cfg.extra.get("deg_f"),
    )
    return _finish(cfg, [_section("noether-fano", certificate=cert)])


def cmd_verify(cfg: RunConfig) -> int:
    """Full pipeline on one tensor plus the tensor-independent certificates."""
    from .certificates import Step, conclude

    tensor = cfg.load_tensor()
    sections = []

    ok = bilinear_identity_check(tensor)
    sections.append(
        _section(
            "bilinear-identity",
            certificate=conclude(
                [Step("M(x) y^t = N(y) x^t", f"identity holds: {ok}")],
                [] if ok else [["identity broken"]],
            ),
        )
    )

    pair = DeterminantalPair.from_tensor(tensor)
    if pair.degenerate:
        sections.append(
            _section(
                "construction",
                certificate=conclude(
                    [Step("determinants nonzero", "a determinant vanishes identically")],
                    [["degenerate tensor"]],
                ),
            )
        )
        return _finish(cfg, sections)

    tau, sigma = transformation_pair(pair)
    deg_tau = map_degree(tau)
    compose_ok = projective_compose_check(sigma, tau) and projective_compose_check(tau, sigma)
    sections.append(
        _section(
            "compose",
            certificate=conclude(
                [
                    Step("map degree", str(deg_tau)),
                    Step("backward o forward = id and forward o backward = id "
                         "(projective)", str(compose_ok)),
                ],
                [] if compose_ok else [["composition is not the identity"]],
            ),
            data={"tau": tau.to_strings(), "sigma": sigma.to_strings()},
        )
    )

    push_fwd, quot_fwd = pushforward_check(pair.F1, pair.F2, tau)
    push_bwd, quot_bwd = pushforward_check(pair.F2, pair.F1, sigma)
    quot_degrees = (
        quot_fwd.degree() if quot_fwd else None,
        quot_bwd.degree() if quot_bwd else None,
    )
    sections.append(
        _section(
            "pushforward",
            certificate=conclude(
                [
                    Step(
                        "F1 | F2(tau) and F2 | F1(sigma)",
                        f"{push_fwd} and {push_bwd}, quotient degrees {quot_degrees}",
                    )
                ],
                [] if push_fwd and push_bwd else [["pushforward failed"]],
            ),
        )
    )

    cert, fp = correspondence_certificate(tensor, cfg.prime)
    sections.append(_section("smoothness", certificate=conclude(
        [
            Step(f"S1(F_{cfg.prime}) singular points", str(len(fp.singular_s1))),
            Step(f"S2(F_{cfg.prime}) singular points", str(len(fp.singular_s2))),
            Step("statement scope", "evidence for characteristic 0, not a proof"),
        ],
        [list(q) for q in fp.singular_s1 + fp.singular_s2],
    )))
    sections.append(_section("bijection", certificate=cert, data=fp.to_dict()))

    sections.append(_section("intersection-numbers",
                             certificate=chow_nonlinearity_certificate()))
    sections.append(
        _section(
            "section-counts",
            certificate=conclude(
                [
                    Step(
                        "h^0(n(h1+h2)) = 10 n^2 + 2 for n = 0..5",
                        str([euler_char_check(n) for n in range(6)]),
                    )
                ],
            ),
        )
    )

    cert_obs = cremona_obstruction_check(cfg.ell)
    sections.append(_section("cremona-obstruction", certificate=cert_obs,
                             data={"ell": cfg.ell}))
    cert_proj = projective_obstruction(GramMatrix.DETERMINANTAL, (1, 0), (0, 1))
    sections.append(_section("projective-obstruction", certificate=cert_proj))

    return _finish(cfg, sections)


def cmd_report_validate(cfg: RunConfig) -> int:
    with open(cfg.extra["path"], encoding="utf-8") as fh:
        doc = json.load(fh)
    ok = report_schema_validate(doc)
    if cfg.verbosity:
        print("valid" if ok else "invalid", file=sys.stderr)
        if not ok:
            for msg in validation_errors(doc):
                print(f"  {msg}", file=sys.stderr)
    return 0 if ok else 1


# --- argument parsing -----------------------------------------------------------


def _add_tensor_args(sub):
    sub.add_argument("--seed", type=int, default=0, help="64-bit PRNG seed")
    sub.add_argument("--domain", choices=("q", "fp"), default="fp")
    sub.add_argument("--prime", type=int, default=101)
    sub.add_argument("--tensor", help="read the tensor from a JSON file instead")


def _add_common(sub):
    sub.add_argument("--out", help="write the JSON report here (atomic)")
    sub.add_argument("--quiet", action="store_true")
    sub.add_argument(
        "--strict-axioms",
        action="store_true",
        help="treat CONDITIONAL verdicts as failures",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qcremona",
        description="determinantal quartic surface pairs, the Cremona map "
        "between them, and the lattice certificates separating isomorphism "
        "classes",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("gen-tensor", help="write a seeded tensor as JSON")
    _add_tensor_args(s)
    _add_common(s)

    s = subs.add_parser("construct", help="matrices, quartics and (1,1)-forms")
    _add_tensor_args(s)
    _add_common(s)

    s = subs.add_parser("verify-identity", help="check M(x) y^t = N(y) x^t")
    _add_tensor_args(s)
    _add_common(s)

    s = subs.add_parser("cremona-verify", help="map degree, composition, pushforward")
    _add_tensor_args(s)
    _add_common(s)
    s.add_argument("--rows", default="0,1,2", help="3-subset of rows, e.g. '0,1,3'")

    s = subs.add_parser("smooth-check", help="finite-field smoothness evidence")
    _add_tensor_args(s)
    _add_common(s)
    s.add_argument("--points-csv", help="dump the surface points as CSV")

    lat = subs.add_parser("lattice", help="lattice computations and certificates")
    lat_subs = lat.add_subparsers(dest="lattice_command", required=True)
    for name, helptext in (
        ("disc", "discriminant group"),
        ("rays", "boundary rays of the positive cone"),
        ("isometries", "isometries with a prescribed image"),
        ("obstruction", "curve-class divisibility scan"),
        ("projective-obstruction", "no automorphism sends u to v"),
    ):
        s = lat_subs.add_parser(name, help=helptext)
        s.add_argument("--gram", help='JSON matrix, e.g. "[[4,6],[6,4]]"')
        s.add_argument("--ell", type=int, default=5)
        if name in ("isometries", "projective-obstruction"):
            s.add_argument("--map-from", default="1,0")
            s.add_argument("--map-to", default="0,1")
        if name == "isometries":
            s.add_argument("--entry-bound", type=int)
        _add_common(s)

    s = subs.add_parser("noether-fano", help="discrepancy-order arithmetic")
    s.add_argument("--case", required=True,
                   choices=("point", "curve-off-surface", "curve-in-surface"))
    s.add_argument("-d", "--degree", type=int, required=True)
    s.add_argument("-m", "--mult", type=int, required=True)
    s.add_argument("--deg-f", type=int)
    _add_common(s)

    s = subs.add_parser("verify", help="full pipeline on one tensor")
    _add_tensor_args(s)
    s.add_argument("--ell", type=int, default=5)
    _add_common(s)

    s = subs.add_parser("report-validate", help="validate a report against the schema")
    s.add_argument("path")
    _add_common(s)

    return parser


def _int_pair(text):
    parts = [int(x) for x in text.split(",")]
    if len(parts) != 2:
        raise UsageError(f"expected two comma-separated integers, got {text!r}")
    return tuple(parts)


def _config_from_args(args) -> RunConfig:
    command = args.command
    extra = {}
    if command == "lattice":
        command = f"lattice-{args.lattice_command}"
    gram = None
    if getattr(args, "gram", None):
        try:
            gram = json.loads(args.gram)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--gram is not valid JSON: {exc}") from exc
    if hasattr(args, "map_from"):
        extra["map_from"] = _int_pair(args.map_from)
        extra["map_to"] = _int_pair(args.map_to)
    if getattr(args, "entry_bound", None) is not None:
        extra["entry_bound"] = args.entry_bound
    if command == "cremona-verify":
        rows = tuple(int(r) for r in args.rows.split(","))
        if len(set(rows)) != 3:
            raise UsageError("--rows needs three distinct indices")
        extra["rows"] = rows
    if command == "noether-fano":
        extra.update(case=args.case, degree=args.degree, mult=args.mult)
        if args.deg_f is not None:
            extra["deg_f"] = args.deg_f
    if command == "smooth-check" and getattr(args, "points_csv", None):
        extra["points_csv"] = args.points_csv
    if command == "report-validate":
        extra["path"] = args.path
    return RunConfig(
        command=command,
        seed=getattr(args, "seed", 0),
        domain=getattr(args, "domain", "fp"),
        prime=getattr(args, "prime", 101),
        ell=getattr(args, "ell", 5),
        gram=gram,
        tensor_path=getattr(args, "tensor", None),
        out=getattr(args, "out", None),
        allow_axioms=not getattr(args, "strict_axioms", False),
        verbosity=0 if getattr(args, "quiet", False) else 1,
        extra=extra,
    )


_DISPATCH = {
    "gen-tensor": cmd_gen_tensor,
    "construct": cmd_construct,
    "verify-identity": cmd_verify_identity,
    "cremona-verify": cmd_cremona_verify,
    "smooth-check": cmd_smooth_check,
    "lattice-disc": cmd_lattice_disc,
    "lattice-rays": cmd_lattice_rays,
    "lattice-isometries": cmd_lattice_isometries,
    "lattice-obstruction": cmd_lattice_obstruction,
    "lattice-projective-obstruction": cmd_lattice_projective_obstruction,
    "noether-fano": cmd_noether_fano,
    "verify": cmd_verify,
    "report-validate": cmd_report_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return _DISPATCH[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
