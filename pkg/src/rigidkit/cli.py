"""Command-line surface: analyze, transform, mc, example, render.

Exit codes are a stable contract: 0 = rigid (or success for non-verdict
commands), 10 = flexible, 2 = input error, 3 = conversion failure.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import gallery, kinematics, maxwell_cremona as mc, statics, svg, transforms
from ._linalg import RANK_TOL
from .errors import InternalInvariantError, MaxwellCremonaError, RigidkitError
from .frameworks import (
    Framework,
    FrameworkDocument,
    framework_to_dict,
    is_spanning,
    load_framework,
)
from .graphs import laman_check
from .kinematics import VectorField
from .statics import Load, Stress, stress_from_dict

EXIT_RIGID = 0
EXIT_OK = 0
EXIT_FLEXIBLE = 10
EXIT_INPUT = 2
EXIT_CONVERSION = 3


def default_tol() -> float:
    env = os.environ.get("RIGIDKIT_TOL")
    return float(env) if env else RANK_TOL


@dataclass
class AnalysisReport:
    """Everything cmd_analyze prints; kinematic and static dof must agree
    (static-kinematic duality), enforced as an internal self-check."""

    n: int
    m: int
    space: str
    spanning: bool
    dim_V: int
    dim_V0: int
    dim_F: int
    dim_F0: int
    kinematic_dof: int
    static_dof: int
    self_stress_count: int
    smallest_sigma: tuple
    rigid: bool
    laman: bool = None
    warnings: tuple = ()

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["warnings"] = list(self.warnings)
        d["smallest_sigma"] = [None if np.isnan(s) else float(s) for s in self.smallest_sigma]
        return d

    def to_text(self) -> str:
        lines = [
            "framework: %s, %d vertices, %d edges%s"
            % (self.space, self.n, self.m, "" if self.spanning else " (not spanning)"),
            "kinematic: dim V = %d, dim V0 = %d, dof = %d"
            % (self.dim_V, self.dim_V0, self.kinematic_dof),
            "static:    dim F = %d, dim F0 = %d, dof = %d, self-stresses = %d"
            % (self.dim_F, self.dim_F0, self.static_dof, self.self_stress_count),
            "smallest singular values: %s"
            % ", ".join("%.3e" % s for s in self.smallest_sigma if not np.isnan(s)),
            "verdict: %s" % ("infinitesimally rigid" if self.rigid else "flexible"),
        ]
        if self.laman is not None:
            lines.append("Laman graph: %s" % ("yes" if self.laman else "no"))
        for w in self.warnings:
            lines.append("warning: %s" % w)
        return "\n".join(lines)


def analyze_framework(fw: Framework, tol=None) -> AnalysisReport:
    tol = default_tol() if tol is None else tol
    ms = kinematics.motion_spaces(fw, tol)
    ss = statics.static_spaces(fw, tol)
    if ms.kinematic_dof != ss.static_dof:
        raise InternalInvariantError(
            "kinematic dof %d != static dof %d" % (ms.kinematic_dof, ss.static_dof)
        )
    warnings = []
    spanning = is_spanning(fw, tol)
    if not spanning:
        warnings.append("vertices lie in a proper geodesic subspace; "
                        "dim V0 computed from the evaluation rank")
    if fw.n and np.allclose(fw.coords, fw.coords[0]):
        warnings.append("all vertices coincide")
    sigma = ms.smallest_sigma
    return AnalysisReport(
        n=fw.n, m=fw.m, space=str(fw.space), spanning=spanning,
        dim_V=ms.dim_V, dim_V0=ms.dim_V0, dim_F=ss.dim_F, dim_F0=ss.dim_F0,
        kinematic_dof=ms.kinematic_dof, static_dof=ss.static_dof,
        self_stress_count=ss.self_stress_count,
        smallest_sigma=tuple(sigma), rigid=ms.kinematic_dof == 0,
        laman=laman_check(fw.graph) if (fw.dim == 2 and fw.n >= 2) else None,
        warnings=tuple(warnings),
    )


def _write_json(path, data):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")


def _load_doc(path) -> FrameworkDocument:
    return load_framework(path)


def cmd_analyze(args) -> int:
    doc = _load_doc(args.path)
    report = analyze_framework(doc.framework, args.tol)
    if args.json:
        print(json.dumps(report.to_dict(), indent=1))
    else:
        print(report.to_text())
    return EXIT_RIGID if report.rigid else EXIT_FLEXIBLE


def _map_spec_from_args(args, fw: Framework) -> transforms.MapSpec:
    if args.map:
        with open(args.map, encoding="utf-8") as fh:
            return transforms.map_spec_from_dict(json.load(fh))
    if args.to_space:
        return transforms.geodesic_map(args.to_space)
    raise RigidkitError("transform needs --map or --to-space")


def cmd_transform(args) -> int:
    doc = _load_doc(args.path)
    fw = doc.framework
    spec = _map_spec_from_args(args, fw)
    image = transforms.apply_map(spec, fw)
    attachments = {}
    for carry in args.carry or ():
        if carry == "load":
            if doc.load is None:
                raise RigidkitError("--carry load: input file has no load")
            ld, _ = transforms.pogorelov_static(spec, fw, Load(fw, doc.load))
            attachments["load"] = ld.vecs
        elif carry == "field":
            if doc.field is None:
                raise RigidkitError("--carry field: input file has no field")
            q, _ = transforms.pogorelov_kinematic(spec, fw, VectorField(fw, doc.field))
            attachments["field"] = q.vecs
        elif carry == "stress":
            if doc.stress is None:
                raise RigidkitError("--carry stress: input file has no stress")
            w = transforms.pogorelov_stress(spec, fw, stress_from_dict(fw, doc.stress))
            attachments["stress"] = w.as_dict()
    out = args.output or "transformed.json"
    _write_json(out, framework_to_dict(image, description=doc.description, **attachments))
    print("wrote %s (%s)" % (out, image.space))
    return EXIT_OK


_MC_DIRECTIONS = ("stress2rec", "rec2stress", "stress2lift",
                  "lift2rec", "rec2lift", "lift2stress")


def _mc_tables(space):
    if space.is_euclidean:
        return {
            "stress2rec": mc.euclid_stress_to_reciprocal,
            "rec2stress": mc.euclid_reciprocal_to_stress,
            "stress2lift": mc.euclid_stress_to_lift,
            "lift2rec": mc.euclid_reciprocal_from_lift,
            "rec2lift": mc.euclid_lift_from_reciprocal,
            "lift2stress": mc.euclid_lift_to_stress,
        }
    if space.is_spherical:
        return {
            "stress2rec": mc.sph_stress_to_reciprocal,
            "rec2stress": mc.sph_reciprocal_to_stress,
            "stress2lift": mc.sph_stress_to_lift,
            "lift2rec": mc.sph_lift_to_reciprocal,
            "rec2lift": mc.sph_reciprocal_to_lift,
            "lift2stress": mc.sph_lift_to_stress,
        }
    return {
        "stress2rec": mc.hyp_stress_to_reciprocal,
        "rec2stress": mc.hyp_reciprocal_to_stress,
        "stress2lift": mc.hyp_stress_to_lift,
        "lift2rec": mc.hyp_lift_to_reciprocal,
        "rec2lift": mc.hyp_reciprocal_to_lift,
        "lift2stress": mc.hyp_lift_to_stress,
    }


def _print_mc_summary(fw, result):
    if isinstance(result, mc.ReciprocalDiagram):
        res = result.perpendicularity_residuals()
        print("reciprocal diagram: %d dual vertices, perpendicularity residual %.3e"
              % (len(result.positions), float(np.max(res)) if res.size else 0.0))
        if result.strength:
            print("strength: %s" % result.strength)
    elif isinstance(result, mc.PolyhedralLift):
        print("polyhedral lift (%s): incidence residual %.3e"
              % (result.kind.value, float(np.max(result.incidence_residuals()))))
        if result.stress_scale != 1.0:
            print("stress scaled by %.6g for cone admissibility" % result.stress_scale)
    elif isinstance(result, Stress):
        print("stress: %s" % json.dumps(
            {"%d-%d" % e: round(w, 12) for e, w in result.as_dict().items()}))
    if fw.space.is_euclidean:
        try:
            report = mc.euclid_convexity_classify(
                fw,
                stress=result if isinstance(result, Stress) else None,
                reciprocal=result if isinstance(result, mc.ReciprocalDiagram) else None,
                lift=result if isinstance(result, mc.PolyhedralLift) and
                result.kind is mc.LiftKind.VERTICAL else None,
            )
            for key, val in report.classifications.items():
                if val is not None:
                    print("convex classification (%s): %s" % (key, val))
        except MaxwellCremonaError as exc:
            print("convex classification: not applicable (%s)" % exc)


def cmd_mc(args) -> int:
    doc = _load_doc(args.path)
    fw = doc.framework
    table = _mc_tables(fw.space)
    func = table[args.direction]
    source = args.direction.split("2")[0]
    if source == "stress":
        if doc.stress is None:
            raise RigidkitError("direction %s needs a stress attachment" % args.direction)
        first = stress_from_dict(fw, doc.stress)
    else:
        if not args.object:
            raise RigidkitError("direction %s needs --object" % args.direction)
        with open(args.object, encoding="utf-8") as fh:
            data = json.load(fh)
        if data.get("type") == "reciprocal":
            first = mc.reciprocal_from_dict(fw, data)
        elif data.get("type") == "lift":
            first = mc.lift_from_dict(fw, data)
        else:
            raise RigidkitError("object file must have type reciprocal or lift")
        expected = {"rec": "reciprocal", "lift": "lift"}[source]
        if data["type"] != expected:
            raise RigidkitError("direction %s needs a %s object" % (args.direction, expected))
    result = func(fw, first, tol=args.tol if args.tol else mc.MC_TOL)
    out = args.output or ("%s.json" % args.direction)
    if isinstance(result, Stress):
        _write_json(out, framework_to_dict(fw, stress=result.as_dict(),
                                           description=doc.description))
    else:
        _write_json(out, result.to_dict())
    _print_mc_summary(fw, result)
    print("wrote %s" % out)
    return EXIT_OK


def cmd_example(args) -> int:
    try:
        doc = gallery.fixture(args.name)
    except (KeyError, ValueError) as exc:
        raise RigidkitError(str(exc)) from None
    out = args.output or ("%s.json" % args.name.replace(":", "-"))
    _write_json(out, framework_to_dict(
        doc.framework, stress=doc.stress, load=doc.load, field=doc.field,
        description=doc.description,
    ))
    print("wrote %s" % out)
    return EXIT_OK


def _pick_flex(fw: Framework, tol) -> np.ndarray:
    """A unit nontrivial flex: the V basis vector furthest from V_0, projected."""
    basis = kinematics.motion_space(fw, tol)
    trivial = kinematics.trivial_motion_space(fw, tol)
    best, best_norm = None, 0.0
    for q in basis:
        flat = q.vecs.ravel().copy()
        for t in trivial:
            flat -= (flat @ t.vecs.ravel()) * t.vecs.ravel()
        nrm = float(np.linalg.norm(flat))
        if nrm > best_norm:
            best, best_norm = flat, nrm
    if best is None or best_norm < 1e-8:
        return None
    return (best / best_norm).reshape(fw.n, -1)


def cmd_render(args) -> int:
    doc = _load_doc(args.path)
    fw = doc.framework
    flex = None
    if args.flex:
        if doc.field is not None:
            flex = VectorField(fw, kinematics.validate_tangent_field(fw, doc.field)).vecs
        else:
            flex = _pick_flex(fw, args.tol or RANK_TOL)
        if flex is None:
            print("note: framework is infinitesimally rigid; no flex arrows drawn",
                  file=sys.stderr)
    reciprocal = None
    if args.reciprocal:
        with open(args.reciprocal, encoding="utf-8") as fh:
            reciprocal = mc.reciprocal_from_dict(fw, json.load(fh))
    lift = None
    if args.lift:
        with open(args.lift, encoding="utf-8") as fh:
            lift = mc.lift_from_dict(fw, json.load(fh))
    text = svg.render_framework(fw, model=args.model, flex=flex,
                                reciprocal=reciprocal, lift=lift)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(text)
    print("wrote %s" % args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rigidkit",
        description="Rigidity analysis of bar-and-joint frameworks in E/S/H.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="rigidity report; exit 0 rigid, 10 flexible")
    pa.add_argument("path")
    pa.add_argument("--tol", type=float, default=None)
    pa.add_argument("--json", action="store_true")
    pa.set_defaults(func=cmd_analyze)

    pt = sub.add_parser("transform", help="projective/affine/geodesic images")
    pt.add_argument("path")
    pt.add_argument("--map", help="map spec JSON file")
    pt.add_argument("--to-space", choices=["E", "S", "H"], dest="to_space")
    pt.add_argument("--carry", action="append", choices=["load", "field", "stress"])
    pt.add_argument("-o", "--output")
    pt.add_argument("--tol", type=float, default=None)
    pt.set_defaults(func=cmd_transform)

    pm = sub.add_parser("mc", help="Maxwell-Cremona conversions")
    pm.add_argument("path")
    pm.add_argument("--direction", required=True, choices=_MC_DIRECTIONS)
    pm.add_argument("--variant", default="auto", choices=["auto"])
    pm.add_argument("--object", help="reciprocal/lift JSON input for rec2*/lift2*")
    pm.add_argument("-o", "--output")
    pm.add_argument("--tol", type=float, default=None)
    pm.set_defaults(func=cmd_mc)

    pe = sub.add_parser("example", help="write a named example framework file")
    pe.add_argument("name")
    pe.add_argument("-o", "--output")
    pe.set_defaults(func=cmd_example)

    pr = sub.add_parser("render", help="static SVG rendering (d = 2)")
    pr.add_argument("path")
    pr.add_argument("-o", "--output", required=True)
    pr.add_argument("--model", default="chart", choices=["chart", "klein", "hemisphere"])
    pr.add_argument("--flex", action="store_true")
    pr.add_argument("--reciprocal")
    pr.add_argument("--lift")
    pr.add_argument("--tol", type=float, default=None)
    pr.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InternalInvariantError:
        raise  # a bug, not bad input: crash loudly
    except MaxwellCremonaError as exc:
        print("conversion failed: %s" % exc, file=sys.stderr)
        return EXIT_CONVERSION
    except (RigidkitError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except json.JSONDecodeError as exc:
        print("error: invalid JSON at line %d column %d: %s"
              % (exc.lineno, exc.colno, exc.msg), file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
