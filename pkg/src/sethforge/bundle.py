"""Instance bundles on disk (<name>.gr, <name>.td, <name>.json) and witness files."""

from __future__ import annotations

import json
from pathlib import Path

from sethforge.errors import DecompositionError, InvalidBundle, ParseError
from sethforge.graphcore import Graph, parse_gr, parse_td, validate_path_decomposition, write_gr, write_td
from sethforge.instance import Instance, Kind, ReductionMeta, Sense, Solution

META_FIELDS = ("n", "m", "p", "q", "t", "beta", "budget_items", "mu", "arrow_count", "W")


def instance_json(inst: Instance) -> dict:
    doc = {
        "kind": inst.kind.value,
        "sense": inst.sense.value,
        "target": inst.target,
        "width_bound": inst.claimed_width_bound,
    }
    doc.update(inst.meta.as_dict())
    doc["experimental"] = inst.experimental
    doc["labels"] = list(inst.graph.labels)
    doc["lists"] = None if inst.lists is None else {str(v): sorted(c) for v, c in sorted(inst.lists.items())}
    return doc


def write_bundle(inst: Instance, out_dir: str | Path, name: str) -> list[Path]:
    if inst.graph.is_weighted:
        raise InvalidBundle("weighted graphs have no .gr form; expand them first")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = [out / f"{name}.gr", out / f"{name}.td", out / f"{name}.json"]
    paths[0].write_text(write_gr(inst.graph))
    paths[1].write_text(write_td(inst.decomposition, inst.graph.num_vertices))
    paths[2].write_text(json.dumps(instance_json(inst), indent=1, sort_keys=True) + "\n")
    return paths


def bundle_stem(path: str | Path) -> Path:
    """Accept the stem or any of the three bundle files."""
    p = Path(path)
    return p.with_suffix("") if p.suffix in (".gr", ".td", ".json") else p


def read_bundle(path: str | Path) -> Instance:
    stem = bundle_stem(path)
    try:
        graph_text = stem.with_suffix(".gr").read_text()
        td_text = stem.with_suffix(".td").read_text()
        doc = json.loads(stem.with_suffix(".json").read_text())
    except OSError as e:
        raise InvalidBundle(f"cannot read bundle {stem}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InvalidBundle(f"{stem}.json: {e.msg}") from None
    try:
        g = parse_gr(graph_text)
        d = parse_td(td_text)
    except ParseError as e:
        raise InvalidBundle(str(e)) from None
    try:
        labels = doc.get("labels")
        if labels:
            if len(labels) != g.num_vertices:
                raise InvalidBundle("label table length differs from vertex count")
            g = Graph(g.num_vertices, g.edges, tuple(labels))
        budget = doc.get("budget_items")
        meta = ReductionMeta(**{k: doc.get(k) for k in META_FIELDS if k != "budget_items"}, budget_items=budget)
        lists = doc.get("lists")
        if lists is not None:
            lists = {int(v): frozenset(c) for v, c in lists.items()}
        inst = Instance(
            kind=Kind(doc["kind"]),
            graph=g,
            target=doc.get("target"),
            sense=Sense(doc["sense"]),
            decomposition=d,
            claimed_width_bound=int(doc["width_bound"]),
            meta=meta,
            lists=lists,
            experimental=bool(doc.get("experimental", False)),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidBundle(f"{stem}.json: bad field ({e})") from None
    try:
        validate_path_decomposition(g, d)
    except DecompositionError as e:
        raise InvalidBundle(f"decomposition does not fit the graph: {e.detail}") from None
    return inst


def write_dot(g: Graph) -> str:
    lines = ["graph G {"]
    for v in range(g.num_vertices):
        name = g.labels[v] if g.labels else str(v)
        lines.append(f'  {v} [label="{name}"];')
    for (u, v), w in sorted(g.edges.items()):
        lines.append(f'  {u} -- {v}{f" [label={w}]" if w != 1 else ""};')
    lines.append("}")
    return "\n".join(lines) + "\n"


def solution_json(inst: Instance, s: Solution) -> dict:
    field = s.shape
    value = getattr(s, field)
    if field == "vertices":
        value = sorted(value)
    elif field == "triangles":
        value = [list(t) for t in value]
    else:
        value = list(value)
    return {"kind": inst.kind.value, field: value}


def read_solution(path: str | Path) -> Solution:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidBundle(f"cannot read solution {path}: {e}") from None
    if "vertices" in doc:
        return Solution(vertices=frozenset(doc["vertices"]))
    if "sides" in doc:
        return Solution(sides=tuple(doc["sides"]))
    if "colors" in doc:
        return Solution(colors=tuple(doc["colors"]))
    if "triangles" in doc:
        return Solution(triangles=tuple(tuple(t) for t in doc["triangles"]))
    raise InvalidBundle(f"{path}: no solution field")
